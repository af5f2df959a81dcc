#pragma once

// Hecke algebras of small finite Coxeter groups as vertex algebras, and
// relation checks for their graph product on the truncated Fock space.
//
// Convention: (T_s − q_s)(T_s + 1) = 0 with T_s δ_w = δ_{sw} when |sw| > |w|
// and T_s δ_w = q_s δ_{sw} + (q_s − 1) δ_w otherwise. The matrices are written
// in the orthonormal basis e_w = q_w^{-1/2} δ_w of ℓ²(W) for the inner
// product of the δ_e state, where the regular representation is a
// *-representation.

#include <string>
#include <vector>

#include "gpw/coxeter.hpp"
#include "gpw/fock.hpp"
#include "gpw/valg.hpp"

namespace gpw {

class FiniteCoxeter {
 public:
  // m must be symmetric with unit diagonal; supported: rank 1, and rank 2
  // with 2 ≤ m(0,1) ≤ 6.
  explicit FiniteCoxeter(std::vector<std::vector<int>> matrix);

  static FiniteCoxeter a1() { return FiniteCoxeter(std::vector<std::vector<int>>{{1}}); }
  static FiniteCoxeter a1xa1() { return dihedral(2); }
  static FiniteCoxeter dihedral(int m) { return FiniteCoxeter(std::vector<std::vector<int>>{{1, m}, {m, 1}}); }
  // "A1", "A1xA1" or "I2(m)".
  static FiniteCoxeter parse(const std::string& name);

  int rank() const { return static_cast<int>(m_.size()); }
  int m(int s, int t) const { return m_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]; }
  const std::string& name() const { return name_; }

  // Elements in BFS order (identity first); reduced_word(w) starts with the
  // letter whose left multiplication produced w.
  int order() const { return static_cast<int>(words_.size()); }
  const std::vector<int>& reduced_word(int w) const { return words_[static_cast<std::size_t>(w)]; }
  int length(int w) const { return static_cast<int>(words_[static_cast<std::size_t>(w)].size()); }
  int left_multiply(int s, int w) const { return left_[static_cast<std::size_t>(s)][static_cast<std::size_t>(w)]; }
  // Group element of a letter sequence.
  int element(const std::vector<int>& letters) const;
  bool conjugate(int s, int t) const;

 private:
  std::vector<std::vector<int>> m_;
  std::string name_;
  std::vector<std::vector<int>> words_;
  std::vector<std::vector<int>> left_;
};

class HeckeAlgebra {
 public:
  // Throws std::invalid_argument when some q_s ≤ 0 or conjugate generators
  // carry different parameters.
  HeckeAlgebra(FiniteCoxeter w, std::vector<double> q);

  const FiniteCoxeter& group() const { return w_; }
  const std::vector<double>& q() const { return q_; }
  int dim() const { return w_.order(); }
  const Mat& generator(int s) const { return gens_[static_cast<std::size_t>(s)]; }
  // T_w = T_{s_1} ⋯ T_{s_k} along the reduced word.
  Mat t_w(int w) const;
  double q_w(int w) const;
  // Product of generators along an arbitrary letter sequence.
  Mat product(const std::vector<int>& letters) const;
  cd state(const Mat& a) const { return a(0, 0); }

  double quadratic_residual(int s) const;
  double braid_residual(int s, int t) const;
  // Smallest singular value of a ↦ a e_e on span{T_w}; positive iff the δ_e
  // state is faithful on the algebra.
  double faithfulness_margin() const;

  // ℓ²(W) with basis_ops[w] = q_w^{-1/2} T_w, so basis_ops[w] e_e = e_w.
  VertexSpace vertex_space() const;

 private:
  FiniteCoxeter w_;
  std::vector<double> q_;
  std::vector<Mat> gens_;
};

HeckeAlgebra hecke_vertex(const FiniteCoxeter& w, const std::vector<double>& q);

struct HeckeCheck {
  std::string name;
  double residual = 0;
  double tol = 0;
  long columns = 0;  // basis vectors the check is exact on; 0 means vacuous
  bool pass() const { return residual <= tol; }
};

struct HeckeReport {
  std::vector<HeckeCheck> checks;
  std::vector<double> faithfulness;  // per vertex
  bool pass() const;
  // Names of the failing checks, comma separated.
  std::string failures() const;
};

// λ(T_s) for generator s of vertex v, as an element of the graph product.
AlgebraicElement hecke_generator(const std::vector<HeckeAlgebra>& vertices, Letter v, int s);

// Quadratic, commutation (adjacent vertices), braid and vacuum-state checks on
// the safe margin of each relation at depth D; for q ≡ 1 also unitarity.
HeckeReport verify_hecke_graph_product(const SimpleGraph& g, const std::vector<HeckeAlgebra>& vertices, int depth,
                                       double tol = 1e-12);

}  // namespace gpw
