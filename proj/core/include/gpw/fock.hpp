#pragma once

// Truncated graph-product Fock space ℱ_{≤D} = ⊕_{|w|≤D} ℋ̊_w and the
// representation λ.
//
// Basis: words in ShortLex order; inside a word block, multi-indices over the
// centered bases of the letters, first leg most significant. Leg index j
// stands for the vertex basis vector e_{j+1} (e_0 = ξ).
//
// Operators are stored column-restricted: an operator acting on the first c
// basis vectors is a dim × c dense matrix. Since ShortLex puts shorter words
// first, "all vectors of length ≤ m" is always such a leading block.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gpw/coxeter.hpp"
#include "gpw/valg.hpp"

namespace gpw {

using SpMat = Eigen::SparseMatrix<cd>;

// What the Fock space needs to know about a vertex: the Hilbert dimension in
// a basis with ξ first, and optionally the operators whose GNS vectors are the
// basis vectors (basis_ops[0] = 1).
struct VertexSpace {
  int dim = 1;
  std::vector<Mat> basis_ops;

  static VertexSpace from_gns(const GNSData& g) { return {g.dim(), g.basis_ops()}; }
  static VertexSpace bare(int dim) { return {dim, {}}; }
  int centered_dim() const { return dim - 1; }
};

struct ResourceGuardError : std::runtime_error {
  long dimension;
  ResourceGuardError(long dim, long cap)
      : std::runtime_error("truncated Fock dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap)),
        dimension(dim) {}
};

enum class Part { Full, Cre, Dia, Ann };

class FockSpace {
 public:
  FockSpace(SimpleGraph g, std::vector<VertexSpace> vertices, int depth, long cap = 5000);

  const SimpleGraph& graph() const { return g_; }
  int depth() const { return depth_; }
  long dim() const { return dim_; }
  const VertexSpace& vertex(Letter v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<VertexSpace>& vertices() const { return vertices_; }

  int word_count() const { return static_cast<int>(words_.size()); }
  const Word& word(int id) const { return words_[static_cast<std::size_t>(id)]; }
  const std::vector<Word>& words() const { return words_; }
  int word_id(const Word& w) const;
  long offset(int id) const { return offsets_[static_cast<std::size_t>(id)]; }
  long block_dim(int id) const { return offsets_[static_cast<std::size_t>(id) + 1] - offsets_[static_cast<std::size_t>(id)]; }

  long index(int id, const std::vector<int>& mi) const;
  std::vector<int> multi_index(int id, long local) const;
  int word_of_index(long idx) const;
  // Number of basis vectors of length ≤ len (a leading block).
  long safe_dim(int len) const;

  struct Transition {
    bool starts = false;      // w starts with v
    int target = -1;          // word id of v·w, -1 beyond the depth
    int pos = -1;             // first occurrence of v in w (starts only)
    std::vector<int> src;     // not starts: target leg i ← ([v] ++ w)[src[i]]
                              // starts:     target leg k ← w leg src[k]
  };
  const Transition& transition(Letter v, int id) const {
    return trans_[static_cast<std::size_t>(id) * static_cast<std::size_t>(g_.size()) + static_cast<std::size_t>(v)];
  }

 private:
  SimpleGraph g_;
  std::vector<VertexSpace> vertices_;
  int depth_;
  std::vector<Word> words_;
  std::map<Word, int> ids_;
  std::vector<long> offsets_;
  std::vector<long> len_end_;  // len_end_[k] = number of basis vectors of length ≤ k
  long dim_ = 0;
  std::vector<Transition> trans_;
};

struct PureTensor {
  cd coef{1.0, 0.0};
  Word word;
  std::vector<Mat> legs;  // legs[i] acts on ℋ_{word[i]}, centered
};

struct AlgebraicElement {
  cd scalar{0.0, 0.0};
  std::vector<PureTensor> terms;

  static AlgebraicElement identity(cd c = 1.0) { return {c, {}}; }
  static AlgebraicElement of(PureTensor t) { return {0.0, {std::move(t)}}; }
  int max_length() const;
  bool homogeneous(int d) const;
  AlgebraicElement degree_part(int d) const;
  AlgebraicElement& operator+=(const AlgebraicElement& o);
  AlgebraicElement scaled(cd c) const;
};

// Centered basis generator: legs are basis_ops[v][mi+1].
PureTensor basis_generator(const FockSpace& fs, const Word& w, const std::vector<int>& mi);
std::vector<PureTensor> basis_generators(const FockSpace& fs, const Word& w);

// Calls f(row, coefficient) for every entry of column idx of λ_v(a) (or a part).
void lambda_v_column(const FockSpace& fs, Letter v, const Mat& a, Part part, long idx,
                     const std::function<void(long, cd)>& f);

SpMat lambda_v_sparse(const FockSpace& fs, Letter v, const Mat& a, Part part = Part::Full);
// out = λ_v(a)·in for a dim × c block.
Mat lambda_v_apply(const FockSpace& fs, Letter v, const Mat& a, Part part, const Mat& in);

// λ(x) on the leading block of `cols` basis vectors.
Mat lambda_apply(const FockSpace& fs, const PureTensor& x, const Mat& in);
Mat lambda_apply(const FockSpace& fs, const AlgebraicElement& x, const Mat& in);
Mat lambda(const FockSpace& fs, const PureTensor& x, long cols);
Mat lambda(const FockSpace& fs, const AlgebraicElement& x, long cols);

struct LambdaParts {
  Mat ann, dia, cre;
};
// Products of the per-leg parts, in leg order.
LambdaParts lambda_parts(const FockSpace& fs, const PureTensor& x, long cols);
// λ_ω(x) = λ_cre(a1) λ_dia(a2) λ_ann(a3) with x = 𝒬(a1 ⊗ a2 ⊗ a3).
Mat lambda_triple(const FockSpace& fs, const TripleSplit& om, const PureTensor& x, long cols);

inline cd vacuum_state(const Mat& x) { return x(0, 0); }

// Shuffle 𝒬: tensor of block vectors of the given words into the block of
// their product. Throws on non-reduced products.
Vec shuffle(const FockSpace& fs, const std::vector<Word>& words, const std::vector<Vec>& vectors);

// Diagonal projection onto the blocks whose word satisfies pred, restricted to
// the leading `cols` basis vectors.
Mat word_projection(const FockSpace& fs, const std::function<bool(const Word&)>& pred, long cols);
// ℱ_n^M(u): blocks w1 u w2 with w1 ∈ W̃_n^R(u), w2 ∈ W^L(u).
bool in_middle_space(const SimpleGraph& g, const Word& u, int n, const Word& w);

// Unitary ℋ_t → ⊕_{r⊆t} ℋ̊_r for a clique word t; rows ordered by ShortLex r
// then multi-index, columns by the product basis of ℋ_t.
Mat clique_unshuffle(const SimpleGraph& g, const std::vector<int>& vertex_dims, const Word& t);

// Fock vectors as sparse maps over (word, multi-index), without depth limit.
struct BasisKey {
  Word word;
  std::vector<int> mi;
  bool operator==(const BasisKey&) const = default;
  auto operator<=>(const BasisKey&) const = default;
};
using KeyVector = std::map<BasisKey, cd>;

KeyVector lambda_v_keys(const SimpleGraph& g, Letter v, const Mat& a, Part part, const KeyVector& in);
KeyVector lambda_keys(const SimpleGraph& g, const PureTensor& x, const KeyVector& in);
double distance(const KeyVector& a, const KeyVector& b);

// Tensor helpers over mixed radices (first factor most significant).
std::vector<int> mixed_digits(long idx, const std::vector<int>& radices);
long mixed_index(const std::vector<int>& digits, const std::vector<int>& radices);

}  // namespace gpw
