#pragma once

// Finite-dimensional vertex algebras ⊕ M_{n_i} with faithful states, their GNS
// spaces, and completely positive maps between them.
//
// Elements are block-diagonal N×N complex matrices, N = Σ n_i. Coordinates of
// an element are its entries on the matrix units, block by block, row-major.
// GNS inner product: ⟨â, b̂⟩ = φ(b* a).

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gpw {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPsdTol = -1e-9;
inline constexpr double kIdentityTol = 1e-10;

class VertexAlgebra {
 public:
  VertexAlgebra() = default;
  // densities[i] is the weighted density of block i; the traces must sum to 1
  // and every density must be positive definite.
  VertexAlgebra(std::vector<int> blocks, std::vector<Mat> densities);

  static VertexAlgebra abelian(const std::vector<double>& weights);
  static VertexAlgebra matrix_trace(int n);
  static VertexAlgebra matrix_state(const Mat& density);

  const std::vector<int>& blocks() const { return blocks_; }
  const std::vector<Mat>& densities() const { return densities_; }
  int matrix_size() const { return size_; }
  int dim() const { return dim_; }
  int block_offset(int i) const { return offsets_[static_cast<std::size_t>(i)]; }

  Mat density() const;
  Mat identity() const { return Mat::Identity(size_, size_); }
  cd state(const Mat& a) const;
  bool is_element(const Mat& a, double tol = kIdentityTol) const;

  Vec coords(const Mat& a) const;
  Mat from_coords(const Vec& c) const;
  // Matrix unit with coordinate index p.
  Mat unit(int p) const;

 private:
  std::vector<int> blocks_;
  std::vector<Mat> densities_;
  std::vector<int> offsets_;
  int size_ = 0;
  int dim_ = 0;
};

Mat center(const Mat& a, const VertexAlgebra& alg);

// GNS space in an orthonormal basis whose first vector is ξ = 1̂.
class GNSData {
 public:
  GNSData() = default;
  explicit GNSData(const VertexAlgebra& alg);

  int dim() const { return dim_; }
  Vec xi() const { return Vec::Unit(dim_, 0); }
  Mat rep(const Mat& a) const;
  Vec hat(const Mat& a) const;
  Mat element_of(const Vec& h) const;
  // basis_ops()[j] = rep(element whose GNS vector is e_j); [0] is the identity.
  const std::vector<Mat>& basis_ops() const { return basis_ops_; }
  const VertexAlgebra& algebra() const { return alg_; }

 private:
  VertexAlgebra alg_;
  int dim_ = 0;
  // raw orthonormal coordinates: per block i, index (m, k) ↦ √p_k ⟨f_m|a|f_k⟩
  std::vector<Mat> eigvecs_;
  std::vector<Eigen::VectorXd> eigvals_;
  Mat change_;  // columns: hat basis in raw coordinates
  std::vector<Mat> basis_ops_;

  Vec raw(const Mat& a) const;
  Mat from_raw(const Vec& r) const;
  Mat rep_raw(const Mat& a) const;
};

GNSData gns(const VertexAlgebra& alg);

class CpMap {
 public:
  CpMap() = default;
  CpMap(VertexAlgebra source, VertexAlgebra target, Mat action, std::string name);

  template <class F>
  static CpMap from_function(const VertexAlgebra& s, const VertexAlgebra& t, F&& f, std::string name) {
    Mat k(t.dim(), s.dim());
    for (int p = 0; p < s.dim(); ++p) k.col(p) = t.coords(f(s.unit(p)));
    return CpMap(s, t, std::move(k), std::move(name));
  }

  static CpMap identity(const VertexAlgebra& a);
  static CpMap radial(const VertexAlgebra& a, double r);  // ra + (1−r)φ(a)1
  static CpMap state_map(const VertexAlgebra& a);
  static CpMap scaling(const VertexAlgebra& a, cd c);
  static CpMap transpose(const VertexAlgebra& a);
  // Random state-preserving ucp map with `kraus` Kraus operators, balanced by
  // operator Sinkhorn scaling. Multi-block algebras get a random convex
  // combination of the identity and the state map.
  static CpMap random_ucp(const VertexAlgebra& a, std::uint64_t seed, int kraus = 2);

  const VertexAlgebra& source() const { return source_; }
  const VertexAlgebra& target() const { return target_; }
  const Mat& action() const { return action_; }
  const std::string& name() const { return name_; }

  Mat apply(const Mat& a) const;
  bool is_unital(double tol = kIdentityTol) const;
  bool is_state_preserving(double tol = kIdentityTol) const;

  CpMap operator+(const CpMap& o) const;
  CpMap operator-(const CpMap& o) const;
  CpMap scaled(cd c) const;
  CpMap compose(const CpMap& inner) const;  // this ∘ inner

 private:
  VertexAlgebra source_, target_;
  Mat action_;
  std::string name_;
};

// Block-diagonal direct sum of the Choi matrices Σ E_jk ⊗ T(E_jk) of the
// restrictions of T to the source blocks.
Mat choi(const CpMap& t);
double min_choi_eigenvalue(const CpMap& t);
bool is_cp(const CpMap& t, double tol = kPsdTol);
bool is_ucp(const CpMap& t, double tol = kPsdTol);

struct NotCompletelyPositive : std::runtime_error {
  double min_eigenvalue;
  explicit NotCompletelyPositive(double e)
      : std::runtime_error("map is not completely positive, min Choi eigenvalue " + std::to_string(e)),
        min_eigenvalue(e) {}
};

// Dilation of a ↦ rep_B(T(a)) on the target GNS space: V* π(a) V with
// π(a) = ⊕_i a_i ⊗ 1_{L_i} over the blocks a_i of a.
struct StinespringDilation {
  std::vector<int> blocks;      // block sizes n_i of the source
  std::vector<int> offsets;     // block offsets in the source matrix
  std::vector<int> multiplicity;  // L_i
  Mat v;  // (Σ n_i L_i) × dim GNS(target)

  int dim() const { return static_cast<int>(v.rows()); }
  Mat pi(const Mat& a) const;
  Mat reconstruct(const Mat& a) const { return v.adjoint() * pi(a) * v; }
};

StinespringDilation stinespring(const CpMap& t, const GNSData& target_gns);

struct MapNorms {
  double cb_lower = 0;  // certified: attained by an explicit amplified element
  int cb_level = 0;     // amplification where the lower bound was found
  double l2_A = 0;
  double l2_Aop = 0;
  double l2_centered = 0;  // restricted to ℋ̊ on both sides
};

MapNorms norms(const CpMap& t, std::uint64_t seed = 1, int max_level = 3, int restarts = 4);
// ‖(id_k ⊗ T)(X)‖ / ‖X‖ maximized by alternating polar/singular-vector steps.
double cb_lower_at_level(const CpMap& t, int k, std::uint64_t seed, int restarts = 4, int iters = 60);

// Helpers shared with other modules.
Mat hermitian_power(const Mat& h, double p);
double opnorm(const Mat& m);

}  // namespace gpw
