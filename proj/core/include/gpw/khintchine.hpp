#pragma once

// Concrete operator-space realizations behind the Khintchine-type factorization:
// creation/annihilation legs on the free Fock space, Diag_w, the component maps
// Θ̃_d and j_d, and the partial isometries J_ρ^L, J_ρ^R of the dilation identity.
//
// A component of X̃_d (or X_d) is stored as a finite map from pairs
// (column key, row key) to middle operators. Column keys index the basis of
// (⊕ℋ̊_v)^{⊗ñ_l}, row keys the basis of (⊕ℋ̊_v)^{⊗ñ_r}; both are stored as
// BasisKey with the leg letters in `word` (not normalized). The norm of a
// component is the operator norm of the assembled block matrix.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gpw/coxeter.hpp"
#include "gpw/fock.hpp"
#include "gpw/valg.hpp"

namespace gpw {

// Fock space over the edgeless graph on the same vertices.
FockSpace make_free_fock(const FockSpace& fs, int depth);

// θ_1(λ_v^f(a)) = P_v λ_v^f(a) P_v^⊥ and ρ_1(λ_v^f(a)) = P_v^⊥ λ_v^f(a) P_v on
// the free Fock space. Throws on non-centered input (a(0,0) ≠ 0).
std::pair<Mat, Mat> theta1_rho1(const FockSpace& free, Letter v, const Mat& a);

// Diag_w(a) on the free Fock space for a letter sequence w that is a clique
// word of g; a acts on ℋ_{w_1} ⊗ … ⊗ ℋ_{w_k} (full spaces, ξ first).
Mat diag_w(const FockSpace& free, const SimpleGraph& g, const Word& w, const Mat& a);

using XdKey = std::pair<BasisKey, BasisKey>;

struct XdComponent {
  long middle_dim = 1;
  std::map<XdKey, Mat> entries;
};

struct XdElement {
  int d = 0;
  std::map<RhoTuple, XdComponent> components;
};

struct InhomogeneousError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

XdElement theta_tilde_d(const FockSpace& fs, const AlgebraicElement& x, int d);
// D_d: the middle entries go through Diag_{t'}.
XdElement apply_diag(const FockSpace& free, const SimpleGraph& g, const XdElement& y);
XdElement j_d(const FockSpace& fs, const FockSpace& free, const AlgebraicElement& x, int d);

double component_norm(const XdComponent& c);
double xd_norm(const XdElement& y);
// Norm of a k×k matrix over X̃_d: the maximum over ρ of the assembled grids.
double xd_norm(const std::vector<std::vector<XdElement>>& grid);

struct RangeError : std::runtime_error {
  double residual;
  explicit RangeError(double r)
      : std::runtime_error("element is outside the range of j_d, residual " + std::to_string(r)), residual(r) {}
};

// Linear inverse of j_d on its range by least squares over the generators.
AlgebraicElement e_d_reconstruct(const FockSpace& fs, const FockSpace& free, const XdElement& y, int d,
                                 double tol = 1e-8);

// Basis tensors of (ℱ^f)^{⊗ñ_l} ⊗ ℋ_t ⊗ (ℱ^f)^{⊗ñ_r}, or of ℱ ⊗ (ℱ^f)^{⊗ñ}.
struct TensorKey {
  std::vector<BasisKey> left;
  long middle = 0;
  std::vector<BasisKey> right;
  bool operator==(const TensorKey&) const = default;
  auto operator<=>(const TensorKey&) const = default;
};
using TensorVector = std::map<TensorKey, cd>;
double distance(const TensorVector& a, const TensorVector& b);

struct InsufficientDepth : std::runtime_error {
  int required;
  InsufficientDepth(int req, int have)
      : std::runtime_error("depth " + std::to_string(have) + " is below the required " + std::to_string(req)),
        required(req) {}
};

class JRhoIsometries {
 public:
  // vertex_dims are the full vertex Hilbert dimensions (ξ included).
  JRhoIsometries(SimpleGraph g, std::vector<int> vertex_dims, RhoTuple rho, int depth);

  static int required_depth(const RhoTuple& rho);
  const SimpleGraph& graph() const { return g_; }
  const RhoTuple& rho() const { return rho_; }
  int n_left() const { return nl_; }
  int n_right() const { return nr_; }
  long middle_dim() const { return middle_dim_; }

  // J_R(ℋ_t index ⊗ right legs) = graph key ⊗ tails, or nothing when 0.
  std::optional<std::pair<BasisKey, std::vector<BasisKey>>> right(long middle, const std::vector<BasisKey>& legs) const;
  // J_L(left legs ⊗ ℋ_t index) = tails ⊗ graph key, or nothing when 0.
  std::optional<std::pair<std::vector<BasisKey>, BasisKey>> left(const std::vector<BasisKey>& legs, long middle) const;
  // J_L* on tails ⊗ graph key: every basis preimage (J_L maps basis to basis).
  std::vector<std::pair<std::vector<BasisKey>, long>> left_adjoint(const std::vector<BasisKey>& tails,
                                                                   const BasisKey& y) const;

 private:
  SimpleGraph g_;
  std::vector<int> dims_;
  RhoTuple rho_;
  int nl_ = 0, nr_ = 0;
  long middle_dim_ = 1;
  Word ult_, urt_;

  std::vector<int> middle_radices() const;
};

// Θ̃_d(λ(x))_ρ on a basis tensor (left. ℋ_t, right), computed leg by leg.
TensorVector theta_tilde_apply(const SimpleGraph& g, const AlgebraicElement& x, const RhoTuple& rho,
                               const TensorKey& in);
// (J_L* ⊗ 1)(1 ⊗ λ(x) ⊗ 1)(1 ⊗ J_R) on the same tensor.
TensorVector dilation_rhs_apply(const JRhoIsometries& j, const AlgebraicElement& x, const TensorKey& in);

struct DilationReport {
  double residual = 0;  // Frobenius over the tested basis tensors
  double lhs_norm = 0;
  long inputs = 0;
};

// Tested inputs: Ω or one-letter tails on the left legs, single-letter right
// legs with and without tails, every ℋ_t index. Refuses when the depth of fs
// is below the depth every intermediate word needs.
DilationReport verify_dilation(const FockSpace& fs, const AlgebraicElement& x, const RhoTuple& rho);

struct ContractionResult {
  double ratio = 0;
  double numerator = 0;
  double denominator = 0;
  int samples = 0;
};

// max_ρ ‖Θ̃_d(λ x)_ρ‖ / ‖P λ(x) P‖ over random k×k matrices of degree-d
// elements, followed by a hill climb from the best sample. fs must have depth
// at least d; the denominator is the compression to fs.
ContractionResult contraction_search(const FockSpace& fs, int d, int level, int samples, std::uint64_t seed,
                                     int climb_steps = 40);

}  // namespace gpw
