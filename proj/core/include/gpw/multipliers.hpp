#pragma once

// Multiplier calculus on the truncated Fock space: the partial isometries
// V_n^{u,r}, the maps H_τ, H̃_ρ, the degree projections 𝒫_d, the radial
// semigroup, graph products of vertex maps, and CCAP nets.
//
// Every superoperator acts on column-restricted operators X (dim × c). Output
// column blocks only read input columns of no greater length, so a result is
// exact wherever the input is.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gpw/coxeter.hpp"
#include "gpw/fock.hpp"
#include "gpw/valg.hpp"

namespace gpw {

// V_n^{u,r}: ℋ̊_{v_r·(u·r)} ⊗ ℋ̊_{r·v_tail} → ℋ̊_{v_r u v_tail} by 𝒬, for
// v_r ∈ W̃_n^R(u) and v_tail ∈ W^L(u).
class PartialIsometryVnur {
 public:
  PartialIsometryVnur(const FockSpace& fs, Word u, Word r, int n);

  struct Piece {
    int x1 = -1, x2 = -1, target = -1;
    std::vector<long> local_map;  // (i·dim x2 + k) ↦ local index in the target block
  };
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<std::size_t>& pieces_with_x2(int x2) const;
  long domain_dim() const;
  // dim × domain_dim; the domain is the direct sum of the piece blocks.
  SpMat matrix() const;

  const Word& u() const { return u_; }
  const Word& r() const { return r_; }
  int n() const { return n_; }

 private:
  const FockSpace* fs_;
  Word u_, r_;
  int n_;
  std::vector<Piece> pieces_;
  std::map<int, std::vector<std::size_t>> by_x2_;
};

class VCache {
 public:
  explicit VCache(const FockSpace& fs) : fs_(&fs) {}
  const PartialIsometryVnur& get(const Word& u, const Word& r, int n);

 private:
  const FockSpace* fs_;
  std::map<std::tuple<Word, Word, int>, std::unique_ptr<PartialIsometryVnur>> cache_;
};

// H_τ(X) = V_L (X ⊗ 1) V_R*, applied block by block.
Mat h_tau_apply(const FockSpace& fs, const TauTuple& tau, const Mat& x, VCache& cache);
Mat h_tilde_apply(const FockSpace& fs, const RhoTuple& rho, const Mat& x, VCache& cache);
Mat p_d_via_h_tau(const FockSpace& fs, int d, const Mat& x, VCache& cache);
AlgebraicElement p_d_direct(const AlgebraicElement& x, int d);

// Blocks v kept by λ_ω(a) P_a(τ, ω), decided from the word conditions alone.
bool ptau_keeps_block(const SimpleGraph& g, const TauTuple& tau, const TripleSplit& om, const Word& v);

struct Superoperator {
  std::string descriptor;
  std::function<Mat(const Mat&)> apply;                                       // may be empty
  std::function<AlgebraicElement(const AlgebraicElement&)> algebraic_apply;  // may be empty
};

Superoperator h_tau(const FockSpace& fs, const TauTuple& tau, std::shared_ptr<VCache> cache);
Superoperator h_tilde_rho(const FockSpace& fs, const RhoTuple& rho, std::shared_ptr<VCache> cache);
enum class PdMode { Direct, ViaHTau };
Superoperator p_d(const FockSpace& fs, int d, PdMode mode, std::shared_ptr<VCache> cache);
// 𝒯_r = Σ_{k≤D} r^k 𝒫_k (or Σ_{k≤n} for the cut-off 𝒯_{r,n}), through H_τ.
Superoperator radial(const FockSpace& fs, double r, std::optional<int> n, std::shared_ptr<VCache> cache);

// Vertex maps act on operators on ℋ_v (GNS basis, ξ first).
using VertexOpMap = std::function<Mat(const Mat&)>;
VertexOpMap vertex_op_map(const CpMap& t, const GNSData& source, const GNSData& target);
// λ(a_1 ⊗ … ⊗ a_s) ↦ λ(T(a_1) ⊗ … ⊗ T(a_s)); the scalar part is kept.
AlgebraicElement graph_product_algebraic(const std::vector<VertexOpMap>& maps, const AlgebraicElement& x);

// Graph product of state-preserving ucp maps θ_v : A_v → A_v with the
// Stinespring dilation θ(λ(a)) = V* π(λ(a)) V through the hat Fock space.
class UcpGraphProduct {
 public:
  UcpGraphProduct(const FockSpace& fs, std::vector<GNSData> gns, std::vector<CpMap> maps);

  const FockSpace& hat_space() const { return *hat_; }
  // θ(λ(x)) on the leading `cols` basis vectors of ℱ^B.
  Mat theta_lambda(const AlgebraicElement& x, long cols) const;
  // V* λ̂(π(a_1) ⊗ …) V on the same columns.
  Mat dilated(const AlgebraicElement& x, long cols) const;
  // ‖V*V − 1‖ on the leading block.
  double isometry_defect(long cols) const;

 private:
  const FockSpace* fs_;
  std::vector<GNSData> gns_;
  std::vector<CpMap> maps_;
  std::vector<VertexOpMap> op_maps_;
  std::vector<Mat> q_;     // hat vertex bases, first column ξ̂
  std::vector<Mat> vhat_;  // V_v in hat bases
  std::vector<StinespringDilation> dil_;
  std::unique_ptr<FockSpace> hat_;
  SpMat v_;  // ℱ^B → ℱ̂

  Mat pi_hat(Letter v, const Mat& op) const;
};

// Norm bookkeeping for the c.b. graph product on 𝒜_d.
long clique_count(const SimpleGraph& g);
double td_bound(const SimpleGraph& g, int d, double max_c);
double td_difference_bound(const SimpleGraph& g, int d, double max_c, double max_diff);
double radial_tail_bound(const SimpleGraph& g, double r, int n);

// ⊕_{|w|=d} ⊗ T̊_{w_i} as a map on the degree-d block of ℱ (centered hat matrices).
Mat graph_product_on_fock(const FockSpace& fs, const std::vector<Mat>& centered_maps, int d);
Mat centered_hat_matrix(const CpMap& t, const GNSData& source, const GNSData& target);

// Certified lower bound: compressed norm of the image over the triangle
// upper bound Σ|c| Π‖a_i‖ of the input.
double lambda_norm_upper(const AlgebraicElement& x);

// CCAP nets built from per-vertex maps; j indexes the net.
struct CcapNet {
  std::vector<VertexAlgebra> algebras;
  std::vector<std::vector<CpMap>> v_maps;  // [vertex][j], finite rank
  std::vector<std::vector<CpMap>> u_maps;  // [vertex][j], ucp
  std::vector<double> eps;                 // max_v ε_{v,j}

  int size() const { return static_cast<int>(eps.size()); }
  // U_{v,j} = U_{r_j} radial and V_{v,j} = U_{v,j} + δ_j (R_v − id) with R_v a
  // random state-preserving ucp map; δ_j is chosen so that ε_{v,j} hits the
  // requested value with the c.b. part bounded by ‖R_v − id‖_cb ≤ 2.
  static CcapNet synthetic(const std::vector<VertexAlgebra>& algebras, const std::vector<double>& eps,
                           std::uint64_t seed);
};

struct GapReport {
  int n = 0, j = 0;
  double eps = 0;
  double cb_tail = 0;
  double cb_upper = 0;
  double l2_upper = 0;
  double measured_lower = 0;
};

GapReport ccap_gap_bounds(const SimpleGraph& g, const CcapNet& net, int n, int j);
// D_{N,j}(λ(x)) through the direct degree decomposition.
AlgebraicElement ccap_d_apply(const CcapNet& net, const std::vector<GNSData>& gns, int n, int j,
                              const AlgebraicElement& x);
AlgebraicElement ccap_e_apply(const CcapNet& net, const std::vector<GNSData>& gns, int n, int j,
                              const AlgebraicElement& x);

}  // namespace gpw
