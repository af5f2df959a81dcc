#include <gtest/gtest.h>

#include <random>

#include "gpw/multipliers.hpp"
#include "helpers.hpp"

using namespace gpw;
using gpw::test::w;

namespace {

AlgebraicElement random_element(const FockSpace& f, int max_len, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  AlgebraicElement x = AlgebraicElement::identity(nd(rng));
  for (const auto& word : f.words()) {
    if (word.empty() || word.length() > max_len) continue;
    for (auto p : basis_generators(f, word)) {
      p.coef = cd(nd(rng), nd(rng));
      x += AlgebraicElement::of(p);
    }
  }
  return x;
}

std::vector<VertexOpMap> op_maps(const std::vector<CpMap>& maps, const std::vector<GNSData>& g) {
  std::vector<VertexOpMap> out;
  for (std::size_t v = 0; v < maps.size(); ++v) out.push_back(vertex_op_map(maps[v], g[v], g[v]));
  return out;
}

}  // namespace

TEST(PartialIsometry, IsAPartialIsometry) {
  const auto f = gpw::test::fock("G4", "M2", 4);
  for (const auto& u : {w({0}), w({1}), w({0, 1}), w({0, 2})})
    for (const auto& r : subcliques(clique_suffix(f.graph(), u)))
      for (int n = 0; n <= 1; ++n) {
        const Mat v = Mat(PartialIsometryVnur(f, u, r, n).matrix());
        if (v.cols() == 0) continue;
        const Mat vv = v.adjoint() * v;
        EXPECT_LT((vv * vv - vv).norm(), 1e-10) << to_string(u) << " r=" << to_string(r);
        EXPECT_LT((v * vv - v).norm(), 1e-10);
      }
}

TEST(HTilde, VanishesOnMismatchedLength) {
  const auto f = gpw::test::fock("G3", "C2", 3);
  VCache cache(f);
  const auto p = basis_generator(f, w({0}), {0});
  const Mat x = lambda(f, p, f.safe_dim(2));
  for (const auto& rho : enumerate_rho(f.graph(), 2)) EXPECT_LT(h_tilde_apply(f, rho, x, cache).norm(), 1e-14);
}

TEST(PD, ModesAgreeOnRandomElements) {
  std::mt19937_64 rng(41);
  for (const auto* g : {"G2", "G4"}) {
    const auto f = gpw::test::fock(g, "M2", 3);
    VCache cache(f);
    for (int k = 0; k < 3; ++k) {
      const auto x = random_element(f, 2, rng);
      const long cols = f.safe_dim(1);
      const Mat lx = lambda(f, x, cols);
      Mat sum = Mat::Zero(f.dim(), cols);
      for (int d = 0; d <= 3; ++d) {
        const Mat pd = p_d_via_h_tau(f, d, lx, cache);
        EXPECT_LT((pd - lambda(f, p_d_direct(x, d), cols)).norm(), 1e-9) << g << " d=" << d;
        sum += pd;
      }
      // The degree projections resolve the identity.
      EXPECT_LT((sum - lx).norm(), 1e-9);
    }
  }
}

TEST(PD, ZeroIsTheVacuumComponent) {
  std::mt19937_64 rng(42);
  const auto f = gpw::test::fock("G4", "C2", 3);
  VCache cache(f);
  const auto x = random_element(f, 3, rng);
  const Mat lx = lambda(f, x, 1);
  const Mat p0 = p_d_via_h_tau(f, 0, lx, cache);
  EXPECT_LT((p0 - x.scalar * Mat::Identity(f.dim(), 1)).norm(), 1e-12);
}

TEST(Radial, EndpointsAndSemigroup) {
  std::mt19937_64 rng(43);
  const auto f = gpw::test::fock("G3", "M2", 3);
  auto cache = std::make_shared<VCache>(f);
  const auto x = random_element(f, 2, rng);
  const long cols = f.safe_dim(1);
  const Mat lx = lambda(f, x, cols);
  EXPECT_LT((radial(f, 1.0, std::nullopt, cache).apply(lx) - lx).norm(), 1e-10);
  EXPECT_LT((radial(f, 0.0, std::nullopt, cache).apply(lx) - p_d_via_h_tau(f, 0, lx, *cache)).norm(), 1e-12);
  const Mat a = radial(f, 0.4, std::nullopt, cache).apply(radial(f, 0.5, std::nullopt, cache).apply(lx));
  EXPECT_LT((a - radial(f, 0.2, std::nullopt, cache).apply(lx)).norm(), 1e-10);
  EXPECT_ANY_THROW(radial(f, 1.5, std::nullopt, cache));
}

TEST(GraphProduct, IdentityAndRadialMaps) {
  std::mt19937_64 rng(44);
  const auto f = gpw::test::fock("G4", "M2", 3);
  const auto g = gpw::test::gns_all(3, "M2");
  const auto algs = gpw::test::algebras(3, "M2");
  auto cache = std::make_shared<VCache>(f);
  const auto x = random_element(f, 3, rng);
  const long cols = f.safe_dim(0);
  std::vector<CpMap> ids, rads;
  for (const auto& a : algs) ids.push_back(CpMap::identity(a)), rads.push_back(CpMap::radial(a, 0.6));
  EXPECT_LT((lambda(f, graph_product_algebraic(op_maps(ids, g), x), cols) - lambda(f, x, cols)).norm(), 1e-10);
  EXPECT_LT((lambda(f, graph_product_algebraic(op_maps(rads, g), x), cols) -
             radial(f, 0.6, std::nullopt, cache).apply(lambda(f, x, cols)))
                .norm(),
            1e-10);
}

TEST(UcpGraphProduct, StinespringIdentityOnG4) {
  std::mt19937_64 rng(45);
  const auto f = gpw::test::fock("G4", "M2", 2);
  const auto g = gpw::test::gns_all(3, "M2");
  const auto algs = gpw::test::algebras(3, "M2");
  for (std::uint64_t s = 0; s < 4; ++s) {
    std::vector<CpMap> maps;
    for (std::size_t v = 0; v < 3; ++v) maps.push_back(CpMap::random_ucp(algs[v], 100 * s + v));
    const UcpGraphProduct prod(f, g, maps);
    EXPECT_LT(prod.isometry_defect(f.dim()), 1e-10);
    const auto x = random_element(f, 2, rng);
    const long cols = f.safe_dim(0);
    EXPECT_LT((prod.theta_lambda(x, cols) - prod.dilated(x, cols)).norm(), 1e-10);
  }
}

TEST(UcpGraphProduct, RejectsNonStatePreservingMaps) {
  const auto f = gpw::test::fock("G3", "M2", 2);
  const auto g = gpw::test::gns_all(2, "M2");
  const auto algs = gpw::test::algebras(2, "M2");
  // Conjugation by a unitary that moves the density is ucp but not φ-preserving.
  Mat u(2, 2);
  u << 0, 1, 1, 0;
  const auto flip = CpMap::from_function(algs[0], algs[0], [&](const Mat& a) { return Mat(u * a * u.adjoint()); }, "flip");
  try {
    UcpGraphProduct(f, g, {CpMap::identity(algs[0]), flip});
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("vertex 1"), std::string::npos);
  }
}

TEST(Bounds, Formulas) {
  const auto g4 = gpw::test::graph("G4");
  EXPECT_EQ(clique_count(g4), 6);
  EXPECT_DOUBLE_EQ(td_bound(g4, 2, 1.0), 216.0 * 2);
  EXPECT_DOUBLE_EQ(td_bound(g4, 3, 2.0), 216.0 * 3 * 8);
  EXPECT_DOUBLE_EQ(radial_tail_bound(g4, 0.5, 2), 55.0 * 2 * 0.25 / 0.25);
}

TEST(GraphProductOnFock, IdentityIsIsometric) {
  const auto f = gpw::test::fock("G4", "M2", 3);
  const auto g = gpw::test::gns_all(3, "M2");
  const auto algs = gpw::test::algebras(3, "M2");
  std::vector<Mat> hats;
  for (std::size_t v = 0; v < 3; ++v) hats.push_back(centered_hat_matrix(CpMap::identity(algs[v]), g[v], g[v]));
  for (int d = 1; d <= 3; ++d) {
    const Mat m = graph_product_on_fock(f, hats, d);
    EXPECT_LT((m.adjoint() * m - Mat::Identity(m.cols(), m.cols())).norm(), 1e-12);
  }
}

TEST(Ccap, GapBoundsShrinkWithJ) {
  const auto algs = gpw::test::algebras(2, "M2");
  const auto net = CcapNet::synthetic(algs, {0.1, 0.01, 0.001}, 5);
  for (int n : {2, 8}) {
    double prev = 1e300;
    for (int j = 0; j < net.size(); ++j) {
      const auto r = ccap_gap_bounds(gpw::test::graph("G3"), net, n, j);
      EXPECT_LT(r.cb_upper, prev);
      prev = r.cb_upper;
    }
  }
  for (const auto& per_vertex : net.u_maps)
    for (const auto& u : per_vertex) {
      EXPECT_TRUE(is_ucp(u, -1e-12));
      EXPECT_TRUE(u.is_state_preserving());
    }
}
