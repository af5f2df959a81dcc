#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace gpw;

namespace {

VertexAlgebra m2_trace() { return VertexAlgebra::matrix_trace(2); }
VertexAlgebra c2() { return VertexAlgebra::abelian({0.3, 0.7}); }

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(Gns, Dimensions) {
  EXPECT_EQ(gns(VertexAlgebra::abelian({0.4, 0.6})).dim(), 2);
  EXPECT_EQ(gns(m2_trace()).dim(), 4);
  EXPECT_EQ(gns(VertexAlgebra::matrix_state(diag2(0.6, 0.4))).dim(), 4);
}

TEST(Gns, RejectsSingularDensity) {
  EXPECT_ANY_THROW(VertexAlgebra::matrix_state(diag2(1.0, 0.0)));
  EXPECT_ANY_THROW(VertexAlgebra::abelian({1.0, 0.0}));
}

TEST(Gns, IsARepresentationWithCyclicXi) {
  std::mt19937_64 rng(21);
  for (const auto& alg : {c2(), m2_trace(), VertexAlgebra::matrix_state(diag2(0.6, 0.4))}) {
    const auto g = gns(alg);
    for (int k = 0; k < 10; ++k) {
      const Mat a = alg.from_coords(gpw::test::random_matrix(rng, alg.dim(), 1).col(0));
      const Mat b = alg.from_coords(gpw::test::random_matrix(rng, alg.dim(), 1).col(0));
      EXPECT_LT((g.rep(a * b) - g.rep(a) * g.rep(b)).norm(), 1e-10);
      EXPECT_LT((g.rep(a.adjoint()) - g.rep(a).adjoint()).norm(), 1e-10);
      // ⟨ξ, π(a) ξ⟩ = φ(a) and π(a)ξ = â.
      EXPECT_LT(std::abs(g.rep(a)(0, 0) - alg.state(a)), 1e-12);
      EXPECT_LT((g.rep(a) * g.xi() - g.hat(a)).norm(), 1e-10);
      EXPECT_LT((g.element_of(g.hat(a)) - a).norm(), 1e-10);
    }
    // basis_ops[j] ξ = e_j.
    for (int j = 0; j < g.dim(); ++j) EXPECT_LT((g.basis_ops()[static_cast<std::size_t>(j)].col(0) - Vec::Unit(g.dim(), j)).norm(), 1e-10);
  }
}

TEST(Center, Examples) {
  const auto alg = m2_trace();
  EXPECT_LT(center(alg.identity(), alg).norm(), 1e-14);
  Mat a = Mat::Zero(2, 2);
  a(0, 1) = 1;
  EXPECT_LT((center(a, alg) - a).norm(), 1e-14);
  EXPECT_LT((center(diag2(1, 0), alg) - diag2(0.5, -0.5)).norm(), 1e-14);
}

TEST(Choi, PositivityExamples) {
  const auto alg = m2_trace();
  EXPECT_TRUE(is_ucp(CpMap::identity(alg)));
  EXPECT_FALSE(is_cp(CpMap::transpose(alg)));
  EXPECT_LT(min_choi_eigenvalue(CpMap::transpose(alg)), -0.5);
  for (double r : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_TRUE(is_ucp(CpMap::radial(alg, r), -1e-12)) << r;
    EXPECT_TRUE(CpMap::radial(alg, r).is_state_preserving());
  }
}

TEST(RandomUcp, IsStatePreservingUcp) {
  for (const auto& alg : {VertexAlgebra::matrix_state(diag2(0.6, 0.4)), m2_trace(), c2()}) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto t = CpMap::random_ucp(alg, seed);
      EXPECT_TRUE(is_ucp(t, -1e-12)) << seed;
      EXPECT_TRUE(t.is_state_preserving()) << seed;
    }
  }
}

TEST(Stinespring, ReconstructsRandomMaps) {
  std::mt19937_64 rng(22);
  for (const auto& alg : {VertexAlgebra::matrix_state(diag2(0.6, 0.4)), c2(), VertexAlgebra::abelian({0.2, 0.3, 0.5})}) {
    const auto g = gns(alg);
    std::vector<CpMap> maps{CpMap::identity(alg), CpMap::state_map(alg)};
    for (std::uint64_t s = 0; s < 10; ++s) maps.push_back(CpMap::random_ucp(alg, s));
    for (const auto& t : maps) {
      const auto d = stinespring(t, g);
      // Unital T gives an isometry.
      EXPECT_LT((d.v.adjoint() * d.v - Mat::Identity(g.dim(), g.dim())).norm(), 1e-10);
      for (int k = 0; k < 5; ++k) {
        const Mat a = alg.from_coords(gpw::test::random_matrix(rng, alg.dim(), 1).col(0));
        EXPECT_LT((d.reconstruct(a) - g.rep(t.apply(a))).norm(), 1e-10) << t.name();
      }
    }
  }
}

TEST(Stinespring, RefusesNonCp) {
  const auto alg = m2_trace();
  try {
    stinespring(CpMap::transpose(alg), gns(alg));
    FAIL() << "expected NotCompletelyPositive";
  } catch (const NotCompletelyPositive& e) {
    EXPECT_LT(e.min_eigenvalue, 0);
  }
}

TEST(Norms, Examples) {
  const auto alg = VertexAlgebra::matrix_state(diag2(0.6, 0.4));
  const auto id = norms(CpMap::identity(alg));
  EXPECT_NEAR(id.cb_lower, 1, 1e-9);
  EXPECT_NEAR(id.l2_A, 1, 1e-9);
  EXPECT_NEAR(id.l2_Aop, 1, 1e-9);
  EXPECT_EQ(id.cb_level, 1);
  const auto twice = norms(CpMap::scaling(alg, 2.0));
  EXPECT_NEAR(twice.l2_A, 2, 1e-9);
  for (double r : {0.2, 0.7}) EXPECT_LE(norms(CpMap::radial(alg, r)).cb_lower, 1 + 1e-9);
}

TEST(Norms, TransposeIsNotCompletelyContractive) {
  // ‖transpose‖ = 1 while its cb norm on M_2 is 2; the lower bound at level 2
  // must exceed 1.
  const auto alg = m2_trace();
  EXPECT_GT(cb_lower_at_level(CpMap::transpose(alg), 2, 3), 1.5);
  EXPECT_LE(cb_lower_at_level(CpMap::transpose(alg), 2, 3), 2 + 1e-9);
}

TEST(CpMap, AlgebraOfMaps) {
  const auto alg = m2_trace();
  const auto a = CpMap::radial(alg, 0.3), b = CpMap::radial(alg, 0.5);
  EXPECT_LT((a.compose(b).action() - CpMap::radial(alg, 0.15).action()).norm(), 1e-12);
  EXPECT_LT(((a - a).action()).norm(), 1e-15);
  EXPECT_LT((a.scaled(2.0).action() - (a + a).action()).norm(), 1e-14);
}
