#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gpw/suites.hpp"
#include "helpers.hpp"

using namespace gpw;
using gpw::test::graph;
using gpw::test::w;

namespace {

// Ordered triples (w1, w2, w3) with w1·w2·w3 = w reduced and w2 a clique
// word, found by splitting every element of the ball around e.
std::set<TripleSplit> brute_splits(const SimpleGraph& g, const Word& target) {
  const auto ball = enumerate_words(g, target.length());
  std::set<TripleSplit> out;
  for (const auto& a : ball)
    for (const auto& b : ball) {
      if (a.length() + b.length() > target.length() || !is_clique_word(g, b)) continue;
      for (const auto& c : ball) {
        if (a.length() + b.length() + c.length() != target.length()) continue;
        std::vector<Letter> seq = a.letters;
        seq.insert(seq.end(), b.letters.begin(), b.letters.end());
        seq.insert(seq.end(), c.letters.begin(), c.letters.end());
        if (closure_normal_form(g, seq) == target) out.insert({a, b, c});
      }
    }
  return out;
}

}  // namespace

TEST(NormalForm, Examples) {
  EXPECT_EQ(normal_form(graph("G1"), {0, 0}), Word());
  EXPECT_EQ(normal_form(graph("G2"), {0, 1, 0}), w({0, 1, 0}));
  EXPECT_EQ(normal_form(graph("G3"), {1, 0}), w({0, 1}));
  EXPECT_THROW(normal_form(graph("G2"), {0, 2}), std::invalid_argument);
}

TEST(NormalForm, MatchesRewritingClosureOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const auto g = gpw::test::random_graph(rng, n, 0.5);
    for (int k = 0; k < 25; ++k) {
      const auto seq = gpw::test::random_sequence(rng, n, 1 + k % 9);
      ASSERT_EQ(normal_form(g, seq), closure_normal_form(g, seq)) << "trial " << trial;
    }
  }
}

TEST(NormalForm, IsInvariantUnderRelations) {
  std::mt19937_64 rng(12);
  const auto g = graph("G4");
  for (int k = 0; k < 200; ++k) {
    auto seq = gpw::test::random_sequence(rng, 3, 7);
    const auto nf = normal_form(g, seq);
    // Insert a cancelling pair anywhere.
    std::uniform_int_distribution<std::size_t> pos(0, seq.size());
    const auto at = seq.begin() + static_cast<long>(pos(rng));
    const Letter x = static_cast<Letter>(k % 3);
    seq.insert(at, {x, x});
    EXPECT_EQ(normal_form(g, seq), nf);
  }
}

TEST(Multiply, Examples) {
  const auto g4 = graph("G4");
  EXPECT_EQ(multiply(g4, w({0}), w({0})), Word());
  EXPECT_EQ(multiply(g4, w({0, 1}), w({1, 2})), w({0, 2}));
  EXPECT_EQ(multiply(g4, Word(), w({2, 1})), w({1, 2}));  // 1 and 2 commute; ShortLex
  EXPECT_TRUE(is_reduced_product(graph("G2"), {w({0}), w({1})}));
  EXPECT_FALSE(is_reduced_product(g4, {w({0}), w({0})}));
  EXPECT_FALSE(is_reduced_product(g4, {w({0, 1}), w({1, 2})}));
}

TEST(Multiply, GroupAxioms) {
  std::mt19937_64 rng(13);
  const auto g = graph("G4");
  for (int k = 0; k < 100; ++k) {
    const auto a = normal_form(g, gpw::test::random_sequence(rng, 3, 5));
    const auto b = normal_form(g, gpw::test::random_sequence(rng, 3, 5));
    const auto c = normal_form(g, gpw::test::random_sequence(rng, 3, 5));
    EXPECT_EQ(multiply(g, multiply(g, a, b), c), multiply(g, a, multiply(g, b, c)));
    EXPECT_EQ(multiply(g, a, inverse(g, a)), Word());
  }
}

TEST(CliquePrefixSuffix, Examples) {
  EXPECT_EQ(clique_suffix(graph("G3"), w({0, 1})), w({0, 1}));
  EXPECT_EQ(clique_suffix(graph("G2"), w({0, 1, 0})), w({0}));
  EXPECT_EQ(clique_prefix(graph("G4"), Word()), Word());
}

TEST(CliquePrefixSuffix, LetterCharacterization) {
  // s_l(w) collects exactly the letters v with |vw| < |w|; s_l(w) = s_r(w⁻¹).
  const auto g = graph("4:0-1,1-2,2-3,3-0");
  for (const auto& x : enumerate_words(g, 5)) {
    std::vector<Letter> lefts;
    for (Letter v = 0; v < g.size(); ++v)
      if (multiply(g, w({v}), x).length() < x.length()) lefts.push_back(v);
    EXPECT_EQ(clique_prefix(g, x), Word(lefts));
    EXPECT_EQ(clique_prefix(g, x), clique_suffix(g, inverse(g, x)));
  }
}

TEST(EnumerateWords, Counts) {
  EXPECT_EQ(enumerate_words(graph("G1"), 5).size(), 2u);
  EXPECT_EQ(enumerate_words(graph("G3"), 10).size(), 4u);
  EXPECT_EQ(enumerate_words(graph("G2"), 2),
            (std::vector<Word>{Word(), w({0}), w({1}), w({0, 1}), w({1, 0})}));
}

TEST(EnumerateWords, AgreesWithClosureBall) {
  // Every sequence of length ≤ 6 reduces into the enumerated ball, and every
  // enumerated word is its own normal form.
  for (const auto* name : {"G2", "G4", "3:0-1"}) {
    const auto g = graph(name);
    const auto ball = enumerate_words(g, 6);
    std::set<Word> reached;
    std::vector<Letter> seq;
    std::function<void(int)> rec = [&](int len) {
      reached.insert(closure_normal_form(g, seq));
      if (len == 0) return;
      for (Letter v = 0; v < g.size(); ++v) {
        seq.push_back(v);
        rec(len - 1);
        seq.pop_back();
      }
    };
    rec(6);
    EXPECT_EQ(std::set<Word>(ball.begin(), ball.end()), reached) << name;
    EXPECT_TRUE(std::is_sorted(ball.begin(), ball.end()));
  }
}

TEST(TripleSplittings, Examples) {
  EXPECT_EQ(triple_splittings(graph("G1"), w({0})).size(), 3u);
  EXPECT_EQ(triple_splittings(graph("G2"), w({0, 1})).size(), 5u);
  EXPECT_EQ(triple_splittings(graph("G3"), w({0, 1})).size(), 9u);
}

TEST(TripleSplittings, MatchBruteForce) {
  for (const auto* name : {"G2", "G3", "G4", "4:0-1,1-2,2-3,3-0"}) {
    const auto g = graph(name);
    for (const auto& x : enumerate_words(g, 4)) {
      const auto got = triple_splittings(g, x);
      EXPECT_EQ(std::set<TripleSplit>(got.begin(), got.end()), brute_splits(g, x)) << name << " " << to_string(x);
      for (const auto& s : got) {
        EXPECT_EQ(s.w1.length() + s.w2.length() + s.w3.length(), x.length());
        EXPECT_TRUE(is_clique_word(g, s.w2));
      }
    }
  }
}

TEST(SplittingsForRho, Examples) {
  const auto g1 = graph("G1");
  const RhoTuple clique_v{0, 0, Word(), Word(), w({0})};
  EXPECT_EQ(splittings_for_rho(g1, w({0}), clique_v), (std::vector<TripleSplit>{{Word(), w({0}), Word()}}));
  // W̃^R(e) = {e}, so n_l, n_r > 0 with empty u_l, u_r, t selects nothing; the
  // split (u, e, v) is recovered as ρ = (0, 0, u, v, e) instead.
  const auto g2 = graph("G2");
  EXPECT_TRUE(splittings_for_rho(g2, w({0, 1}), RhoTuple{1, 1, Word(), Word(), Word()}).empty());
  EXPECT_EQ(splittings_for_rho(g2, w({0, 1}), RhoTuple{0, 0, w({0}), w({1}), Word()}),
            (std::vector<TripleSplit>{{w({0}), Word(), w({1})}}));
  EXPECT_EQ(rho_of_split(g2, {w({0}), Word(), w({1})}), (RhoTuple{0, 0, w({0}), w({1}), Word()}));
  EXPECT_TRUE(splittings_for_rho(g1, w({0}), RhoTuple{1, 1, Word(), Word(), Word()}).empty());
}

TEST(SplittingsForRho, PartitionAndRecovery) {
  for (const auto* name : {"G2", "G3", "G4"}) {
    const auto g = graph(name);
    for (const auto& x : enumerate_words(g, 5)) {
      std::map<TripleSplit, int> hits;
      for (const auto& rho : enumerate_rho(g, x.length()))
        for (const auto& s : splittings_for_rho(g, x, rho)) {
          ++hits[s];
          EXPECT_EQ(rho_of_split(g, s), rho);
        }
      const auto all = triple_splittings(g, x);
      EXPECT_EQ(hits.size(), all.size()) << name << " " << to_string(x);
      for (const auto& s : all) EXPECT_EQ(hits[s], 1);
    }
  }
}

TEST(CliqueTriples, FrozenValues) {
  const std::vector<CliqueTriple> g1{{Word(), Word(), Word()},
                                     {Word(), Word(), w({0})},
                                     {Word(), w({0}), Word()},
                                     {w({0}), Word(), Word()}};
  EXPECT_EQ(enumerate_clique_triples(graph("G1")), g1);
  EXPECT_EQ(c_gamma(graph("G1")), 5);
  EXPECT_EQ(enumerate_clique_triples(graph("G2")).size(), 9u);
  EXPECT_EQ(c_gamma(graph("G2")), 11);
  // Frozen from the brute-force subset enumerator.
  EXPECT_EQ(enumerate_clique_triples(graph("G4")).size(), 36u);
  EXPECT_EQ(c_gamma(graph("G4")), 55);
  EXPECT_EQ(enumerate_clique_triples(graph("4:0-1,1-2,2-3,3-0")).size(), 81u);
  EXPECT_EQ(c_gamma(graph("4:0-1,1-2,2-3,3-0")), 121);
}

TEST(CliqueTriples, CompleteGraphClosedForm) {
  // On K_n every vertex lies in exactly one of u_l, u_r, t or none, so
  // |𝒯| = 4^n and C_Γ = 5^n.
  long four = 1, five = 1;
  for (int n = 1; n <= 4; ++n) {
    four *= 4;
    five *= 5;
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
    const auto g = SimpleGraph::from_edges(n, edges);
    EXPECT_EQ(static_cast<long>(enumerate_clique_triples(g).size()), four);
    EXPECT_EQ(c_gamma(g), five);
  }
}

TEST(CliqueTriples, MatchBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 12; ++trial) {
    const auto g = gpw::test::random_graph(rng, 2 + trial % 3, 0.5);
    EXPECT_EQ(enumerate_clique_triples(g), brute_force_clique_triples(g));
  }
}

TEST(Cliques, CountAndSubcliques) {
  EXPECT_EQ(cliques(graph("G4")).size(), 6u);  // e, 0, 1, 2, 01, 12
  EXPECT_EQ(max_clique_size(graph("G4")), 2);
  EXPECT_EQ(subcliques(w({0, 1, 2})).size(), 8u);
  for (const auto& c : cliques(graph("G4"))) EXPECT_TRUE(std::is_sorted(c.letters.begin(), c.letters.end()));
}

TEST(RhoTuples, LengthAndMembership) {
  const auto g = graph("G4");
  const auto triples = enumerate_clique_triples(g);
  for (int d = 0; d <= 4; ++d)
    for (const auto& rho : enumerate_rho(g, d)) {
      EXPECT_EQ(rho.length(), d);
      EXPECT_TRUE(std::binary_search(triples.begin(), triples.end(), CliqueTriple{rho.ul, rho.ur, rho.t}));
    }
}

TEST(SimpleGraph, RejectsSelfLoop) {
  EXPECT_THROW(SimpleGraph::from_edges(2, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(SimpleGraph::from_edges(2, {{0, 2}}), std::invalid_argument);
}

TEST(ShufflePermutation, RejectsNonReduced) {
  const auto g = graph("G3");
  EXPECT_THROW(shuffle_permutation(g, std::vector<Word>{w({0}), w({0})}), std::invalid_argument);
  const auto p = shuffle_permutation(g, std::vector<Word>{w({1}), w({0})});
  EXPECT_EQ(p, (std::vector<int>{1, 0}));
}
