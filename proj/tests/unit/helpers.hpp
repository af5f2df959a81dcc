#pragma once

// Shared fixtures for the unit tests: named graphs, Fock spaces over preset
// vertex data, and small random generators.

#include <random>
#include <string>
#include <vector>

#include "gpw/config.hpp"
#include "gpw/coxeter.hpp"
#include "gpw/fock.hpp"
#include "gpw/valg.hpp"

namespace gpw::test {

inline SimpleGraph graph(const std::string& name) { return parse_graph(name); }

inline std::vector<VertexAlgebra> algebras(int n, const std::string& preset) {
  return std::vector<VertexAlgebra>(static_cast<std::size_t>(n), vertex_preset(preset).algebra);
}

inline std::vector<GNSData> gns_all(int n, const std::string& preset) {
  std::vector<GNSData> out;
  for (const auto& a : algebras(n, preset)) out.push_back(gns(a));
  return out;
}

inline FockSpace fock(const std::string& g, const std::string& preset, int depth) {
  const auto gr = graph(g);
  std::vector<VertexSpace> vs;
  for (const auto& d : gns_all(gr.size(), preset)) vs.push_back(VertexSpace::from_gns(d));
  return FockSpace(gr, vs, depth);
}

inline std::vector<Letter> random_sequence(std::mt19937_64& rng, int n_letters, int len) {
  std::uniform_int_distribution<int> pick(0, n_letters - 1);
  std::vector<Letter> s(static_cast<std::size_t>(len));
  for (auto& x : s) x = pick(rng);
  return s;
}

// Random simple graph on n vertices with edge probability p.
inline SimpleGraph random_graph(std::mt19937_64& rng, int n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return SimpleGraph::from_edges(n, edges);
}

inline Mat random_matrix(std::mt19937_64& rng, long rows, long cols) {
  std::normal_distribution<double> nd;
  Mat m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      const double re = nd(rng);
      m(i, j) = cd(re, nd(rng));
    }
  return m;
}

inline Word w(std::vector<Letter> l) { return Word(std::move(l)); }

}  // namespace gpw::test
