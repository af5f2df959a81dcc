#include <gtest/gtest.h>

#include <sstream>

#include "gpw/config.hpp"
#include "gpw/suites.hpp"

using namespace gpw;

namespace {

int lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string location_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.location;
  }
  return "<parsed>";
}

}  // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(R"({"graph": "G3"})");
  EXPECT_EQ(c.graph.size(), 2);
  EXPECT_TRUE(c.graph.adjacent(0, 1));
  EXPECT_EQ(c.vertices.size(), 2u);
  EXPECT_EQ(c.vertices[0].label, "C2");
  EXPECT_EQ(c.suites, all_suite_ids());
  EXPECT_EQ(c.hecke_cases.size(), 2u);
  EXPECT_DOUBLE_EQ(c.tol.identity, 1e-10);
}

TEST(Config, ErrorLocations) {
  EXPECT_EQ(location_of(R"({"graph": {"vertices": 2, "edges": [[0, 1], [1, 1]]}})"), "/graph/edges/1");
  EXPECT_EQ(location_of(R"({"graph": "G3", "depth": -1})"), "/depth");
  EXPECT_EQ(location_of(R"({"graph": "G3", "colour": 1})"), "/colour");
  EXPECT_EQ(location_of(R"({"graph": "G3", "tolerances": {"identity": "small"}})"), "/tolerances/identity");
  EXPECT_EQ(location_of(R"({"graph": "G3", "suites": ["nope"]})"), "/suites/0");
  EXPECT_EQ(location_of(R"({"graph": "G3", "vertices": ["C2"]})"), "/vertices");
  EXPECT_EQ(location_of("{\"depth\": 3,,}"), "cfg.json:13");
  EXPECT_EQ(location_of("{}"), "/graph");
}

TEST(Config, SelfLoopMessage) {
  try {
    parse_config(R"({"graph": "3:0-1,2-2"})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("self-loop"), std::string::npos);
  }
}

TEST(Config, CustomVertices) {
  const auto c = parse_config(R"({"graph": "G4", "vertices": ["C2", {"abelian": [0.5, 0.5]}, "M2"]})");
  EXPECT_EQ(c.vertices[1].algebra.dim(), 2);
  EXPECT_EQ(c.vertices[2].algebra.dim(), 4);
}

TEST(Config, ResourceGuard) {
  auto c = parse_config(R"({"graph": "G2", "vertices": "M2", "depth": 8})");
  try {
    check_resources(c);
    FAIL();
  } catch (const ResourceGuardError& e) {
    EXPECT_EQ(e.dimension, fock_dimension(c.graph, {4, 4}, 8));
  }
}

TEST(Config, FingerprintTracksInputAndSeed) {
  const auto a = parse_config(R"({"graph": "G3", "seed": 1})"), b = parse_config(R"({"graph": "G3", "seed": 2})");
  const auto c = parse_config(R"({"graph": "G3", "seed": 1, "depth": 3})");
  EXPECT_NE(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  EXPECT_EQ(a.fingerprint(), parse_config(R"({"graph":"G3",   "seed": 1})").fingerprint());
}

TEST(Run, EmptySuiteListPasses) {
  const auto r = run(parse_config(R"({"graph": "G3", "suites": []})"));
  EXPECT_TRUE(r.suites.empty());
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(records_jsonl(r), "");
}

TEST(Run, RecordsAreDeterministicAndOrderStable) {
  const auto cfg = parse_config(R"({"graph": "G2", "depth": 3,
      "suites": ["hecke", "coxeter-oracle", "pd-theorem"],
      "params": {"oracle_length": 5, "partition_length": 3, "pd_degree": 3}})");
  const auto a = run(cfg, 1), b = run(cfg, 3);
  EXPECT_EQ(records_jsonl(a), records_jsonl(b));
  ASSERT_EQ(a.suites.size(), 3u);
  EXPECT_EQ(a.suites[0].suite, "hecke");
  EXPECT_EQ(a.suites[2].suite, "pd-theorem");
  EXPECT_TRUE(a.pass());
  // Timings are only in the human report.
  EXPECT_EQ(records_jsonl(a).find("seconds"), std::string::npos);
  EXPECT_NE(human_report(a).find("timings"), std::string::npos);
}

TEST(Run, EveryCheckOnceAndCriterionMapping) {
  const auto cfg = parse_config(R"({"graph": "G3", "depth": 3, "suites": ["action-partition", "semigroup"]})");
  const auto r = run(cfg);
  EXPECT_EQ(r.suites[0].criterion, 4);
  EXPECT_EQ(r.suites[1].criterion, 7);
  std::set<std::string> names;
  for (const auto& s : r.suites)
    for (const auto& c : s.checks) EXPECT_TRUE(names.insert(s.suite + "/" + c.name).second) << c.name;
  std::istringstream in(records_jsonl(r));
  std::string line;
  long n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(static_cast<std::size_t>(n), names.size());
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_cmd(parse_config(R"({"graph": "G1"})"), "C_gamma").substr(0, 2), "5\n");
  EXPECT_EQ(lines(enumerate_cmd(parse_config(R"({"graph": "G2"})"), "T")), 9);
  EXPECT_EQ(lines(enumerate_cmd(parse_config(R"({"graph": "G3", "depth": 10})"), "words")), 4);
  EXPECT_EQ(enumerate_cmd(parse_config(R"({"graph": "G3"})"), "cliques"), "e\n0\n1\n0 1\n");
  EXPECT_THROW(enumerate_cmd(parse_config(R"({"graph": "G1"})"), "bogus"), std::invalid_argument);
}

TEST(Oracles, ClosureNormalFormExamples) {
  const auto g2 = parse_graph("G2");
  EXPECT_EQ(closure_normal_form(g2, {0, 1, 1, 0}), Word());
  EXPECT_EQ(closure_normal_form(parse_graph("G3"), {1, 0, 1}), Word({0}));
}
