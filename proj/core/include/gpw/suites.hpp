#pragma once

// Verification suites, report assembly and the enumerate command.

#include <cstdint>
#include <string>
#include <vector>

#include "gpw/config.hpp"
#include "gpw/coxeter.hpp"

namespace gpw {

struct CheckRecord {
  std::string suite;
  int criterion = 0;
  std::string name;
  bool pass = false;
  double measured = 0;
  double bound = 0;  // pass iff measured ≤ bound, unless the check says otherwise
  double tol = 0;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  int criterion = 0;
  std::vector<CheckRecord> checks;
  std::string error;  // set when the suite aborted
  double wall_seconds = 0;
  bool pass() const;
};

struct RunReport {
  std::string config_name;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  std::vector<SuiteReport> suites;
  bool pass() const;
};

int suite_criterion(const std::string& id);
SuiteReport run_suite(const std::string& id, const RunConfig& cfg);
// Runs the configured suites on up to `jobs` threads (0: hardware threads);
// the report keeps the configured order.
RunReport run(const RunConfig& cfg, int jobs = 0);

// One JSON object per check, no timings.
std::string records_jsonl(const RunReport& r);
// Human-readable table; wall times are listed in a separate trailing section.
std::string human_report(const RunReport& r);

// what ∈ {words, cliques, T, S_w, C_gamma}; sorted, one item per line.
std::string enumerate_cmd(const RunConfig& cfg, const std::string& what);

// Brute-force oracles: the ShortLex-least word of minimal length reachable by
// deleting adjacent equal letters and swapping adjacent commuting letters, and
// 𝒯 by filtering all triples of vertex subsets through that oracle.
Word closure_normal_form(const SimpleGraph& g, const std::vector<Letter>& seq);
std::vector<CliqueTriple> brute_force_clique_triples(const SimpleGraph& g);

}  // namespace gpw
