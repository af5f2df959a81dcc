#pragma once

// Run configuration: one JSON document describing the graph, the vertex data,
// the truncation depth, tolerances, the seed and which suites to run.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpw/coxeter.hpp"
#include "gpw/fock.hpp"
#include "gpw/valg.hpp"

namespace gpw {

struct ConfigError : std::runtime_error {
  std::string location;  // "<source>:<byte>" for syntax errors, a JSON pointer otherwise
  ConfigError(std::string loc, const std::string& msg)
      : std::runtime_error(loc + ": " + msg), location(std::move(loc)) {}
};

// Vertex data of the Fock space: a finite-dimensional algebra with a faithful
// state. Presets: "C2" (weights 0.3, 0.7), "C3" (0.2, 0.3, 0.5), "M2"
// (density diag(0.6, 0.4)), "M2-trace".
struct VertexSpec {
  std::string label;
  VertexAlgebra algebra;
};

struct HeckeCase {
  std::string graph;  // preset name or "n:e0-e1,..."
  SimpleGraph g;
  std::vector<std::string> types;  // Coxeter type per vertex
  std::vector<double> q;           // one value for every generator, per run
  int depth = 3;
};

struct Tolerances {
  double identity = 1e-10;     // operator identities (partition, H_τ, semigroup, Stinespring)
  double pd = 1e-8;            // two-mode 𝒫_d equality
  double state = 1e-12;        // φ∘θ = φ and vertex states
  double khintchine = 1e-8;    // dilation identity
  double contraction = 1e-6;   // slack on the Θ̃_d contraction ratio
  double hecke = 1e-12;        // Hecke relations
  double bound = 1e-9;         // relative slack on measured ≤ upper bound
};

struct SuiteParams {
  int oracle_length = 8;
  int partition_length = 5;
  int action_length = 3;
  int ptau_length = 4;
  int pd_degree = 4;
  int semigroup_length = 3;
  std::vector<double> radial_r{0.3, 0.7, 1.0};
  std::vector<double> tail_r{0.5, 0.8};
  std::vector<int> tail_n{2, 4, 6};
  int cb_samples = 8;
  int ucp_families = 20;
  int ucp_length = 2;
  int khintchine_degree = 3;
  int contraction_samples = 200;
  std::vector<int> contraction_levels{1, 2};
  int contraction_climb = 40;
  int norm_families = 10;
  int norm_degree = 3;
  std::vector<double> ccap_eps{0.1, 0.01, 0.001};
  std::vector<int> ccap_n{2, 4, 8, 16};
  int ccap_tests = 10;
};

inline const std::vector<std::string>& all_suite_ids() {
  static const std::vector<std::string> ids{"coxeter-oracle", "action-partition", "ptau-formula", "pd-theorem",
                                            "semigroup",      "ucp-product",      "khintchine-dilation",
                                            "hecke",          "ccap-net",         "norm-tables"};
  return ids;
}

struct RunConfig {
  std::string name = "config";
  std::string graph_label;
  SimpleGraph graph;
  std::vector<VertexSpec> vertices;
  int depth = 4;
  int d_max = 3;
  long fock_cap = 5000;
  std::uint64_t seed = 1;
  Tolerances tol;
  SuiteParams params;
  std::vector<HeckeCase> hecke_cases;
  std::vector<std::string> suites;  // in run order
  std::string report_path;
  std::string records_path;
  std::string canonical;  // normalized JSON of the input, for the fingerprint

  std::vector<VertexSpace> vertex_spaces() const;
  std::vector<GNSData> gns_data() const;
  std::uint64_t fingerprint() const;  // FNV-1a over canonical text and seed
};

// "G1" single vertex, "G2" two vertices, "G3" one edge, "G4" path 0-1-2, or
// "n:a-b,c-d".
SimpleGraph parse_graph(const std::string& spec);
VertexSpec vertex_preset(const std::string& name);

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

// Truncated Fock dimension without building the space.
long fock_dimension(const SimpleGraph& g, const std::vector<int>& vertex_dims, int depth);
// Throws ResourceGuardError when the configured Fock space exceeds the cap.
void check_resources(const RunConfig& cfg);

}  // namespace gpw
