#include "gpw/config.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "gpw/hecke.hpp"
#include "json.hpp"

namespace gpw {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw ConfigError(where.empty() ? "/" : where, msg); }

void known_keys(const json& j, const std::string& where, const std::set<std::string>& keys) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) fail(where + "/" + k, "unknown key");
}

double get_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& where, int lo, int hi) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) fail(where, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::vector<double> get_doubles(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_double(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<int> get_ints(const json& j, const std::string& where, int lo, int hi) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_int(j[i], where + "/" + std::to_string(i), lo, hi));
  return out;
}

Mat get_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a square matrix");
  const auto n = static_cast<long>(j.size());
  Mat m(n, n);
  for (long r = 0; r < n; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<long>(row.size()) != n) fail(rw, "expected a row of length " + std::to_string(n));
    for (long c = 0; c < n; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      const std::string ew = rw + "/" + std::to_string(c);
      if (e.is_array()) {
        if (e.size() != 2) fail(ew, "complex entries are [re, im]");
        m(r, c) = cd(get_double(e[0], ew + "/0"), get_double(e[1], ew + "/1"));
      } else {
        m(r, c) = get_double(e, ew);
      }
    }
  }
  return m;
}

VertexSpec parse_vertex(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return vertex_preset(j.get<std::string>());
    known_keys(j, where, {"preset", "abelian", "density", "blocks", "densities"});
    if (j.contains("preset")) {
      if (!j["preset"].is_string()) fail(where + "/preset", "expected a string");
      return vertex_preset(j["preset"].get<std::string>());
    }
    if (j.contains("abelian")) {
      const auto w = get_doubles(j["abelian"], where + "/abelian");
      return {"abelian", VertexAlgebra::abelian(w)};
    }
    if (j.contains("density")) return {"matrix", VertexAlgebra::matrix_state(get_matrix(j["density"], where + "/density"))};
    if (j.contains("blocks")) {
      const auto blocks = get_ints(j["blocks"], where + "/blocks", 1, 16);
      if (!j.contains("densities") || !j["densities"].is_array() || j["densities"].size() != blocks.size())
        fail(where + "/densities", "need one density per block");
      std::vector<Mat> ds;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        ds.push_back(get_matrix(j["densities"][i], where + "/densities/" + std::to_string(i)));
      return {"blocks", VertexAlgebra(blocks, ds)};
    }
    fail(where, "vertex needs one of preset, abelian, density, blocks");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

SuiteParams parse_params(const json& j, const std::string& where) {
  SuiteParams p;
  known_keys(j, where,
             {"oracle_length", "partition_length", "action_length", "ptau_length", "pd_degree", "semigroup_length",
              "radial_r", "tail_r", "tail_n", "cb_samples", "ucp_families", "ucp_length", "khintchine_degree",
              "contraction_samples", "contraction_levels", "contraction_climb", "norm_families", "norm_degree",
              "ccap_eps", "ccap_n", "ccap_tests"});
  auto i = [&](const char* k, int& dst, int lo, int hi) {
    if (j.contains(k)) dst = get_int(j[k], where + "/" + k, lo, hi);
  };
  i("oracle_length", p.oracle_length, 0, 12);
  i("partition_length", p.partition_length, 0, 8);
  i("action_length", p.action_length, 0, 8);
  i("ptau_length", p.ptau_length, 0, 8);
  i("pd_degree", p.pd_degree, 0, 8);
  i("semigroup_length", p.semigroup_length, 0, 8);
  i("cb_samples", p.cb_samples, 1, 10000);
  i("ucp_families", p.ucp_families, 0, 1000);
  i("ucp_length", p.ucp_length, 0, 8);
  i("khintchine_degree", p.khintchine_degree, 0, 6);
  i("contraction_samples", p.contraction_samples, 0, 100000);
  i("contraction_climb", p.contraction_climb, 0, 10000);
  i("norm_families", p.norm_families, 0, 1000);
  i("norm_degree", p.norm_degree, 1, 6);
  i("ccap_tests", p.ccap_tests, 0, 1000);
  if (j.contains("radial_r")) p.radial_r = get_doubles(j["radial_r"], where + "/radial_r");
  if (j.contains("tail_r")) p.tail_r = get_doubles(j["tail_r"], where + "/tail_r");
  if (j.contains("tail_n")) p.tail_n = get_ints(j["tail_n"], where + "/tail_n", 0, 32);
  if (j.contains("contraction_levels")) p.contraction_levels = get_ints(j["contraction_levels"], where + "/contraction_levels", 1, 4);
  if (j.contains("ccap_eps")) p.ccap_eps = get_doubles(j["ccap_eps"], where + "/ccap_eps");
  if (j.contains("ccap_n")) p.ccap_n = get_ints(j["ccap_n"], where + "/ccap_n", 1, 64);
  for (double r : p.radial_r)
    if (r < 0 || r > 1) fail(where + "/radial_r", "radial parameters lie in [0, 1]");
  for (double r : p.tail_r)
    if (r <= 0 || r >= 1) fail(where + "/tail_r", "tail parameters lie in (0, 1)");
  for (double e : p.ccap_eps)
    if (e <= 0 || e >= 1) fail(where + "/ccap_eps", "net parameters lie in (0, 1)");
  return p;
}

Tolerances parse_tolerances(const json& j, const std::string& where) {
  Tolerances t;
  known_keys(j, where, {"identity", "pd", "state", "khintchine", "contraction", "hecke", "bound"});
  auto d = [&](const char* k, double& dst) {
    if (!j.contains(k)) return;
    dst = get_double(j[k], where + "/" + k);
    if (dst < 0) fail(where + "/" + k, "tolerances are non-negative");
  };
  d("identity", t.identity);
  d("pd", t.pd);
  d("state", t.state);
  d("khintchine", t.khintchine);
  d("contraction", t.contraction);
  d("hecke", t.hecke);
  d("bound", t.bound);
  return t;
}

HeckeCase parse_hecke_case(const json& j, const std::string& where) {
  known_keys(j, where, {"graph", "types", "q", "depth"});
  HeckeCase c;
  if (!j.contains("graph") || !j["graph"].is_string()) fail(where + "/graph", "expected a graph string");
  c.graph = j["graph"].get<std::string>();
  try {
    c.g = parse_graph(c.graph);
  } catch (const std::invalid_argument& e) {
    fail(where + "/graph", e.what());
  }
  if (!j.contains("types") || !j["types"].is_array()) fail(where + "/types", "expected an array of Coxeter types");
  for (std::size_t i = 0; i < j["types"].size(); ++i) {
    const auto& t = j["types"][i];
    const std::string tw = where + "/types/" + std::to_string(i);
    if (!t.is_string()) fail(tw, "expected a string");
    try {
      FiniteCoxeter::parse(t.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(tw, e.what());
    }
    c.types.push_back(t.get<std::string>());
  }
  if (static_cast<int>(c.types.size()) != c.g.size()) fail(where + "/types", "need one Coxeter type per vertex");
  c.q = j.contains("q") ? get_doubles(j["q"], where + "/q") : std::vector<double>{0.5, 1.0, 2.0};
  for (double q : c.q)
    if (!(q > 0)) fail(where + "/q", "Hecke parameters must be positive");
  if (j.contains("depth")) c.depth = get_int(j["depth"], where + "/depth", 0, 8);
  return c;
}

std::vector<HeckeCase> default_hecke_cases() {
  const json j = json::parse(R"js([
    {"graph": "G3", "types": ["A1", "A1"], "depth": 3},
    {"graph": "G4", "types": ["A1", "I2(3)", "A1"], "depth": 3}])js");
  std::vector<HeckeCase> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_hecke_case(j[i], "/hecke/" + std::to_string(i)));
  return out;
}

}  // namespace

SimpleGraph parse_graph(const std::string& spec) {
  if (spec == "G1") return SimpleGraph(1);
  if (spec == "G2") return SimpleGraph(2);
  if (spec == "G3") return SimpleGraph::from_edges(2, {{0, 1}});
  if (spec == "G4") return SimpleGraph::from_edges(3, {{0, 1}, {1, 2}});
  static const std::regex re(R"((\d+):((\d+-\d+)(,\d+-\d+)*)?)");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) throw std::invalid_argument("unknown graph '" + spec + "'");
  const int n = std::stoi(m[1].str());
  if (n < 1 || n > 16) throw std::invalid_argument("graphs have 1 to 16 vertices");
  std::vector<std::pair<int, int>> edges;
  static const std::regex edge_re(R"((\d+)-(\d+))");
  const std::string rest = m[2].str();
  for (auto it = std::sregex_iterator(rest.begin(), rest.end(), edge_re); it != std::sregex_iterator(); ++it)
    edges.emplace_back(std::stoi((*it)[1].str()), std::stoi((*it)[2].str()));
  return SimpleGraph::from_edges(n, edges);
}

VertexSpec vertex_preset(const std::string& name) {
  if (name == "C2") return {name, VertexAlgebra::abelian({0.3, 0.7})};
  if (name == "C3") return {name, VertexAlgebra::abelian({0.2, 0.3, 0.5})};
  if (name == "M2") {
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 0.6;
    d(1, 1) = 0.4;
    return {name, VertexAlgebra::matrix_state(d)};
  }
  if (name == "M2-trace") return {name, VertexAlgebra::matrix_trace(2)};
  throw std::invalid_argument("unknown vertex preset '" + name + "'");
}

std::vector<VertexSpace> RunConfig::vertex_spaces() const {
  std::vector<VertexSpace> out;
  for (const auto& v : vertices) out.push_back(VertexSpace::from_gns(gns(v.algebra)));
  return out;
}

std::vector<GNSData> RunConfig::gns_data() const {
  std::vector<GNSData> out;
  for (const auto& v : vertices) out.push_back(gns(v.algebra));
  return out;
}

std::uint64_t RunConfig::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (char c : canonical) mix(static_cast<unsigned char>(c));
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  return h;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.byte), e.what());
  }
  known_keys(j, "", {"name", "graph", "vertices", "depth", "d_max", "seed", "fock_cap", "tolerances", "params",
                     "hecke", "suites", "output"});
  RunConfig cfg;
  cfg.canonical = j.dump();
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail("/name", "expected a string");
    cfg.name = j["name"].get<std::string>();
  }

  if (!j.contains("graph")) fail("/graph", "missing graph");
  const auto& gj = j["graph"];
  try {
    if (gj.is_string()) {
      cfg.graph_label = gj.get<std::string>();
      cfg.graph = parse_graph(cfg.graph_label);
    } else {
      known_keys(gj, "/graph", {"preset", "vertices", "edges"});
      if (gj.contains("preset")) {
        if (!gj["preset"].is_string()) fail("/graph/preset", "expected a string");
        cfg.graph_label = gj["preset"].get<std::string>();
        cfg.graph = parse_graph(cfg.graph_label);
      } else {
        if (!gj.contains("vertices")) fail("/graph/vertices", "missing vertex count");
        const int n = get_int(gj["vertices"], "/graph/vertices", 1, 16);
        std::vector<std::pair<int, int>> edges;
        if (gj.contains("edges")) {
          if (!gj["edges"].is_array()) fail("/graph/edges", "expected an array of pairs");
          for (std::size_t i = 0; i < gj["edges"].size(); ++i) {
            const std::string ew = "/graph/edges/" + std::to_string(i);
            const auto e = get_ints(gj["edges"][i], ew, 0, n - 1);
            if (e.size() != 2) fail(ew, "an edge has two endpoints");
            if (e[0] == e[1]) fail(ew, "self-loop at vertex " + std::to_string(e[0]));
            edges.emplace_back(e[0], e[1]);
          }
        }
        cfg.graph = SimpleGraph::from_edges(n, edges);
        cfg.graph_label = std::to_string(n) + ":";
        for (std::size_t i = 0; i < edges.size(); ++i)
          cfg.graph_label += (i ? "," : "") + std::to_string(edges[i].first) + "-" + std::to_string(edges[i].second);
      }
    }
  } catch (const std::invalid_argument& e) {
    fail("/graph", e.what());
  }

  const int n = cfg.graph.size();
  const json vj = j.contains("vertices") ? j["vertices"] : json("C2");
  if (vj.is_array()) {
    if (static_cast<int>(vj.size()) != n) fail("/vertices", "need " + std::to_string(n) + " vertex entries");
    for (std::size_t i = 0; i < vj.size(); ++i) cfg.vertices.push_back(parse_vertex(vj[i], "/vertices/" + std::to_string(i)));
  } else {
    const auto v = parse_vertex(vj, "/vertices");
    cfg.vertices.assign(static_cast<std::size_t>(n), v);
  }

  if (j.contains("depth")) cfg.depth = get_int(j["depth"], "/depth", 0, 12);
  if (j.contains("d_max")) cfg.d_max = get_int(j["d_max"], "/d_max", 0, 12);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("/seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("fock_cap")) {
    if (!j["fock_cap"].is_number_unsigned()) fail("/fock_cap", "expected a positive integer");
    cfg.fock_cap = j["fock_cap"].get<long>();
  }
  if (j.contains("tolerances")) cfg.tol = parse_tolerances(j["tolerances"], "/tolerances");
  if (j.contains("params")) cfg.params = parse_params(j["params"], "/params");
  if (j.contains("hecke")) {
    if (!j["hecke"].is_array()) fail("/hecke", "expected an array of cases");
    for (std::size_t i = 0; i < j["hecke"].size(); ++i)
      cfg.hecke_cases.push_back(parse_hecke_case(j["hecke"][i], "/hecke/" + std::to_string(i)));
  } else {
    cfg.hecke_cases = default_hecke_cases();
  }

  if (j.contains("suites")) {
    if (!j["suites"].is_array()) fail("/suites", "expected an array of suite ids");
    const auto& ids = all_suite_ids();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < j["suites"].size(); ++i) {
      const auto& s = j["suites"][i];
      const std::string sw = "/suites/" + std::to_string(i);
      if (!s.is_string()) fail(sw, "expected a suite id");
      const auto id = s.get<std::string>();
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) fail(sw, "unknown suite '" + id + "'");
      if (seen.insert(id).second) cfg.suites.push_back(id);
    }
  } else {
    cfg.suites = all_suite_ids();
  }

  if (j.contains("output")) {
    known_keys(j["output"], "/output", {"report", "records"});
    for (const char* k : {"report", "records"})
      if (j["output"].contains(k) && !j["output"][k].is_string()) fail(std::string("/output/") + k, "expected a path");
    cfg.report_path = j["output"].value("report", "");
    cfg.records_path = j["output"].value("records", "");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

long fock_dimension(const SimpleGraph& g, const std::vector<int>& vertex_dims, int depth) {
  long total = 0;
  for (const auto& w : enumerate_words(g, depth)) {
    long b = 1;
    for (Letter x : w.letters) b *= vertex_dims[static_cast<std::size_t>(x)] - 1;
    total += b;
  }
  return total;
}

void check_resources(const RunConfig& cfg) {
  std::vector<int> dims;
  for (const auto& v : cfg.vertices) dims.push_back(v.algebra.dim());
  const long d = fock_dimension(cfg.graph, dims, cfg.depth);
  if (d > cfg.fock_cap) throw ResourceGuardError(d, cfg.fock_cap);
}

}  // namespace gpw
