// gpw: run verification suites or dump the combinatorial index sets.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gpw/config.hpp"
#include "gpw/fock.hpp"
#include "gpw/suites.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-product multiplier workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  int jobs = 0;
  auto* run = app.add_subcommand("run", "Run verification suites");
  run->add_option("--config", config_path, "Config file (JSON)")->required();
  run->add_option("--suite", suites, "Suite id (repeatable); default: suites of the config");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_path, "Write JSONL records here; the human report goes to <out>.txt");
  run->add_option("--jobs", jobs, "Worker threads (0: hardware threads)");

  std::string what;
  auto* en = app.add_subcommand("enumerate", "Dump words, cliques, T, S_w or C_gamma");
  en->add_option("--config", config_path, "Config file (JSON)")->required();
  en->add_option("--what", what, "words | cliques | T | S_w | C_gamma")
      ->required()
      ->check(CLI::IsMember({"words", "cliques", "T", "S_w", "C_gamma"}));

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = gpw::load_config(config_path);
    if (*en) {
      std::cout << gpw::enumerate_cmd(cfg, what);
      return 0;
    }
    if (!suites.empty()) {
      for (const auto& s : suites) gpw::suite_criterion(s);  // validates the id
      cfg.suites = suites;
    }
    if (seed) cfg.seed = *seed;
    const auto report = gpw::run(cfg, jobs);
    const auto records = gpw::records_jsonl(report);
    const auto human = gpw::human_report(report);
    std::string records_path = out_path.empty() ? cfg.records_path : out_path;
    std::string report_path = out_path.empty() ? cfg.report_path : out_path + ".txt";
    if (!records_path.empty()) write_file(records_path, records);
    if (!report_path.empty()) write_file(report_path, human);
    std::cout << human;
    return report.pass() ? 0 : 1;
  } catch (const gpw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const gpw::ResourceGuardError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
