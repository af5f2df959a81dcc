#include <benchmark/benchmark.h>

#include <random>

#include "gpw/config.hpp"
#include "gpw/fock.hpp"
#include "gpw/multipliers.hpp"

namespace {

gpw::FockSpace make_space(const char* graph, const char* preset, int depth) {
  const auto g = gpw::parse_graph(graph);
  std::vector<gpw::VertexSpace> vs;
  const auto spec = gpw::vertex_preset(preset);
  for (int v = 0; v < g.size(); ++v) vs.push_back(gpw::VertexSpace::from_gns(gpw::gns(spec.algebra)));
  return gpw::FockSpace(g, vs, depth);
}

gpw::Mat random_leg(const gpw::FockSpace& fs, gpw::Letter v) {
  const auto& ops = fs.vertex(v).basis_ops;
  gpw::Mat a = gpw::Mat::Zero(ops[0].rows(), ops[0].cols());
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (const auto& b : ops) a += nd(rng) * b;
  return a;
}

void BM_LambdaDense(benchmark::State& st) {
  const auto fs = make_space("G4", "M2", static_cast<int>(st.range(0)));
  const auto a = random_leg(fs, 1);
  const gpw::Mat in = gpw::Mat::Identity(fs.dim(), fs.dim());
  for (auto _ : st) benchmark::DoNotOptimize(gpw::lambda_v_apply(fs, 1, a, gpw::Part::Full, in));
  st.counters["dim"] = static_cast<double>(fs.dim());
}
BENCHMARK(BM_LambdaDense)->Arg(2)->Arg(3)->Arg(4);

void BM_LambdaSparse(benchmark::State& st) {
  const auto fs = make_space("G4", "M2", static_cast<int>(st.range(0)));
  const auto a = random_leg(fs, 1);
  const gpw::Mat in = gpw::Mat::Identity(fs.dim(), fs.dim());
  for (auto _ : st) {
    const gpw::SpMat op = gpw::lambda_v_sparse(fs, 1, a);
    gpw::Mat out = op * in;
    benchmark::DoNotOptimize(out);
  }
  st.counters["dim"] = static_cast<double>(fs.dim());
}
BENCHMARK(BM_LambdaSparse)->Arg(2)->Arg(3)->Arg(4);

void BM_NormalForm(benchmark::State& st) {
  const auto g = gpw::parse_graph("G4");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> letter(0, g.size() - 1);
  std::vector<gpw::Letter> seq(static_cast<std::size_t>(st.range(0)));
  for (auto& x : seq) x = letter(rng);
  for (auto _ : st) benchmark::DoNotOptimize(gpw::normal_form(g, seq));
}
BENCHMARK(BM_NormalForm)->Arg(8)->Arg(64)->Arg(512);

void BM_HTau(benchmark::State& st) {
  const int depth = static_cast<int>(st.range(0));
  const auto fs = make_space("G3", "C2", depth);
  gpw::VCache cache(fs);
  const gpw::Mat x = gpw::Mat::Identity(fs.dim(), fs.dim());
  const auto rhos = gpw::enumerate_rho(fs.graph(), 2);
  const gpw::TauTuple tau{rhos.back(), gpw::Word()};
  for (auto _ : st) benchmark::DoNotOptimize(gpw::h_tau_apply(fs, tau, x, cache));
  st.counters["dim"] = static_cast<double>(fs.dim());
}
BENCHMARK(BM_HTau)->Arg(3)->Arg(4)->Arg(5);

}  // namespace
BENCHMARK_MAIN();
