#include <benchmark/benchmark.h>

#include "bitvar/experiments.hpp"
#include "bitvar/gaussian.hpp"
#include "bitvar/quantize.hpp"
#include "bitvar/scheme1.hpp"
#include "bitvar/scheme2.hpp"
#include "bitvar/var_model.hpp"

namespace {

// Arg 0: rho in hundredths. 50 stays on the quadrature branch, 97 takes the tail.
void BM_Psi(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(bitvar::psi({0.4, -0.7}, rho));
}
BENCHMARK(BM_Psi)->Arg(50)->Arg(97);

void BM_PsiInverse(benchmark::State& state) {
  const double v = bitvar::psi({0.4, -0.7}, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(bitvar::psi_inverse({0.4, -0.7}, v));
}
BENCHMARK(BM_PsiInverse);

void BM_StationaryCovariance(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto comp = bitvar::companion_form(bitvar::random_model(d, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bitvar::stationary_covariance(comp.transition, comp.noise_cov));
  }
}
BENCHMARK(BM_StationaryCovariance)->Arg(2)->Arg(4)->Arg(8);

void BM_Simulate(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const bitvar::VarModel m = bitvar::benchmark_models()[2];
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(bitvar::simulate(m, T, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T));
}
BENCHMARK(BM_Simulate)->Arg(2000)->Arg(10000);

void BM_EstimateScheme2(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const bitvar::VarModel m = bitvar::random_model(d, 5);
  const auto rec = bitvar::sign_and_predominance(bitvar::simulate(m, 2000, 9),
                                                 bitvar::SensorGraph::complete(d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bitvar::estimate_model_s2(rec, 1, bitvar::RatioVariant::kOptimized));
  }
}
BENCHMARK(BM_EstimateScheme2)->Arg(2)->Arg(8);

void BM_EstimateScheme1(benchmark::State& state) {
  const bitvar::VarModel m = bitvar::benchmark_models()[0];
  const auto mom = bitvar::true_moments(m, 0);
  const std::vector<double> c = {0.5 * mom.sigmas[0], 0.5 * mom.sigmas[1]};
  const auto rec = bitvar::threshold_quantize(bitvar::simulate(m, 10000, 4), c);
  for (auto _ : state) benchmark::DoNotOptimize(bitvar::estimate_model_s1(rec, 1));
}
BENCHMARK(BM_EstimateScheme1);

}  // namespace

BENCHMARK_MAIN();
