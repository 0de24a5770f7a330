#include <benchmark/benchmark.h>

#include <vector>

#include "ckt/concordance.hpp"
#include "ckt/covariance.hpp"
#include "ckt/estimators.hpp"
#include "ckt/rng.hpp"
#include "ckt/simulation.hpp"
#include "ckt/tree.hpp"

namespace {

ckt::Sample level_sample(std::size_t n, std::size_t m) {
  ckt::Scenario sc;
  sc.tag = ckt::ScenarioTag::gauss_level;
  sc.n = n;
  sc.m = m;
  ckt::Rng rng(7);
  return ckt::generate_scenario(sc, rng);
}

void BM_ConcordanceBalance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ckt::Rng rng(1);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rng.normal();
    y[i] = x[i] + rng.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(ckt::concordance_balance(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConcordanceBalance)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_TauMatrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  ckt::Scenario sc;
  sc.m = m;
  const auto s = level_sample(n, m);
  const auto fam = ckt::scenario_boxes(sc);
  for (auto _ : state) benchmark::DoNotOptimize(ckt::tau_matrix(s, fam, false, 1));
}
BENCHMARK(BM_TauMatrix)->Args({1000, 4})->Args({10000, 4})->Args({10000, 20});

void BM_DeltaHat(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  ckt::Scenario sc;
  sc.m = m;
  const auto s = level_sample(n, m);
  const auto fam = ckt::scenario_boxes(sc);
  for (auto _ : state)
    benchmark::DoNotOptimize(ckt::delta_hat(s, fam, ckt::CovariancePath::automatic, 1));
}
BENCHMARK(BM_DeltaHat)->Args({1000, 4})->Args({10000, 4})->Args({1000, 20});

void BM_BestSplit(benchmark::State& state) {
  ckt::Scenario sc;
  sc.tag = ckt::ScenarioTag::dvine_datadriven;
  sc.n = static_cast<std::size_t>(state.range(0));
  ckt::Rng rng(3);
  const auto s = ckt::generate_scenario(sc, rng);
  std::vector<std::size_t> rows(s.n());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  const ckt::TreeConfig cfg{0.2, 0.1, 0.0, 6};
  for (auto _ : state) benchmark::DoNotOptimize(ckt::best_split(s, rows, cfg, 1));
}
BENCHMARK(BM_BestSplit)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
