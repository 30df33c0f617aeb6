#include <benchmark/benchmark.h>

#include "corrmine/concord.hpp"
#include "corrmine/generators.hpp"

using namespace corrmine;

namespace {

void BM_concord_fit(benchmark::State& state) {
  const Index p = state.range(0);
  const SymMatrix truth = sparse_random_precision({p, 2, 0.3, 1.0, 11});
  const DataMatrix data = sample_gaussian(truth, 400, 13);
  const double lambda = 0.05 * concord_lambda_max(data);
  for (auto _ : state) {
    benchmark::DoNotOptimize(concord_fit(data, lambda));
  }
}
BENCHMARK(BM_concord_fit)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_concord_path_warm(benchmark::State& state) {
  const SymMatrix truth = sparse_random_precision({50, 2, 0.3, 1.0, 17});
  const DataMatrix data = sample_gaussian(truth, 400, 19);
  const double lambda_max = concord_lambda_max(data);
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(lambda_max * std::pow(0.01, k / 9.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(concord_path(data, grid));
  }
}
BENCHMARK(BM_concord_path_warm)->Unit(benchmark::kMillisecond);

void BM_gaussian_sampler(benchmark::State& state) {
  const SymMatrix truth = sparse_random_precision({200, 3, 0.3, 1.0, 23});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gaussian(truth, 100, 29));
  }
}
BENCHMARK(BM_gaussian_sampler)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
