#include <benchmark/benchmark.h>

#include "corrmine/ball_graph.hpp"
#include "corrmine/rng.hpp"
#include "corrmine/sample_stats.hpp"
#include "corrmine/screening.hpp"

using namespace corrmine;

namespace {

Matrix unit_frame(Index n, Index p, std::uint64_t seed) {
  CounterRng rng(seed);
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    auto s = rng.stream(static_cast<std::uint64_t>(i));
    for (Index j = 0; j < p; ++j) x(i, j) = s.next_normal();
  }
  return zscore_project(DataMatrix(std::move(x))).columns();
}

// The k-d tree pays off in the screening regime (threshold near one, so the
// search radius is tight); at loose thresholds the vectorized dense scan wins.
// Ranges: {n, p, rho in percent}.
void BM_ball_graph_exact(benchmark::State& state) {
  const Index n = state.range(0);
  const Index p = state.range(1);
  const double rho = static_cast<double>(state.range(2)) / 100.0;
  const Matrix frame = unit_frame(n, p, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_graph(frame, rho));
  }
}
BENCHMARK(BM_ball_graph_exact)
    ->Args({8, 2000, 70})
    ->Args({8, 2000, 99})
    ->Args({8, 8000, 99})
    ->Args({20, 2000, 95})
    ->Args({20, 8000, 99});

void BM_ball_graph_brute(benchmark::State& state) {
  const Index n = state.range(0);
  const Index p = state.range(1);
  const double rho = static_cast<double>(state.range(2)) / 100.0;
  const Matrix frame = unit_frame(n, p, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ball_graph_brute_force(frame, rho));
  }
}
BENCHMARK(BM_ball_graph_brute)
    ->Args({8, 2000, 70})
    ->Args({8, 2000, 99})
    ->Args({8, 8000, 99})
    ->Args({20, 2000, 95})
    ->Args({20, 8000, 99});

void BM_parcor_frame_pseudo(benchmark::State& state) {
  const Index p = state.range(0);
  CounterRng rng(3);
  Matrix x(20, p);
  for (Index i = 0; i < 20; ++i) {
    auto s = rng.stream(static_cast<std::uint64_t>(i));
    for (Index j = 0; j < p; ++j) x(i, j) = s.next_normal();
  }
  const DataMatrix data(std::move(x));
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_correlation_frame(data));
  }
}
BENCHMARK(BM_parcor_frame_pseudo)->Arg(500)->Arg(1000)->Arg(4000);

void BM_dense_pseudo_partial_correlation(benchmark::State& state) {
  const Index p = state.range(0);
  CounterRng rng(3);
  Matrix x(20, p);
  for (Index i = 0; i < 20; ++i) {
    auto s = rng.stream(static_cast<std::uint64_t>(i));
    for (Index j = 0; j < p; ++j) x(i, j) = s.next_normal();
  }
  const DataMatrix data(std::move(x));
  for (auto _ : state) {
    const SymMatrix corr = correlation_matrix(sample_covariance(data));
    const SymMatrix prec =
        precision(SymMatrix(corr.values(), MatrixRole::Covariance), InverseMode::Pseudo);
    benchmark::DoNotOptimize(partial_correlation(prec));
  }
}
BENCHMARK(BM_dense_pseudo_partial_correlation)->Arg(500)->Arg(1000);

void BM_screening_law(benchmark::State& state) {
  double rho = 0.3;
  for (auto _ : state) {
    rho = rho >= 0.9 ? 0.3 : rho + 1e-6;
    benchmark::DoNotOptimize(false_positive_prob(100, 1e8, rho));
  }
}
BENCHMARK(BM_screening_law);

void BM_min_sample_size(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_sample_size(1e10, 0.6, 1e-4));
  }
}
BENCHMARK(BM_min_sample_size);

}  // namespace

BENCHMARK_MAIN();
