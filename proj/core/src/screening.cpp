#include "corrmine/screening.hpp"

#include <algorithm>
#include <cmath>

#include "corrmine/generators.hpp"
#include "corrmine/parallel.hpp"
#include "corrmine/rng.hpp"

namespace corrmine {

namespace {

double log_sphere_constant(Index n) {
  return std::lgamma((static_cast<double>(n) - 1.0) / 2.0) -
         std::lgamma((static_cast<double>(n) - 2.0) / 2.0) -
         0.5 * std::log(M_PI);
}

}  // namespace

double sphere_constant(Index n) {
  if (n < 3) {
    fail(errc::domain_error, "sphere_constant requires n >= 3, got n = " + std::to_string(n));
  }
  return std::exp(log_sphere_constant(n));
}

double critical_threshold(Index n, double p) {
  if (n <= 4) {
    fail(errc::domain_error,
         "critical threshold needs n >= 5 (exponent n - 4 must be positive)");
  }
  if (!(p >= 2.0)) fail(errc::domain_error, "critical threshold needs p >= 2");
  const double log_base = log_sphere_constant(n) + std::log(p - 1.0);
  if (log_base <= 0.0) {
    // a_n (p - 1) < 1 happens only at tiny n with p = 2; no real value exists there
    fail(errc::domain_error, "critical threshold undefined: a_n (p - 1) < 1");
  }
  const double t = std::exp(-2.0 / (static_cast<double>(n) - 4.0) * log_base);
  return std::sqrt(1.0 - t);
}

ScreeningLaw false_positive_prob(Index n, double p, double rho) {
  if (n < 3) fail(errc::domain_error, "screening law requires n >= 3");
  if (!(p >= 2.0)) fail(errc::domain_error, "screening law requires p >= 2");
  if (!(rho > 0.0) || !(rho < 1.0)) {
    fail(errc::domain_error, "threshold rho must lie in (0, 1)");
  }

  ScreeningLaw law;
  law.n = n;
  law.p = p;
  law.rho = rho;
  const double log_a = log_sphere_constant(n);
  law.a_n = std::exp(log_a);
  law.log_e_n = std::log(p) + std::log(p - 1.0) +
                (static_cast<double>(n) - 2.0) / 2.0 * std::log1p(-rho * rho);
  law.e_n = std::exp(law.log_e_n);
  law.log_kappa_n = law.log_e_n + log_a - std::log(static_cast<double>(n) - 2.0);
  law.kappa_n = std::exp(law.log_kappa_n);
  // kappa_n is the limiting false-edge intensity, so P(N_e > 0) -> 1 - e^{-kappa}.
  law.p_e = -std::expm1(-law.kappa_n);
  law.rho_c = n >= 5 ? critical_threshold(n, p) : std::nan("");
  return law;
}

namespace {

double pe_at(Index n, double p, double rho) { return false_positive_prob(n, p, rho).p_e; }

long long linear_scan_sample_size(double p, double rho, double fwer, long long cap) {
  for (long long n = 5; n <= cap; ++n) {
    if (pe_at(static_cast<Index>(n), p, rho) <= fwer) return n;
  }
  fail(errc::no_solution, "no n <= cap achieves the requested false positive level");
}

}  // namespace

long long min_sample_size(double p, double rho, double fwer, const SampleSizeOptions& opts) {
  if (!(p >= 2.0)) fail(errc::domain_error, "min_sample_size requires p >= 2");
  if (!(rho > 0.0) || !(rho < 1.0)) fail(errc::domain_error, "rho must lie in (0, 1)");
  if (!(fwer > 0.0) || !(fwer < 1.0)) fail(errc::domain_error, "fwer must lie in (0, 1)");

  if (opts.cap < 5) fail(errc::config_error, "search cap must be at least 5");
  double pe_lo = pe_at(5, p, rho);
  if (pe_lo <= fwer) return 5;

  // p_e decreases in n; assert that along the doubling path and fall back to
  // a linear scan if the assumption is ever violated numerically.
  long long lo = 5;
  long long hi = std::min<long long>(10, opts.cap);
  while (true) {
    const double pe_hi = pe_at(static_cast<Index>(hi), p, rho);
    if (pe_hi > pe_lo + 1e-12) {
      return linear_scan_sample_size(p, rho, fwer, opts.cap);
    }
    if (pe_hi <= fwer) break;
    if (hi >= opts.cap) {
      fail(errc::no_solution, "no n <= cap achieves the requested false positive level");
    }
    lo = hi;
    pe_lo = pe_hi;
    hi = hi > opts.cap / 2 ? opts.cap : hi * 2;
  }

  while (lo + 1 < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (pe_at(static_cast<Index>(mid), p, rho) <= fwer) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double min_detectable_correlation(Index n, double p, double fwer) {
  if (n < 5) fail(errc::domain_error, "min_detectable_correlation requires n >= 5");
  if (!(p >= 2.0)) fail(errc::domain_error, "requires p >= 2");
  if (!(fwer > 0.0) || !(fwer < 1.0)) fail(errc::domain_error, "fwer must lie in (0, 1)");

  double hi = 1.0 - 1e-12;
  if (pe_at(n, p, hi) > fwer) {
    fail(errc::no_solution, "p_e exceeds the requested level for every rho < 1");
  }
  double lo = 1e-12;
  if (pe_at(n, p, lo) <= fwer) return lo;
  // p_e decreases in rho: bisect the crossing to 1e-10
  while (hi - lo > 1e-10) {
    const double mid = (lo + hi) / 2.0;
    if (pe_at(n, p, mid) <= fwer) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<Index> EdgeGraph::degrees() const {
  std::vector<Index> deg(static_cast<std::size_t>(p), 0);
  for (const Edge& e : edges) {
    ++deg[static_cast<std::size_t>(e.i)];
    ++deg[static_cast<std::size_t>(e.j)];
  }
  return deg;
}

namespace {

std::vector<Index> hubs_of(const EdgeGraph& graph, Index min_degree) {
  std::vector<Index> hubs;
  const auto deg = graph.degrees();
  for (Index v = 0; v < graph.p; ++v) {
    if (deg[static_cast<std::size_t>(v)] >= min_degree) hubs.push_back(v);
  }
  return hubs;
}

}  // namespace

ScreenResult screen_edges(const SymMatrix& m, double rho, std::optional<Index> sample_n,
                          Index hub_degree) {
  if (m.role() != MatrixRole::Correlation && m.role() != MatrixRole::PartialCorrelation) {
    fail(errc::role_mismatch,
         "screening expects a correlation or partial correlation matrix, got " +
             std::string(role_name(m.role())));
  }
  if (rho < 0.0) fail(errc::domain_error, "threshold rho must be non-negative");
  if (hub_degree < 1) fail(errc::domain_error, "hub degree must be >= 1");

  ScreenResult result;
  result.graph.p = m.p();
  result.graph.threshold_used = rho;
  const Matrix& values = m.values();
  for (Index i = 0; i < m.p(); ++i) {
    for (Index j = i + 1; j < m.p(); ++j) {
      if (std::abs(values(i, j)) >= rho) {
        result.graph.edges.push_back({i, j, values(i, j)});
      }
    }
  }
  result.n_e = static_cast<Index>(result.graph.edges.size());
  result.hub_degree = hub_degree;
  result.hubs = hubs_of(result.graph, hub_degree);
  if (sample_n && *sample_n >= 3 && m.p() >= 2 && rho > 0.0 && rho < 1.0) {
    result.law = false_positive_prob(*sample_n, static_cast<double>(m.p()), rho);
  }
  return result;
}

std::vector<Index> screen_hubs(const ScreenResult& result, Index min_degree) {
  if (min_degree < 1) fail(errc::domain_error, "hub degree must be >= 1");
  return hubs_of(result.graph, min_degree);
}

PhaseCurve phase_transition_curve(Index n, Index p, std::vector<double> rho_grid,
                                  int trials, const std::optional<SymMatrix>& null_model,
                                  std::uint64_t seed, int threads) {
  if (n < 3) fail(errc::domain_error, "phase experiment requires n >= 3");
  if (p < 2) fail(errc::domain_error, "phase experiment requires p >= 2");
  if (trials < 1) fail(errc::domain_error, "need at least one trial");
  if (rho_grid.empty()) fail(errc::domain_error, "rho grid must be non-empty");
  std::sort(rho_grid.begin(), rho_grid.end());
  if (null_model && null_model->p() != p) {
    fail(errc::dimension_mismatch, "null model dimension does not match p");
  }

  const std::size_t grid_size = rho_grid.size();
  const std::size_t trial_count = static_cast<std::size_t>(trials);
  std::vector<std::vector<long long>> counts(trial_count);
  std::vector<double> trial_max(trial_count, 0.0);

  parallel_for(trial_count, threads, [&](std::size_t t) {
    const std::uint64_t trial_seed = CounterRng::derive_seed(seed, t);
    Matrix sample;
    if (null_model) {
      sample = sample_gaussian(*null_model, n, trial_seed, 1).values();
    } else {
      // identity covariance: i.i.d. standard normals, one substream per row
      const CounterRng rng(trial_seed);
      sample.resize(n, p);
      for (Index k = 0; k < n; ++k) {
        auto stream = rng.stream(static_cast<std::uint64_t>(k));
        for (Index j = 0; j < p; ++j) sample(k, j) = stream.next_normal();
      }
    }
    const DataMatrix data(std::move(sample));
    const ParcorFrame frame = partial_correlation_frame(data);
    const Matrix parcor = frame.columns.transpose() * frame.columns;

    std::vector<long long> histogram(grid_size + 1, 0);
    double max_abs = 0.0;
    for (Index i = 0; i < p; ++i) {
      for (Index j = i + 1; j < p; ++j) {
        const double v = std::min(std::abs(parcor(i, j)), 1.0);
        max_abs = std::max(max_abs, v);
        // v counts for every grid threshold <= v
        const auto it = std::upper_bound(rho_grid.begin(), rho_grid.end(), v);
        ++histogram[static_cast<std::size_t>(it - rho_grid.begin())];
      }
    }
    // suffix sums: counts[g] = #entries with |value| >= rho_grid[g]
    std::vector<long long> exceed(grid_size, 0);
    long long running = 0;
    for (std::size_t g = grid_size; g-- > 0;) {
      running += histogram[g + 1];
      exceed[g] = running;
    }
    counts[t] = std::move(exceed);
    trial_max[t] = max_abs;
  });

  PhaseCurve curve;
  curve.n = n;
  curve.p = p;
  curve.pseudo_path = n <= p;
  curve.trial_max = std::move(trial_max);
  curve.points.resize(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    long long total = 0;
    long long positive = 0;
    for (std::size_t t = 0; t < trial_count; ++t) {
      total += counts[t][g];
      if (counts[t][g] > 0) ++positive;
    }
    PhasePoint& point = curve.points[g];
    point.rho = rho_grid[g];
    point.mean_ne = static_cast<double>(total) / static_cast<double>(trial_count);
    point.prob_positive = static_cast<double>(positive) / static_cast<double>(trial_count);
    point.analytic_pe = (point.rho > 0.0 && point.rho < 1.0)
                            ? false_positive_prob(n, static_cast<double>(p), point.rho).p_e
                            : (point.rho <= 0.0 ? 1.0 : 0.0);
  }
  return curve;
}

}  // namespace corrmine
