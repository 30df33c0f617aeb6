#include <doctest.h>

#include <cmath>

#include "corrmine/generators.hpp"
#include "corrmine/rng.hpp"
#include "corrmine/screening.hpp"
#include "support/highprec.hpp"
#include "support/oracles.hpp"

using namespace corrmine;

TEST_SUITE_BEGIN("screening");

TEST_CASE("sphere constant closed forms and high-precision check") {
  CHECK(sphere_constant(3) == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
  CHECK(sphere_constant(4) == doctest::Approx(0.5).epsilon(1e-12));
  const double expected = highprec::sphere_constant(1500);
  CHECK(std::abs(sphere_constant(1500) - expected) / expected < 1e-10);
  CHECK_THROWS_AS(sphere_constant(2), Error);
}

TEST_CASE("critical threshold against the high-precision evaluation") {
  const double value = critical_threshold(20, 1000);
  const double expected = highprec::critical_threshold(20, 1000);
  CHECK(std::abs(value - expected) / expected < 1e-12);

  CHECK(critical_threshold(1500, 900) > 0.0791);
  CHECK(critical_threshold(1500, 900) < 0.13978);
}

TEST_CASE("critical threshold monotonicity") {
  // increasing in p at fixed n
  double last = 0.0;
  for (double p : {10.0, 100.0, 1000.0, 1e6}) {
    const double value = critical_threshold(40, p);
    CHECK(value > last);
    last = value;
  }
  // decreasing in n at fixed p
  CHECK(critical_threshold(10, 100) > critical_threshold(100, 100));
  CHECK(critical_threshold(100, 100) > critical_threshold(1000, 100));
}

TEST_CASE("critical threshold domain errors") {
  CHECK_THROWS_AS(critical_threshold(4, 100), Error);
  CHECK_THROWS_AS(critical_threshold(20, 1.0), Error);
  // a_n (p-1) < 1 has no real value
  CHECK_THROWS_AS(critical_threshold(5, 2.0), Error);
}

TEST_CASE("false positive law limits") {
  const ScreeningLaw high = false_positive_prob(30, 500, 1.0 - 1e-9);
  CHECK(high.e_n < 1e-60);
  CHECK(high.p_e < 1e-60);

  const ScreeningLaw low = false_positive_prob(10, 1e6, 0.01);
  CHECK(low.p_e >= 1.0 - 1e-12);

  // no overflow in the pre-limit formula at extreme p
  const ScreeningLaw huge = false_positive_prob(200, 1e10, 0.6);
  CHECK(std::isfinite(huge.log_e_n));
  CHECK(huge.p_e >= 0.0);
  CHECK(huge.p_e <= 1.0);
}

TEST_CASE("law attaches rho_c only for n >= 5") {
  CHECK(std::isnan(false_positive_prob(4, 100, 0.5).rho_c));
  CHECK(std::isfinite(false_positive_prob(5, 100, 0.5).rho_c));
}

TEST_CASE("p_e is monotone in rho and in n") {
  double last = 2.0;
  for (double rho = 0.05; rho < 1.0; rho += 0.05) {
    const double value = false_positive_prob(15, 2000, rho).p_e;
    CHECK(value <= last + 1e-15);
    last = value;
  }
  last = 2.0;
  for (Index n = 5; n <= 305; n += 10) {
    const double value = false_positive_prob(n, 2000, 0.4).p_e;
    CHECK(value <= last + 1e-15);
    last = value;
  }
}

TEST_CASE("phase transition straddles the critical threshold") {
  // At rho_c the pre-limit rate is kappa = p (1 - rho_c^2) / (n - 2), which
  // grows with p, so p_e(rho_c) saturates toward 1 whenever p >> n. The
  // two-sided statement that survives is: rho_c is never already safe, and
  // the half-transition point sits within a modest relative band of it.
  for (Index n : {10, 50, 200, 2000}) {
    for (double p : {1e2, 1e4, 1e6}) {
      const double rho_c = critical_threshold(n, p);
      const double pe = false_positive_prob(n, p, rho_c).p_e;
      CAPTURE(n);
      CAPTURE(p);
      CAPTURE(rho_c);
      CAPTURE(pe);
      CHECK(pe > 1e-4);
      const double rho_half = min_detectable_correlation(n, p, 0.5);
      CHECK(std::abs(rho_half - rho_c) <= 0.25 * rho_c);
    }
  }
}

TEST_CASE("minimum sample size anchors") {
  const long long big = min_sample_size(1e10, 0.6, 1e-4);
  CHECK(big >= 150);
  CHECK(big <= 300);
  const long long small = min_sample_size(1e4, 0.6, 1e-4);
  CHECK(static_cast<double>(big) / static_cast<double>(small) <= 2.5);

  // lower detectable correlation costs more samples
  CHECK(min_sample_size(1e6, 0.3, 1e-3) > min_sample_size(1e6, 0.8, 1e-3));
}

TEST_CASE("minimum sample size is exact at its boundary") {
  const long long n = min_sample_size(1e6, 0.5, 1e-3);
  CHECK(false_positive_prob(n, 1e6, 0.5).p_e <= 1e-3);
  CHECK(false_positive_prob(n - 1, 1e6, 0.5).p_e > 1e-3);
}

TEST_CASE("minimum sample size honors a tight search cap") {
  const long long unconstrained = min_sample_size(100.0, 0.9, 0.01);
  // a cap between 5 and 10 must still find answers in that range
  CHECK(min_sample_size(100.0, 0.9, 0.01, {unconstrained}) == unconstrained);
  try {
    min_sample_size(1e6, 0.5, 1e-3, {8});
    FAIL("expected no_solution");
  } catch (const Error& e) {
    CHECK(e.code() == errc::no_solution);
  }
}

TEST_CASE("minimum detectable correlation") {
  const double rho = min_detectable_correlation(200, 1e10, 1e-4);
  CHECK(rho <= 0.7);
  CHECK(false_positive_prob(200, 1e10, rho).p_e <= 1e-4 + 1e-12);

  // round trip: solving for n then for rho can only improve the level
  const long long n = min_sample_size(1e6, 0.55, 1e-3);
  CHECK(min_detectable_correlation(n, 1e6, 1e-3) <= 0.55);

  // increasing in p at fixed n, fwer
  double last = 0.0;
  for (double p : {1e2, 1e3, 1e4, 1e6, 1e8}) {
    const double value = min_detectable_correlation(50, p, 1e-3);
    CHECK(value > last);
    last = value;
  }
}

TEST_CASE("screen_edges thresholds magnitudes") {
  CounterRng rng(5);
  auto s = rng.stream(0);
  const Index p = 12;
  Matrix m = Matrix::Identity(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j) m(i, j) = m(j, i) = 2.0 * s.next_unit() - 1.0;

  const SymMatrix corr(m, MatrixRole::Correlation);
  const ScreenResult complete = screen_edges(corr, 0.0);
  CHECK(complete.n_e == p * (p - 1) / 2);
  CHECK(screen_edges(corr, 1.5).n_e == 0);

  const ScreenResult result = screen_edges(corr, 0.5, 40);
  Index expected = 0;
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j)
      if (std::abs(m(i, j)) >= 0.5) ++expected;
  CHECK(result.n_e == expected);
  for (const Edge& e : result.graph.edges) {
    CHECK(std::abs(e.weight) >= 0.5);
    CHECK(e.i < e.j);
  }
  REQUIRE(result.law.has_value());
  CHECK(result.law->n == 40);
  CHECK(result.law->p == doctest::Approx(12.0));
}

TEST_CASE("screen_edges rejects covariance-role input") {
  const SymMatrix cov(Matrix::Identity(3, 3), MatrixRole::Covariance);
  CHECK_THROWS_AS(screen_edges(cov, 0.5), Error);
}

TEST_CASE("hub extraction") {
  // star: vertex 0 joined to 1..5
  Matrix m = Matrix::Identity(6, 6);
  for (Index j = 1; j < 6; ++j) m(0, j) = m(j, 0) = 0.9;
  const ScreenResult star = screen_edges(SymMatrix(m, MatrixRole::PartialCorrelation), 0.5);
  const auto hubs = screen_hubs(star, 5);
  REQUIRE(hubs.size() == 1);
  CHECK(hubs[0] == 0);

  const ScreenResult empty = screen_edges(SymMatrix(m, MatrixRole::PartialCorrelation), 0.99);
  CHECK(screen_hubs(empty, 1).empty());

  // recount oracle on a random graph
  CounterRng rng(9);
  auto s = rng.stream(0);
  Matrix r = Matrix::Identity(15, 15);
  for (Index i = 0; i < 15; ++i)
    for (Index j = i + 1; j < 15; ++j) r(i, j) = r(j, i) = 2.0 * s.next_unit() - 1.0;
  const ScreenResult result = screen_edges(SymMatrix(r, MatrixRole::Correlation), 0.6);
  std::vector<Index> degree(15, 0);
  for (Index i = 0; i < 15; ++i)
    for (Index j = 0; j < 15; ++j)
      if (i != j && std::abs(r(i, j)) >= 0.6) ++degree[static_cast<std::size_t>(i)];
  const auto hubs3 = screen_hubs(result, 3);
  std::vector<Index> expected;
  for (Index v = 0; v < 15; ++v)
    if (degree[static_cast<std::size_t>(v)] >= 3) expected.push_back(v);
  CHECK(hubs3 == expected);
}

TEST_CASE("phase curve saturates at extreme thresholds") {
  const PhaseCurve high = phase_transition_curve(50, 100, {0.999}, 50, {}, 21);
  CHECK(high.points[0].prob_positive <= 0.1);
  CHECK(high.pseudo_path);  // n <= p

  const PhaseCurve low = phase_transition_curve(50, 100, {0.01}, 50, {}, 21);
  CHECK(low.points[0].prob_positive >= 0.9);
}

TEST_CASE("phase curve is identical for any worker count") {
  const std::vector<double> grid{0.2, 0.5, 0.8};
  const PhaseCurve serial = phase_transition_curve(15, 40, grid, 12, {}, 3, 1);
  const PhaseCurve threaded = phase_transition_curve(15, 40, grid, 12, {}, 3, 4);
  REQUIRE(serial.points.size() == threaded.points.size());
  for (std::size_t g = 0; g < serial.points.size(); ++g) {
    CHECK(serial.points[g].mean_ne == threaded.points[g].mean_ne);
    CHECK(serial.points[g].prob_positive == threaded.points[g].prob_positive);
  }
  CHECK(serial.trial_max == threaded.trial_max);
}

TEST_CASE("phase curve accepts a block-sparse null model") {
  Matrix sigma = Matrix::Identity(20, 20);
  sigma.block(0, 0, 2, 2) << 1.0, 0.9, 0.9, 1.0;
  const SymMatrix model(sigma, MatrixRole::Covariance);
  const PhaseCurve curve = phase_transition_curve(30, 20, {0.7}, 30, model, 11);
  // the planted pair pushes every trial over the threshold
  CHECK(curve.points[0].prob_positive == doctest::Approx(1.0));
}

TEST_SUITE_END();
