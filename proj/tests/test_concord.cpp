#include <doctest.h>

#include <cmath>

#include "corrmine/concord.hpp"
#include "corrmine/generators.hpp"
#include "corrmine/rng.hpp"
#include "support/oracles.hpp"

using namespace corrmine;

namespace {

DataMatrix gaussian_data(const SymMatrix& omega, Index n, std::uint64_t seed) {
  return sample_gaussian(omega, n, seed);
}

Matrix centered(const Matrix& x) { return x.rowwise() - x.colwise().mean(); }

}  // namespace

TEST_SUITE_BEGIN("concord");

TEST_CASE("scalar objective closed form and its minimizer") {
  CounterRng rng(1);
  auto s = rng.stream(0);
  Matrix x(50, 1);
  for (Index i = 0; i < 50; ++i) x(i, 0) = s.next_normal();
  const DataMatrix data(x);
  const double norm_sq = centered(x).squaredNorm();

  Matrix omega(1, 1);
  omega << 1.3;
  const double value = concord_objective(SymMatrix(omega, MatrixRole::Precision), data, 2.0);
  CHECK(value == doctest::Approx(-50.0 * std::log(1.3) + 0.5 * 1.69 * norm_sq)
                     .epsilon(1e-12));

  const ConcordState fit = concord_fit(data, 0.0, {1e-10, 200, false});
  CHECK(fit.omega(0, 0) == doctest::Approx(std::sqrt(50.0 / norm_sq)).epsilon(1e-9));
}

TEST_CASE("identity omega leaves only the quadratic term") {
  const SymMatrix model = sparse_random_precision({4, 1, 0.3, 0.8, 2});
  const DataMatrix data = gaussian_data(model, 30, 5);
  const double expected = 0.5 * centered(data.values()).squaredNorm();
  for (double lambda : {0.0, 3.0}) {
    CHECK(concord_objective(SymMatrix(Matrix::Identity(4, 4), MatrixRole::Precision), data,
                            lambda) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("objective matches the naive evaluator") {
  const SymMatrix model = sparse_random_precision({4, 2, 0.3, 0.8, 7});
  const DataMatrix data = gaussian_data(model, 25, 9);
  CounterRng rng(3);
  auto s = rng.stream(0);
  Matrix omega = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) {
    omega(i, i) = 0.5 + s.next_unit();
    for (Index j = i + 1; j < 4; ++j) omega(i, j) = omega(j, i) = 0.4 * (s.next_unit() - 0.5);
  }
  const double fast = concord_objective(SymMatrix(omega, MatrixRole::Precision), data, 1.7);
  const double naive = oracles::naive_concord_objective(omega, data.values(), 1.7);
  CHECK(std::abs(fast - naive) < 1e-10 * std::max(1.0, std::abs(naive)));
}

TEST_CASE("penalty at lambda_max kills every off-diagonal") {
  const SymMatrix model = sparse_random_precision({6, 2, 0.3, 0.9, 12});
  const DataMatrix data = gaussian_data(model, 80, 4);
  const double lambda_max = concord_lambda_max(data);

  const ConcordState fit = concord_fit(data, lambda_max * 1.000001);
  const Matrix y = centered(data.values());
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      if (i == j) {
        CHECK(fit.omega(i, i) ==
              doctest::Approx(std::sqrt(80.0 / y.col(i).squaredNorm())).epsilon(1e-9));
      } else {
        CHECK(fit.omega(i, j) == 0.0);
      }
    }
  }
  CHECK(fit.converged);
  CHECK(fit.sweeps == 1);

  // just below lambda_max at least one off-diagonal survives
  const ConcordState below = concord_fit(data, lambda_max * 0.999);
  Index nonzero = 0;
  for (Index i = 0; i < 6; ++i)
    for (Index j = i + 1; j < 6; ++j)
      if (below.omega(i, j) != 0.0) ++nonzero;
  CHECK(nonzero >= 1);
}

TEST_CASE("two-variable solution matches a profile golden-section oracle") {
  Matrix omega_true(2, 2);
  omega_true << 2.0, 0.8, 0.8, 1.5;
  const DataMatrix data =
      gaussian_data(SymMatrix(omega_true, MatrixRole::Precision), 100, 31);
  const double lambda = 5.0;

  const ConcordOptions opts{1e-9, 2000, false};
  const ConcordState fit = concord_fit(data, lambda, opts);

  // profile objective: diagonals are separable given the off-diagonal
  const Matrix& raw = data.values();
  auto profiled = [&](double w12) {
    Matrix omega = Matrix::Zero(2, 2);
    omega(0, 1) = omega(1, 0) = w12;
    auto diag_obj = [&](Index i, double wii) {
      Matrix candidate = omega;
      candidate(0, 0) = i == 0 ? wii : 1.0;
      candidate(1, 1) = i == 1 ? wii : 1.0;
      return oracles::naive_concord_objective(candidate, raw, lambda);
    };
    const double w11 = oracles::golden_minimize(
        [&](double w) { return diag_obj(0, w); }, 1e-4, 20.0, 1e-10);
    const double w22 = oracles::golden_minimize(
        [&](double w) { return diag_obj(1, w); }, 1e-4, 20.0, 1e-10);
    omega(0, 0) = w11;
    omega(1, 1) = w22;
    return std::make_pair(oracles::naive_concord_objective(omega, raw, lambda), omega);
  };
  const double w12_star = oracles::golden_minimize(
      [&](double w) { return profiled(w).first; }, -2.0, 2.0, 1e-10);
  const Matrix oracle = profiled(w12_star).second;

  CHECK(std::abs(fit.omega(0, 0) - oracle(0, 0)) < 1e-4);
  CHECK(std::abs(fit.omega(1, 1) - oracle(1, 1)) < 1e-4);
  CHECK(std::abs(fit.omega(0, 1) - oracle(0, 1)) < 1e-4);
}

TEST_CASE("objective trace never increases") {
  const SymMatrix model = sparse_random_precision({10, 2, 0.3, 0.9, 21});
  const DataMatrix data = gaussian_data(model, 60, 13);
  for (double lambda : {0.0, 1.0, 10.0, 100.0}) {
    const ConcordState fit = concord_fit(data, lambda);
    for (std::size_t t = 1; t < fit.objective_trace.size(); ++t) {
      CHECK(fit.objective_trace[t] <= fit.objective_trace[t - 1] + 1e-9);
    }
  }
}

TEST_CASE("KKT conditions hold at convergence") {
  const SymMatrix model = sparse_random_precision({8, 2, 0.3, 0.9, 17});
  const DataMatrix data = gaussian_data(model, 120, 19);
  const double tol = 1e-8;
  const double lambda = 8.0;
  const ConcordState fit = concord_fit(data, lambda, {tol, 2000, false});
  REQUIRE(fit.converged);
  CHECK(fit.kkt_residual <= 10.0 * tol);

  // re-derive the stationarity conditions from scratch
  const Matrix y = centered(data.values());
  const Matrix gram = y.transpose() * y;
  const Matrix& omega = fit.omega.values();
  const Matrix omega_gram = omega * gram;
  const double n = static_cast<double>(data.n());
  for (Index i = 0; i < 8; ++i) {
    const double grad = -n / omega(i, i) + omega_gram(i, i);
    CHECK(std::abs(grad) / (gram(i, i) + n / (omega(i, i) * omega(i, i))) <= 10.0 * tol);
    for (Index j = i + 1; j < 8; ++j) {
      const double denom = gram(i, i) + gram(j, j);
      const double grad_ij = omega_gram(i, j) + omega_gram(j, i);
      if (omega(i, j) == 0.0) {
        CHECK(std::max(0.0, std::abs(grad_ij) - lambda) / denom <= 10.0 * tol);
      } else {
        const double sub = grad_ij + lambda * (omega(i, j) > 0 ? 1.0 : -1.0);
        CHECK(std::abs(sub) / denom <= 10.0 * tol);
      }
    }
  }
}

TEST_CASE("joint convexity midpoint inequality") {
  const SymMatrix model = sparse_random_precision({5, 2, 0.3, 0.9, 23});
  const DataMatrix data = gaussian_data(model, 40, 29);
  CounterRng rng(8);
  auto s = rng.stream(0);
  for (int trial = 0; trial < 20; ++trial) {
    auto random_omega = [&]() {
      Matrix m = Matrix::Zero(5, 5);
      for (Index i = 0; i < 5; ++i) {
        m(i, i) = 0.5 + 1.5 * s.next_unit();
        for (Index j = i + 1; j < 5; ++j) m(i, j) = m(j, i) = 0.6 * (s.next_unit() - 0.5);
      }
      return m;
    };
    const Matrix a = random_omega();
    const Matrix b = random_omega();
    const double lambda = 2.0;
    const double qa = concord_objective(SymMatrix(a, MatrixRole::Precision), data, lambda);
    const double qb = concord_objective(SymMatrix(b, MatrixRole::Precision), data, lambda);
    const double qmid = concord_objective(
        SymMatrix(((a + b) / 2.0).eval(), MatrixRole::Precision), data, lambda);
    CHECK(qmid <= 0.5 * (qa + qb) + 1e-9);
  }
}

TEST_CASE("column rescaling shifts the unpenalized objective by the known amount") {
  const SymMatrix model = sparse_random_precision({4, 2, 0.3, 0.9, 37});
  const DataMatrix data = gaussian_data(model, 50, 41);
  CounterRng rng(14);
  auto s = rng.stream(0);
  Vector scale(4);
  for (Index j = 0; j < 4; ++j) scale(j) = 0.5 + 2.0 * s.next_unit();

  Matrix omega = Matrix::Identity(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = i + 1; j < 4; ++j) omega(i, j) = omega(j, i) = 0.3 * (s.next_unit() - 0.5);

  const Matrix scaled_data = data.values() * scale.asDiagonal();
  const Matrix scaled_omega =
      scale.cwiseInverse().asDiagonal() * omega * scale.cwiseInverse().asDiagonal();

  const double q_orig =
      concord_objective(SymMatrix(omega, MatrixRole::Precision), data, 0.0);
  const double q_scaled = concord_objective(
      SymMatrix(scaled_omega, MatrixRole::Precision), DataMatrix(scaled_data), 0.0);

  // residual columns scale as r_i / d_i, the log term picks up 2n sum log d
  const Matrix y = centered(data.values());
  const double n = static_cast<double>(data.n());
  double expected = q_orig + 2.0 * n * scale.array().log().sum();
  const Matrix residuals = y * omega;
  for (Index i = 0; i < 4; ++i) {
    expected += 0.5 * (1.0 / (scale(i) * scale(i)) - 1.0) * residuals.col(i).squaredNorm();
  }
  CHECK(q_scaled == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("a zero-variance column is reported as divergence") {
  Matrix x = Matrix::Random(20, 3);
  x.col(2).setConstant(1.0);
  CHECK_THROWS_AS(concord_fit(DataMatrix(x), 1.0), Error);
  try {
    concord_fit(DataMatrix(x), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == errc::diverged);
  }
}

TEST_CASE("a one-point grid reproduces the plain fit") {
  const SymMatrix model = sparse_random_precision({6, 2, 0.3, 0.9, 43});
  const DataMatrix data = gaussian_data(model, 70, 47);
  const auto path = concord_path(data, {3.0});
  const ConcordState direct = concord_fit(data, 3.0);
  CHECK((path[0].omega.values() - direct.omega.values()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("path support grows as the penalty decays") {
  const SymMatrix model = sparse_random_precision({20, 2, 0.3, 0.9, 53});
  const DataMatrix data = gaussian_data(model, 200, 59);
  const double lambda_max = concord_lambda_max(data);
  std::vector<double> grid;
  for (int k = 0; k < 12; ++k) grid.push_back(lambda_max * std::pow(0.02, k / 11.0));
  const auto path = concord_path(data, grid);

  int violations = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    std::size_t size = 0;
    for (Index i = 0; i < 20; ++i)
      for (Index j = i + 1; j < 20; ++j)
        if (path[k].omega(i, j) != 0.0) ++size;
    if (k > 0 && size < last) ++violations;
    last = size;
  }
  CHECK(violations <= 2);
}

TEST_CASE("warm and cold starts land on the same solution") {
  const SymMatrix model = sparse_random_precision({20, 2, 0.3, 0.9, 61});
  const DataMatrix data = gaussian_data(model, 150, 67);
  const double tol = 1e-7;
  const double lambda_max = concord_lambda_max(data);
  std::vector<double> grid;
  for (int k = 0; k < 6; ++k) grid.push_back(lambda_max * std::pow(0.05, k / 5.0));

  const auto warm = concord_path(data, grid, {tol, 2000, false});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ConcordState cold = concord_fit(data, grid[k], {tol, 2000, false});
    CHECK((warm[k].omega.values() - cold.omega.values()).cwiseAbs().maxCoeff() <=
          10.0 * tol);
  }
}

TEST_CASE("path rejects a malformed grid") {
  const SymMatrix model = sparse_random_precision({4, 1, 0.3, 0.9, 71});
  const DataMatrix data = gaussian_data(model, 30, 73);
  CHECK_THROWS_AS(concord_path(data, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(concord_path(data, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(concord_path(data, {1.0, -0.5}), Error);
}

TEST_CASE("support recovery on a sparse truth") {
  const SymMatrix truth = sparse_random_precision({30, 2, 0.3, 1.0, 79});
  const DataMatrix data = gaussian_data(truth, 600, 83);
  const double lambda_max = concord_lambda_max(data);
  std::vector<double> grid;
  for (int k = 0; k < 15; ++k) grid.push_back(lambda_max * std::pow(0.01, k / 14.0));
  const auto path = concord_path(data, grid);
  double best_f1 = 0.0;
  for (const auto& state : path) {
    best_f1 = std::max(best_f1, support_metrics(state.omega, truth).f1);
  }
  CHECK(best_f1 >= 0.9);
}

TEST_CASE("support metrics confusion counts") {
  const SymMatrix truth = sparse_random_precision({12, 2, 0.3, 1.0, 89});

  const SupportMetrics perfect = support_metrics(truth, truth);
  CHECK(perfect.f1 == doctest::Approx(1.0));
  CHECK(perfect.sign_agreement == doctest::Approx(1.0));
  CHECK(perfect.false_positive == 0);
  CHECK(perfect.false_negative == 0);

  const SymMatrix empty(Matrix::Identity(12, 12), MatrixRole::Precision);
  const SupportMetrics none = support_metrics(empty, truth);
  CHECK(none.f1 == doctest::Approx(0.0));
  CHECK(none.true_positive == 0);
  CHECK(none.false_negative == none.true_nonzeros);
  CHECK(none.sign_agreement == doctest::Approx(0.0));

  // randomized perturbation vs a recount oracle
  CounterRng rng(4);
  auto s = rng.stream(0);
  Matrix perturbed = truth.values();
  for (Index i = 0; i < 12; ++i) {
    for (Index j = i + 1; j < 12; ++j) {
      const double u = s.next_unit();
      if (u < 0.2) {
        perturbed(i, j) = perturbed(j, i) = 0.0;  // drop
      } else if (u < 0.4) {
        perturbed(i, j) = perturbed(j, i) = perturbed(i, j) == 0.0 ? 0.5 : -perturbed(i, j);
      }
    }
  }
  const SupportMetrics metrics =
      support_metrics(SymMatrix(perturbed, MatrixRole::Precision), truth);

  Index tp = 0, fp = 0, fn = 0, agree = 0, truth_nnz = 0;
  const double cut_t = ZeroTolerance{}.absolute_for(truth.values());
  const double cut_e = ZeroTolerance{}.absolute_for(perturbed);
  for (Index i = 0; i < 12; ++i) {
    for (Index j = i + 1; j < 12; ++j) {
      const bool in_t = std::abs(truth(i, j)) > cut_t;
      const bool in_e = std::abs(perturbed(i, j)) > cut_e;
      if (in_t) ++truth_nnz;
      if (in_t && in_e) {
        ++tp;
        if ((perturbed(i, j) > 0) == (truth(i, j) > 0)) ++agree;
      }
      if (!in_t && in_e) ++fp;
      if (in_t && !in_e) ++fn;
    }
  }
  CHECK(metrics.true_positive == tp);
  CHECK(metrics.false_positive == fp);
  CHECK(metrics.false_negative == fn);
  CHECK(metrics.true_nonzeros == truth_nnz);
  CHECK(metrics.sign_agreement ==
        doctest::Approx(static_cast<double>(agree) / truth_nnz));
  CHECK(metrics.f1 == doctest::Approx(2.0 * tp / (2.0 * tp + fp + fn)));
}

TEST_CASE("edge-graph estimates feed the same metrics") {
  const SymMatrix truth = sparse_random_precision({10, 2, 0.3, 1.0, 97});
  EdgeGraph graph;
  graph.p = 10;
  graph.threshold_used = 0.0;
  const double cut = ZeroTolerance{}.absolute_for(truth.values());
  for (Index i = 0; i < 10; ++i)
    for (Index j = i + 1; j < 10; ++j)
      if (std::abs(truth(i, j)) > cut) graph.edges.push_back({i, j, truth(i, j)});
  const SupportMetrics metrics = support_metrics(graph, truth);
  CHECK(metrics.f1 == doctest::Approx(1.0));
  CHECK(metrics.sign_agreement == doctest::Approx(1.0));
}

TEST_SUITE_END();
