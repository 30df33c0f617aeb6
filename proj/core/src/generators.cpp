#include "corrmine/generators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrmine/parallel.hpp"
#include "corrmine/rng.hpp"

namespace corrmine {

void PoissonFieldConfig::validate() const {
  if (n1 < 1 || n2 < 1) fail(errc::config_error, "grid sizes n1, n2 must be positive");
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) {
    fail(errc::config_error, "grid increments delta1, delta2 must be positive");
  }
  if (!(sigma_w > 0.0)) fail(errc::config_error, "sigma_w must be positive");
}

void SparsePrecisionConfig::validate() const {
  if (p < 1) fail(errc::config_error, "p must be positive");
  if (s < 0) fail(errc::config_error, "s must be non-negative");
  if (s >= p) {
    fail(errc::infeasible_sparsity, "s must be smaller than p (got s = " +
                                        std::to_string(s) + ", p = " + std::to_string(p) + ")");
  }
  if (!(max_magnitude >= min_magnitude) || !(min_magnitude > 0.0)) {
    fail(errc::config_error, "need 0 < min_magnitude <= max_magnitude");
  }
}

void KroneckerConfig::validate() const {
  if (k != 1) {
    fail(errc::unsupported_rank,
         "only Kronecker rank k = 1 is supported (got k = " + std::to_string(k) + ")");
  }
  if (q < 1 || r < 1) fail(errc::config_error, "factor dimensions q, r must be positive");
  SparsePrecisionConfig{q, s_a, min_magnitude, max_magnitude, seed}.validate();
  SparsePrecisionConfig{r, s_b, min_magnitude, max_magnitude, seed}.validate();
}

Eigen::SparseMatrix<double> poisson_field_operator(const PoissonFieldConfig& cfg) {
  cfg.validate();
  const Index p = cfg.p();
  const double denom = 2.0 * (cfg.delta1 * cfg.delta1 + cfg.delta2 * cfg.delta2);
  const double w_i = cfg.delta2 * cfg.delta2 / denom;  // (i +- 1, j) neighbors
  const double w_j = cfg.delta1 * cfg.delta1 / denom;  // (i, j +- 1) neighbors

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(p) * 5);
  auto node = [&](Index i, Index j) { return i * cfg.n2 + j; };
  for (Index i = 0; i < cfg.n1; ++i) {
    for (Index j = 0; j < cfg.n2; ++j) {
      const Index u = node(i, j);
      triplets.emplace_back(u, u, 1.0);
      if (i > 0) triplets.emplace_back(u, node(i - 1, j), -w_i);
      if (i + 1 < cfg.n1) triplets.emplace_back(u, node(i + 1, j), -w_i);
      if (j > 0) triplets.emplace_back(u, node(i, j - 1), -w_j);
      if (j + 1 < cfg.n2) triplets.emplace_back(u, node(i, j + 1), -w_j);
    }
  }
  Eigen::SparseMatrix<double> op(p, p);
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

Eigen::SparseMatrix<double> poisson_field_precision_sparse(const PoissonFieldConfig& cfg) {
  const Eigen::SparseMatrix<double> ia = poisson_field_operator(cfg);
  Eigen::SparseMatrix<double> omega =
      (ia * Eigen::SparseMatrix<double>(ia.transpose())) / (cfg.sigma_w * cfg.sigma_w);
  omega.makeCompressed();
  return omega;
}

SymMatrix poisson_field_precision(const PoissonFieldConfig& cfg) {
  Matrix omega = Matrix(poisson_field_precision_sparse(cfg));
  return SymMatrix(std::move(omega), MatrixRole::Precision);
}

namespace {

Vector poisson_noise_vector(const PoissonFieldConfig& cfg, CounterRng::Stream stream) {
  Vector w(cfg.p());
  for (Index u = 0; u < cfg.p(); ++u) w(u) = cfg.sigma_w * stream.next_normal();
  return w;
}

}  // namespace

Matrix poisson_field_sample(const PoissonFieldConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(poisson_field_operator(cfg));
  if (solver.info() != Eigen::Success) fail(errc::numerical_error, "sparse factorization failed");

  const Vector w = poisson_noise_vector(cfg, CounterRng(seed).stream(0));
  const Vector x = solver.solve(w);
  Matrix grid(cfg.n1, cfg.n2);
  for (Index i = 0; i < cfg.n1; ++i) {
    for (Index j = 0; j < cfg.n2; ++j) grid(i, j) = x(i * cfg.n2 + j);
  }
  return grid;
}

DataMatrix poisson_field_data(const PoissonFieldConfig& cfg, Index n, std::uint64_t seed) {
  cfg.validate();
  if (n < 2) fail(errc::too_few_samples, "need n >= 2 samples");
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(poisson_field_operator(cfg));
  if (solver.info() != Eigen::Success) fail(errc::numerical_error, "sparse factorization failed");

  const CounterRng rng(seed);
  Matrix data(n, cfg.p());
  for (Index k = 0; k < n; ++k) {
    const Vector w = poisson_noise_vector(cfg, rng.stream(static_cast<std::uint64_t>(k)));
    data.row(k) = solver.solve(w).transpose();
  }
  return DataMatrix(std::move(data));
}

std::vector<std::pair<Index, Index>> grid_adjacency(Index n1, Index n2) {
  std::vector<std::pair<Index, Index>> edges;
  auto node = [&](Index i, Index j) { return i * n2 + j; };
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) {
      if (j + 1 < n2) edges.emplace_back(node(i, j), node(i, j + 1));
      if (i + 1 < n1) edges.emplace_back(node(i, j), node(i + 1, j));
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

SymMatrix sparse_random_precision(const SparsePrecisionConfig& cfg) {
  cfg.validate();
  const Index p = cfg.p;
  Matrix omega = Matrix::Zero(p, p);
  std::vector<Index> row_count(p, 0);
  const CounterRng rng(cfg.seed);

  for (Index i = 0; i < p; ++i) {
    auto stream = rng.stream(static_cast<std::uint64_t>(i));
    const Index budget = cfg.s - row_count[i];
    if (budget <= 0) continue;
    std::vector<Index> eligible;
    for (Index j = i + 1; j < p; ++j) {
      if (row_count[j] < cfg.s) eligible.push_back(j);
    }
    const Index take = std::min<Index>(budget, static_cast<Index>(eligible.size()));
    for (Index t = 0; t < take; ++t) {
      // partial Fisher-Yates draw without replacement
      const std::size_t remaining = eligible.size() - static_cast<std::size_t>(t);
      const std::size_t pick =
          static_cast<std::size_t>(t) +
          std::min<std::size_t>(remaining - 1,
                                static_cast<std::size_t>(stream.next_unit() * remaining));
      std::swap(eligible[t], eligible[pick]);
      const Index j = eligible[t];
      double magnitude =
          cfg.min_magnitude + stream.next_unit() * (cfg.max_magnitude - cfg.min_magnitude);
      if (stream.next_unit() < 0.5) magnitude = -magnitude;
      omega(i, j) = magnitude;
      omega(j, i) = magnitude;
      ++row_count[i];
      ++row_count[j];
    }
  }

  for (Index i = 0; i < p; ++i) {
    omega(i, i) = omega.row(i).cwiseAbs().sum() + 1.0;  // dominant, hence PD
  }
  return SymMatrix(std::move(omega), MatrixRole::Precision);
}

KroneckerModel kronecker_model(const KroneckerConfig& cfg) {
  cfg.validate();
  SparsePrecisionConfig factor_a{cfg.q, cfg.s_a, cfg.min_magnitude, cfg.max_magnitude,
                                 CounterRng::derive_seed(cfg.seed, 1)};
  SparsePrecisionConfig factor_b{cfg.r, cfg.s_b, cfg.min_magnitude, cfg.max_magnitude,
                                 CounterRng::derive_seed(cfg.seed, 2)};
  KroneckerModel model{sparse_random_precision(factor_a).values(),
                       sparse_random_precision(factor_b).values(),
                       SymMatrix(Matrix::Identity(1, 1), MatrixRole::Precision)};

  const Index p = cfg.p();
  Matrix omega(p, p);
  for (Index i1 = 0; i1 < cfg.q; ++i1) {
    for (Index j1 = 0; j1 < cfg.q; ++j1) {
      omega.block(i1 * cfg.r, j1 * cfg.r, cfg.r, cfg.r) = model.factor_a(i1, j1) * model.factor_b;
    }
  }
  model.omega = SymMatrix(std::move(omega), MatrixRole::Precision);
  return model;
}

SymMatrix kronecker_precision(const KroneckerConfig& cfg) {
  return kronecker_model(cfg).omega;
}

DataMatrix sample_gaussian(const SymMatrix& model, Index n, std::uint64_t seed, int threads) {
  if (n < 2) fail(errc::too_few_samples, "need n >= 2 samples");
  const Index p = model.p();

  // Lower-triangular map T with T T^T = Sigma. For a precision input the
  // reverse-ordered Cholesky Omega = U U^T (U upper) gives T = U^{-T}, which
  // coincides with chol(Omega^{-1}) so both routes draw identical samples.
  Matrix transform;
  if (model.role() == MatrixRole::Covariance) {
    Eigen::LLT<Matrix> llt(model.values());
    if (llt.info() != Eigen::Success) {
      fail(errc::not_positive_definite, "covariance model is not positive definite");
    }
    transform = llt.matrixL();
  } else if (model.role() == MatrixRole::Precision) {
    Matrix reversed = model.values().reverse();  // J Omega J
    Eigen::LLT<Matrix> llt(reversed);
    if (llt.info() != Eigen::Success) {
      fail(errc::not_positive_definite, "precision model is not positive definite");
    }
    const Matrix upper = Matrix(llt.matrixL()).reverse();  // U with U U^T = Omega
    // (U^T)^{-1} = U^{-T}, lower triangular
    transform = upper.transpose()
                    .triangularView<Eigen::Lower>()
                    .solve(Matrix::Identity(p, p));
  } else {
    fail(errc::role_mismatch, "sample_gaussian expects a covariance or precision model");
  }

  const CounterRng rng(seed);
  Matrix data(n, p);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t k) {
    auto stream = rng.stream(k);
    Vector z(p);
    for (Index i = 0; i < p; ++i) z(i) = stream.next_normal();
    data.row(static_cast<Index>(k)) = (transform * z).transpose();
  });
  return DataMatrix(std::move(data));
}

}  // namespace corrmine
