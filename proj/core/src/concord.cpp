#include "corrmine/concord.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace corrmine {

namespace {

struct Problem {
  Matrix y;       // centered (optionally standardized) data, n x p
  Matrix gram;    // Y^T Y
  double n = 0;   // sample count as a double
};

Problem prepare(const DataMatrix& data, bool standardize) {
  Problem prob;
  prob.y = data.values().rowwise() - data.values().colwise().mean();
  prob.n = static_cast<double>(data.n());
  if (standardize) {
    for (Index j = 0; j < prob.y.cols(); ++j) {
      const double sd = prob.y.col(j).norm() / std::sqrt(prob.n - 1.0);
      if (!(sd > 0.0)) {
        fail(errc::diverged, "variable " + std::to_string(j) + " has zero variance");
      }
      prob.y.col(j) /= sd;
    }
  }
  prob.gram = prob.y.transpose() * prob.y;
  for (Index j = 0; j < prob.gram.rows(); ++j) {
    if (!(prob.gram(j, j) > 0.0)) {
      fail(errc::diverged, "diagonal update has no positive root: variable " +
                               std::to_string(j) + " has zero variance");
    }
  }
  return prob;
}

double soft_threshold(double x, double lambda) {
  if (x > lambda) return x - lambda;
  if (x < -lambda) return x + lambda;
  return 0.0;
}

double objective_of(const Problem& prob, const Matrix& omega, const Matrix& omega_gram,
                    double lambda) {
  double value = -prob.n * omega.diagonal().array().log().sum();
  value += 0.5 * omega.cwiseProduct(omega_gram).sum();
  double l1 = 0.0;
  for (Index i = 0; i < omega.rows(); ++i) {
    for (Index j = i + 1; j < omega.cols(); ++j) l1 += std::abs(omega(i, j));
  }
  return value + lambda * l1;
}

double positive_root(double gram_ii, double cross, double n) {
  // gram_ii w^2 + cross w - n = 0, gram_ii > 0
  return (-cross + std::sqrt(cross * cross + 4.0 * n * gram_ii)) / (2.0 * gram_ii);
}

/// Largest displacement a single coordinate update could still make.
double kkt_displacement(const Problem& prob, const Matrix& omega, const Matrix& omega_gram,
                        double lambda) {
  const Index p = omega.rows();
  double worst = 0.0;
  for (Index i = 0; i < p; ++i) {
    const double cross = omega_gram(i, i) - omega(i, i) * prob.gram(i, i);
    const double proposal = positive_root(prob.gram(i, i), cross, prob.n);
    worst = std::max(worst, std::abs(proposal - omega(i, i)));
  }
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const double denom = prob.gram(i, i) + prob.gram(j, j);
      const double cross = omega_gram(i, j) + omega_gram(j, i) - omega(i, j) * denom;
      const double proposal = soft_threshold(-cross, lambda) / denom;
      worst = std::max(worst, std::abs(proposal - omega(i, j)));
    }
  }
  return worst;
}

ConcordState solve(const DataMatrix& data, double lambda, Matrix omega,
                   const ConcordOptions& opts) {
  if (lambda < 0.0) fail(errc::domain_error, "penalty lambda must be >= 0");
  if (!(opts.tol > 0.0)) fail(errc::config_error, "tolerance must be positive");
  if (opts.max_sweeps < 1) fail(errc::config_error, "max_sweeps must be >= 1");

  const Problem prob = prepare(data, opts.standardize);
  const Index p = data.p();
  const Matrix& gram = prob.gram;

  if (omega.rows() == 0) {
    omega = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) omega(i, i) = std::sqrt(prob.n / gram(i, i));
  } else {
    if (omega.rows() != p || omega.cols() != p) {
      fail(errc::dimension_mismatch, "warm start dimension does not match data");
    }
    for (Index i = 0; i < p; ++i) {
      if (!(omega(i, i) > 0.0)) {
        fail(errc::non_positive_diagonal, "warm start diagonal must be positive");
      }
    }
  }

  Matrix omega_gram = omega * gram;

  std::vector<double> trace;
  trace.push_back(objective_of(prob, omega, omega_gram, lambda));
  int sweeps = 0;
  bool converged = false;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double max_change = 0.0;

    for (Index i = 0; i < p; ++i) {
      const double cross = omega_gram(i, i) - omega(i, i) * gram(i, i);
      const double updated = positive_root(gram(i, i), cross, prob.n);
      const double delta = updated - omega(i, i);
      if (delta != 0.0) {
        omega(i, i) = updated;
        omega_gram.row(i) += delta * gram.row(i);
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    for (Index i = 0; i < p; ++i) {
      for (Index j = i + 1; j < p; ++j) {
        const double denom = gram(i, i) + gram(j, j);
        const double cross = omega_gram(i, j) + omega_gram(j, i) - omega(i, j) * denom;
        const double updated = soft_threshold(-cross, lambda) / denom;
        const double delta = updated - omega(i, j);
        if (delta != 0.0) {
          omega(i, j) = updated;
          omega(j, i) = updated;
          omega_gram.row(i) += delta * gram.row(j);
          omega_gram.row(j) += delta * gram.row(i);
          max_change = std::max(max_change, std::abs(delta));
        }
      }
    }

    omega_gram = omega * gram;  // shed incremental-update drift
    trace.push_back(objective_of(prob, omega, omega_gram, lambda));
    ++sweeps;
    if (max_change <= opts.tol) {
      converged = true;
      break;
    }
  }

  const double kkt = kkt_displacement(prob, omega, omega_gram, lambda);
  return ConcordState{SymMatrix(std::move(omega), MatrixRole::Precision),
                      lambda, sweeps, std::move(trace), converged, kkt};
}

}  // namespace

double concord_objective(const SymMatrix& omega, const DataMatrix& data, double lambda) {
  if (omega.p() != data.p()) {
    fail(errc::dimension_mismatch, "omega dimension does not match data");
  }
  if (lambda < 0.0) fail(errc::domain_error, "penalty lambda must be >= 0");
  for (Index i = 0; i < omega.p(); ++i) {
    if (!(omega(i, i) > 0.0)) {
      fail(errc::non_positive_diagonal,
           "objective requires a positive diagonal, entry " + std::to_string(i));
    }
  }
  const Matrix y = data.values().rowwise() - data.values().colwise().mean();
  const double n = static_cast<double>(data.n());
  double value = -n * omega.values().diagonal().array().log().sum();
  value += 0.5 * (y * omega.values()).squaredNorm();
  double l1 = 0.0;
  for (Index i = 0; i < omega.p(); ++i) {
    for (Index j = i + 1; j < omega.p(); ++j) l1 += std::abs(omega(i, j));
  }
  return value + lambda * l1;
}

double concord_lambda_max(const DataMatrix& data) {
  const Problem prob = prepare(data, false);
  const Index p = data.p();
  Vector diag(p);
  for (Index i = 0; i < p; ++i) diag(i) = std::sqrt(prob.n / prob.gram(i, i));
  double lambda_max = 0.0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      lambda_max = std::max(lambda_max, std::abs(prob.gram(i, j)) * (diag(i) + diag(j)));
    }
  }
  return lambda_max;
}

ConcordState concord_fit(const DataMatrix& data, double lambda, const ConcordOptions& opts) {
  return solve(data, lambda, Matrix(), opts);
}

ConcordState concord_fit_from(const DataMatrix& data, double lambda, const Matrix& init,
                              const ConcordOptions& opts) {
  Matrix start = ((init + init.transpose()) / 2.0).eval();
  return solve(data, lambda, std::move(start), opts);
}

std::vector<ConcordState> concord_path(const DataMatrix& data,
                                       const std::vector<double>& lambda_grid,
                                       const ConcordOptions& opts) {
  if (lambda_grid.empty()) fail(errc::config_error, "lambda grid must be non-empty");
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0)) {
      fail(errc::config_error, "lambda grid entries must be positive");
    }
    if (k > 0 && !(lambda_grid[k] < lambda_grid[k - 1])) {
      fail(errc::config_error, "lambda grid must be strictly decreasing");
    }
  }

  std::vector<ConcordState> states;
  states.reserve(lambda_grid.size());
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    try {
      if (states.empty()) {
        states.push_back(concord_fit(data, lambda_grid[k], opts));
      } else {
        states.push_back(
            concord_fit_from(data, lambda_grid[k], states.back().omega.values(), opts));
      }
    } catch (const Error& e) {
      fail(e.code(), "lambda index " + std::to_string(k) + ": " + e.what());
    }
  }
  return states;
}

namespace {

SupportMetrics metrics_from_sets(const std::set<std::pair<Index, Index>>& est_support,
                                 const Matrix& est_signs, bool have_signs,
                                 const SymMatrix& truth, ZeroTolerance tol) {
  const Matrix& t = truth.values();
  const double cut = tol.absolute_for(t);
  SupportMetrics m;
  Index agree = 0;
  for (Index i = 0; i < truth.p(); ++i) {
    for (Index j = i + 1; j < truth.p(); ++j) {
      const bool in_truth = std::abs(t(i, j)) > cut;
      const bool in_est = est_support.count({i, j}) > 0;
      if (in_truth) {
        ++m.true_nonzeros;
        if (in_est) {
          ++m.true_positive;
          if (!have_signs ||
              (est_signs(i, j) > 0) == (t(i, j) > 0)) {
            ++agree;
          }
        } else {
          ++m.false_negative;
        }
      } else if (in_est) {
        ++m.false_positive;
      }
    }
  }
  m.sign_agreement = m.true_nonzeros == 0
                         ? 1.0
                         : static_cast<double>(agree) / static_cast<double>(m.true_nonzeros);
  const double denom = 2.0 * m.true_positive + m.false_positive + m.false_negative;
  m.f1 = denom == 0.0 ? 1.0 : 2.0 * m.true_positive / denom;
  return m;
}

}  // namespace

SupportMetrics support_metrics(const SymMatrix& estimate, const SymMatrix& truth,
                               ZeroTolerance tol) {
  if (estimate.p() != truth.p()) {
    fail(errc::dimension_mismatch, "estimate and truth dimensions differ");
  }
  const Matrix& e = estimate.values();
  const double cut = tol.absolute_for(e);
  std::set<std::pair<Index, Index>> support;
  for (Index i = 0; i < estimate.p(); ++i) {
    for (Index j = i + 1; j < estimate.p(); ++j) {
      if (std::abs(e(i, j)) > cut) support.insert({i, j});
    }
  }
  return metrics_from_sets(support, e, true, truth, tol);
}

SupportMetrics support_metrics(const EdgeGraph& estimate, const SymMatrix& truth,
                               ZeroTolerance tol) {
  if (estimate.p != truth.p()) {
    fail(errc::dimension_mismatch, "estimate and truth dimensions differ");
  }
  std::set<std::pair<Index, Index>> support;
  Matrix signs = Matrix::Zero(estimate.p, estimate.p);
  for (const Edge& e : estimate.edges) {
    support.insert({e.i, e.j});
    signs(e.i, e.j) = e.weight;
  }
  return metrics_from_sets(support, signs, true, truth, tol);
}

}  // namespace corrmine
