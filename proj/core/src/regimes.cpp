#include "corrmine/regimes.hpp"

#include <cmath>

#include "corrmine/screening.hpp"

namespace corrmine {

namespace {

constexpr double kLn10 = 2.302585092994045684;

}  // namespace

double ContextualModel::m_for(double n) const {
  if (scale_m) return *scale_m;
  return std::max({q, r, n});
}

void ContextualModel::validate() const {
  if (!(q >= 2.0) || !(r >= 2.0)) {
    fail(errc::config_error, "factor dimensions q, r must be >= 2");
  }
  if (scale_m && !(*scale_m >= std::max(q, r))) {
    fail(errc::config_error, "scale constant M must be >= max(q, r)");
  }
}

double contextual_bound(const ContextualModel& model, double n) {
  model.validate();
  if (!(n >= 1.0)) fail(errc::domain_error, "sample size n must be >= 1");
  const double q = model.q;
  const double r = model.r;
  switch (model.kind) {
    case ContextualKind::Saturated:
      return 0.5 * std::log(q * q * r * r / n);
    case ContextualKind::Sparse:
      return 0.5 * std::log(q * r * std::log(q * r) / n);
    case ContextualKind::Kronecker:
      return 0.5 * std::log((q * q + r * r) * std::log(model.m_for(n)) / n);
    case ContextualKind::KroneckerSparse:
      return 0.5 * std::log((q + r) * std::log(model.m_for(n)) / n);
  }
  fail(errc::config_error, "unknown contextual kind");
}

std::vector<IsoclinePoint> contextual_isocline(const ContextualModel& model, double level,
                                               const std::vector<double>& p_grid) {
  std::vector<IsoclinePoint> points;
  points.reserve(p_grid.size());
  const double shrink = std::exp(-2.0 * level);

  for (double p : p_grid) {
    if (!(p >= 4.0)) fail(errc::config_error, "grid p must be >= 4 so q = r = sqrt(p) >= 2");
    const double q = std::sqrt(p);
    ContextualModel local = model;
    local.q = q;
    local.r = q;
    local.validate();

    // invert 1/2 log(T(M)/n) = level for n; when M = max(q, r, n) the
    // numerator depends on n, so iterate the closed form to its fixed point
    auto numerator = [&](double n_guess) {
      switch (local.kind) {
        case ContextualKind::Saturated: return p * p;
        case ContextualKind::Sparse: return p * std::log(p);
        case ContextualKind::Kronecker: return 2.0 * p * std::log(local.m_for(n_guess));
        case ContextualKind::KroneckerSparse:
          return 2.0 * q * std::log(local.m_for(n_guess));
      }
      fail(errc::config_error, "unknown contextual kind");
    };

    double n = numerator(q) * shrink;
    for (int iter = 0; iter < 200; ++iter) {
      const double next = numerator(std::max(n, 1.0)) * shrink;
      if (std::abs(next - n) <= 1e-13 * std::max(1.0, std::abs(next))) {
        n = next;
        break;
      }
      n = next;
    }
    if (!(n >= 1.0)) {
      fail(errc::infeasible_level,
           "level " + std::to_string(level) + " implies n < 1 at p = " + std::to_string(p));
    }
    points.push_back({p, n, std::log10(n), {}});
  }
  return points;
}

void TaskRegime::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    fail(errc::config_error, "regime constants alpha, beta must be positive");
  }
  if (task == Task::SupportRecovery && !(nu > 0.0 && nu <= 1.0)) {
    fail(errc::config_error, "support recovery exponent nu must lie in (0, 1]");
  }
}

double task_bound_log(const TaskRegime& regime, double n, double p,
                      std::optional<double> kappa_n) {
  regime.validate();
  if (!(n >= 1.0)) fail(errc::domain_error, "sample size n must be >= 1");
  if (!(p >= 2.0)) fail(errc::domain_error, "dimension p must be >= 2");
  switch (regime.task) {
    case Task::Screening: {
      if (!kappa_n) {
        fail(errc::missing_kappa,
             "screening bound needs kappa_n from the screening law");
      }
      return std::log(-std::expm1(-*kappa_n));
    }
    case Task::Detection:
      return std::log(p) - n * regime.beta;
    case Task::SupportRecovery:
      return std::pow(p, regime.nu) * std::log(2.0) - n * regime.beta;
    case Task::ParamEstimation:
      return std::log(regime.beta) + std::log(p) + std::log(std::log(p)) - std::log(n);
    case Task::PerformanceEstimation:
      return std::log(regime.beta) - 2.0 / (1.0 + p) * std::log(n);
  }
  fail(errc::config_error, "unknown task");
}

double task_bound(const TaskRegime& regime, double n, double p,
                  std::optional<double> kappa_n) {
  return std::exp(task_bound_log(regime, n, p, kappa_n));
}

std::vector<IsoclinePoint> task_isocline(const TaskRegime& regime, double level,
                                         const std::vector<double>& p_grid,
                                         const TaskIsoclineOptions& opts) {
  regime.validate();
  if (!(level > 0.0)) fail(errc::infeasible_level, "level must be positive");

  std::vector<IsoclinePoint> points;
  points.reserve(p_grid.size());
  for (double p : p_grid) {
    if (!(p >= 2.0)) fail(errc::config_error, "grid p must be >= 2");
    IsoclinePoint point;
    point.p = p;
    switch (regime.task) {
      case Task::Screening: {
        // purely high dimensional row: n stays fixed, the threshold rises
        if (!(level < 1.0)) fail(errc::infeasible_level, "screening level must be < 1");
        const Index n = opts.screening_n;
        if (n < 3) fail(errc::config_error, "screening_n must be >= 3");
        const double kappa = -std::log1p(-level);
        const double e_target =
            kappa * (static_cast<double>(n) - 2.0) / sphere_constant(n);
        const double ratio = e_target / (p * (p - 1.0));
        if (!(ratio < 1.0)) {
          fail(errc::infeasible_level, "no threshold in (0, 1) holds the level at p = " +
                                           std::to_string(p));
        }
        const double rho_sq = 1.0 - std::pow(ratio, 2.0 / (static_cast<double>(n) - 2.0));
        point.n = static_cast<double>(n);
        point.log10_n = std::log10(point.n);
        point.rho = std::sqrt(rho_sq);
        break;
      }
      case Task::Detection: {
        const double n = (std::log(p) - std::log(level)) / regime.beta;
        if (!(n >= 1.0)) fail(errc::infeasible_level, "implied n < 1");
        point.n = n;
        point.log10_n = std::log10(n);
        break;
      }
      case Task::SupportRecovery: {
        const double n =
            (std::pow(p, regime.nu) * std::log(2.0) - std::log(level)) / regime.beta;
        if (!(n >= 1.0)) fail(errc::infeasible_level, "implied n < 1");
        point.n = n;
        point.log10_n = std::log10(n);
        break;
      }
      case Task::ParamEstimation: {
        const double n = regime.beta * p * std::log(p) / level;
        if (!(n >= 1.0)) fail(errc::infeasible_level, "implied n < 1");
        point.n = n;
        point.log10_n = std::log10(n);
        break;
      }
      case Task::PerformanceEstimation: {
        const double log_n = (1.0 + p) / 2.0 * std::log(regime.beta / level);
        if (!(log_n >= 0.0)) fail(errc::infeasible_level, "implied n < 1");
        point.n = std::exp(log_n);  // may overflow to +inf; log10_n stays finite
        point.log10_n = log_n / kLn10;
        break;
      }
    }
    points.push_back(point);
  }
  return points;
}

const char* contextual_name(ContextualKind kind) {
  switch (kind) {
    case ContextualKind::Saturated: return "saturated";
    case ContextualKind::Sparse: return "sparse";
    case ContextualKind::Kronecker: return "kronecker";
    case ContextualKind::KroneckerSparse: return "kronecker_sparse";
  }
  return "unknown";
}

const char* task_name(Task task) {
  switch (task) {
    case Task::Screening: return "screening";
    case Task::Detection: return "detection";
    case Task::SupportRecovery: return "support_recovery";
    case Task::ParamEstimation: return "param_estimation";
    case Task::PerformanceEstimation: return "performance_estimation";
  }
  return "unknown";
}

}  // namespace corrmine
