#pragma once

#include <optional>
#include <vector>

#include "corrmine/types.hpp"

namespace corrmine {

/// Contextual-information models for estimating a q r x q r spatio-temporal
/// precision matrix. The bound is the asymptotic log Frobenius error of the
/// matched MAP estimator:
///   Saturated        1/2 log(q^2 r^2 / n)
///   Sparse           1/2 log(q r log(q r) / n)
///   Kronecker        1/2 log((q^2 + r^2) log M / n)
///   KroneckerSparse  1/2 log((q + r) log M / n)
/// M defaults to max(q, r, n) and can be overridden.
enum class ContextualKind { Saturated, Sparse, Kronecker, KroneckerSparse };

struct ContextualModel {
  ContextualKind kind = ContextualKind::Saturated;
  double q = 0;
  double r = 0;
  std::optional<double> scale_m = {};  ///< the M in the log M terms

  double m_for(double n) const;
  void validate() const;
};

double contextual_bound(const ContextualModel& model, double n);

struct IsoclinePoint {
  double p = 0;
  double n = 0;        ///< may be +inf when only the log is representable
  double log10_n = 0;
  std::optional<double> rho = {};  ///< screening rows report the threshold used
};

/// Constant-bound contours over a p grid with q = r = sqrt(p): solves
/// contextual_bound = level for n at each p (fixed-point on M when M depends
/// on n). Any p >= 4 is accepted; sqrt(p) need not be an integer. Throws
/// infeasible_level when the implied n drops below 1.
std::vector<IsoclinePoint> contextual_isocline(const ContextualModel& model,
                                               double level,
                                               const std::vector<double>& p_grid);

/// Task ladder risk bounds:
///   Screening        1 - exp(-kappa_n)         (kappa_n from the screening law)
///   Detection        p exp(-n beta)
///   SupportRecovery  2^(p^nu) exp(-n beta)
///   ParamEstimation  (p log p / n) beta
///   PerfEstimation   n^(-2/(1+p)) beta
/// The screening row matches the screening law's p_e = 1 - exp(-kappa_n).
enum class Task { Screening, Detection, SupportRecovery, ParamEstimation, PerformanceEstimation };

struct TaskRegime {
  Task task = Task::Screening;
  double alpha = 1.0;  ///< regime-ray constant (reported, not used in bounds)
  double beta = 1.0;
  double nu = 0.5;  ///< SupportRecovery only, in (0, 1]

  void validate() const;
};

/// log of the bound; finite even when 2^(p^nu) overflows.
double task_bound_log(const TaskRegime& regime, double n, double p,
                      std::optional<double> kappa_n = {});

/// The bound itself (exp of the above; may overflow to +inf).
double task_bound(const TaskRegime& regime, double n, double p,
                  std::optional<double> kappa_n = {});

struct TaskIsoclineOptions {
  Index screening_n = 5;  ///< the fixed n of the purely high dimensional row
};

/// Required n per grid p to hold the bound at `level`. The screening row has
/// constant n: the threshold rho is raised with p instead (reported in rho).
std::vector<IsoclinePoint> task_isocline(const TaskRegime& regime, double level,
                                         const std::vector<double>& p_grid,
                                         const TaskIsoclineOptions& opts = {});

const char* contextual_name(ContextualKind kind);
const char* task_name(Task task);

}  // namespace corrmine
