#pragma once

#include <vector>

#include "corrmine/screening.hpp"
#include "corrmine/types.hpp"

namespace corrmine {

struct ConcordOptions {
  double tol = 1e-6;        ///< max coordinate change per sweep to declare convergence
  int max_sweeps = 500;
  bool standardize = false;  ///< scale centered columns to unit variance first
};

struct ConcordState {
  SymMatrix omega;
  double lambda = 0;
  int sweeps = 0;
  std::vector<double> objective_trace;  ///< objective at start and after each sweep
  bool converged = false;
  double kkt_residual = 0;  ///< max one-coordinate update displacement at the solution
};

/// The pseudo-likelihood objective
///   Q(O) = -sum_i n log o_ii + 1/2 sum_i |o_ii Y_i + sum_{j != i} o_ij Y_j|^2
///          + lambda sum_{i<j} |o_ij|
/// with Y_i the centered i-th data column. Requires a positive diagonal.
double concord_objective(const SymMatrix& omega, const DataMatrix& data,
                         double lambda);

/// Smallest penalty at which the all-diagonal start (o_ii = sqrt(n / |Y_i|^2))
/// is already stationary: max_{i<j} |Y_i . Y_j| (o_ii + o_jj).
double concord_lambda_max(const DataMatrix& data);

/// Cyclic coordinate descent on Q. Off-diagonal updates soft-threshold the
/// coupled residual inner product by lambda and divide by |Y_i|^2 + |Y_j|^2;
/// diagonal updates take the positive root of the stationarity quadratic.
/// Diagonals are estimated jointly inside the descent rather than plugged in
/// from a separate pre-estimate. The recorded objective trace is
/// non-increasing.
ConcordState concord_fit(const DataMatrix& data, double lambda,
                         const ConcordOptions& opts = {});

/// Same fit started from a given symmetric iterate with positive diagonal.
ConcordState concord_fit_from(const DataMatrix& data, double lambda,
                              const Matrix& init, const ConcordOptions& opts = {});

/// Warm-started fits along a strictly decreasing positive penalty grid.
std::vector<ConcordState> concord_path(const DataMatrix& data,
                                       const std::vector<double>& lambda_grid,
                                       const ConcordOptions& opts = {});

struct SupportMetrics {
  Index true_positive = 0;
  Index false_positive = 0;
  Index false_negative = 0;
  Index true_nonzeros = 0;
  double sign_agreement = 0;  ///< over true nonzeros; an estimated zero disagrees
  double f1 = 0;
};

/// Off-diagonal support comparison under the zero tolerance (applied to each
/// matrix's own scale). sign_agreement is 1 for an empty true support.
SupportMetrics support_metrics(const SymMatrix& estimate, const SymMatrix& truth,
                               ZeroTolerance tol = {});
SupportMetrics support_metrics(const EdgeGraph& estimate, const SymMatrix& truth,
                               ZeroTolerance tol = {});

}  // namespace corrmine
