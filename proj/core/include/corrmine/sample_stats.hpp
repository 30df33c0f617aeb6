#pragma once

#include <optional>

#include "corrmine/types.hpp"

namespace corrmine {

enum class InverseMode { Strict, Pseudo };

struct PrecisionOptions {
  /// Strict mode rejects inputs whose eigenvalue condition estimate exceeds this.
  double condition_cap = 1e12;
  /// Pseudo mode drops eigenvalues below cutoff * lambda_max; defaults to
  /// p * machine epsilon when unset.
  std::optional<double> rank_cutoff = {};
};

/// Unbiased sample covariance (1/(n-1)) sum_k (X_k - mean)(X_k - mean)^T.
SymMatrix sample_covariance(const DataMatrix& data);

/// R = diag(S)^{-1/2} S diag(S)^{-1/2}; requires strictly positive variances.
SymMatrix correlation_matrix(const SymMatrix& cov);

/// Inverse (Strict) or Moore-Penrose pseudoinverse (Pseudo) via symmetric
/// eigendecomposition. Accepts Covariance or Correlation inputs; Pseudo mode
/// records the retained rank in the result's rank_hint.
SymMatrix precision(const SymMatrix& cov, InverseMode mode,
                    const PrecisionOptions& opts = {});

/// P = diag(O)^{-1/2} O diag(O)^{-1/2} with unit diagonal. Note: this follows
/// the unsigned convention (no negation of off-diagonal entries), so signs
/// are those of the precision matrix itself; screening uses magnitudes only.
SymMatrix partial_correlation(const SymMatrix& prec);

/// Columns centered and scaled to unit norm, so the Gram matrix of the result
/// equals the sample correlation matrix.
UnitSphereMatrix zscore_project(const DataMatrix& data);

/// Unit-norm frame whose Gram matrix is the sample partial correlation matrix
/// built from the inverse (n > rank) or Moore-Penrose pseudoinverse of the
/// sample correlation matrix. Columns live in rank-many dimensions.
struct ParcorFrame {
  Matrix columns;
  Index rank = 0;
  bool pseudo = false;
};

ParcorFrame partial_correlation_frame(const DataMatrix& data,
                                      std::optional<double> rank_cutoff = {});

/// Dense sample partial correlation assembled from partial_correlation_frame;
/// the n << p screening path (pseudoinverse of the sample correlation).
SymMatrix partial_correlation_pseudo(const DataMatrix& data,
                                     std::optional<double> rank_cutoff = {});

}  // namespace corrmine
