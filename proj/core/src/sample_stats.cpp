#include "corrmine/sample_stats.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace corrmine {

namespace {

Matrix centered_columns(const Matrix& x) {
  return x.rowwise() - x.colwise().mean();
}

}  // namespace

SymMatrix sample_covariance(const DataMatrix& data) {
  const Matrix centered = centered_columns(data.values());
  const double divisor = static_cast<double>(data.n() - 1);
  Matrix cov = (centered.transpose() * centered) / divisor;
  return SymMatrix(std::move(cov), MatrixRole::Covariance);
}

SymMatrix correlation_matrix(const SymMatrix& cov) {
  if (cov.role() != MatrixRole::Covariance) {
    fail(errc::role_mismatch, "correlation_matrix expects a covariance input");
  }
  const Matrix& s = cov.values();
  const Index p = cov.p();
  Vector inv_sd(p);
  for (Index i = 0; i < p; ++i) {
    if (!(s(i, i) > 0.0)) {
      fail(errc::zero_variance,
           "variable " + std::to_string(i) + " has non-positive variance");
    }
    inv_sd(i) = 1.0 / std::sqrt(s(i, i));
  }
  Matrix r = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  // correlations can poke past 1 by rounding; clamp before role validation
  r = r.cwiseMax(-1.0).cwiseMin(1.0);
  return SymMatrix(std::move(r), MatrixRole::Correlation);
}

SymMatrix precision(const SymMatrix& cov, InverseMode mode, const PrecisionOptions& opts) {
  if (cov.role() != MatrixRole::Covariance && cov.role() != MatrixRole::Correlation) {
    fail(errc::role_mismatch, "precision expects a covariance or correlation input");
  }
  const Index p = cov.p();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov.values());
  if (eig.info() != Eigen::Success) {
    fail(errc::numerical_error, "eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();  // ascending
  const double lambda_max = lambda(p - 1);

  if (mode == InverseMode::Strict) {
    const double lambda_min = lambda(0);
    if (!(lambda_min > 0.0) || lambda_max / lambda_min > opts.condition_cap) {
      fail(errc::singular_matrix,
           "matrix is numerically singular: condition estimate above cap");
    }
    Matrix omega = eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
                   eig.eigenvectors().transpose();
    omega = ((omega + omega.transpose()) / 2.0).eval();
    return SymMatrix(std::move(omega), MatrixRole::Precision);
  }

  const double rel_cutoff =
      opts.rank_cutoff.value_or(static_cast<double>(p) *
                                std::numeric_limits<double>::epsilon());
  const double cutoff = rel_cutoff * std::max(lambda_max, 0.0);
  Vector inv = Vector::Zero(p);
  Index rank = 0;
  for (Index i = 0; i < p; ++i) {
    if (lambda(i) > cutoff && lambda(i) > 0.0) {
      inv(i) = 1.0 / lambda(i);
      ++rank;
    }
  }
  Matrix omega = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  omega = ((omega + omega.transpose()) / 2.0).eval();
  return SymMatrix(std::move(omega), MatrixRole::Precision, rank);
}

SymMatrix partial_correlation(const SymMatrix& prec) {
  if (prec.role() != MatrixRole::Precision) {
    fail(errc::role_mismatch, "partial_correlation expects a precision input");
  }
  const Matrix& omega = prec.values();
  const Index p = prec.p();
  Vector inv_sd(p);
  for (Index i = 0; i < p; ++i) {
    if (!(omega(i, i) > 0.0)) {
      fail(errc::non_positive_diagonal,
           "precision diagonal entry " + std::to_string(i) + " is not positive");
    }
    inv_sd(i) = 1.0 / std::sqrt(omega(i, i));
  }
  Matrix pc = inv_sd.asDiagonal() * omega * inv_sd.asDiagonal();
  pc.diagonal().setOnes();
  pc = pc.cwiseMax(-1.0).cwiseMin(1.0);
  return SymMatrix(std::move(pc), MatrixRole::PartialCorrelation, prec.rank_hint());
}

UnitSphereMatrix zscore_project(const DataMatrix& data) {
  Matrix u = centered_columns(data.values());
  for (Index j = 0; j < u.cols(); ++j) {
    const double norm = u.col(j).norm();
    if (!(norm > 0.0)) {
      fail(errc::zero_variance, "variable " + std::to_string(j) + " is constant");
    }
    u.col(j) /= norm;
  }
  return UnitSphereMatrix(std::move(u), data.n());
}

ParcorFrame partial_correlation_frame(const DataMatrix& data,
                                      std::optional<double> rank_cutoff) {
  const Index n = data.n();
  const Index p = data.p();
  const Matrix u = zscore_project(data).columns();

  ParcorFrame frame;
  if (n > p) {
    // R = U^T U invertible (generically): R^{-1} = W^T W with W = L^{-1/2} V^T.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(u.transpose() * u);
    if (eig.info() != Eigen::Success) fail(errc::numerical_error, "eigendecomposition failed");
    const Vector& lambda = eig.eigenvalues();
    const double cutoff = rank_cutoff.value_or(static_cast<double>(p) *
                                               std::numeric_limits<double>::epsilon()) *
                          lambda(p - 1);
    if (!(lambda(0) > cutoff)) {
      fail(errc::singular_matrix, "sample correlation is rank deficient; use n <= p path");
    }
    frame.columns = lambda.cwiseSqrt().cwiseInverse().asDiagonal() *
                    eig.eigenvectors().transpose();
    frame.rank = p;
    frame.pseudo = false;
  } else {
    // R^+ = W^T W with W = L^{-1} V^T U from the n x n Gram K = U U^T.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(u * u.transpose());
    if (eig.info() != Eigen::Success) fail(errc::numerical_error, "eigendecomposition failed");
    const Vector& lambda = eig.eigenvalues();
    const double cutoff = rank_cutoff.value_or(static_cast<double>(n) *
                                               std::numeric_limits<double>::epsilon()) *
                          std::max(lambda(n - 1), 0.0);
    Index rank = 0;
    for (Index i = 0; i < n; ++i) {
      if (lambda(i) > cutoff && lambda(i) > 0.0) ++rank;
    }
    if (rank == 0) fail(errc::singular_matrix, "sample correlation has rank zero");
    Matrix w(rank, p);
    Index row = 0;
    for (Index i = 0; i < n; ++i) {
      if (lambda(i) > cutoff && lambda(i) > 0.0) {
        w.row(row++) = (eig.eigenvectors().col(i).transpose() * u) / lambda(i);
      }
    }
    frame.columns = std::move(w);
    frame.rank = rank;
    frame.pseudo = true;
  }

  for (Index j = 0; j < p; ++j) {
    const double norm = frame.columns.col(j).norm();
    if (!(norm > 0.0)) {
      fail(errc::numerical_error,
           "partial correlation undefined: variable " + std::to_string(j) +
               " has zero weight in the retained row space");
    }
    frame.columns.col(j) /= norm;
  }
  return frame;
}

SymMatrix partial_correlation_pseudo(const DataMatrix& data,
                                     std::optional<double> rank_cutoff) {
  const ParcorFrame frame = partial_correlation_frame(data, rank_cutoff);
  Matrix pc = frame.columns.transpose() * frame.columns;
  pc.diagonal().setOnes();
  pc = pc.cwiseMax(-1.0).cwiseMin(1.0);
  return SymMatrix(std::move(pc), MatrixRole::PartialCorrelation, frame.rank);
}

}  // namespace corrmine
