#include "corrmine/types.hpp"

#include <cmath>

namespace corrmine {

DataMatrix::DataMatrix(Matrix values, std::optional<std::vector<std::string>> column_names)
    : values_(std::move(values)), column_names_(std::move(column_names)) {
  if (values_.rows() < 2) {
    fail(errc::too_few_samples,
         "data matrix needs n >= 2 samples, got n = " + std::to_string(values_.rows()));
  }
  if (values_.cols() < 1) {
    fail(errc::dimension_mismatch, "data matrix needs p >= 1 variables");
  }
  if (!values_.allFinite()) {
    fail(errc::non_finite_input, "data matrix contains NaN or infinite entries");
  }
  if (column_names_ && static_cast<Index>(column_names_->size()) != values_.cols()) {
    fail(errc::dimension_mismatch, "column name count does not match p");
  }
}

SymMatrix::SymMatrix(Matrix values, MatrixRole role, std::optional<Index> rank_hint)
    : values_(std::move(values)), role_(role), rank_hint_(rank_hint) {
  if (values_.rows() != values_.cols()) {
    fail(errc::dimension_mismatch, "SymMatrix requires a square matrix");
  }
  if (!values_.allFinite()) {
    fail(errc::non_finite_input, "SymMatrix contains NaN or infinite entries");
  }
  const double scale = values_.size() > 0 ? values_.cwiseAbs().maxCoeff() : 0.0;
  const double asym =
      values_.size() > 0 ? (values_ - values_.transpose()).cwiseAbs().maxCoeff() : 0.0;
  input_asymmetry_ = scale > 0 ? asym / scale : asym;
  if (input_asymmetry_ > kSymmetryRelTol) {
    fail(errc::not_symmetric, "matrix asymmetry " + std::to_string(input_asymmetry_) +
                                  " exceeds relative tolerance 1e-12");
  }
  values_ = ((values_ + values_.transpose()) / 2.0).eval();

  const Index p = values_.rows();
  if (role == MatrixRole::Correlation || role == MatrixRole::PartialCorrelation) {
    for (Index i = 0; i < p; ++i) {
      if (std::abs(values_(i, i) - 1.0) > 1e-8) {
        fail(errc::domain_error, std::string(role_name(role)) +
                                     " matrix needs unit diagonal, entry " +
                                     std::to_string(i) + " is " +
                                     std::to_string(values_(i, i)));
      }
    }
    if (p > 0 && values_.cwiseAbs().maxCoeff() > 1.0 + 1e-8) {
      fail(errc::domain_error,
           std::string(role_name(role)) + " entries must lie in [-1, 1]");
    }
  } else {
    for (Index i = 0; i < p; ++i) {
      if (values_(i, i) < -kSymmetryRelTol * std::max(scale, 1.0)) {
        fail(errc::domain_error, std::string(role_name(role)) +
                                     " matrix has negative diagonal entry " +
                                     std::to_string(i));
      }
    }
  }
}

UnitSphereMatrix::UnitSphereMatrix(Matrix columns, Index source_n)
    : columns_(std::move(columns)), source_n_(source_n) {
  if (columns_.cols() < 1 || columns_.rows() < 1) {
    fail(errc::dimension_mismatch, "unit-sphere matrix must be non-empty");
  }
  for (Index j = 0; j < columns_.cols(); ++j) {
    const double mean = columns_.col(j).mean();
    const double norm = columns_.col(j).norm();
    if (std::abs(mean) > 1e-10) {
      fail(errc::domain_error,
           "unit-sphere column " + std::to_string(j) + " is not zero mean");
    }
    if (std::abs(norm - 1.0) > 1e-10) {
      fail(errc::domain_error,
           "unit-sphere column " + std::to_string(j) + " is not unit norm");
    }
  }
}

std::vector<std::pair<Index, Index>> offdiag_support(const Matrix& m, ZeroTolerance tol) {
  std::vector<std::pair<Index, Index>> out;
  const double cut = tol.absolute_for(m);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > cut) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace corrmine
