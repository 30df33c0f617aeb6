#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrmine/errors.hpp"

namespace corrmine {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative magnitude below which a matrix entry counts as a structural zero:
/// |x| <= relative * max|entry|.
struct ZeroTolerance {
  double relative = 1e-12;

  double absolute_for(const Matrix& m) const {
    double scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    return relative * scale;
  }
};

inline constexpr double kSymmetryRelTol = 1e-12;

enum class MatrixRole { Covariance, Correlation, Precision, PartialCorrelation };

inline const char* role_name(MatrixRole role) {
  switch (role) {
    case MatrixRole::Covariance: return "covariance";
    case MatrixRole::Correlation: return "correlation";
    case MatrixRole::Precision: return "precision";
    case MatrixRole::PartialCorrelation: return "partial_correlation";
  }
  return "unknown";
}

/// n samples (rows) by p variables (columns), all entries finite.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values,
                      std::optional<std::vector<std::string>> column_names = {});

  const Matrix& values() const { return values_; }
  Index n() const { return values_.rows(); }
  Index p() const { return values_.cols(); }
  const std::optional<std::vector<std::string>>& column_names() const {
    return column_names_;
  }

 private:
  Matrix values_;
  std::optional<std::vector<std::string>> column_names_;
};

/// Symmetric p-by-p matrix tagged with its statistical role. Construction
/// symmetrizes via (M + M^T)/2 and keeps the pre-symmetrization asymmetry
/// around for diagnostics; inputs that are not symmetric to within
/// kSymmetryRelTol (relative to the largest entry) are rejected.
class SymMatrix {
 public:
  SymMatrix(Matrix values, MatrixRole role, std::optional<Index> rank_hint = {});

  const Matrix& values() const { return values_; }
  MatrixRole role() const { return role_; }
  Index p() const { return values_.rows(); }
  std::optional<Index> rank_hint() const { return rank_hint_; }

  /// max|M - M^T| of the constructor input, relative to max|M|.
  double input_asymmetry() const { return input_asymmetry_; }

  double operator()(Index i, Index j) const { return values_(i, j); }

 private:
  Matrix values_;
  MatrixRole role_;
  std::optional<Index> rank_hint_;
  double input_asymmetry_ = 0.0;
};

/// p unit vectors u_1..u_p stored as the columns of an n-row matrix, each with
/// zero mean, so that u_i . u_j is the sample correlation r_ij.
class UnitSphereMatrix {
 public:
  UnitSphereMatrix(Matrix columns, Index source_n);

  const Matrix& columns() const { return columns_; }
  Index p() const { return columns_.cols(); }
  Index source_n() const { return source_n_; }

 private:
  Matrix columns_;
  Index source_n_;
};

/// Off-diagonal support of a symmetric matrix under the zero tolerance,
/// as (i, j) pairs with i < j.
std::vector<std::pair<Index, Index>> offdiag_support(const Matrix& m,
                                                     ZeroTolerance tol = {});

}  // namespace corrmine
