#pragma once

// Independent reference implementations used to freeze expected values.
// Everything here is deliberately naive (double loops, explicit residual
// vectors) and shares no code with the library paths it checks.

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "corrmine/types.hpp"

namespace oracles {

using corrmine::Index;
using corrmine::Matrix;
using corrmine::Vector;

inline Matrix brute_force_covariance(const Matrix& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  Vector mean = Vector::Zero(p);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < p; ++j) mean(j) += x(k, j);
  }
  mean /= static_cast<double>(n);
  Matrix cov = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Index k = 0; k < n; ++k) acc += (x(k, i) - mean(i)) * (x(k, j) - mean(j));
      cov(i, j) = acc / static_cast<double>(n - 1);
    }
  }
  return cov;
}

/// Max residual of the four Penrose conditions for a candidate pseudoinverse.
inline double penrose_residual(const Matrix& a, const Matrix& g) {
  const double r1 = (a * g * a - a).cwiseAbs().maxCoeff();
  const double r2 = (g * a * g - g).cwiseAbs().maxCoeff();
  const double r3 = ((a * g).transpose() - a * g).cwiseAbs().maxCoeff();
  const double r4 = ((g * a).transpose() - g * a).cwiseAbs().maxCoeff();
  return std::max({r1, r2, r3, r4});
}

/// Support of (I - A)(I - A)^T computed symbolically from the 5-point stencil
/// mask of the n1 x n2 grid: (u, v) touch iff some node is a (possibly
/// degenerate) stencil neighbor of both.
inline std::set<std::pair<Index, Index>> squared_stencil_support(Index n1, Index n2) {
  const Index p = n1 * n2;
  auto node = [&](Index i, Index j) { return i * n2 + j; };
  std::vector<std::vector<Index>> stencil(static_cast<std::size_t>(p));
  for (Index i = 0; i < n1; ++i) {
    for (Index j = 0; j < n2; ++j) {
      auto& row = stencil[static_cast<std::size_t>(node(i, j))];
      row.push_back(node(i, j));
      if (i > 0) row.push_back(node(i - 1, j));
      if (i + 1 < n1) row.push_back(node(i + 1, j));
      if (j > 0) row.push_back(node(i, j - 1));
      if (j + 1 < n2) row.push_back(node(i, j + 1));
    }
  }
  std::set<std::pair<Index, Index>> support;
  for (Index u = 0; u < p; ++u) {
    for (Index v = u; v < p; ++v) {
      const auto& su = stencil[static_cast<std::size_t>(u)];
      const auto& sv = stencil[static_cast<std::size_t>(v)];
      bool overlap = false;
      for (Index a : su) {
        if (std::find(sv.begin(), sv.end(), a) != sv.end()) {
          overlap = true;
          break;
        }
      }
      if (overlap) support.insert({u, v});
    }
  }
  return support;
}

inline std::set<std::pair<Index, Index>> dense_support(const Matrix& m, double cut) {
  std::set<std::pair<Index, Index>> support;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > cut) support.insert({i, j});
    }
  }
  return support;
}

/// CONCORD objective evaluated with explicit residual vectors, no Gram reuse.
inline double naive_concord_objective(const Matrix& omega, const Matrix& raw_data,
                                      double lambda) {
  const Index n = raw_data.rows();
  const Index p = raw_data.cols();
  Matrix y = raw_data;
  for (Index j = 0; j < p; ++j) {
    double mean = 0.0;
    for (Index k = 0; k < n; ++k) mean += raw_data(k, j);
    mean /= static_cast<double>(n);
    for (Index k = 0; k < n; ++k) y(k, j) = raw_data(k, j) - mean;
  }
  double value = 0.0;
  for (Index i = 0; i < p; ++i) value -= static_cast<double>(n) * std::log(omega(i, i));
  for (Index i = 0; i < p; ++i) {
    Vector residual = Vector::Zero(n);
    for (Index j = 0; j < p; ++j) {
      for (Index k = 0; k < n; ++k) residual(k) += omega(i, j) * y(k, j);
    }
    value += 0.5 * residual.squaredNorm();
  }
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) value += lambda * std::abs(omega(i, j));
  }
  return value;
}

/// Golden-section minimizer for unimodal functions.
template <typename F>
double golden_minimize(F f, double lo, double hi, double tol = 1e-9) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return (a + b) / 2.0;
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace oracles
