#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <utility>
#include <vector>

#include "corrmine/types.hpp"

namespace corrmine {

/// Finite-difference Poisson field on an N1 x N2 grid with zero boundary.
struct PoissonFieldConfig {
  Index n1 = 0;
  Index n2 = 0;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double sigma_w = 1.0;

  Index p() const { return n1 * n2; }
  void validate() const;
};

struct SparsePrecisionConfig {
  Index p = 0;
  Index s = 0;  ///< max off-diagonal nonzeros per row
  double min_magnitude = 0.3;
  double max_magnitude = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct KroneckerConfig {
  Index q = 0;
  Index r = 0;
  int k = 1;  ///< Kronecker rank; only k = 1 is supported
  Index s_a = 1;
  Index s_b = 1;
  double min_magnitude = 0.3;
  double max_magnitude = 1.0;
  std::uint64_t seed = 0;

  Index p() const { return q * r; }
  void validate() const;
};

/// The sparse lexicographic-order operator I - A of the discretized field;
/// A carries weight delta2^2/(2(delta1^2+delta2^2)) for (i +- 1, j) neighbors
/// and delta1^2/(2(delta1^2+delta2^2)) for (i, j +- 1) neighbors, zero off-grid.
Eigen::SparseMatrix<double> poisson_field_operator(const PoissonFieldConfig& cfg);

/// Omega = (I - A)(I - A)^T / sigma_w^2, dense. Positive definite with the
/// banded support induced by squaring the 5-point stencil.
SymMatrix poisson_field_precision(const PoissonFieldConfig& cfg);

/// Sparse variant of poisson_field_precision for large grids.
Eigen::SparseMatrix<double> poisson_field_precision_sparse(const PoissonFieldConfig& cfg);

/// One field realization: draw W ~ N(0, sigma_w^2 I), solve (I - A) X = W,
/// reshape to the N1 x N2 grid (row index = u1 direction).
Matrix poisson_field_sample(const PoissonFieldConfig& cfg, std::uint64_t seed);

/// n vectorized realizations as rows; sample k draws from substream k, so the
/// result does not depend on evaluation order.
DataMatrix poisson_field_data(const PoissonFieldConfig& cfg, Index n, std::uint64_t seed);

/// The lattice edges (|di| + |dj| = 1 neighbor pairs) of the N1 x N2 grid in
/// lexicographic vertex order; the "cartesian" support of the field's graph.
std::vector<std::pair<Index, Index>> grid_adjacency(Index n1, Index n2);

/// Symmetric, <= s off-diagonal nonzeros per row, diagonally dominant (hence
/// positive definite), deterministic in the config seed.
SymMatrix sparse_random_precision(const SparsePrecisionConfig& cfg);

struct KroneckerModel {
  Matrix factor_a;  ///< q x q sparse PD factor
  Matrix factor_b;  ///< r x r sparse PD factor
  SymMatrix omega;  ///< A (x) B, lexicographic indexing (a-index outer)
};

KroneckerModel kronecker_model(const KroneckerConfig& cfg);
SymMatrix kronecker_precision(const KroneckerConfig& cfg);

/// n i.i.d. zero-mean Gaussian rows with the covariance described by `model`
/// (Covariance role: Sigma itself; Precision role: Sigma = model^{-1}).
/// Row k draws from substream k; results are identical for any thread count.
DataMatrix sample_gaussian(const SymMatrix& model, Index n, std::uint64_t seed,
                           int threads = 1);

}  // namespace corrmine
