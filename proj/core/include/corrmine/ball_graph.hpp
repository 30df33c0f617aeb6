#pragma once

#include "corrmine/screening.hpp"
#include "corrmine/types.hpp"

namespace corrmine {

/// Exact mode reproduces brute-force thresholding edge for edge. Approx(eps)
/// range-searches with (1+eps) slack: subtrees entirely within the slack
/// radius are accepted wholesale, which may add near-threshold edges (down to
/// |r_ij| >= 1 - (1+eps)^2 (1-rho)) but never drops an edge with |r_ij| >= rho.
struct BallGraphMode {
  double eps = 0.0;

  bool exact() const { return eps == 0.0; }
  static BallGraphMode Exact() { return {0.0}; }
  static BallGraphMode Approx(double eps) { return {eps}; }
};

/// Connects columns i, j of a unit-norm frame whenever
/// min(|u_i - u_j|, |u_i + u_j|) <= sqrt(2 (1 - rho)), i.e. |u_i . u_j| >= rho,
/// using a k-d tree range search over the doubled point set {+-u_j}.
EdgeGraph ball_graph(const Matrix& unit_columns, double rho,
                     const BallGraphMode& mode = {});

EdgeGraph ball_graph(const UnitSphereMatrix& u, double rho,
                     const BallGraphMode& mode = {});

/// Reference implementation: pairwise dot products, no spatial index.
EdgeGraph ball_graph_brute_force(const Matrix& unit_columns, double rho);

}  // namespace corrmine
