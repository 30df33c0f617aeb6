#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "corrmine/sample_stats.hpp"
#include "corrmine/types.hpp"

namespace corrmine {

/// The analytic bundle for thresholding a sample (partial) correlation matrix
/// at level rho with n samples and p variables:
///   a_n     = Gamma((n-1)/2) / (sqrt(pi) Gamma((n-2)/2))
///   e_n     = p (p-1) (1 - rho^2)^{(n-2)/2}
///   kappa_n = e_n a_n / (n-2)
///   p_e     = 1 - exp(-kappa_n)
///   rho_c   = sqrt(1 - (a_n (p-1))^{-2/(n-4)})   (NaN when n < 5)
/// e_n here is the finite-(p, rho) evaluation of the limit rate; p_e built
/// from it is the working large-p approximation of the false-positive
/// probability, used as such throughout, including for finite p.
///
/// Convention note: kappa_n is the limiting intensity of the false-EDGE count
/// (the exact per-pair tail integrates to kappa_n / (p(p-1)/2) / rho as rho
/// nears 1), so the familywise probability is 1 - exp(-kappa_n). A variant
/// with an extra factor 1/2 in the exponent circulates; it corresponds to
/// halving the ordered-pair intensity twice and undercounts false edges by
/// about 2/rho, which Monte Carlo rejects decisively at n = 20, p = 1000.
struct ScreeningLaw {
  Index n = 0;
  double p = 0;
  double rho = 0;
  double a_n = 0;
  double e_n = 0;
  double kappa_n = 0;
  double p_e = 0;
  double rho_c = 0;  ///< NaN for n in {3, 4}
  double log_e_n = 0;
  double log_kappa_n = 0;
};

/// a_n, the n-2 dimensional unit-sphere constant, via log-gamma differences.
double sphere_constant(Index n);

/// Critical threshold rho_c below which false edges explode. Requires n >= 5;
/// also requires a_n (p-1) >= 1, otherwise the expression has no real value.
double critical_threshold(Index n, double p);

/// Evaluates the full law at (n, p, rho); log-space internally so huge p and
/// n do not overflow or underflow.
ScreeningLaw false_positive_prob(Index n, double p, double rho);

struct SampleSizeOptions {
  long long cap = 1000000000;  ///< search gives up above this n
};

/// Smallest integer n >= 5 with p_e(n, p, rho) <= fwer. Exploits that p_e
/// decreases in n (asserted along the search path; falls back to a linear
/// scan if a violation is ever observed).
long long min_sample_size(double p, double rho, double fwer,
                          const SampleSizeOptions& opts = {});

/// rho solving p_e(n, p, rho) = fwer, bisected to 1e-10.
double min_detectable_correlation(Index n, double p, double fwer);

struct Edge {
  Index i = 0;
  Index j = 0;       ///< i < j
  double weight = 0;  ///< matrix entry (signed)
};

struct EdgeGraph {
  Index p = 0;
  double threshold_used = 0;
  std::vector<Edge> edges;  ///< unique, sorted by (i, j)

  std::vector<Index> degrees() const;
};

struct ScreenResult {
  EdgeGraph graph;
  Index n_e = 0;
  Index hub_degree = 1;
  std::vector<Index> hubs;  ///< vertices with degree >= hub_degree, ascending
  std::optional<ScreeningLaw> law;
};

/// Thresholds |m_ij| >= rho over i < j. The matrix must carry a Correlation
/// or PartialCorrelation role. When the sample count behind m is known, the
/// analytic law at (n, p, rho) is attached.
ScreenResult screen_edges(const SymMatrix& m, double rho,
                          std::optional<Index> sample_n = {},
                          Index hub_degree = 1);

std::vector<Index> screen_hubs(const ScreenResult& result, Index min_degree);

struct PhasePoint {
  double rho = 0;
  double mean_ne = 0;        ///< mean false-edge count over trials
  double prob_positive = 0;  ///< empirical P(N_e > 0)
  double analytic_pe = 0;    ///< law p_e at this rho
};

struct PhaseCurve {
  Index n = 0;
  Index p = 0;
  std::vector<PhasePoint> points;
  std::vector<double> trial_max;  ///< per-trial max off-diagonal |entry|
  bool pseudo_path = false;       ///< Moore-Penrose path was used (n <= p)
};

/// Monte Carlo phase-transition experiment: for each trial, draw an n x p
/// sample from the null model (identity covariance when absent), form the
/// sample partial correlation (Moore-Penrose path when n <= p), and count
/// off-diagonal entries exceeding each threshold in rho_grid. Trial t uses
/// seed substream t, so results are identical for any worker count.
PhaseCurve phase_transition_curve(Index n, Index p, std::vector<double> rho_grid,
                                  int trials,
                                  const std::optional<SymMatrix>& null_model,
                                  std::uint64_t seed, int threads = 1);

}  // namespace corrmine
