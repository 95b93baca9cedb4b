#pragma once

#include <span>
#include <string>
#include <vector>

#include "intertwine/coupling.hpp"
#include "intertwine/stats.hpp"

namespace intertwine {

struct ChiSquareCheck {
  std::string label;
  double t = 0;
  long y = -1;  // conditioning state, -1 when unconditioned
  std::size_t n = 0;
  stats::TestResult result;
};

struct CouplingDiagnostics {
  std::size_t samples = 0;
  std::size_t absorbed = 0;
  std::size_t events = 0;
  std::vector<double> tau;  // absorbed runs only, in trajectory order
  double tau_mean = 0;
  double ks_statistic = 0;
  double ks_pvalue = 1;
  double histogram_width = 0;
  std::vector<std::size_t> tau_histogram;
  std::vector<ChiSquareCheck> marginal;
  std::vector<ChiSquareCheck> conditional;
  ChiSquareCheck stationary;
  ChiSquareCheck independence;

  /// Every test p-value is at least alpha.
  bool all_accept(double alpha) const;
};

/// Statistical checks of a batch simulated from the Yule-to-Ehrenfest pair
/// (D_N, link, L_N) with Y_0 ~ m0:
///  - X_t against ehrenfest_evolve(N, m0 link, t),
///  - X_t given Y_t = y against link(y, .) when the bucket has >= min_bucket runs,
///  - X_tau against pi_N, and X_tau against tau quartiles (independence),
///  - tau against the hypoexponential law started from the levels of m0 (KS).
CouplingDiagnostics diagnose_coupling(const UniformizedPair& pair, std::span<const Rational> m0,
                                      std::span<const Trajectory> runs, std::span<const double> times,
                                      std::size_t min_bucket = 500);

}  // namespace intertwine
