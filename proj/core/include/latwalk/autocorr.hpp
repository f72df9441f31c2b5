#pragma once

#include <cstddef>
#include <span>

namespace latwalk {

/// Integrated autocorrelation time with the convention tau_int = 1/2 + sum_k rho(k),
/// so that Var(mean) ~= 2 tau_int Var(x) / N.
struct AutocorrEstimate {
  double tau_int = 0.5;
  /// Window M chosen by the self-consistent rule M >= c tau_int(M).
  std::size_t window = 0;
  /// False when the rule was never met before M reached N/2 (series too short).
  bool window_ok = true;
  double effective_samples = 0.0;
};

/// Sokal's windowing estimator; autocovariances via FFT.
AutocorrEstimate integrated_autocorr_time(std::span<const double> series, double c = 6.0);

/// Sample mean with its autocorrelation-corrected standard error.
struct ChainEstimate {
  double mean = 0.0;
  double se = 0.0;
  double tau_int = 0.5;
  double effective_samples = 0.0;
};

ChainEstimate chain_estimate(std::span<const double> series);

}  // namespace latwalk
