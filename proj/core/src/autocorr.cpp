#include "latwalk/autocorr.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "latwalk/error.hpp"

namespace latwalk {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Normalised autocorrelation rho(k), k = 0..N-1. Zero-padded to 2N to avoid wraparound.
std::vector<double> autocorrelation(std::span<const double> series, double mean) {
  const std::size_t n = series.size();
  std::vector<double> padded(2 * next_pow2(n), 0.0);
  for (std::size_t i = 0; i < n; ++i) padded[i] = series[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, padded);
  for (auto& f : freq) f *= std::conj(f);
  std::vector<std::complex<double>> back;
  fft.inv(back, freq);

  std::vector<double> rho(n, 0.0);
  const double c0 = back[0].real();
  if (c0 <= 0.0) return rho;
  for (std::size_t k = 0; k < n; ++k) rho[k] = back[k].real() / c0;
  return rho;
}

}  // namespace

AutocorrEstimate integrated_autocorr_time(std::span<const double> series, double c) {
  AutocorrEstimate est;
  const std::size_t n = series.size();
  if (n < 2) throw InvalidArgument("autocorrelation needs at least two samples");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);

  const auto rho = autocorrelation(series, mean);
  if (rho[0] == 0.0) {
    // Constant series: no fluctuation to correlate.
    est.effective_samples = static_cast<double>(n);
    return est;
  }

  double tau = 0.5;
  std::size_t m = 1;
  est.window_ok = false;
  for (; m < n / 2; ++m) {
    tau += rho[m];
    if (static_cast<double>(m) >= c * tau) {
      est.window_ok = true;
      break;
    }
  }
  // Anticorrelated chains can drive the sum below 1/2; clamp to the iid value.
  est.tau_int = std::max(tau, 0.5);
  est.window = m;
  est.effective_samples = static_cast<double>(n) / (2.0 * est.tau_int);
  return est;
}

ChainEstimate chain_estimate(std::span<const double> series) {
  const auto ac = integrated_autocorr_time(series);
  const auto n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= (n - 1.0);

  ChainEstimate out;
  out.mean = mean;
  out.tau_int = ac.tau_int;
  out.effective_samples = ac.effective_samples;
  out.se = std::sqrt(var * 2.0 * ac.tau_int / n);
  return out;
}

}  // namespace latwalk
