#pragma once

#include <cstddef>
#include <vector>

#include "mtsfm/phase_code.hpp"
#include "mtsfm/waveform.hpp"

namespace mtsfm {

/// Fourier-series phase
///   phi(t) = a0/2 + sum_{k=1}^{K} alpha_k sin(2 pi k t/T) + beta_k cos(2 pi k t/T)
/// on [-T/2, T/2]. alpha[k-1] and beta[k-1] hold the k-th harmonic.
struct MtsfmParams {
  double T = 1.0;
  double a0 = 0.0;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t harmonics() const noexcept { return alpha.size(); }
  bool all_zero() const noexcept;
  void validate() const;

  /// Coefficients packed as [alpha_1..alpha_K, beta_1..beta_K].
  std::vector<double> coefficients() const;
  MtsfmParams with_coefficients(const std::vector<double>& packed) const;

  friend bool operator==(const MtsfmParams&, const MtsfmParams&) = default;
};

/// ceil(N/2), clamped to at least 1.
std::size_t min_harmonics(std::size_t chips);

/// Exact Fourier coefficients of the code's piecewise-constant phase. Each
/// chip contributes closed-form sin/cos antiderivatives; no quadrature.
MtsfmParams fit_fourier(const PhaseCode& code, double T, std::size_t K);

double mtsfm_phase(const MtsfmParams& params, double t);

/// Instantaneous frequency (1/2pi) dphi/dt in Hz, analytic derivative.
double mtsfm_modulation(const MtsfmParams& params, double t);

/// Smallest sample count accepted by synthesize_mtsfm (4K).
std::size_t min_mtsfm_samples(std::size_t K);

/// Phase at the midpoint grid of L samples.
std::vector<double> mtsfm_phase_samples(const MtsfmParams& params, std::size_t L);

SampledWaveform synthesize_mtsfm(const MtsfmParams& params, std::size_t L);

/// beta_rms^2 = (2pi/T)^2 sum_k k^2 (alpha_k^2 + beta_k^2)/2, in (rad/s)^2.
double closed_form_rms_bandwidth(const MtsfmParams& params);

/// d(beta_rms^2)/d(coefficient), packed like MtsfmParams::coefficients().
std::vector<double> rms_bandwidth_gradient(const MtsfmParams& params);

/// Tabulated sin/cos harmonics on the midpoint grid so that repeated phase
/// evaluations for one (T, K, L) cost 2KL multiply-adds and no trig calls.
class HarmonicBasis {
 public:
  HarmonicBasis(double T, std::size_t K, std::size_t L);

  std::size_t harmonics() const noexcept { return K_; }
  std::size_t samples() const noexcept { return L_; }
  double pulse_length() const noexcept { return T_; }

  /// Phase samples for packed coefficients (a0 given separately).
  std::vector<double> phase(double a0, const std::vector<double>& packed) const;

 private:
  double T_;
  std::size_t K_;
  std::size_t L_;
  std::vector<double> sin_;  // K x L, row k-1 is sin(2 pi k t_n / T)
  std::vector<double> cos_;
};

}  // namespace mtsfm
