#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mtsfm/phase_code.hpp"

namespace mtsfm {

using cplx = std::complex<double>;

inline constexpr int kDefaultSamplesPerChip = 32;
inline constexpr int kMinSamplesPerChip = 8;
inline constexpr int kDefaultZeroPad = 4;

struct SamplingConfig {
  double pulse_length = 1.0;                       // T, seconds
  int samples_per_chip = kDefaultSamplesPerChip;   // M
  int zero_pad_factor = kDefaultZeroPad;

  void validate() const;
};

/// Unit-energy complex baseband samples on the midpoint grid
/// t_n = -T/2 + (n + 1/2)/f_s, n = 0..L-1, with f_s = L/T.
class SampledWaveform {
 public:
  SampledWaveform(std::vector<cplx> samples, double pulse_length, bool phase_discontinuous = false);

  std::span<const cplx> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double pulse_length() const noexcept { return T_; }
  double sample_rate() const noexcept { return static_cast<double>(samples_.size()) / T_; }
  double dt() const noexcept { return T_ / static_cast<double>(samples_.size()); }
  double time(std::size_t n) const noexcept {
    return -0.5 * T_ + (static_cast<double>(n) + 0.5) * dt();
  }
  /// sum |s[n]|^2 / f_s
  double energy() const noexcept;
  /// True when built from a piecewise-constant phase (PC synthesis). Such
  /// waveforms have no finite continuous-time RMS bandwidth.
  bool phase_discontinuous() const noexcept { return discontinuous_; }

  /// Samples multiplied by exp(j*c).
  SampledWaveform phase_shifted(double c) const;
  /// s(-t) on the same grid.
  SampledWaveform time_reversed() const;

 private:
  std::vector<cplx> samples_;
  double T_;
  bool discontinuous_;
};

/// Constant-modulus samples exp(j*phase[n]) scaled to unit energy.
SampledWaveform synthesize_from_phase(std::span<const double> phase, double pulse_length,
                                      bool phase_discontinuous = false);

/// PC waveform with N * samples_per_chip samples.
SampledWaveform synthesize_pc(const PhaseCode& code, const SamplingConfig& cfg);

/// The unmodulated rectangular pulse of L samples.
SampledWaveform unmodulated_pulse(std::size_t L, double pulse_length);

}  // namespace mtsfm
