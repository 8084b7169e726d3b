#include "mtsfm/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mtsfm {

void SamplingConfig::validate() const {
  if (!(pulse_length > 0.0) || !std::isfinite(pulse_length))
    throw std::invalid_argument("pulse length must be positive and finite");
  if (samples_per_chip < kMinSamplesPerChip)
    throw std::invalid_argument("samples per chip must be at least " +
                                std::to_string(kMinSamplesPerChip) + ", got " +
                                std::to_string(samples_per_chip));
  if (zero_pad_factor < 1) throw std::invalid_argument("zero-pad factor must be at least 1");
}

SampledWaveform::SampledWaveform(std::vector<cplx> samples, double pulse_length,
                                 bool phase_discontinuous)
    : samples_(std::move(samples)), T_(pulse_length), discontinuous_(phase_discontinuous) {
  if (samples_.size() < 2) throw std::invalid_argument("a waveform needs at least 2 samples");
  if (!(T_ > 0.0) || !std::isfinite(T_))
    throw std::invalid_argument("pulse length must be positive and finite");
}

double SampledWaveform::energy() const noexcept {
  double acc = 0.0;
  for (const auto& s : samples_) acc += std::norm(s);
  return acc * dt();
}

SampledWaveform SampledWaveform::phase_shifted(double c) const {
  const cplx rot = std::polar(1.0, c);
  std::vector<cplx> out(samples_);
  for (auto& s : out) s *= rot;
  return SampledWaveform(std::move(out), T_, discontinuous_);
}

SampledWaveform SampledWaveform::time_reversed() const {
  return SampledWaveform(std::vector<cplx>(samples_.rbegin(), samples_.rend()), T_, discontinuous_);
}

SampledWaveform synthesize_from_phase(std::span<const double> phase, double pulse_length,
                                      bool phase_discontinuous) {
  if (!(pulse_length > 0.0)) throw std::invalid_argument("pulse length must be positive");
  const double amp = 1.0 / std::sqrt(pulse_length);
  std::vector<cplx> samples(phase.size());
  for (std::size_t n = 0; n < phase.size(); ++n)
    samples[n] = cplx(amp * std::cos(phase[n]), amp * std::sin(phase[n]));
  return SampledWaveform(std::move(samples), pulse_length, phase_discontinuous);
}

SampledWaveform synthesize_pc(const PhaseCode& code, const SamplingConfig& cfg) {
  cfg.validate();
  const std::size_t M = static_cast<std::size_t>(cfg.samples_per_chip);
  std::vector<double> phase;
  phase.reserve(code.size() * M);
  // Midpoint samples never land on a chip boundary, so chip i owns exactly
  // samples [i*M, (i+1)*M).
  for (double phi : code.phases()) phase.insert(phase.end(), M, phi);
  return synthesize_from_phase(phase, cfg.pulse_length, true);
}

SampledWaveform unmodulated_pulse(std::size_t L, double pulse_length) {
  std::vector<double> phase(L, 0.0);
  return synthesize_from_phase(phase, pulse_length, false);
}

}  // namespace mtsfm
