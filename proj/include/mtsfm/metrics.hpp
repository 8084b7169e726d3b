#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mtsfm/waveform.hpp"

namespace mtsfm {

/// Raised by mainlobe-dependent metrics when the ACF has no interior null.
class DegenerateMainlobe : public std::domain_error {
 public:
  DegenerateMainlobe()
      : std::domain_error("ACF has no null before tau = T; mainlobe metrics are undefined") {}
};

/// DC-centered |S(f)|^2 normalized so that sum(psd) * df equals the energy.
struct Spectrum {
  std::vector<double> freqs;  // Hz, ascending
  std::vector<double> psd;
  double df = 0.0;
  double centroid = 0.0;  // Hz
};

Spectrum spectrum(const SampledWaveform& w, int zero_pad_factor = kDefaultZeroPad);

struct Compactness {
  double fraction = 0.0;
  double delta_f = 0.0;   // band actually integrated, Hz
  bool clamped = false;   // requested band exceeded the analysis span
};

/// Energy fraction in [-delta_f/2, delta_f/2]: trapezoid over the PSD with
/// linear interpolation at the band edges.
Compactness spectral_compactness(const Spectrum& sp, double delta_f);

/// 2 pi sqrt(sum (f - f0)^2 psd df) in rad/s, about the spectrum's centroid.
double rms_bandwidth_spectral(const Spectrum& sp);

/// Aperiodic ACF R(tau) = int s(t) s*(t + tau) dt at lags m/f_s for
/// m = -L..L, so the axis spans [-T, T] and R(+-T) = 0.
struct AcfResult {
  std::vector<double> lags;
  std::vector<cplx> values;
  double dt = 0.0;
  double pulse_length = 0.0;
  double first_null = 0.0;  // Delta tau, seconds
  bool degenerate = false;  // no interior null; first_null == T

  std::size_t center() const noexcept { return values.size() / 2; }
  /// |R| at non-negative lags, index m <-> tau = m dt.
  std::vector<double> positive_magnitude() const;
};

AcfResult acf(const SampledWaveform& w);

struct FirstNull {
  double tau = 0.0;
  bool degenerate = false;
};

/// First null of |R| scanning outward from tau = 0: either a phase reversal
/// between adjacent lags (a zero crossed between samples, located on the
/// interpolated R) or the first strict local minimum of |R|, refined with a
/// parabola. Returns T with the degenerate flag when neither occurs before T.
FirstNull first_null(const AcfResult& a);

/// chi(tau, nu) for each Doppler value; row i corresponds to doppler[i].
struct Ambiguity {
  std::vector<double> lags;
  std::vector<double> doppler;
  std::vector<cplx> values;  // row-major, doppler.size() x lags.size()

  cplx at(std::size_t doppler_index, std::size_t lag_index) const {
    return values[doppler_index * lags.size() + lag_index];
  }
};

Ambiguity ambiguity(const SampledWaveform& w, const std::vector<double>& doppler);

/// int_{-dtau}^{dtau} |R|^2 dtau using a.first_null. Throws on a degenerate ACF.
double mainlobe_area(const AcfResult& a);
/// Same integral with an explicit mainlobe half-width (no degeneracy check).
double mainlobe_area(const AcfResult& a, double delta_tau);

/// 20 log10 max_{dtau <= tau <= T} |R(tau)|.
double psl_db(const AcfResult& a);
/// 10 log10 of the sidelobe-to-mainlobe |R|^2 area ratio over tau >= 0.
double isr_db(const AcfResult& a);
/// 10 log10 of (int_sl |R|^p / int_ml |R|^p)^(2/p).
double gisr_db(const AcfResult& a, int p);
/// Linear GISR (the quantity inside the log above).
double gisr_linear(const AcfResult& a, int p);

struct MetricsConfig {
  int p = 10;
  double delta_f = 0.0;  // Hz; required > 0
  int zero_pad_factor = kDefaultZeroPad;
};

struct MetricsReport {
  MetricsConfig config;
  Compactness sc;
  double delta_tau = 0.0;
  bool degenerate = false;
  std::optional<double> mainlobe_area;
  std::optional<double> psl_db;
  std::optional<double> isr_db;
  std::optional<double> gisr_db;
  double beta_rms = 0.0;  // rad/s
  /// beta_rms depends on the analysis span (discontinuous phase).
  bool beta_rms_span_limited = false;
};

/// Full metric suite. beta_rms is taken from the unpadded spectrum, whose
/// bins sit on the 1/T Fourier-series grid of the periodically extended
/// pulse; padded spectra add rect-edge leakage that grows with the span.
MetricsReport evaluate(const SampledWaveform& w, const MetricsConfig& cfg);

}  // namespace mtsfm
