#include "mtsfm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace mtsfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Integral over [a, b] of the linear interpolant through y[m] at x = m*h.
double integrate_linear(const std::vector<double>& y, double h, double a, double b) {
  if (!(b > a) || y.size() < 2) return 0.0;
  const double xmax = h * static_cast<double>(y.size() - 1);
  a = std::clamp(a, 0.0, xmax);
  b = std::clamp(b, 0.0, xmax);
  auto value = [&](double x) {
    const double pos = x / h;
    auto m = static_cast<std::size_t>(std::floor(pos));
    if (m >= y.size() - 1) return y.back();
    const double frac = pos - static_cast<double>(m);
    return y[m] + frac * (y[m + 1] - y[m]);
  };
  const auto first = static_cast<std::size_t>(std::floor(a / h));
  const auto last = std::min(static_cast<std::size_t>(std::ceil(b / h)), y.size() - 1);
  double acc = 0.0;
  for (std::size_t m = first; m < last; ++m) {
    const double lo = std::max(a, h * static_cast<double>(m));
    const double hi = std::min(b, h * static_cast<double>(m + 1));
    if (hi <= lo) continue;
    const double ylo = (lo == h * static_cast<double>(m)) ? y[m] : value(lo);
    const double yhi = (hi == h * static_cast<double>(m + 1)) ? y[m + 1] : value(hi);
    acc += 0.5 * (hi - lo) * (ylo + yhi);
  }
  return acc;
}

std::vector<cplx> padded(std::span<const cplx> x, std::size_t n) {
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  std::copy(x.begin(), x.end(), out.begin());
  return out;
}

/// dt * sum_n x[n] conj(s[n+m]) for m = -L..L; x == nullptr means x = s.
std::vector<cplx> correlate(std::span<const cplx> s, const std::vector<cplx>* x, double dt) {
  const std::size_t L = s.size();
  const std::size_t nfft = detail::good_fft_size(2 * L);
  auto S = padded(s, nfft);
  detail::fft_inplace(S, detail::FftDirection::forward);
  std::vector<cplx> prod(nfft);
  if (x == nullptr) {
    for (std::size_t k = 0; k < nfft; ++k) prod[k] = cplx(std::norm(S[k]), 0.0);
  } else {
    auto X = padded(*x, nfft);
    detail::fft_inplace(X, detail::FftDirection::forward);
    for (std::size_t k = 0; k < nfft; ++k) prod[k] = S[k] * std::conj(X[k]);
  }
  detail::fft_inplace(prod, detail::FftDirection::inverse);

  // prod[m] = nfft * sum_l s[l+m] conj(x[l]) (circular, no wrap since nfft >= 2L)
  const double scale = dt / static_cast<double>(nfft);
  std::vector<cplx> out(2 * L + 1, cplx(0.0, 0.0));
  for (std::size_t i = 1; i < 2 * L; ++i) {
    const auto m = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(L);
    const auto idx = static_cast<std::size_t>((m + static_cast<std::ptrdiff_t>(nfft)) %
                                              static_cast<std::ptrdiff_t>(nfft));
    out[i] = std::conj(prod[idx]) * scale;
  }
  return out;
}

std::vector<double> lag_axis(std::size_t L, double dt) {
  std::vector<double> lags(2 * L + 1);
  for (std::size_t i = 0; i < lags.size(); ++i)
    lags[i] = (static_cast<double>(i) - static_cast<double>(L)) * dt;
  return lags;
}

struct LpAreas {
  double mainlobe;
  double sidelobe;
};

LpAreas lp_areas(const AcfResult& a, int p) {
  const auto mag = a.positive_magnitude();
  std::vector<double> y(mag.size());
  for (std::size_t m = 0; m < mag.size(); ++m) {
    double v = 1.0;
    for (int i = 0; i < p; ++i) v *= mag[m];
    y[m] = v;
  }
  return {integrate_linear(y, a.dt, 0.0, a.first_null),
          integrate_linear(y, a.dt, a.first_null, a.pulse_length)};
}

void require_mainlobe(const AcfResult& a) {
  if (a.degenerate) throw DegenerateMainlobe();
}

}  // namespace

Spectrum spectrum(const SampledWaveform& w, int zero_pad_factor) {
  if (zero_pad_factor < 1) throw std::invalid_argument("zero-pad factor must be at least 1");
  const std::size_t L = w.size();
  const std::size_t nfft = L * static_cast<std::size_t>(zero_pad_factor);
  auto X = padded(w.samples(), nfft);
  detail::fft_inplace(X, detail::FftDirection::forward);

  Spectrum sp;
  const double dt = w.dt();
  sp.df = 1.0 / (static_cast<double>(nfft) * dt);
  sp.freqs.resize(nfft);
  sp.psd.resize(nfft);
  const auto half = static_cast<std::ptrdiff_t>(nfft / 2);
  double total = 0.0;
  double first = 0.0;
  for (std::size_t k = 0; k < nfft; ++k) {
    const std::ptrdiff_t bin = static_cast<std::ptrdiff_t>(k) - half;
    const auto src = static_cast<std::size_t>((bin + static_cast<std::ptrdiff_t>(nfft)) %
                                              static_cast<std::ptrdiff_t>(nfft));
    sp.freqs[k] = static_cast<double>(bin) * sp.df;
    sp.psd[k] = std::norm(X[src]) * dt * dt;
    total += sp.psd[k];
    first += sp.freqs[k] * sp.psd[k];
  }
  sp.centroid = total > 0.0 ? first / total : 0.0;
  return sp;
}

Compactness spectral_compactness(const Spectrum& sp, double delta_f) {
  if (!(delta_f > 0.0)) throw std::invalid_argument("band width delta_f must be positive");
  Compactness out;
  double half = 0.5 * delta_f;
  const double limit = std::min(sp.freqs.back(), -sp.freqs.front());
  if (half > limit) {
    half = limit;
    out.clamped = true;
  }
  out.delta_f = 2.0 * half;
  const double origin = sp.freqs.front();
  out.fraction = std::clamp(integrate_linear(sp.psd, sp.df, -half - origin, half - origin), 0.0, 1.0);
  return out;
}

double rms_bandwidth_spectral(const Spectrum& sp) {
  double acc = 0.0;
  for (std::size_t k = 0; k < sp.freqs.size(); ++k) {
    const double d = sp.freqs[k] - sp.centroid;
    acc += d * d * sp.psd[k];
  }
  return kTwoPi * std::sqrt(acc * sp.df);
}

std::vector<double> AcfResult::positive_magnitude() const {
  std::vector<double> mag(values.size() - center());
  for (std::size_t m = 0; m < mag.size(); ++m) mag[m] = std::abs(values[center() + m]);
  return mag;
}

FirstNull first_null(const AcfResult& a) {
  const auto mag = a.positive_magnitude();
  const double tol = 1e-12 * mag.front();
  const std::size_t c = a.center();
  for (std::size_t m = 0; m + 1 < mag.size(); ++m) {
    // A zero crossed between samples shows up as a phase reversal even when
    // the sampled magnitude keeps falling; place it at the minimum of the
    // linearly interpolated R.
    const cplx r0 = a.values[c + m];
    const cplx r1 = a.values[c + m + 1];
    if (std::real(r0 * std::conj(r1)) < 0.0) {
      const cplx d = r1 - r0;
      const double t = std::clamp(-std::real(r0 * std::conj(d)) / std::norm(d), 0.0, 1.0);
      return {(static_cast<double>(m) + t) * a.dt, false};
    }
    if (m == 0 || !(mag[m + 1] > mag[m] + tol)) continue;
    const double y0 = mag[m - 1];
    const double y1 = mag[m];
    const double y2 = mag[m + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double shift = 0.0;
    if (denom > 0.0) shift = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    return {(static_cast<double>(m) + shift) * a.dt, false};
  }
  return {a.pulse_length, true};
}

AcfResult acf(const SampledWaveform& w) {
  AcfResult a;
  a.dt = w.dt();
  a.pulse_length = w.pulse_length();
  a.values = correlate(w.samples(), nullptr, a.dt);
  a.lags = lag_axis(w.size(), a.dt);
  const auto null = first_null(a);
  a.first_null = null.tau;
  a.degenerate = null.degenerate;
  return a;
}

Ambiguity ambiguity(const SampledWaveform& w, const std::vector<double>& doppler) {
  Ambiguity out;
  const double dt = w.dt();
  out.lags = lag_axis(w.size(), dt);
  out.doppler = doppler;
  out.values.reserve(doppler.size() * out.lags.size());
  for (double nu : doppler) {
    if (!std::isfinite(nu)) throw std::invalid_argument("Doppler grid values must be finite");
    if (nu == 0.0) {
      const auto row = correlate(w.samples(), nullptr, dt);
      out.values.insert(out.values.end(), row.begin(), row.end());
      continue;
    }
    std::vector<cplx> x(w.samples().begin(), w.samples().end());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] *= std::polar(1.0, kTwoPi * nu * w.time(n));
    const auto row = correlate(w.samples(), &x, dt);
    for (std::size_t i = 0; i < row.size(); ++i)
      out.values.push_back(row[i] * std::polar(1.0, std::numbers::pi * nu * out.lags[i]));
  }
  return out;
}

double mainlobe_area(const AcfResult& a) {
  require_mainlobe(a);
  return mainlobe_area(a, a.first_null);
}

double mainlobe_area(const AcfResult& a, double delta_tau) {
  AcfResult view = a;
  view.first_null = delta_tau;
  return 2.0 * lp_areas(view, 2).mainlobe;
}

double psl_db(const AcfResult& a) {
  require_mainlobe(a);
  const auto mag = a.positive_magnitude();
  double peak = 0.0;
  for (std::size_t m = 0; m < mag.size(); ++m)
    if (static_cast<double>(m) * a.dt >= a.first_null) peak = std::max(peak, mag[m]);
  return 20.0 * std::log10(peak / mag.front());
}

double isr_db(const AcfResult& a) {
  require_mainlobe(a);
  const auto areas = lp_areas(a, 2);
  return 10.0 * std::log10(areas.sidelobe / areas.mainlobe);
}

double gisr_linear(const AcfResult& a, int p) {
  if (p < 2) throw std::invalid_argument("GISR exponent p must be at least 2");
  require_mainlobe(a);
  const auto areas = lp_areas(a, p);
  return std::pow(areas.sidelobe / areas.mainlobe, 2.0 / static_cast<double>(p));
}

double gisr_db(const AcfResult& a, int p) { return 10.0 * std::log10(gisr_linear(a, p)); }

MetricsReport evaluate(const SampledWaveform& w, const MetricsConfig& cfg) {
  if (cfg.p < 2) throw std::invalid_argument("GISR exponent p must be at least 2");
  MetricsReport r;
  r.config = cfg;
  const auto sp = spectrum(w, cfg.zero_pad_factor);
  r.sc = spectral_compactness(sp, cfg.delta_f);
  r.beta_rms = rms_bandwidth_spectral(cfg.zero_pad_factor == 1 ? sp : spectrum(w, 1));
  r.beta_rms_span_limited = w.phase_discontinuous();

  const auto a = acf(w);
  r.delta_tau = a.first_null;
  r.degenerate = a.degenerate;
  if (!a.degenerate) {
    r.mainlobe_area = mainlobe_area(a);
    r.psl_db = psl_db(a);
    r.isr_db = isr_db(a);
    r.gisr_db = gisr_db(a, cfg.p);
  }
  return r;
}

}  // namespace mtsfm
