#include "mtsfm/mtsfm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mtsfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_time(const MtsfmParams& p, double t) {
  if (!(t >= -0.5 * p.T && t <= 0.5 * p.T))
    throw std::out_of_range("time lies outside the pulse [-T/2, T/2]");
}

}  // namespace

bool MtsfmParams::all_zero() const noexcept {
  for (double a : alpha)
    if (a != 0.0) return false;
  for (double b : beta)
    if (b != 0.0) return false;
  return true;
}

void MtsfmParams::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive and finite");
  if (alpha.empty()) throw std::invalid_argument("MTSFM needs at least one harmonic (K >= 1)");
  if (alpha.size() != beta.size())
    throw std::invalid_argument("alpha and beta must have the same length");
  if (!std::isfinite(a0)) throw std::invalid_argument("a0 is not finite");
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (!std::isfinite(alpha[k]) || !std::isfinite(beta[k]))
      throw std::invalid_argument("coefficient of harmonic " + std::to_string(k + 1) +
                                  " is not finite");
  }
}

std::vector<double> MtsfmParams::coefficients() const {
  std::vector<double> packed(alpha);
  packed.insert(packed.end(), beta.begin(), beta.end());
  return packed;
}

MtsfmParams MtsfmParams::with_coefficients(const std::vector<double>& packed) const {
  const std::size_t K = harmonics();
  if (packed.size() != 2 * K) throw std::invalid_argument("packed coefficient length must be 2K");
  MtsfmParams out{T, a0, {}, {}};
  out.alpha.assign(packed.begin(), packed.begin() + static_cast<std::ptrdiff_t>(K));
  out.beta.assign(packed.begin() + static_cast<std::ptrdiff_t>(K), packed.end());
  return out;
}

std::size_t min_harmonics(std::size_t chips) {
  if (chips < 1) throw std::invalid_argument("chip count must be at least 1");
  return (chips + 1) / 2;
}

MtsfmParams fit_fourier(const PhaseCode& code, double T, std::size_t K) {
  if (K < 1) throw std::invalid_argument("harmonic count K must be at least 1");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive and finite");
  const std::size_t N = code.size();
  const double tb = T / static_cast<double>(N);

  MtsfmParams out{T, 0.0, std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)};
  double mean = 0.0;
  for (std::size_t i = 0; i < N; ++i) mean += code[i];
  out.a0 = 2.0 * mean / static_cast<double>(N);

  for (std::size_t k = 1; k <= K; ++k) {
    const double w = kTwoPi * static_cast<double>(k) / T;
    double a = 0.0;
    double b = 0.0;
    double c_lo = std::cos(-0.5 * w * T);
    double s_lo = std::sin(-0.5 * w * T);
    for (std::size_t i = 0; i < N; ++i) {
      const double hi = -0.5 * T + static_cast<double>(i + 1) * tb;
      const double c_hi = std::cos(w * hi);
      const double s_hi = std::sin(w * hi);
      // int sin = -cos/w, int cos = sin/w
      a += code[i] * (c_lo - c_hi);
      b += code[i] * (s_hi - s_lo);
      c_lo = c_hi;
      s_lo = s_hi;
    }
    out.alpha[k - 1] = 2.0 * a / (w * T);
    out.beta[k - 1] = 2.0 * b / (w * T);
  }
  return out;
}

double mtsfm_phase(const MtsfmParams& params, double t) {
  check_time(params, t);
  double phi = 0.5 * params.a0;
  for (std::size_t k = 1; k <= params.harmonics(); ++k) {
    const double x = kTwoPi * static_cast<double>(k) * t / params.T;
    phi += params.alpha[k - 1] * std::sin(x) + params.beta[k - 1] * std::cos(x);
  }
  return phi;
}

double mtsfm_modulation(const MtsfmParams& params, double t) {
  check_time(params, t);
  double m = 0.0;
  for (std::size_t k = 1; k <= params.harmonics(); ++k) {
    const double x = kTwoPi * static_cast<double>(k) * t / params.T;
    m += static_cast<double>(k) * (params.alpha[k - 1] * std::cos(x) - params.beta[k - 1] * std::sin(x));
  }
  return m / params.T;
}

std::size_t min_mtsfm_samples(std::size_t K) { return 4 * K; }

HarmonicBasis::HarmonicBasis(double T, std::size_t K, std::size_t L)
    : T_(T), K_(K), L_(L), sin_(K * L), cos_(K * L) {
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  const double dt = T / static_cast<double>(L);
  for (std::size_t k = 1; k <= K; ++k) {
    double* srow = sin_.data() + (k - 1) * L;
    double* crow = cos_.data() + (k - 1) * L;
    for (std::size_t n = 0; n < L; ++n) {
      const double t = -0.5 * T + (static_cast<double>(n) + 0.5) * dt;
      const double x = kTwoPi * static_cast<double>(k) * t / T;
      srow[n] = std::sin(x);
      crow[n] = std::cos(x);
    }
  }
}

std::vector<double> HarmonicBasis::phase(double a0, const std::vector<double>& packed) const {
  if (packed.size() != 2 * K_) throw std::invalid_argument("packed coefficient length must be 2K");
  std::vector<double> phi(L_, 0.5 * a0);
  for (std::size_t k = 0; k < K_; ++k) {
    const double a = packed[k];
    const double b = packed[K_ + k];
    const double* srow = sin_.data() + k * L_;
    const double* crow = cos_.data() + k * L_;
    for (std::size_t n = 0; n < L_; ++n) phi[n] += a * srow[n] + b * crow[n];
  }
  return phi;
}

std::vector<double> mtsfm_phase_samples(const MtsfmParams& params, std::size_t L) {
  params.validate();
  return HarmonicBasis(params.T, params.harmonics(), L).phase(params.a0, params.coefficients());
}

SampledWaveform synthesize_mtsfm(const MtsfmParams& params, std::size_t L) {
  params.validate();
  const std::size_t need = min_mtsfm_samples(params.harmonics());
  if (L < need)
    throw std::invalid_argument("sample count " + std::to_string(L) + " is too small for K=" +
                                std::to_string(params.harmonics()) + "; need at least " +
                                std::to_string(need));
  return synthesize_from_phase(mtsfm_phase_samples(params, L), params.T);
}

double closed_form_rms_bandwidth(const MtsfmParams& params) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= params.harmonics(); ++k) {
    const double kk = static_cast<double>(k * k);
    acc += kk * (params.alpha[k - 1] * params.alpha[k - 1] + params.beta[k - 1] * params.beta[k - 1]);
  }
  const double w = kTwoPi / params.T;
  return w * w * 0.5 * acc;
}

std::vector<double> rms_bandwidth_gradient(const MtsfmParams& params) {
  const std::size_t K = params.harmonics();
  const double w = kTwoPi / params.T;
  std::vector<double> g(2 * K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double scale = w * w * static_cast<double>(k * k);
    g[k - 1] = scale * params.alpha[k - 1];
    g[K + k - 1] = scale * params.beta[k - 1];
  }
  return g;
}

}  // namespace mtsfm
