#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mtsfm/commands.hpp"
#include "mtsfm/metrics.hpp"
#include "mtsfm/mtsfm.hpp"
#include "oracles.hpp"

using namespace mtsfm;
constexpr double kPi = std::numbers::pi;

namespace {

SampledWaveform random_waveform(std::mt19937_64& rng, std::size_t L, double T) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> s(L);
  for (auto& x : s) x = cplx(g(rng), g(rng));
  double e = 0.0;
  for (const auto& x : s) e += std::norm(x);
  const double scale = 1.0 / std::sqrt(e * T / static_cast<double>(L));
  for (auto& x : s) x *= scale;
  return SampledWaveform(std::move(s), T);
}

SampledWaveform barker13(int M = 32) { return synthesize_pc(barker_code(13), SamplingConfig{1.0, M, 4}); }

}  // namespace

TEST_CASE("spectrum of the unmodulated pulse") {
  const std::size_t L = 128;
  const double T = 2.0;
  const auto sp = spectrum(unmodulated_pulse(L, T), 4);
  REQUIRE(sp.freqs.size() == 4 * L);
  CHECK(std::abs(sp.centroid) < 1e-9);
  CHECK(sp.df == doctest::Approx(1.0 / (4 * T)));
  // Dirichlet kernel: |dt sum_n exp(-j 2 pi f t_n)|^2 / T
  const double dt = T / L;
  for (std::size_t k = 0; k < sp.freqs.size(); k += 37) {
    const double f = sp.freqs[k];
    double expect = L * L * dt * dt / T;
    if (f != 0.0) {
      const double num = std::sin(kPi * f * L * dt);
      const double den = std::sin(kPi * f * dt);
      expect = dt * dt / T * (num * num) / (den * den);
    }
    CHECK(sp.psd[k] == doctest::Approx(expect).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("Parseval for unit-energy waveforms") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto w = random_waveform(rng, 50 + 37 * trial, 0.5 + trial);
    for (int Z : {1, 3, 4}) {
      const auto sp = spectrum(w, Z);
      double total = 0.0;
      for (double v : sp.psd) total += v * sp.df;
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("Barker-13 spectrum at DC matches the Fourier integral") {
  const double T = 1.0;
  const auto code = barker_code(13);
  const auto sp = spectrum(synthesize_pc(code, SamplingConfig{T, 32, 4}), 4);
  // S(0) = sum_i exp(j phi_i) t_b / sqrt(T)
  const double tb = T / 13.0;
  cplx s0(0.0, 0.0);
  for (double phi : code.phases()) s0 += std::polar(tb / std::sqrt(T), phi);
  const auto zero = static_cast<std::size_t>(sp.freqs.size() / 2);
  REQUIRE(sp.freqs[zero] == 0.0);
  CHECK(sp.psd[zero] == doctest::Approx(std::norm(s0)).epsilon(1e-12));
  CHECK(std::norm(s0) == doctest::Approx(25.0 * tb * tb / T));
}

TEST_CASE("spectral compactness") {
  const auto w = barker13(16);
  const auto sp = spectrum(w, 4);
  SUBCASE("full span holds almost all energy") {
    const auto c = spectral_compactness(sp, 2.0 * sp.freqs.back());
    CHECK(!c.clamped);
    CHECK(c.fraction > 1.0 - 1e-3);
    CHECK(c.fraction <= 1.0);
  }
  SUBCASE("oversized band is clamped and flagged") {
    const auto c = spectral_compactness(sp, 10.0 * w.sample_rate());
    CHECK(c.clamped);
    CHECK(c.delta_f == doctest::Approx(2.0 * sp.freqs.back()));
  }
  SUBCASE("monotone in the band width") {
    double previous = 0.0;
    for (double df = 0.1; df < w.sample_rate(); df *= 1.17) {
      const double v = spectral_compactness(sp, df).fraction;
      CHECK(v >= previous);
      previous = v;
    }
  }
  SUBCASE("band edges interpolate between bins") {
    const double a = spectral_compactness(sp, 2.0 * 5 * sp.df).fraction;
    const double b = spectral_compactness(sp, 2.0 * 5.5 * sp.df).fraction;
    const double c = spectral_compactness(sp, 2.0 * 6 * sp.df).fraction;
    CHECK(a < b);
    CHECK(b < c);
  }
  CHECK_THROWS_AS(spectral_compactness(sp, 0.0), std::invalid_argument);
}

TEST_CASE("unmodulated pulse: triangle ACF and degenerate mainlobe") {
  const std::size_t L = 1024;
  const double T = 1.0;
  const auto a = acf(unmodulated_pulse(L, T));
  REQUIRE(a.values.size() == 2 * L + 1);
  CHECK(a.lags.front() == doctest::Approx(-T));
  CHECK(a.lags.back() == doctest::Approx(T));
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(std::abs(std::abs(a.values[i]) - (1.0 - std::abs(a.lags[i]) / T)) < 1e-6);
  CHECK(a.degenerate);
  CHECK(a.first_null == T);
  CHECK(mainlobe_area(a, T) == doctest::Approx(2.0 * T / 3.0).epsilon(1e-6));
  CHECK_THROWS_AS(mainlobe_area(a), DegenerateMainlobe);
  CHECK_THROWS_AS(psl_db(a), DegenerateMainlobe);
  CHECK_THROWS_AS(isr_db(a), DegenerateMainlobe);
  CHECK_THROWS_AS(gisr_db(a, 10), DegenerateMainlobe);

  const auto r = evaluate(unmodulated_pulse(L, T), MetricsConfig{10, 4.0, 4});
  CHECK(r.degenerate);
  CHECK(!r.psl_db);
  CHECK(!r.isr_db);
  CHECK(!r.mainlobe_area);
}

TEST_CASE("FFT correlation matches direct summation") {
  std::mt19937_64 rng(2);
  for (std::size_t L : {2u, 3u, 17u, 256u, 1000u}) {
    const auto w = random_waveform(rng, L, 1.0);
    const auto a = acf(w);
    const auto ref = oracle::direct_acf(w.samples(), w.dt());
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref[i] - a.values[i]));
    CAPTURE(L);
    CHECK(worst < 1e-9);
    CHECK(std::abs(a.values[a.center()] - cplx(1.0, 0.0)) < 1e-9);
  }
}

TEST_CASE("ACF symmetry and normalization") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_waveform(rng, 300 + trial, 2.0);
    const auto a = acf(w);
    const std::size_t c = a.center();
    for (std::size_t m = 0; m <= c; ++m)
      CHECK(std::abs(std::abs(a.values[c + m]) - std::abs(a.values[c - m])) < 1e-9);
    CHECK(std::abs(std::abs(a.values[c]) - 1.0) < 1e-9);
  }
}

TEST_CASE("Barker-13 sidelobes and mainlobe") {
  const auto w = barker13();
  const auto a = acf(w);
  const double tb = 1.0 / 13.0;
  REQUIRE(!a.degenerate);
  CHECK(std::abs(a.first_null - tb) < 0.15 * tb);
  CHECK(psl_db(a) == doctest::Approx(20 * std::log10(1.0 / 13.0)).epsilon(0.1 / 22.28));
  CHECK(std::abs(psl_db(a) + 22.28) < 0.1);

  // Independent trapezoid over the direct correlation.
  const auto ref = oracle::direct_acf(w.samples(), w.dt());
  const std::size_t L = w.size();
  const double dt = w.dt();
  const double dtau = a.first_null;
  const auto full = static_cast<std::size_t>(std::floor(dtau / dt));
  double area = 0.0;
  for (std::size_t m = 0; m < full; ++m)
    area += 0.5 * dt * (std::norm(ref[L + m]) + std::norm(ref[L + m + 1]));
  const double frac = dtau / dt - static_cast<double>(full);
  const double y0 = std::norm(ref[L + full]);
  const double y1 = std::norm(ref[L + full + 1]);
  const double yd = y0 + frac * (y1 - y0);
  area += 0.5 * frac * dt * (y0 + yd);
  CHECK(mainlobe_area(a) == doctest::Approx(2.0 * area).epsilon(1e-9));
}

TEST_CASE("first null of binary PC waveforms follows the chip-lag correlation") {
  // Between chip lags R(tau) is linear in tau, so the first null sits either
  // at a sign change of the integer-lag correlation or at the first chip lag
  // where its magnitude starts to rise.
  for (const auto& code : {barker_code(7), barker_code(11), barker_code(13),
                           generate_msequence(6, primitive_taps(6), 1),
                           generate_msequence(7, primitive_taps(7), 5),
                           generate_msequence(6, cli::kMseq63Taps, cli::kMseq63Seed)}) {
    std::vector<int> x;
    for (double phi : code.phases()) x.push_back(std::cos(phi) > 0 ? 1 : -1);
    const std::size_t N = x.size();
    double expect = static_cast<double>(N);
    for (std::size_t k = 0; k + 1 < N; ++k) {
      const double r0 = oracle::aperiodic_correlation(x, k);
      const double r1 = oracle::aperiodic_correlation(x, k + 1);
      if (r0 * r1 < 0) {
        expect = k + r0 / (r0 - r1);
        break;
      }
      if (r1 == 0) {
        expect = static_cast<double>(k + 1);
        break;
      }
      if (k > 0 && std::abs(r1) > std::abs(r0)) {
        expect = static_cast<double>(k);
        break;
      }
    }
    const double T = 1.0;
    const double tb = T / static_cast<double>(N);
    const auto a = acf(synthesize_pc(code, SamplingConfig{T, 32, 4}));
    CAPTURE(code.label());
    REQUIRE(!a.degenerate);
    CHECK(std::abs(a.first_null - expect * tb) < 0.05 * tb);
    // Barker codes and m-sequences have small lag-1 correlation, so the
    // mainlobe is chip-scale.
    CHECK(std::abs(a.first_null - tb) < 0.15 * tb);
  }
}

TEST_CASE("a slowly alternating binary code can have a wider mainlobe") {
  // Lag correlations 7, 4, 3, 2 ... keep the same sign, so |R| does not turn
  // around at the first chip lag.
  std::vector<double> phases = {0, 0, 0, 0, 0, 0, kPi};
  const PhaseCode code(phases, "slow");
  const auto a = acf(synthesize_pc(code, SamplingConfig{1.0, 32, 4}));
  CHECK(a.first_null > 1.5 / 7.0);
}

TEST_CASE("ISR of the triangle with a forced mainlobe") {
  auto a = acf(unmodulated_pulse(4096, 1.0));
  a.first_null = 0.5;
  a.degenerate = false;
  // mainlobe int_0^1/2 (1-t)^2 = 7/24, sidelobe int_1/2^1 = 1/24
  CHECK(isr_db(a) == doctest::Approx(10 * std::log10(1.0 / 7.0)).epsilon(1e-6));
}

TEST_CASE("GISR properties") {
  const auto a = acf(barker13());
  CHECK(gisr_db(a, 2) == isr_db(a));
  CHECK_THROWS_AS(gisr_db(a, 1), std::invalid_argument);
  // Large p approaches the PSL.
  CHECK(std::abs(gisr_db(a, 64) - psl_db(a)) < 1.5);

  // Uniform rescaling of |R| cancels in the ratio.
  auto scaled = a;
  for (auto& v : scaled.values) v *= 0.37;
  for (int p : {2, 4, 10}) CHECK(gisr_db(scaled, p) == doctest::Approx(gisr_db(a, p)).epsilon(1e-12));
}

TEST_CASE("GISR is non-increasing in p on the shipped examples") {
  const auto code = generate_msequence(6, cli::kMseq63Taps, cli::kMseq63Seed);
  const std::vector<SampledWaveform> waves = {
      barker13(), synthesize_pc(code, SamplingConfig{1.0, 32, 4}),
      synthesize_mtsfm(fit_fourier(code, 1.0, 32), 63 * 32),
      synthesize_mtsfm(fit_fourier(code, 1.0, 64), 63 * 32)};
  for (const auto& w : waves) {
    const auto a = acf(w);
    double previous = 1e300;
    for (int p : {2, 4, 6, 8, 10, 16, 32}) {
      const double v = gisr_db(a, p);
      CHECK(v <= previous + 1e-12);
      previous = v;
    }
  }
}

TEST_CASE("ambiguity function") {
  const auto w = synthesize_pc(barker_code(13), SamplingConfig{1.0, 8, 4});
  const auto a = acf(w);
  const std::vector<double> grid = {-20.0, 0.0, 3.5};
  const auto af = ambiguity(w, grid);
  REQUIRE(af.values.size() == grid.size() * a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const auto v = af.at(1, i);
    CHECK(v.real() == a.values[i].real());
    CHECK(v.imag() == a.values[i].imag());
  }
  CHECK(std::abs(af.at(1, a.center()) - cplx(1.0, 0.0)) < 1e-9);
  CHECK_THROWS_AS(ambiguity(w, {NAN}), std::invalid_argument);

  // Doppler-shifted rows have reduced zero-delay response.
  CHECK(std::abs(af.at(0, a.center())) < 1.0);

  // Volume: sum |chi|^2 dtau dnu over one period of the sampled Doppler axis.
  const double fs = w.sample_rate();
  const std::size_t P = 2 * w.size();
  std::vector<double> nu(P);
  for (std::size_t i = 0; i < P; ++i) nu[i] = -0.5 * fs + fs * static_cast<double>(i) / P;
  const auto vol = ambiguity(w, nu);
  double total = 0.0;
  for (const auto& v : vol.values) total += std::norm(v);
  total *= w.dt() * fs / static_cast<double>(P);
  CHECK(std::abs(total - 1.0) < 0.02);
}

TEST_CASE("spectral RMS bandwidth") {
  SUBCASE("single-tone MTSFM matches the closed form") {
    for (double a1 : {0.5, 2.0, 7.0}) {
      MtsfmParams p{1.0, 0.0, {a1, 0.0, 0.0}, {0.0, 0.0, 0.0}};
      const auto w = synthesize_mtsfm(p, 512);
      const double beta = rms_bandwidth_spectral(spectrum(w, 1));
      CHECK(std::abs(beta / std::sqrt(closed_form_rms_bandwidth(p)) - 1.0) < 0.02);
    }
  }
  SUBCASE("rect edges make the padded value grow with the analysis span") {
    const double b1 = rms_bandwidth_spectral(spectrum(unmodulated_pulse(256, 1.0), 4));
    const double b2 = rms_bandwidth_spectral(spectrum(unmodulated_pulse(1024, 1.0), 4));
    CHECK(std::isfinite(b1));
    CHECK(b1 > 0.0);
    CHECK(b2 > 1.5 * b1);
  }
  SUBCASE("frequency shift leaves it unchanged") {
    std::mt19937_64 rng(8);
    const auto q = MtsfmParams{1.0, 0.0, oracle::random_coefficients(rng, 8, 0.5),
                               oracle::random_coefficients(rng, 8, 0.5)};
    const auto w = synthesize_mtsfm(q, 512);
    std::vector<cplx> shifted(w.samples().begin(), w.samples().end());
    const double f_shift = 12.0;  // integer multiple of 1/T
    for (std::size_t n = 0; n < shifted.size(); ++n) shifted[n] *= std::polar(1.0, 2 * kPi * f_shift * w.time(n));
    const SampledWaveform ws(std::move(shifted), 1.0);
    const auto sp = spectrum(w, 1);
    const auto sps = spectrum(ws, 1);
    CHECK(sps.centroid == doctest::Approx(sp.centroid + f_shift).epsilon(1e-9));
    CHECK(rms_bandwidth_spectral(sps) == doctest::Approx(rms_bandwidth_spectral(sp)).epsilon(1e-6));
  }
}

TEST_CASE("metrics are invariant under global phase and time reversal") {
  const auto code = generate_msequence(6, cli::kMseq63Taps, cli::kMseq63Seed);
  const auto w = synthesize_mtsfm(fit_fourier(code, 1.0, 40), 63 * 16);
  const MetricsConfig mc{10, 126.0, 4};
  const auto ref = evaluate(w, mc);
  for (const auto& other : {w.phase_shifted(1.234), w.time_reversed()}) {
    const auto r = evaluate(other, mc);
    CHECK(r.sc.fraction == doctest::Approx(ref.sc.fraction).epsilon(1e-9));
    CHECK(r.delta_tau == doctest::Approx(ref.delta_tau).epsilon(1e-9));
    CHECK(*r.psl_db == doctest::Approx(*ref.psl_db).epsilon(1e-9));
    CHECK(*r.isr_db == doctest::Approx(*ref.isr_db).epsilon(1e-9));
    CHECK(*r.gisr_db == doctest::Approx(*ref.gisr_db).epsilon(1e-9));
    CHECK(*r.mainlobe_area == doctest::Approx(*ref.mainlobe_area).epsilon(1e-9));
    CHECK(r.beta_rms == doctest::Approx(ref.beta_rms).epsilon(1e-9));
  }
}

TEST_CASE("metric report flags") {
  const auto pc = evaluate(barker13(), MetricsConfig{10, 26.0, 4});
  CHECK(pc.beta_rms_span_limited);
  CHECK(pc.psl_db.has_value());
  CHECK(*pc.psl_db <= 0.0);
  CHECK(pc.sc.fraction >= 0.0);
  CHECK(pc.sc.fraction <= 1.0);
  const auto fm = evaluate(synthesize_mtsfm(fit_fourier(barker_code(13), 1.0, 7), 13 * 32),
                           MetricsConfig{10, 26.0, 4});
  CHECK(!fm.beta_rms_span_limited);
  CHECK_THROWS_AS(evaluate(barker13(), MetricsConfig{1, 26.0, 4}), std::invalid_argument);
}

TEST_CASE("65-chip polyphase code: fewer harmonics give a more compact spectrum") {
  // P4 code as a stand-in for a 65-chip polyphase design.
  const std::size_t N = 65;
  std::vector<double> phases(N);
  for (std::size_t n = 0; n < N; ++n) {
    const double i = static_cast<double>(n);
    phases[n] = kPi * i * i / static_cast<double>(N) - kPi * i;
  }
  const PhaseCode code(phases, "p4_65");
  const double df = 2.0 * static_cast<double>(N);
  const MetricsConfig mc{10, df, 4};
  const auto pc = evaluate(synthesize_pc(code, SamplingConfig{1.0, 32, 4}), mc);
  const auto k65 = evaluate(synthesize_mtsfm(fit_fourier(code, 1.0, 65), N * 32), mc);
  const auto k33 = evaluate(synthesize_mtsfm(fit_fourier(code, 1.0, 33), N * 32), mc);
  CHECK(k33.sc.fraction > k65.sc.fraction);
  CHECK(!k65.degenerate);
  CHECK(!k33.degenerate);
  CHECK(!pc.degenerate);
}
