#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtsfm/commands.hpp"
#include "mtsfm/metrics.hpp"
#include "mtsfm/optimizer.hpp"
#include "oracles.hpp"

using namespace mtsfm;

namespace {

MtsfmParams mseq_fit(std::size_t K) {
  return fit_fourier(generate_msequence(6, cli::kMseq63Taps, cli::kMseq63Seed), 1.0, K);
}

OptimizerConfig small_config() {
  OptimizerConfig c;
  c.max_iterations = 8;
  c.samples = 13 * 32;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  OptimizerConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.eval_samples(32) == 2048);
  CHECK(c.eval_samples(200) == 16 * 4 * 200);
  c.samples = 10;
  CHECK_THROWS_AS(c.eval_samples(32), std::invalid_argument);
  c = {};
  c.p = 1;
  CHECK_THROWS(c.validate());
  c = {};
  c.delta = 0.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.delta = 1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.fd_step = 0.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.max_iterations = -1;
  CHECK_THROWS(c.validate());
}

TEST_CASE("objective penalizes a degenerate mainlobe") {
  MtsfmParams zero{1.0, 0.0, std::vector<double>(4, 0.0), std::vector<double>(4, 0.0)};
  OptimizerConfig c;
  c.samples = 256;
  const double v = objective(zero, c);
  CHECK(v >= kDegeneratePenalty - 1.0);
  CHECK(v <= kDegeneratePenalty);
  for (double g : gradient(zero, c)) CHECK(g == 0.0);

  // Larger bandwidth in the degenerate regime lowers the penalty.
  MtsfmParams tiny{1.0, 0.0, {1e-3, 0, 0, 0}, {0, 0, 0, 0}};
  MtsfmParams less_tiny{1.0, 0.0, {2e-3, 0, 0, 0}, {0, 0, 0, 0}};
  CHECK(objective(less_tiny, c) < objective(tiny, c));
}

TEST_CASE("objective agrees with the metric library") {
  const auto p = mseq_fit(32);
  OptimizerConfig c;
  c.samples = 63 * 32;
  const auto a = acf(synthesize_mtsfm(p, c.samples));
  c.p = 2;
  CHECK(objective(p, c) == doctest::Approx(gisr_linear(a, 2)).epsilon(1e-9));
  CHECK(std::abs(objective(p, c) - std::pow(10.0, isr_db(a) / 10.0)) < 1e-9);
  c.p = 10;
  const double db = 10.0 * std::log10(objective(p, c));
  CHECK(db == doctest::Approx(gisr_db(a, 10)).epsilon(1e-9));
  CHECK(db < 0.07);
  CHECK(db > -12.23);
}

TEST_CASE("finite-difference gradient predicts first-order change") {
  const auto p = mseq_fit(16);
  OptimizerConfig c;
  c.samples = 63 * 16;
  const auto g = gradient(p, c);
  REQUIRE(g.size() == 32);
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return std::abs(g[i]) > std::abs(g[j]); });
  const double f0 = objective(p, c);
  for (std::size_t r = 0; r < 4; ++r) {
    const std::size_t i = order[r];
    auto x = p.coefficients();
    const double h = 1e-4;
    x[i] += h;
    const double df = objective(p.with_coefficients(x), c) - f0;
    CAPTURE(i);
    CHECK(std::abs(df - g[i] * h) < 0.05 * std::abs(g[i] * h));
  }
}

TEST_CASE("projection onto the bandwidth band") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MtsfmParams p{1.0, 0.3, oracle::random_coefficients(rng, 6, 1.0), oracle::random_coefficients(rng, 6, 1.0)};
    const double b2 = closed_form_rms_bandwidth(p);
    CHECK(project_to_band(p, 0.5 * b2, 2.0 * b2) == p);
    const auto up = project_to_band(p, 2.0 * b2, 3.0 * b2);
    CHECK(closed_form_rms_bandwidth(up) == doctest::Approx(2.0 * b2).epsilon(1e-12));
    const auto down = project_to_band(p, 0.1 * b2, 0.5 * b2);
    CHECK(closed_form_rms_bandwidth(down) == doctest::Approx(0.5 * b2).epsilon(1e-12));
    for (std::size_t k = 0; k < 6; ++k) CHECK(down.alpha[k] == doctest::Approx(p.alpha[k] / std::sqrt(2.0)));
    CHECK(down.a0 == p.a0);
    CHECK(project_to_band(down, 0.1 * b2, 0.5 * b2) == down);
  }
  MtsfmParams zero{1.0, 0.0, {0.0}, {0.0}};
  CHECK_THROWS_AS(project_to_band(zero, 1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(project_to_band(mseq_fit(4), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("zero iterations returns the input") {
  auto c = small_config();
  c.max_iterations = 0;
  const auto p = fit_fourier(barker_code(13), 1.0, 7);
  const auto r = optimize(p, c);
  CHECK(r.params == p);
  CHECK(r.iterations == 0);
  CHECK(r.final_objective == r.initial_objective);
  CHECK(r.reason == Termination::max_iterations);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].iteration == 0);
}

TEST_CASE("all-zero initialization is rejected") {
  MtsfmParams zero{1.0, 0.0, std::vector<double>(3, 0.0), std::vector<double>(3, 0.0)};
  CHECK_THROWS_AS(optimize(zero, small_config()), std::invalid_argument);
}

TEST_CASE("optimizer stays feasible and decreases the objective") {
  const auto p = fit_fourier(barker_code(13), 1.0, 7);
  auto c = small_config();
  c.max_iterations = 25;
  const auto r = optimize(p, c);
  CHECK(r.final_objective <= r.initial_objective);
  CHECK(r.final_gisr_db <= r.initial_gisr_db);
  CHECK(r.final_beta2 >= r.beta2_lower * (1 - 1e-12));
  CHECK(r.final_beta2 <= r.beta2_upper * (1 + 1e-12));
  CHECK(r.beta2_lower == doctest::Approx(0.9 * r.initial_beta2));
  CHECK(r.beta2_upper == doctest::Approx(1.1 * r.initial_beta2));
  CHECK(r.final_objective == doctest::Approx(objective(r.params, c)).epsilon(1e-12));
  double previous = 1e300;
  for (const auto& t : r.trace) {
    CHECK(t.beta2_rel >= 0.9 - 1e-12);
    CHECK(t.beta2_rel <= 1.1 + 1e-12);
    CHECK(t.objective <= previous);
    previous = t.objective;
  }
  CHECK(r.evaluations > 0);
  CHECK(r.params.a0 == p.a0);
}

TEST_CASE("optimizer is deterministic across runs and thread counts") {
  const auto p = fit_fourier(barker_code(11), 1.0, 6);
  auto c = small_config();
  c.threads = 1;
  const auto a = optimize(p, c);
  const auto b = optimize(p, c);
  c.threads = 4;
  const auto d = optimize(p, c);
  CHECK(a.params == b.params);
  CHECK(a.params == d.params);
  CHECK(a.final_objective == d.final_objective);
  REQUIRE(a.trace.size() == d.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].objective == d.trace[i].objective);
}

TEST_CASE("termination reasons have names") {
  CHECK(to_string(Termination::max_iterations) == "max_iterations");
  CHECK(to_string(Termination::converged) == "converged");
  CHECK(to_string(Termination::step_underflow) == "step_underflow");
}

TEST_CASE("bandwidth band keeps the mainlobe width on the shipped example") {
  const auto init = mseq_fit(32);
  const auto r = optimize(init, OptimizerConfig{});
  const double before = acf(synthesize_mtsfm(init, 63 * 32)).first_null;
  const double after = acf(synthesize_mtsfm(r.params, 63 * 32)).first_null;
  CHECK(std::abs(after / before - 1.0) < 0.25);
}
