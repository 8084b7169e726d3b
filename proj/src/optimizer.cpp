#include "mtsfm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "mtsfm/metrics.hpp"

namespace mtsfm {

namespace {

/// objective() with the harmonic table built once per (T, K, L).
class GisrObjective {
 public:
  GisrObjective(const MtsfmParams& shape, const OptimizerConfig& cfg)
      : basis_(shape.T, shape.harmonics(), cfg.eval_samples(shape.harmonics())),
        a0_(shape.a0),
        p_(cfg.p) {}

  double operator()(const std::vector<double>& packed) const {
    const auto wave =
        synthesize_from_phase(basis_.phase(a0_, packed), basis_.pulse_length());
    const auto a = acf(wave);
    if (a.degenerate) {
      // Dimensionless bandwidth sum_k k^2 (alpha^2 + beta^2) / 2.
      const std::size_t K = basis_.harmonics();
      double s = 0.0;
      for (std::size_t k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k * k);
        s += 0.5 * kk * (packed[k - 1] * packed[k - 1] + packed[K + k - 1] * packed[K + k - 1]);
      }
      return kDegeneratePenalty - s / (1.0 + s);
    }
    return gisr_linear(a, p_);
  }

  std::size_t samples() const noexcept { return basis_.samples(); }

 private:
  HarmonicBasis basis_;
  double a0_;
  int p_;
};

std::vector<double> fd_gradient(const GisrObjective& f, const std::vector<double>& x,
                                double fx, double h, int threads) {
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  auto probe = [&](std::size_t i) {
    auto xp = x;
    auto xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = f(xp);
    const double fm = f(xm);
    if (std::isfinite(fp) && std::isfinite(fm))
      g[i] = (fp - fm) / (2.0 * h);
    else if (std::isfinite(fp))
      g[i] = (fp - fx) / h;
    else if (std::isfinite(fm))
      g[i] = (fx - fm) / h;
    else
      g[i] = 0.0;
  };
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) probe(i);
    return g;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) probe(i);
      });
    }
  }
  return g;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace

void OptimizerConfig::validate() const {
  if (p < 2) throw std::invalid_argument("GISR exponent p must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(fd_step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be non-negative");
  if (!(objective_tolerance >= 0.0)) throw std::invalid_argument("objective tolerance must be >= 0");
  if (patience < 1) throw std::invalid_argument("patience must be at least 1");
  if (log_every < 1) throw std::invalid_argument("log_every must be at least 1");
}

std::size_t OptimizerConfig::eval_samples(std::size_t K) const {
  const std::size_t floor = min_mtsfm_samples(K);
  if (samples == 0) return std::max<std::size_t>(16 * floor, 2048);
  if (samples < floor)
    throw std::invalid_argument("optimizer sample count " + std::to_string(samples) +
                                " is below the synthesis floor " + std::to_string(floor));
  return samples;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_iterations: return "max_iterations";
    case Termination::converged: return "converged";
    case Termination::step_underflow: return "step_underflow";
  }
  return "unknown";
}

double objective(const MtsfmParams& params, const OptimizerConfig& cfg) {
  params.validate();
  cfg.validate();
  return GisrObjective(params, cfg)(params.coefficients());
}

std::vector<double> gradient(const MtsfmParams& params, const OptimizerConfig& cfg) {
  params.validate();
  cfg.validate();
  const GisrObjective f(params, cfg);
  const auto x = params.coefficients();
  return fd_gradient(f, x, f(x), cfg.fd_step, cfg.threads);
}

constexpr double kBandSlack = 1e-13;

MtsfmParams project_to_band(const MtsfmParams& params, double lower, double upper) {
  params.validate();
  if (!(lower > 0.0 && upper >= lower)) throw std::invalid_argument("invalid bandwidth band");
  if (params.all_zero())
    throw std::invalid_argument("cannot project all-zero coefficients onto a positive band");
  const double b2 = closed_form_rms_bandwidth(params);
  // Rescaling lands on the edge only to rounding, so points that close count
  // as inside; this keeps projection idempotent.
  if (b2 >= lower * (1 - kBandSlack) && b2 <= upper * (1 + kBandSlack)) return params;
  const double edge = b2 < lower ? lower : upper;
  const double c = std::sqrt(edge / b2);
  MtsfmParams out = params;
  for (auto& a : out.alpha) a *= c;
  for (auto& b : out.beta) b *= c;
  return out;
}

OptimizationResult optimize(const MtsfmParams& initial, const OptimizerConfig& cfg) {
  initial.validate();
  cfg.validate();
  if (initial.all_zero())
    throw std::invalid_argument("all-zero initialization cannot be projected onto the bandwidth band");

  OptimizationResult r;
  r.initial_beta2 = closed_form_rms_bandwidth(initial);
  r.beta2_lower = (1.0 - cfg.delta) * r.initial_beta2;
  r.beta2_upper = (1.0 + cfg.delta) * r.initial_beta2;

  const GisrObjective f(initial, cfg);
  r.eval_samples = f.samples();
  MtsfmParams x = project_to_band(initial, r.beta2_lower, r.beta2_upper);
  auto xv = x.coefficients();
  double fx = f(xv);
  r.evaluations = 1;
  r.initial_objective = fx;

  auto record = [&](int it, double step, bool accepted) {
    r.trace.push_back({it, fx, closed_form_rms_bandwidth(x) / r.initial_beta2, step, accepted});
  };
  record(0, 0.0, true);

  std::vector<double> g;
  if (cfg.max_iterations > 0) {
    g = fd_gradient(f, xv, fx, cfg.fd_step, cfg.threads);
    r.evaluations += 2 * static_cast<long>(xv.size());
  }
  // First trial moves the largest coefficient by 0.05 rad.
  const double gmax = g.empty() ? 0.0 : std::abs(*std::max_element(
      g.begin(), g.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
  double step = gmax > 0.0 ? 0.05 / gmax : 1.0;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinMove = 1e-12;

  std::vector<double> history{fx};
  r.reason = Termination::max_iterations;
  int it = 0;
  while (it < cfg.max_iterations) {
    ++it;
    bool accepted = false;
    MtsfmParams y;
    std::vector<double> yv;
    double fy = 0.0;
    double trial = step;
    while (true) {
      std::vector<double> cand(xv.size());
      for (std::size_t i = 0; i < xv.size(); ++i) cand[i] = xv[i] - trial * g[i];
      y = project_to_band(x.with_coefficients(cand), r.beta2_lower, r.beta2_upper);
      yv = y.coefficients();
      double move = 0.0;
      std::vector<double> s(xv.size());
      for (std::size_t i = 0; i < xv.size(); ++i) {
        s[i] = xv[i] - yv[i];
        move = std::max(move, std::abs(s[i]));
      }
      if (move < kMinMove) break;
      fy = f(yv);
      ++r.evaluations;
      if (std::isfinite(fy) && fy <= fx - kArmijo * dot(g, s)) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      if (it % cfg.log_every == 0) record(it, trial, false);
      r.reason = Termination::step_underflow;
      break;
    }

    auto g_new = fd_gradient(f, yv, fy, cfg.fd_step, cfg.threads);
    r.evaluations += 2 * static_cast<long>(yv.size());
    std::vector<double> s(xv.size());
    std::vector<double> dg(xv.size());
    for (std::size_t i = 0; i < xv.size(); ++i) {
      s[i] = yv[i] - xv[i];
      dg[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, dg);
    const double bb = sy > 0.0 ? dot(s, s) / sy : 4.0 * trial;
    step = std::clamp(bb, 0.1 * trial, 10.0 * trial);

    x = std::move(y);
    xv = std::move(yv);
    fx = fy;
    g = std::move(g_new);
    if (it % cfg.log_every == 0) record(it, trial, true);

    history.push_back(fx);
    if (history.size() > static_cast<std::size_t>(cfg.patience)) {
      const double past = history[history.size() - 1 - static_cast<std::size_t>(cfg.patience)];
      if ((past - fx) < cfg.objective_tolerance * std::abs(past)) {
        r.converged = true;
        r.reason = Termination::converged;
        break;
      }
    }
  }
  if (r.trace.back().iteration != it) record(it, 0.0, true);

  r.iterations = it;
  r.params = x;
  r.final_objective = fx;
  r.initial_gisr_db = to_db(r.initial_objective);
  r.final_gisr_db = to_db(r.final_objective);
  r.final_beta2 = closed_form_rms_bandwidth(x);
  return r;
}

}  // namespace mtsfm
