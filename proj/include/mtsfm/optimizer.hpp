#pragma once

#include <string>
#include <vector>

#include "mtsfm/mtsfm.hpp"

namespace mtsfm {

struct OptimizerConfig {
  int p = 10;                        // GISR exponent
  double delta = 0.1;                // beta^2 band half-width, relative
  int max_iterations = 400;
  double objective_tolerance = 1e-4; // relative decrease over `patience` iterations
  int patience = 15;
  double fd_step = 1e-4;             // radians
  std::size_t samples = 0;           // synthesis density per evaluation; 0 = auto
  int log_every = 1;
  int threads = 0;                   // finite-difference probes; 0 = hardware

  void validate() const;
  /// Samples used per objective evaluation for K harmonics.
  std::size_t eval_samples(std::size_t K) const;
};

/// Base of the degenerate-mainlobe penalty. Real GISR values stay far below.
inline constexpr double kDegeneratePenalty = 1.0e3;

enum class Termination { max_iterations, converged, step_underflow };
std::string to_string(Termination t);

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;   // linear GISR of the accepted iterate
  double beta2_rel = 1.0;   // beta^2 / initial beta^2
  double step = 0.0;
  bool accepted = false;
};

struct OptimizationResult {
  MtsfmParams params;
  double initial_objective = 0.0;  // linear
  double final_objective = 0.0;
  double initial_gisr_db = 0.0;
  double final_gisr_db = 0.0;
  double initial_beta2 = 0.0;      // (rad/s)^2
  double final_beta2 = 0.0;
  double beta2_lower = 0.0;
  double beta2_upper = 0.0;
  std::size_t eval_samples = 0;
  int iterations = 0;
  long evaluations = 0;
  bool converged = false;
  Termination reason = Termination::max_iterations;
  std::vector<TraceRecord> trace;
};

/// Linear-scale GISR of the synthesized waveform at cfg.eval_samples(K). A
/// waveform whose ACF has no null maps to kDegeneratePenalty minus a bounded
/// term that decreases with bandwidth, so descent pushes bandwidth back up.
double objective(const MtsfmParams& params, const OptimizerConfig& cfg);

/// Central differences of objective() over [alpha_1..alpha_K, beta_1..beta_K].
/// a0 is left out: it is a global phase and cannot change any metric.
std::vector<double> gradient(const MtsfmParams& params, const OptimizerConfig& cfg);

/// Scales every alpha_k, beta_k by sqrt(edge / beta^2) when beta^2 falls
/// outside [lower, upper]; beta^2 is homogeneous of degree 2 so the result
/// lands on the nearest edge.
MtsfmParams project_to_band(const MtsfmParams& params, double lower, double upper);

/// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
/// backtracking on the band (1 +- delta) * beta^2(initial). Returns the best
/// feasible iterate; deterministic for identical inputs.
OptimizationResult optimize(const MtsfmParams& initial, const OptimizerConfig& cfg);

}  // namespace mtsfm
