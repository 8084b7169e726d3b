#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mtsfm/optimizer.hpp"
#include "mtsfm/waveform.hpp"

namespace mtsfm::cli {

/// Taps and seed of the shipped N=63 example sequence (x^6 + x^5 + 1).
inline constexpr std::uint32_t kMseq63Taps = 0b1100000;
inline constexpr std::uint32_t kMseq63Seed = 53;

struct GlobalOptions {
  std::string out_dir = ".";
  std::string format = "json";  // metrics report format: json or csv
  int samples_per_chip = kDefaultSamplesPerChip;
  int zero_pad = kDefaultZeroPad;
};

struct GenCodeOptions {
  std::string kind;  // mseq | barker
  int degree = 6;
  std::optional<std::uint32_t> taps;  // default: built-in primitive polynomial
  std::uint32_t seed = 1;
  int length = 13;
  std::string output;  // default: <out-dir>/<label>.txt
};

struct FitOptions {
  std::string code_file;
  double T = 1.0;
  std::size_t K = 0;  // 0: ceil(N/2)
  std::string output;
};

struct MetricsOptions {
  std::string input;  // phase-code text or params JSON
  double T = 1.0;     // pulse length for phase-code input
  int p = 10;
  std::optional<double> delta_f;      // default 2/t_b
  std::optional<std::size_t> chips;   // overrides "chips" in params JSON
  std::optional<std::size_t> samples; // overrides chips * samples-per-chip
  std::vector<std::string> exports;   // spectrum, acf, waveform, waveform-raw
  std::string output;
};

struct OptimizeOptions {
  std::string params_file;
  OptimizerConfig config;
  std::optional<std::size_t> chips;
  std::optional<double> delta_f;
  std::string output_prefix;  // default: <out-dir>/<params stem>
};

struct ReproduceOptions {
  std::string example;  // mseq63 | poly65
  std::string code_file;
  double T = 1.0;
  OptimizerConfig config;
};

/// Default location of the polyphase N=65 code.
std::string default_poly65_path();

/// Each command writes its files and returns the paths written; progress
/// and warnings go to `log`. Failures throw.
std::vector<std::string> cmd_gen_code(const GlobalOptions& g, const GenCodeOptions& o, std::ostream& log);
std::vector<std::string> cmd_fit(const GlobalOptions& g, const FitOptions& o, std::ostream& log);
std::vector<std::string> cmd_metrics(const GlobalOptions& g, const MetricsOptions& o, std::ostream& log);
std::vector<std::string> cmd_optimize(const GlobalOptions& g, const OptimizeOptions& o, std::ostream& log);
std::vector<std::string> cmd_reproduce(const GlobalOptions& g, const ReproduceOptions& o, std::ostream& log);

}  // namespace mtsfm::cli
