// mtsfm-cpm: phase-code generation, Fourier-series CPM fitting, waveform
// metrics and sidelobe re-optimization.
//
// Files:
//   phase code    one radian value per line, '#' lines are comments
//   params JSON   {"T", "a0", "alpha": [K], "beta": [K]} (+ optional "chips")
//   waveform      CSV `t,re,im`, or raw interleaved little-endian float64 re,im
//   spectrum      CSV `f_hz,psd`;  ACF CSV `tau_s,abs_r,arg_r`
//   trace         CSV `iter,objective_db,beta2_rel,step_size,accepted`

#include <iostream>

#include <CLI11.hpp>

#include "mtsfm/commands.hpp"

int main(int argc, char** argv) {
  using namespace mtsfm::cli;

  CLI::App app{"MTSFM continuous phase modulation of phase-coded waveforms"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out-dir", g.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--format", g.format, "Metrics report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--samples-per-chip", g.samples_per_chip, "Samples per chip (>= 8)")
      ->check(CLI::Range(8, 1 << 16))
      ->capture_default_str();
  app.add_option("--zero-pad", g.zero_pad, "Zero-padding factor for spectra")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  GenCodeOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-code", "Generate a phase-code file");
  gen_cmd->add_option("kind", gen.kind, "mseq or barker")->required();
  gen_cmd->add_option("--degree", gen.degree, "LFSR degree for mseq (2..16)")->capture_default_str();
  gen_cmd->add_option("--taps", gen.taps, "Tap mask, bit j = coefficient of x^j (0b/0x accepted)");
  gen_cmd->add_option("--seed", gen.seed, "Nonzero initial register state")->capture_default_str();
  gen_cmd->add_option("--length", gen.length, "Barker length")->capture_default_str();
  gen_cmd->add_option("-o,--output", gen.output, "Output path");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a Fourier-series phase to a phase code");
  fit_cmd->add_option("code_file", fit.code_file)->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--T", fit.T, "Pulse length in seconds")->capture_default_str();
  fit_cmd->add_option("--K", fit.K, "Harmonic count (default ceil(N/2))");
  fit_cmd->add_option("-o,--output", fit.output, "Output path");

  MetricsOptions met;
  auto* met_cmd = app.add_subcommand("metrics", "Compute the metric report for a code or params file");
  met_cmd->add_option("input", met.input)->required()->check(CLI::ExistingFile);
  met_cmd->add_option("--T", met.T, "Pulse length for phase-code input")->capture_default_str();
  met_cmd->add_option("--p", met.p, "GISR exponent")->check(CLI::Range(2, 1024))->capture_default_str();
  met_cmd->add_option("--delta-f", met.delta_f, "SC band in Hz (default 2/t_b)");
  met_cmd->add_option("--chips", met.chips, "Chip count for params input");
  met_cmd->add_option("--samples", met.samples, "Synthesis sample count for params input");
  met_cmd->add_option("--export", met.exports, "spectrum,acf,waveform,waveform-raw")->delimiter(',');
  met_cmd->add_option("-o,--output", met.output, "Report path");

  OptimizeOptions opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Minimize GISR under the RMS-bandwidth band");
  opt_cmd->add_option("params_file", opt.params_file)->required()->check(CLI::ExistingFile);
  auto add_optimizer_flags = [](CLI::App* cmd, mtsfm::OptimizerConfig& c) {
    cmd->add_option("--p", c.p, "GISR exponent")->check(CLI::Range(2, 1024))->capture_default_str();
    cmd->add_option("--delta", c.delta, "Relative beta^2 band half-width")->capture_default_str();
    cmd->add_option("--max-iterations", c.max_iterations)->capture_default_str();
    cmd->add_option("--tol", c.objective_tolerance, "Relative objective decrease threshold")
        ->capture_default_str();
    cmd->add_option("--patience", c.patience)->capture_default_str();
    cmd->add_option("--fd-step", c.fd_step)->capture_default_str();
    cmd->add_option("--opt-samples", c.samples, "Samples per objective evaluation (0 = auto)")
        ->capture_default_str();
    cmd->add_option("--log-every", c.log_every)->capture_default_str();
    cmd->add_option("--threads", c.threads, "Finite-difference worker threads (0 = all cores)")
        ->capture_default_str();
  };
  add_optimizer_flags(opt_cmd, opt.config);
  opt_cmd->add_option("--chips", opt.chips, "Chip count used for reports");
  opt_cmd->add_option("--delta-f", opt.delta_f, "SC band in Hz for reports");
  opt_cmd->add_option("--prefix", opt.output_prefix, "Output path prefix");

  ReproduceOptions rep;
  auto* rep_cmd = app.add_subcommand("reproduce", "Run a full design example end to end");
  rep_cmd->add_option("example", rep.example, "mseq63 or poly65")
      ->required()
      ->check(CLI::IsMember({"mseq63", "poly65"}));
  rep_cmd->add_option("--code-file", rep.code_file, "Override the example's phase code");
  rep_cmd->add_option("--T", rep.T, "Pulse length in seconds")->capture_default_str();
  add_optimizer_flags(rep_cmd, rep.config);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) cmd_gen_code(g, gen, std::cout);
    if (*fit_cmd) cmd_fit(g, fit, std::cout);
    if (*met_cmd) cmd_metrics(g, met, std::cout);
    if (*opt_cmd) cmd_optimize(g, opt, std::cout);
    if (*rep_cmd) cmd_reproduce(g, rep, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
