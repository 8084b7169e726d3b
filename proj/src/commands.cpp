#include "mtsfm/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mtsfm/metrics.hpp"
#include "mtsfm/mtsfm.hpp"
#include "mtsfm/phase_code.hpp"
#include "mtsfm/serialize.hpp"

namespace mtsfm::cli {

namespace fs = std::filesystem;

namespace {

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

bool looks_like_json(const std::string& path) {
  if (fs::path(path).extension() == ".json") return true;
  const auto text = read_file(path);
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

// Output location is left out so results do not depend on where they land.
json global_json(const GlobalOptions& g) {
  return json{{"format", g.format},
              {"samples_per_chip", g.samples_per_chip},
              {"zero_pad", g.zero_pad}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string report_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "key,value\n";
  const auto j = to_json(r);
  for (const auto& [key, value] : j.items()) out << key << ',' << value.dump() << '\n';
  return out.str();
}

struct Input {
  std::optional<SampledWaveform> wave;
  std::optional<MtsfmParams> params;
  std::optional<PhaseCode> code;
  std::optional<std::size_t> chips;
  double T = 1.0;
};

Input load_input(const GlobalOptions& g, const MetricsOptions& o) {
  Input in;
  if (looks_like_json(o.input)) {
    const auto j = json::parse(read_file(o.input));
    in.params = params_from_json(j);
    in.T = in.params->T;
    if (j.contains("chips")) in.chips = j.at("chips").get<std::size_t>();
    if (o.chips) in.chips = o.chips;
    std::size_t L = 0;
    if (o.samples)
      L = *o.samples;
    else if (in.chips)
      L = *in.chips * static_cast<std::size_t>(g.samples_per_chip);
    else
      L = 64 * in.params->harmonics();
    in.wave = synthesize_mtsfm(*in.params, L);
  } else {
    in.code = load_phase_code_file(o.input);
    in.T = o.T;
    in.chips = in.code->size();
    SamplingConfig cfg{o.T, g.samples_per_chip, g.zero_pad};
    in.wave = synthesize_pc(*in.code, cfg);
  }
  return in;
}

double default_band(std::optional<double> delta_f, std::optional<std::size_t> chips, double T) {
  if (delta_f) return *delta_f;
  if (!chips)
    throw std::invalid_argument(
        "cannot infer the analysis band: pass --delta-f or --chips (params JSON has no \"chips\")");
  return 2.0 * static_cast<double>(*chips) / T;
}

struct VariantOutput {
  std::string name;
  std::size_t K = 0;
  MetricsReport report;
};

/// Writes phase, spectrum, ACF and metrics files for one waveform variant.
VariantOutput write_variant(const std::string& dir, const std::string& name, std::size_t K,
                            const SampledWaveform& w, const std::vector<double>& phase,
                            const MetricsConfig& mc, std::vector<std::string>& written) {
  auto emit = [&](const std::string& file, const std::string& contents) {
    const auto path = in_dir(dir, file);
    write_file_atomic(path, contents);
    written.push_back(path);
  };
  std::ostringstream ph, sp, ac;
  write_phase_csv(ph, w, phase);
  emit("phase_" + name + ".csv", ph.str());
  write_spectrum_csv(sp, spectrum(w, mc.zero_pad_factor));
  emit("spectrum_" + name + ".csv", sp.str());
  write_acf_csv(ac, acf(w));
  emit("acf_" + name + ".csv", ac.str());
  const auto report = evaluate(w, mc);
  emit("metrics_" + name + ".json",
       dump(json{{"variant", name}, {"K", K}, {"report", to_json(report)}}));
  return {name, K, report};
}

std::string format_db(const std::optional<double>& v) {
  if (!v) return "n/a";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << *v;
  return s.str();
}

}  // namespace

std::string default_poly65_path() { return in_dir(MTSFM_DATA_DIR, "poly65.txt"); }

std::vector<std::string> cmd_gen_code(const GlobalOptions& g, const GenCodeOptions& o, std::ostream& log) {
  std::optional<PhaseCode> code;
  if (o.kind == "mseq") {
    const auto taps = o.taps ? *o.taps : primitive_taps(o.degree);
    code = generate_msequence(o.degree, taps, o.seed);
  } else if (o.kind == "barker") {
    code = barker_code(o.length);
  } else {
    throw std::invalid_argument("unknown code kind '" + o.kind + "' (expected mseq or barker)");
  }
  const auto path = o.output.empty() ? in_dir(g.out_dir, code->label() + ".txt") : o.output;
  std::ostringstream text;
  write_phase_code(text, *code);
  write_file_atomic(path, text.str());
  log << "N=" << code->size() << " label=" << code->label() << " -> " << path << '\n';
  return {path};
}

std::vector<std::string> cmd_fit(const GlobalOptions& g, const FitOptions& o, std::ostream& log) {
  const auto code = load_phase_code_file(o.code_file);
  const std::size_t bound = min_harmonics(code.size());
  const std::size_t K = o.K == 0 ? bound : o.K;
  const auto params = fit_fourier(code, o.T, K);
  log << "N=" << code.size() << " K=" << K << " min_harmonics=" << bound << '\n';
  if (K < bound)
    log << "warning: K=" << K << " is below ceil(N/2)=" << bound
        << "; inter-chip transitions are under-resolved\n";

  auto j = to_json(params);
  j["chips"] = code.size();
  j["provenance"] = json{{"command", "fit"}, {"code_file", o.code_file}, {"T", o.T}, {"K", K}};
  const auto path =
      o.output.empty() ? in_dir(g.out_dir, stem_of(o.code_file) + "_k" + std::to_string(K) + ".json")
                       : o.output;
  write_file_atomic(path, dump(j));
  log << "params -> " << path << '\n';
  return {path};
}

std::vector<std::string> cmd_metrics(const GlobalOptions& g, const MetricsOptions& o, std::ostream& log) {
  if (g.format != "json" && g.format != "csv")
    throw std::invalid_argument("--format must be json or csv");
  const auto in = load_input(g, o);
  const auto& w = *in.wave;
  MetricsConfig mc{o.p, default_band(o.delta_f, in.chips, in.T), g.zero_pad};
  const auto report = evaluate(w, mc);

  std::vector<std::string> written;
  const auto base = stem_of(o.input);
  const auto path = o.output.empty() ? in_dir(g.out_dir, base + "_metrics." + g.format) : o.output;
  if (g.format == "json") {
    json j{{"command", "metrics"},
           {"input", o.input},
           {"config", {{"T", in.T}, {"p", o.p}, {"samples", w.size()}, {"global", global_json(g)}}},
           {"report", to_json(report)}};
    if (in.chips) j["config"]["chips"] = *in.chips;
    write_file_atomic(path, dump(j));
  } else {
    write_file_atomic(path, report_csv(report));
  }
  written.push_back(path);

  for (const auto& what : o.exports) {
    std::ostringstream out;
    std::string file;
    if (what == "spectrum") {
      write_spectrum_csv(out, spectrum(w, g.zero_pad));
      file = base + "_spectrum.csv";
    } else if (what == "acf") {
      write_acf_csv(out, acf(w));
      file = base + "_acf.csv";
    } else if (what == "waveform") {
      write_waveform_csv(out, w);
      file = base + "_waveform.csv";
    } else if (what == "waveform-raw") {
      write_waveform_raw(out, w);
      file = base + "_waveform.f64";
    } else {
      throw std::invalid_argument("unknown export '" + what +
                                  "' (expected spectrum, acf, waveform or waveform-raw)");
    }
    written.push_back(in_dir(g.out_dir, file));
    write_file_atomic(written.back(), out.str());
  }

  log << "sc=" << report.sc.fraction << " psl_db=" << format_db(report.psl_db)
      << " isr_db=" << format_db(report.isr_db) << (report.degenerate ? " (degenerate mainlobe)" : "")
      << " -> " << path << '\n';
  return written;
}

std::vector<std::string> cmd_optimize(const GlobalOptions& g, const OptimizeOptions& o, std::ostream& log) {
  const auto j = json::parse(read_file(o.params_file));
  const auto initial = params_from_json(j);
  std::optional<std::size_t> chips = o.chips;
  if (!chips && j.contains("chips")) chips = j.at("chips").get<std::size_t>();

  const auto result = optimize(initial, o.config);

  const std::size_t L = chips ? *chips * static_cast<std::size_t>(g.samples_per_chip)
                              : std::max(64 * initial.harmonics(), result.eval_samples);
  MetricsConfig mc{o.config.p, default_band(o.delta_f, chips, initial.T), g.zero_pad};
  const auto before = evaluate(synthesize_mtsfm(initial, L), mc);
  const auto after = evaluate(synthesize_mtsfm(result.params, L), mc);

  const auto prefix = o.output_prefix.empty() ? in_dir(g.out_dir, stem_of(o.params_file)) : o.output_prefix;
  std::vector<std::string> written;

  auto res = to_json(result);
  res["command"] = "optimize";
  res["input"] = o.params_file;
  res["config"] = to_json(o.config);
  res["config"]["global"] = global_json(g);
  res["report_samples"] = L;
  res["report_before"] = to_json(before);
  res["report_after"] = to_json(after);
  write_file_atomic(prefix + "_opt.json", dump(res));
  written.push_back(prefix + "_opt.json");

  auto params = to_json(result.params);
  if (chips) params["chips"] = *chips;
  params["provenance"] = json{{"command", "optimize"}, {"params_file", o.params_file}};
  write_file_atomic(prefix + "_opt_params.json", dump(params));
  written.push_back(prefix + "_opt_params.json");

  std::ostringstream trace;
  write_trace_csv(trace, result);
  write_file_atomic(prefix + "_trace.csv", trace.str());
  written.push_back(prefix + "_trace.csv");

  log << "iterations=" << result.iterations << " (" << to_string(result.reason) << ")"
      << " gisr_db " << format_db(result.initial_gisr_db) << " -> " << format_db(result.final_gisr_db)
      << ", psl_db " << format_db(before.psl_db) << " -> " << format_db(after.psl_db)
      << ", sc " << before.sc.fraction << " -> " << after.sc.fraction << '\n';
  return written;
}

std::vector<std::string> cmd_reproduce(const GlobalOptions& g, const ReproduceOptions& o, std::ostream& log) {
  std::optional<PhaseCode> code;
  std::vector<std::size_t> fit_K;
  std::vector<std::size_t> optimize_K;
  if (o.example == "mseq63") {
    code = o.code_file.empty() ? generate_msequence(6, kMseq63Taps, kMseq63Seed)
                               : load_phase_code_file(o.code_file);
    fit_K = {64, 32};
    optimize_K = {32};
  } else if (o.example == "poly65") {
    const auto path = o.code_file.empty() ? default_poly65_path() : o.code_file;
    if (!fs::exists(path))
      throw std::runtime_error(
          "polyphase code file '" + path +
          "' not found. Transcribe the 65-element polyphase Barker code (one phase in radians per "
          "line, '#' comments allowed) into data/poly65.txt or pass --code-file; see data/README.md");
    code = load_phase_code_file(path);
    fit_K = {65, 33};
    optimize_K = {65, 33};
  } else {
    throw std::invalid_argument("unknown example '" + o.example + "' (expected mseq63 or poly65)");
  }

  const auto dir = in_dir(g.out_dir, o.example);
  fs::create_directories(dir);
  std::vector<std::string> written;
  const std::size_t N = code->size();
  const SamplingConfig sampling{o.T, g.samples_per_chip, g.zero_pad};
  const std::size_t L = N * static_cast<std::size_t>(g.samples_per_chip);
  const MetricsConfig mc{o.config.p, 2.0 * static_cast<double>(N) / o.T, g.zero_pad};

  {
    std::ostringstream text;
    write_phase_code(text, *code);
    write_file_atomic(in_dir(dir, "code.txt"), text.str());
    written.push_back(in_dir(dir, "code.txt"));
  }

  std::vector<VariantOutput> rows;
  {
    const auto w = synthesize_pc(*code, sampling);
    std::vector<double> phase(L);
    for (std::size_t n = 0; n < L; ++n) phase[n] = (*code)[n / static_cast<std::size_t>(g.samples_per_chip)];
    rows.push_back(write_variant(dir, "pc", 0, w, phase, mc, written));
  }
  for (std::size_t K : fit_K) {
    const auto params = fit_fourier(*code, o.T, K);
    auto pj = to_json(params);
    pj["chips"] = N;
    write_file_atomic(in_dir(dir, "params_k" + std::to_string(K) + ".json"), dump(pj));
    written.push_back(in_dir(dir, "params_k" + std::to_string(K) + ".json"));
    const auto phase = mtsfm_phase_samples(params, L);
    rows.push_back(write_variant(dir, "k" + std::to_string(K), K, synthesize_from_phase(phase, o.T),
                                 phase, mc, written));
  }
  for (std::size_t K : optimize_K) {
    const auto result = optimize(fit_fourier(*code, o.T, K), o.config);
    const auto tag = "k" + std::to_string(K) + "_opt";
    auto rj = to_json(result);
    rj["params"]["chips"] = N;
    rj["config"] = to_json(o.config);
    write_file_atomic(in_dir(dir, "result_" + tag + ".json"), dump(rj));
    written.push_back(in_dir(dir, "result_" + tag + ".json"));
    std::ostringstream trace;
    write_trace_csv(trace, result);
    write_file_atomic(in_dir(dir, "trace_" + tag + ".csv"), trace.str());
    written.push_back(in_dir(dir, "trace_" + tag + ".csv"));
    const auto phase = mtsfm_phase_samples(result.params, L);
    rows.push_back(write_variant(dir, tag, K, synthesize_from_phase(phase, o.T), phase, mc, written));
  }

  json summary = json::array();
  std::ostringstream csv;
  csv << "variant,K,sc_fraction,isr_db,psl_db,gisr_db,delta_tau_s\n";
  log << "example " << o.example << " (N=" << N << ", band 2/t_b)\n";
  log << std::left << std::setw(10) << "variant" << std::setw(6) << "K" << std::setw(10) << "SC"
      << std::setw(10) << "ISR dB" << std::setw(10) << "PSL dB" << '\n';
  for (const auto& row : rows) {
    summary.push_back(json{{"variant", row.name}, {"K", row.K}, {"report", to_json(row.report)}});
    csv << row.name << ',' << row.K << ',' << json(row.report.sc.fraction).dump() << ','
        << json(row.report.isr_db ? json(*row.report.isr_db) : json(nullptr)).dump() << ','
        << json(row.report.psl_db ? json(*row.report.psl_db) : json(nullptr)).dump() << ','
        << json(row.report.gisr_db ? json(*row.report.gisr_db) : json(nullptr)).dump() << ','
        << json(row.report.delta_tau).dump() << '\n';
    std::ostringstream sc;
    sc << std::fixed << std::setprecision(4) << row.report.sc.fraction;
    log << std::left << std::setw(10) << row.name << std::setw(6) << row.K << std::setw(10) << sc.str()
        << std::setw(10) << format_db(row.report.isr_db) << std::setw(10) << format_db(row.report.psl_db)
        << '\n';
  }
  json sj{{"command", "reproduce"},
          {"example", o.example},
          {"code_label", code->label()},
          {"chips", N},
          {"T", o.T},
          {"delta_f_hz", mc.delta_f},
          {"optimizer", to_json(o.config)},
          {"global", global_json(g)},
          {"variants", summary}};
  write_file_atomic(in_dir(dir, "summary.json"), dump(sj));
  write_file_atomic(in_dir(dir, "summary.csv"), csv.str());
  written.push_back(in_dir(dir, "summary.json"));
  written.push_back(in_dir(dir, "summary.csv"));
  return written;
}

}  // namespace mtsfm::cli
