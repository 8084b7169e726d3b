#include "mtsfm/serialize.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtsfm {

namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t swapped = 0;
    for (int i = 0; i < 8; ++i) swapped |= ((bits >> (8 * i)) & 0xffu) << (8 * (7 - i));
    bits = swapped;
  }
  char bytes[8];
  std::memcpy(bytes, &bits, 8);
  out.write(bytes, 8);
}

}  // namespace

json to_json(const MtsfmParams& p) {
  return json{{"T", p.T}, {"a0", p.a0}, {"alpha", p.alpha}, {"beta", p.beta}};
}

MtsfmParams params_from_json(const json& j) {
  MtsfmParams p;
  try {
    p.T = j.at("T").get<double>();
    p.a0 = j.value("a0", 0.0);
    p.alpha = j.at("alpha").get<std::vector<double>>();
    p.beta = j.at("beta").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed MTSFM parameter JSON: ") + e.what());
  }
  p.validate();
  return p;
}

json to_json(const MetricsReport& r) {
  return json{
      {"p", r.config.p},
      {"zero_pad_factor", r.config.zero_pad_factor},
      {"delta_f_hz", r.sc.delta_f},
      {"delta_f_requested_hz", r.config.delta_f},
      {"sc_fraction", r.sc.fraction},
      {"sc_band_clamped", r.sc.clamped},
      {"degenerate", r.degenerate},
      {"delta_tau_s", r.degenerate ? json(nullptr) : json(r.delta_tau)},
      {"mainlobe_area_s", optional_number(r.mainlobe_area)},
      {"psl_db", optional_number(r.psl_db)},
      {"isr_db", optional_number(r.isr_db)},
      {"gisr_db", optional_number(r.gisr_db)},
      {"beta_rms_rad_per_s", r.beta_rms},
      {"beta_rms_span_limited", r.beta_rms_span_limited},
  };
}

json to_json(const OptimizerConfig& c) {
  return json{{"p", c.p},
              {"delta", c.delta},
              {"max_iterations", c.max_iterations},
              {"objective_tolerance", c.objective_tolerance},
              {"patience", c.patience},
              {"fd_step", c.fd_step},
              {"samples", c.samples},
              {"log_every", c.log_every}};
}

json to_json(const OptimizationResult& r) {
  return json{{"params", to_json(r.params)},
              {"initial_gisr_db", r.initial_gisr_db},
              {"final_gisr_db", r.final_gisr_db},
              {"initial_beta2", r.initial_beta2},
              {"final_beta2", r.final_beta2},
              {"beta2_band", {r.beta2_lower, r.beta2_upper}},
              {"eval_samples", r.eval_samples},
              {"iterations", r.iterations},
              {"evaluations", r.evaluations},
              {"converged", r.converged},
              {"termination_reason", to_string(r.reason)}};
}

void write_spectrum_csv(std::ostream& out, const Spectrum& sp) {
  out << "f_hz,psd\n";
  for (std::size_t k = 0; k < sp.freqs.size(); ++k)
    out << num(sp.freqs[k]) << ',' << num(sp.psd[k]) << '\n';
}

void write_acf_csv(std::ostream& out, const AcfResult& a) {
  out << "tau_s,abs_r,arg_r\n";
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out << num(a.lags[i]) << ',' << num(std::abs(a.values[i])) << ',' << num(std::arg(a.values[i]))
        << '\n';
}

void write_trace_csv(std::ostream& out, const OptimizationResult& r) {
  out << "iter,objective_db,beta2_rel,step_size,accepted\n";
  for (const auto& t : r.trace)
    out << t.iteration << ',' << num(10.0 * std::log10(t.objective)) << ',' << num(t.beta2_rel) << ','
        << num(t.step) << ',' << (t.accepted ? 1 : 0) << '\n';
}

void write_waveform_csv(std::ostream& out, const SampledWaveform& w) {
  out << "t,re,im\n";
  const auto s = w.samples();
  for (std::size_t n = 0; n < s.size(); ++n)
    out << num(w.time(n)) << ',' << num(s[n].real()) << ',' << num(s[n].imag()) << '\n';
}

void write_waveform_raw(std::ostream& out, const SampledWaveform& w) {
  for (const auto& s : w.samples()) {
    put_le(out, s.real());
    put_le(out, s.imag());
  }
}

void write_phase_csv(std::ostream& out, const SampledWaveform& w, const std::vector<double>& phase) {
  if (phase.size() != w.size()) throw std::invalid_argument("phase and waveform lengths differ");
  out << "t_s,phase_rad\n";
  for (std::size_t n = 0; n < phase.size(); ++n) out << num(w.time(n)) << ',' << num(phase[n]) << '\n';
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mtsfm
