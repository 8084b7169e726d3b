#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mtsfm/metrics.hpp"
#include "mtsfm/mtsfm.hpp"
#include "mtsfm/optimizer.hpp"
#include "mtsfm/waveform.hpp"

namespace mtsfm {

using nlohmann::json;

/// {"T", "a0", "alpha", "beta"}; doubles are written in shortest
/// round-trip form so parsing restores every bit.
json to_json(const MtsfmParams& p);
MtsfmParams params_from_json(const json& j);

json to_json(const MetricsReport& r);
json to_json(const OptimizerConfig& c);
/// Embeds the optimized MtsfmParams under "params".
json to_json(const OptimizationResult& r);

/// `f_hz,psd`
void write_spectrum_csv(std::ostream& out, const Spectrum& sp);
/// `tau_s,abs_r,arg_r`
void write_acf_csv(std::ostream& out, const AcfResult& a);
/// `iter,objective_db,beta2_rel,step_size,accepted`
void write_trace_csv(std::ostream& out, const OptimizationResult& r);
/// `t,re,im`
void write_waveform_csv(std::ostream& out, const SampledWaveform& w);
/// Interleaved little-endian float64 pairs (re, im), no header.
void write_waveform_raw(std::ostream& out, const SampledWaveform& w);
/// `t_s,phase_rad`
void write_phase_csv(std::ostream& out, const SampledWaveform& w, const std::vector<double>& phase);

/// Writes `contents` to `path` via a temporary file in the same directory
/// and a rename, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace mtsfm
