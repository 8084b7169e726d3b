#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtsfm/metrics.hpp"
#include "mtsfm/mtsfm.hpp"
#include "mtsfm/optimizer.hpp"
#include "mtsfm/phase_code.hpp"
#include "mtsfm/serialize.hpp"
#include "mtsfm/waveform.hpp"

namespace py = pybind11;
using namespace mtsfm;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> to_array(std::span<const cplx> v) {
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(v.size()), v.data());
}

// JSON documents cross the boundary as Python objects via the json module.
py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "MTSFM continuous-phase waveform design";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DegenerateMainlobe>(m, "DegenerateMainlobe", PyExc_ValueError);

  py::class_<PhaseCode>(m, "PhaseCode")
      .def(py::init([](std::vector<double> phases, std::string label) {
             return PhaseCode(std::move(phases), std::move(label));
           }),
           py::arg("phases"), py::arg("label") = "")
      .def_property_readonly("phases",
                             [](const PhaseCode& c) { return to_array({c.phases().begin(), c.phases().end()}); })
      .def_property_readonly("label", &PhaseCode::label)
      .def("__len__", &PhaseCode::size);

  m.def("generate_msequence", &generate_msequence, py::arg("degree"), py::arg("taps"), py::arg("seed") = 1u);
  m.def("primitive_taps", &primitive_taps, py::arg("degree"));
  m.def("barker_code", &barker_code, py::arg("length"));
  m.def("load_phase_code", &load_phase_code_file, py::arg("path"));

  py::class_<MtsfmParams>(m, "MtsfmParams")
      .def(py::init([](double T, double a0, std::vector<double> alpha, std::vector<double> beta) {
             MtsfmParams p{T, a0, std::move(alpha), std::move(beta)};
             p.validate();
             return p;
           }),
           py::arg("T"), py::arg("a0"), py::arg("alpha"), py::arg("beta"))
      .def_readwrite("T", &MtsfmParams::T)
      .def_readwrite("a0", &MtsfmParams::a0)
      .def_readwrite("alpha", &MtsfmParams::alpha)
      .def_readwrite("beta", &MtsfmParams::beta)
      .def_property_readonly("harmonics", &MtsfmParams::harmonics)
      .def("to_dict", [](const MtsfmParams& p) { return to_python(to_json(p)); })
      .def_static("from_json", [](const std::string& text) { return params_from_json(json::parse(text)); })
      .def("__eq__", [](const MtsfmParams& a, const MtsfmParams& b) { return a == b; });

  m.def("min_harmonics", &min_harmonics, py::arg("chips"));
  m.def("fit_fourier", &fit_fourier, py::arg("code"), py::arg("T"), py::arg("K"));
  m.def("rms_bandwidth", &closed_form_rms_bandwidth, py::arg("params"),
        "Closed-form beta_rms^2 in (rad/s)^2.");

  py::class_<SampledWaveform>(m, "Waveform")
      .def_property_readonly("samples", [](const SampledWaveform& w) { return to_array(w.samples()); })
      .def_property_readonly("pulse_length", &SampledWaveform::pulse_length)
      .def_property_readonly("sample_rate", &SampledWaveform::sample_rate)
      .def_property_readonly("energy", &SampledWaveform::energy)
      .def("__len__", &SampledWaveform::size);

  m.def(
      "synthesize_pc",
      [](const PhaseCode& code, double T, int samples_per_chip) {
        return synthesize_pc(code, SamplingConfig{T, samples_per_chip, kDefaultZeroPad});
      },
      py::arg("code"), py::arg("T") = 1.0, py::arg("samples_per_chip") = kDefaultSamplesPerChip);
  m.def("synthesize_mtsfm", &synthesize_mtsfm, py::arg("params"), py::arg("samples"));

  m.def(
      "spectrum",
      [](const SampledWaveform& w, int zero_pad) {
        const auto sp = spectrum(w, zero_pad);
        return py::make_tuple(to_array(sp.freqs), to_array(sp.psd));
      },
      py::arg("waveform"), py::arg("zero_pad") = kDefaultZeroPad,
      "Returns (frequencies in Hz, PSD) on a DC-centered grid.");
  m.def(
      "acf",
      [](const SampledWaveform& w) {
        const auto a = acf(w);
        return py::make_tuple(to_array(a.lags), to_array(std::span<const cplx>(a.values)));
      },
      py::arg("waveform"), "Returns (lags in s, complex R) for lags -T..T.");
  m.def(
      "evaluate",
      [](const SampledWaveform& w, double delta_f, int p, int zero_pad) {
        return to_python(to_json(evaluate(w, MetricsConfig{p, delta_f, zero_pad})));
      },
      py::arg("waveform"), py::arg("delta_f"), py::arg("p") = 10, py::arg("zero_pad") = kDefaultZeroPad);

  m.def(
      "optimize",
      [](const MtsfmParams& initial, int p, double delta, int max_iterations, std::size_t samples,
         int threads) {
        OptimizerConfig cfg;
        cfg.p = p;
        cfg.delta = delta;
        cfg.max_iterations = max_iterations;
        cfg.samples = samples;
        cfg.threads = threads;
        OptimizationResult r;
        {
          py::gil_scoped_release release;
          r = optimize(initial, cfg);
        }
        return py::make_tuple(r.params, to_python(to_json(r)));
      },
      py::arg("params"), py::arg("p") = 10, py::arg("delta") = 0.1, py::arg("max_iterations") = 400,
      py::arg("samples") = 0, py::arg("threads") = 0,
      "Returns (optimized params, result summary dict).");
}
