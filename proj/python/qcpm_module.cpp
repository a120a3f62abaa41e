// Copyright 2026 The QCPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcpm/chebyshev.hpp"
#include "qcpm/cli.hpp"
#include "qcpm/data_io.hpp"
#include "qcpm/diagnostics.hpp"
#include "qcpm/errors.hpp"
#include "qcpm/model.hpp"
#include "qcpm/sampler.hpp"

namespace py = pybind11;
using namespace qcpm;

namespace {

py::array_t<double> square_array(std::span<const double> data, std::size_t side) {
  py::array_t<double> out({side, side});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_qcpm, m) {
  m.doc() = "Bivariate quantum Chebyshev probabilistic models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // Chebyshev features.
  m.def("chebyshev_t", &chebyshev_t, py::arg("degree"), py::arg("x"));
  m.def("feature_vector",
        [](double x, int n_qubits) { return feature_vector(x, n_qubits).amplitudes; },
        py::arg("x"), py::arg("n_qubits"));
  m.def("nodes", [](int n_qubits) { return make_grid(n_qubits).nodes; }, py::arg("n_qubits"));
  m.def("half_nodes", [](int n_qubits) { return make_grid(n_qubits).half_nodes; },
        py::arg("n_qubits"));
  m.def("training_lattice", [](int n_qubits) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : training_lattice(make_grid(n_qubits))) out.emplace_back(p.u, p.v);
    return out;
  }, py::arg("n_qubits"));
  m.def("cheb_transform", [](int n_qubits_total) {
    const ChebTransform t = cheb_transform(n_qubits_total);
    return square_array(t.data(), t.dim());
  }, py::arg("n_qubits_total"));

  py::class_<DomainBox>(m, "DomainBox")
      .def(py::init<>())
      .def_readwrite("z_lo", &DomainBox::x_lo)
      .def_readwrite("z_hi", &DomainBox::x_hi)
      .def_readwrite("q_lo", &DomainBox::y_lo)
      .def_readwrite("q_hi", &DomainBox::y_hi)
      .def_property(
          "z_axis", [](const DomainBox& b) { return std::string(to_string(b.x_axis)); },
          [](DomainBox& b, const std::string& s) { b.x_axis = parse_axis_transform(s); })
      .def_property(
          "q_axis", [](const DomainBox& b) { return std::string(to_string(b.y_axis)); },
          [](DomainBox& b, const std::string& s) { b.y_axis = parse_axis_transform(s); });

  m.def("to_chebyshev_domain", [](double z, double q, const DomainBox& box) {
    const ChebPoint p = to_chebyshev_domain({z, q}, box);
    return std::pair{p.u, p.v};
  }, py::arg("z"), py::arg("q"), py::arg("box") = DomainBox{});
  m.def("from_chebyshev_domain", [](double u, double v, const DomainBox& box) {
    const ProblemPoint p = from_chebyshev_domain({u, v}, box);
    return std::pair{p.x, p.y};
  }, py::arg("u"), py::arg("v"), py::arg("box") = DomainBox{});

  // Model.
  py::class_<Architecture>(m, "Architecture")
      .def(py::init([](int n_qubits, int depth, bool use_correlation, const std::string& entangler) {
             Architecture a{n_qubits, depth, use_correlation, parse_entangler(entangler)};
             a.validate();
             return a;
           }),
           py::arg("n_qubits") = 4, py::arg("depth") = 3, py::arg("use_correlation") = true,
           py::arg("entangler") = "closed")
      .def_readonly("n_qubits", &Architecture::n_qubits)
      .def_readonly("depth", &Architecture::depth)
      .def_readonly("use_correlation", &Architecture::use_correlation)
      .def_property_readonly("entangler",
                             [](const Architecture& a) { return std::string(to_string(a.entangler)); })
      .def_property_readonly("parameter_count", &Architecture::parameter_count)
      .def_property_readonly("angles_per_register", &Architecture::angles_per_register);

  py::class_<QcpmParams>(m, "Params")
      .def(py::init<>())
      .def(py::init([](std::vector<double> theta, std::vector<double> vartheta, double alpha,
                       double beta) { return QcpmParams{std::move(theta), std::move(vartheta), alpha, beta}; }),
           py::arg("theta"), py::arg("vartheta"), py::arg("alpha") = 1.0, py::arg("beta") = 0.0)
      .def_readwrite("theta", &QcpmParams::theta)
      .def_readwrite("vartheta", &QcpmParams::vartheta)
      .def_readwrite("alpha", &QcpmParams::alpha)
      .def_readwrite("beta", &QcpmParams::beta)
      .def("flatten", &QcpmParams::flatten);

  m.def("teacher_params", &teacher_params, py::arg("arch"), py::arg("seed"));
  m.def("model_amplitude", [](const QcpmParams& p, const Architecture& a, double u, double v) {
    return model_amplitude({u, v}, p, a);
  }, py::arg("params"), py::arg("arch"), py::arg("u"), py::arg("v"));
  m.def("model_value", [](const QcpmParams& p, const Architecture& a, double u, double v) {
    return model_value({u, v}, p, a);
  }, py::arg("params"), py::arg("arch"), py::arg("u"), py::arg("v"));
  m.def("coefficients", [](const QcpmParams& p, const Architecture& a) {
    const CoefficientMatrix c = extract_coefficients(p, a);
    return square_array(c.entries, c.dim);
  }, py::arg("params"), py::arg("arch"));
  m.def("gradient", [](const QcpmParams& p, const Architecture& a,
                       const std::vector<std::pair<double, double>>& points,
                       const std::vector<double>& targets) {
    std::vector<ChebPoint> pts;
    for (const auto& [u, v] : points) pts.push_back({u, v});
    return gradient(p, a, pts, targets);
  }, py::arg("params"), py::arg("arch"), py::arg("points"), py::arg("targets"));

  // Data.
  py::class_<TargetGrid>(m, "TargetGrid")
      .def_readonly("label", &TargetGrid::label)
      .def_readonly("n_qubits", &TargetGrid::n_qubits)
      .def_readonly("scale", &TargetGrid::scale)
      .def_readonly("box", &TargetGrid::box)
      .def_property_readonly("values", &TargetGrid::values)
      .def("__len__", [](const TargetGrid& g) { return g.points.size(); });

  m.def("synth_target", [](const std::string& kind, const Architecture& arch, std::uint64_t seed,
                           double correlation) {
    SynthOptions options;
    options.arch = arch;
    options.correlation = correlation;
    return synth_target(parse_synth_kind(kind), options, seed);
  }, py::arg("kind"), py::arg("arch") = Architecture{}, py::arg("seed") = 0,
        py::arg("correlation") = 0.7);
  m.def("read_grid", [](const std::string& path) { return read_grid(path); }, py::arg("path"));
  m.def("write_grid", &write_grid, py::arg("grid"), py::arg("path"));

  // Training.
  py::class_<TrainRecord>(m, "TrainRecord")
      .def_readonly("loss", &TrainRecord::loss)
      .def_readonly("r2", &TrainRecord::r2)
      .def_readonly("nonpurity", &TrainRecord::nonpurity)
      .def_readonly("final_params", &TrainRecord::final_params)
      .def_readonly("best_learning_rate", &TrainRecord::best_learning_rate)
      .def_readonly("final_loss", &TrainRecord::final_loss)
      .def_readonly("final_r2", &TrainRecord::final_r2);

  m.def("train", [](const TargetGrid& grid, const Architecture& arch, int epochs,
                    std::vector<double> learning_rates, std::uint64_t seed, int diagnostics_cadence) {
    TrainConfig config;
    config.arch = arch;
    config.epochs = epochs;
    if (!learning_rates.empty()) config.learning_rates = std::move(learning_rates);
    config.seed = seed;
    config.diagnostics_cadence = diagnostics_cadence;
    py::gil_scoped_release release;
    return train(config, grid);
  }, py::arg("grid"), py::arg("arch") = Architecture{}, py::arg("epochs") = 10000,
        py::arg("learning_rates") = std::vector<double>{}, py::arg("seed") = 0,
        py::arg("diagnostics_cadence") = 0);

  // Sampling.
  m.def("exact_distribution", [](const QcpmParams& p, const Architecture& a, int extension) {
    const ProbabilityTable t = exact_distribution(p, a, extension);
    return square_array(t.probabilities, t.side);
  }, py::arg("params"), py::arg("arch"), py::arg("extension") = 0);
  m.def("sample", [](const QcpmParams& p, const Architecture& a, int extension,
                     std::uint64_t shots, std::uint64_t seed) {
    const SampleHistogram h = draw_samples(exact_distribution(p, a, extension), shots, seed);
    py::array_t<std::uint64_t> out({h.side, h.side});
    std::copy(h.counts.begin(), h.counts.end(), out.mutable_data());
    return out;
  }, py::arg("params"), py::arg("arch"), py::arg("extension") = 0, py::arg("shots") = 1000000,
        py::arg("seed") = 0);

  // Diagnostics.
  m.def("nonpurity", &nonpurity, py::arg("params"), py::arg("arch"));
  m.def("half_register_entropy", [](const QcpmParams& p, const Architecture& a,
                                    const std::string& reg) {
    return half_register_entropy(p, a, parse_register(reg));
  }, py::arg("params"), py::arg("arch"), py::arg("register") = "Z");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = 0;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
