// Copyright 2026 The pforder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "pforder/decomposition.hpp"
#include "pforder/experiments.hpp"
#include "pforder/pauli.hpp"
#include "pforder/simulation.hpp"

namespace py = pybind11;
using namespace pforder;

namespace {

Hamiltonian make_hamiltonian(int qubits, const std::vector<std::pair<double, std::string>>& terms) {
  std::vector<HamiltonianTerm> out;
  out.reserve(terms.size());
  for (const auto& [w, s] : terms) out.push_back({w, PauliString(s)});
  return Hamiltonian(qubits, std::move(out));
}

std::vector<std::pair<std::size_t, double>> factor_list(const SuzukiSequence& s) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(s.factors.size());
  for (const auto& f : s.factors) out.emplace_back(f.term, f.coefficient);
  return out;
}

std::vector<Matrix> unwrap(const std::vector<DensityMatrix>& states) {
  std::vector<Matrix> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.matrix());
  return out;
}

template <typename Runner>
std::string run_to_csv(Runner runner, const ExperimentConfig& cfg) {
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = runner(cfg);
  }
  return to_csv(result);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Second-order Suzuki product formulas and density-matrix simulation";

  py::class_<PauliString>(m, "PauliString")
      .def(py::init<std::string_view>(), py::arg("letters"))
      .def_property_readonly("qubits", &PauliString::qubits)
      .def_property_readonly("x_mask", &PauliString::x_mask)
      .def_property_readonly("z_mask", &PauliString::z_mask)
      .def("__str__", &PauliString::str)
      .def("__repr__", [](const PauliString& p) { return "PauliString('" + p.str() + "')"; })
      .def(py::self == py::self);

  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def(py::init(&make_hamiltonian), py::arg("qubits"), py::arg("terms"),
           "Build from (weight, letters) pairs.")
      .def_property_readonly("qubits", &Hamiltonian::qubits)
      .def_property_readonly("term_count", &Hamiltonian::term_count)
      .def_property_readonly("terms",
                             [](const Hamiltonian& h) {
                               std::vector<std::pair<double, std::string>> out;
                               for (const auto& t : h.terms()) out.emplace_back(t.weight, t.string.str());
                               return out;
                             })
      .def("matrix", [](const Hamiltonian& h) { return hamiltonian_matrix(h); })
      .def("to_text", [](const Hamiltonian& h) { return to_text(h); })
      .def(py::self == py::self);

  m.def("parse_hamiltonian", &parse_hamiltonian, py::arg("text"));
  m.def("build_tfim", &build_tfim, py::arg("qubits"), py::arg("coupling") = 1.0, py::arg("field") = 5.0);
  m.def("build_xyz", &build_xyz, py::arg("qubits"), py::arg("jx") = 3.0, py::arg("jy") = 2.0, py::arg("jz") = 1.0);
  m.def("build_random_pauli", &build_random_pauli, py::arg("qubits"), py::arg("seed"));
  m.def("dense_pauli", [](const std::string& letters) { return dense_pauli(PauliString(letters)); }, py::arg("letters"));
  m.def("commutator", &commutator, py::arg("a"), py::arg("b"));
  m.def("spectral_norm", &spectral_norm, py::arg("a"));

  py::enum_<StepType>(m, "StepType").value("SHALLOW", StepType::Shallow).value("WIDE", StepType::Wide);

  py::class_<Strategy>(m, "Strategy")
      .def_static("shallow", &Strategy::shallow)
      .def_static("wide", &Strategy::wide)
      .def_static("hybrid", &Strategy::hybrid)
      .def_static("fractional", &Strategy::fractional, py::arg("fraction"))
      .def_static("higher_order", &Strategy::higher_order, py::arg("k"))
      .def_static("parse", &Strategy::parse, py::arg("tag"))
      .def_property_readonly("name", [](const Strategy& s) { return std::string(s.name()); })
      .def_property_readonly("tag", &Strategy::tag)
      .def_readonly("fraction", &Strategy::fraction)
      .def_readonly("order", &Strategy::order)
      .def("__repr__", [](const Strategy& s) { return "Strategy('" + s.tag() + "')"; })
      .def(py::self == py::self);

  py::class_<StepChoice>(m, "StepChoice")
      .def_readonly("term", &StepChoice::term)
      .def_readonly("type", &StepChoice::type)
      .def_readonly("bound", &StepChoice::bound);

  py::class_<SuzukiSequence>(m, "SuzukiSequence")
      .def_property_readonly("factors", &factor_list, "List of (term index, coefficient) pairs.")
      .def_readonly("term_count", &SuzukiSequence::term_count)
      .def_readonly("strategy", &SuzukiSequence::strategy)
      .def_readonly("wide_steps", &SuzukiSequence::wide_steps)
      .def_readonly("choices", &SuzukiSequence::choices)
      .def("coefficient_sums", &SuzukiSequence::coefficient_sums)
      .def("to_text", [](const SuzukiSequence& s) { return to_text(s); })
      .def("__len__", &SuzukiSequence::length)
      .def(py::self == py::self);

  m.def("shallow_sequence", py::overload_cast<const Hamiltonian&>(&shallow_sequence), py::arg("h"));
  m.def("wide_sequence", py::overload_cast<const Hamiltonian&, std::size_t>(&wide_sequence), py::arg("h"),
        py::arg("max_length") = kDefaultMaxSequenceLength);
  m.def("hybrid_sequence", &hybrid_sequence, py::arg("h"), py::arg("dt"),
        py::arg("max_length") = kDefaultMaxSequenceLength);
  m.def("fractional_sequence", &fractional_sequence, py::arg("h"), py::arg("dt"), py::arg("fraction"),
        py::arg("max_length") = kDefaultMaxSequenceLength);
  m.def("build_sequence", &build_sequence, py::arg("h"), py::arg("strategy"), py::arg("dt"),
        py::arg("max_length") = kDefaultMaxSequenceLength);
  m.def("compose_higher_order", &compose_higher_order, py::arg("base"), py::arg("k"),
        py::arg("max_length") = kDefaultMaxSequenceLength);
  m.def("predicted_length", &predicted_length, py::arg("term_count"), py::arg("strategy"));
  m.def("suzuki_weight", &suzuki_weight, py::arg("k"));
  m.def("local_step_bound", &local_step_bound, py::arg("term"), py::arg("rest"), py::arg("dt"), py::arg("type"));
  m.def("parse_sequence", &parse_sequence, py::arg("text"));

  // Density matrices cross the boundary as complex numpy arrays and are
  // validated on the way in.
  auto state = [](const Matrix& rho) { return DensityMatrix(rho); };
  m.def("initial_all_zero", [](int qubits) { return initial_all_zero(qubits).matrix(); }, py::arg("qubits"));
  m.def("exact_step_unitary", [](const Hamiltonian& h, double dt) { return exact_step_unitary(h, dt).matrix; },
        py::arg("h"), py::arg("dt"));
  m.def(
      "sequence_step_unitary",
      [](const Hamiltonian& h, const SuzukiSequence& s, double dt) { return sequence_step_unitary(h, s, dt).matrix; },
      py::arg("h"), py::arg("sequence"), py::arg("dt"));
  m.def(
      "evolve_noiseless",
      [state](const Matrix& rho0, const Matrix& u, int steps) {
        return unwrap(evolve_noiseless(state(rho0), {u, std::nullopt}, steps));
      },
      py::arg("rho0"), py::arg("unitary"), py::arg("steps"));
  m.def(
      "evolve_with_noise",
      [state](const Matrix& rho0, const Hamiltonian& h, const SuzukiSequence& s, double dt, int steps, double p) {
        return unwrap(evolve_with_noise(state(rho0), h, s, dt, steps, p));
      },
      py::arg("rho0"), py::arg("h"), py::arg("sequence"), py::arg("dt"), py::arg("steps"), py::arg("p"));
  m.def("depolarize", [state](const Matrix& rho, double p) { return depolarize(state(rho), p).matrix(); },
        py::arg("rho"), py::arg("p"));
  m.def("magnetization_x", [state](const Matrix& rho) { return magnetization_x(state(rho)); }, py::arg("rho"));
  m.def("trace_distance", [state](const Matrix& a, const Matrix& b) { return trace_distance(state(a), state(b)); },
        py::arg("a"), py::arg("b"));
  m.def("fidelity", [state](const Matrix& a, const Matrix& b) { return fidelity(state(a), state(b)); }, py::arg("a"),
        py::arg("b"));
  m.def("bures_distance", [state](const Matrix& a, const Matrix& b) { return bures_distance(state(a), state(b)); },
        py::arg("a"), py::arg("b"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init([](const std::string& model, int qubits, double dt, int steps, std::vector<Strategy> strategies,
                       std::vector<double> noise_levels, int ensemble_size, std::uint64_t base_seed, double coupling,
                       double field, double jx, double jy, double jz) {
             ExperimentConfig cfg;
             cfg.model.kind = ModelSpec::parse_kind(model);
             cfg.model.coupling = coupling;
             cfg.model.field = field;
             cfg.model.jx = jx;
             cfg.model.jy = jy;
             cfg.model.jz = jz;
             cfg.qubits = qubits;
             cfg.dt = dt;
             cfg.steps = steps;
             cfg.strategies = std::move(strategies);
             cfg.noise_levels = std::move(noise_levels);
             cfg.ensemble_size = ensemble_size;
             cfg.base_seed = base_seed;
             cfg.validate();
             return cfg;
           }),
           py::kw_only(), py::arg("model") = "tfim", py::arg("qubits") = 5, py::arg("dt") = 0.01,
           py::arg("steps") = 500, py::arg("strategies") = std::vector<Strategy>{},
           py::arg("noise_levels") = std::vector<double>{}, py::arg("ensemble_size") = 100,
           py::arg("base_seed") = ExperimentConfig{}.base_seed, py::arg("J") = 1.0, py::arg("h") = 5.0,
           py::arg("Jx") = 3.0, py::arg("Jy") = 2.0, py::arg("Jz") = 1.0)
      .def_property_readonly("model", [](const ExperimentConfig& c) { return std::string(c.model.name()); })
      .def_readonly("qubits", &ExperimentConfig::qubits)
      .def_readonly("dt", &ExperimentConfig::dt)
      .def_readonly("steps", &ExperimentConfig::steps)
      .def_readonly("ensemble_size", &ExperimentConfig::ensemble_size)
      .def_readonly("base_seed", &ExperimentConfig::base_seed);

  m.def("run_extremal_comparison", [](const ExperimentConfig& c) { return run_to_csv(run_extremal_comparison, c); },
        py::arg("config"), "Run and return the CSV text.");
  m.def("run_fractional_sweep", [](const ExperimentConfig& c) { return run_to_csv(run_fractional_sweep, c); },
        py::arg("config"));
  m.def("run_random_ensemble", [](const ExperimentConfig& c) { return run_to_csv(run_random_ensemble, c); },
        py::arg("config"));
  m.def("run_noise_sweep", [](const ExperimentConfig& c) { return run_to_csv(run_noise_sweep, c); },
        py::arg("config"));
  m.attr("CSV_HEADER") = std::string(kCsvHeader);
}
