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

#include "pforder/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pforder/simulation.hpp"

namespace pforder {
namespace {

// Runs fn(0..n-1) on a small thread pool. Results go to caller-owned slots,
// so output order never depends on scheduling.
template <typename Fn>
void for_each_cell(std::size_t n, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mutex;
  std::size_t next = 0;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mutex);
        if (next >= n || error) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct Reference {
  std::vector<DensityMatrix> states;
  std::vector<double> magnetization;
};

Reference exact_reference(const Hamiltonian& h, double dt, int steps) {
  Reference ref;
  ref.states = evolve_noiseless(initial_all_zero(h.qubits()), exact_step_unitary(h, dt), steps);
  ref.magnetization.reserve(ref.states.size());
  for (const auto& s : ref.states) ref.magnetization.push_back(magnetization_x(s));
  return ref;
}

TrajectoryRecord measure(const Reference& ref, const DensityMatrix& state, std::size_t step, double dt,
                         const SuzukiSequence& seq, std::optional<double> noise) {
  TrajectoryRecord rec;
  rec.step_index = step + 1;
  rec.time = static_cast<double>(step + 1) * dt;
  rec.strategy = seq.strategy;
  rec.noise = noise;
  rec.sequence_length = seq.length();
  rec.magnetization_exact = ref.magnetization[step];
  rec.magnetization_sim = magnetization_x(state);
  rec.trace_distance = trace_distance(ref.states[step], state);
  rec.fidelity = fidelity(ref.states[step], state);
  rec.bures_distance = bures_from_fidelity(rec.fidelity);
  return rec;
}

// Simulates one strategy against the exact reference. With `all_steps` false
// only the final step is measured.
std::vector<TrajectoryRecord> simulate_cell(const Hamiltonian& h, const Reference& ref, const Strategy& strategy,
                                            double dt, int steps, std::optional<double> noise, bool all_steps) {
  const SuzukiSequence seq = build_sequence(h, strategy, dt);
  const DensityMatrix rho0 = initial_all_zero(h.qubits());
  const std::vector<DensityMatrix> states =
      noise ? evolve_with_noise(rho0, h, seq, dt, steps, *noise)
            : evolve_noiseless(rho0, sequence_step_unitary(h, seq, dt), steps);
  std::vector<TrajectoryRecord> rows;
  const std::size_t first = all_steps ? 0 : states.size() - 1;
  for (std::size_t k = first; k < states.size(); ++k) rows.push_back(measure(ref, states[k], k, dt, seq, noise));
  return rows;
}

ExperimentResult make_result(std::string experiment, const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.experiment = std::move(experiment);
  result.model = std::string(cfg.model.name());
  result.qubits = cfg.qubits;
  result.dt = cfg.dt;
  result.steps = cfg.steps;
  return result;
}

bool contains(const std::vector<Strategy>& list, Strategy::Kind kind) {
  return std::any_of(list.begin(), list.end(), [&](const Strategy& s) { return s.kind == kind; });
}

ExperimentResult run_trajectories(std::string experiment, const ExperimentConfig& cfg,
                                  const std::vector<Strategy>& strategies) {
  cfg.validate();
  const Hamiltonian h = cfg.model.build(cfg.qubits, cfg.base_seed);
  const Reference ref = exact_reference(h, cfg.dt, cfg.steps);
  std::vector<std::vector<TrajectoryRecord>> cells(strategies.size());
  for_each_cell(strategies.size(), [&](std::size_t i) {
    cells[i] = simulate_cell(h, ref, strategies[i], cfg.dt, cfg.steps, std::nullopt, true);
  });
  auto result = make_result(std::move(experiment), cfg);
  for (auto& c : cells) result.rows.insert(result.rows.end(), c.begin(), c.end());
  return result;
}

void append_number(std::string& out, double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  out += buffer;
}

}  // namespace

std::string_view ModelSpec::name() const {
  switch (kind) {
    case ModelKind::Tfim: return "tfim";
    case ModelKind::Xyz: return "xyz";
    case ModelKind::RandomPauli: return "random";
  }
  return "unknown";
}

ModelKind ModelSpec::parse_kind(std::string_view name) {
  if (name == "tfim") return ModelKind::Tfim;
  if (name == "xyz") return ModelKind::Xyz;
  if (name == "random") return ModelKind::RandomPauli;
  throw std::invalid_argument("unknown model '" + std::string(name) + "' (expected tfim, xyz or random)");
}

Hamiltonian ModelSpec::build(int qubits, std::uint64_t seed) const {
  switch (kind) {
    case ModelKind::Tfim: return build_tfim(qubits, coupling, field);
    case ModelKind::Xyz: return build_xyz(qubits, jx, jy, jz);
    case ModelKind::RandomPauli: return build_random_pauli(qubits, seed);
  }
  throw std::invalid_argument("unknown model kind");
}

void ExperimentConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (qubits < 2 || qubits > kDefaultQubitCap) {
    throw std::invalid_argument("qubits must lie in [2, " + std::to_string(kDefaultQubitCap) + "]");
  }
  if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be at least 1");
  for (const auto& s : strategies) {
    if (s.kind == Strategy::Kind::Fractional && !(s.fraction >= 0.0 && s.fraction <= 1.0)) {
      throw std::invalid_argument("fraction must lie in [0, 1]");
    }
    if (s.kind == Strategy::Kind::HigherOrder) throw std::invalid_argument("experiments run second-order strategies only");
  }
  for (double p : noise_levels) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise probability must lie in [0, 1]");
  }
}

std::vector<Strategy> sweep_strategies() {
  std::vector<Strategy> out = {Strategy::shallow(), Strategy::wide(), Strategy::hybrid()};
  for (int i = 1; i <= 9; ++i) out.push_back(Strategy::fractional(i / 10.0));
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log grid needs 0 < lo <= hi");
  if (points < 1) throw std::invalid_argument("log grid needs at least one point");
  if (points == 1) return {lo};
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    double exponent = a + (b - a) * i / (points - 1);
    const double nearest = std::round(exponent);
    if (std::abs(exponent - nearest) < 1e-9) exponent = nearest;
    out.push_back(std::pow(10.0, exponent));
  }
  return out;
}

std::vector<double> default_noise_grid() { return log_spaced(1e-11, 1e-2, 10); }

double TrajectoryRecord::magnetization_error_percent() const {
  const double diff = std::abs(magnetization_sim - magnetization_exact);
  if (magnetization_error_is_absolute()) return diff * 100.0;
  return diff / std::abs(magnetization_exact) * 100.0;
}

bool TrajectoryRecord::magnetization_error_is_absolute() const { return std::abs(magnetization_exact) < 1e-8; }

const TrajectoryRecord& ExperimentResult::final_row(const Strategy& strategy, std::optional<double> noise,
                                                    std::optional<std::size_t> instance) const {
  const TrajectoryRecord* found = nullptr;
  for (const auto& r : rows) {
    if (r.aggregate != Aggregate::None || !(r.strategy == strategy) || r.instance != instance) continue;
    if (noise && (!r.noise || *r.noise != *noise)) continue;
    if (!found || r.step_index >= found->step_index) found = &r;
  }
  if (!found) throw std::out_of_range("no row for strategy " + strategy.tag());
  return *found;
}

const TrajectoryRecord& ExperimentResult::aggregate_row(const Strategy& strategy, Aggregate which) const {
  for (const auto& r : rows) {
    if (r.aggregate == which && r.strategy == strategy) return r;
  }
  throw std::out_of_range("no aggregate row for strategy " + strategy.tag());
}

ExperimentResult run_extremal_comparison(const ExperimentConfig& cfg) {
  std::vector<Strategy> strategies = cfg.strategies;
  if (strategies.empty()) strategies = {Strategy::shallow(), Strategy::wide(), Strategy::hybrid()};
  for (auto kind : {Strategy::Kind::Shallow, Strategy::Kind::Wide, Strategy::Kind::Hybrid}) {
    if (!contains(strategies, kind)) {
      throw std::invalid_argument("extremal comparison needs shallow, wide and hybrid strategies");
    }
  }
  return run_trajectories("extremal", cfg, strategies);
}

ExperimentResult run_fractional_sweep(const ExperimentConfig& cfg) {
  return run_trajectories("fractional-sweep", cfg, cfg.strategies.empty() ? sweep_strategies() : cfg.strategies);
}

ExperimentResult run_random_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Strategy> strategies = cfg.strategies.empty() ? sweep_strategies() : cfg.strategies;
  const auto instances = static_cast<std::size_t>(cfg.ensemble_size);
  std::vector<std::vector<TrajectoryRecord>> cells(instances);
  for_each_cell(instances, [&](std::size_t i) {
    const Hamiltonian h = build_random_pauli(cfg.qubits, cfg.base_seed + i);
    const Reference ref = exact_reference(h, cfg.dt, cfg.steps);
    for (const auto& s : strategies) {
      auto rec = simulate_cell(h, ref, s, cfg.dt, cfg.steps, std::nullopt, false).front();
      rec.instance = i;
      cells[i].push_back(rec);
    }
  });

  ExperimentConfig random_cfg = cfg;
  random_cfg.model.kind = ModelKind::RandomPauli;
  auto result = make_result("ensemble", random_cfg);
  for (auto& c : cells) result.rows.insert(result.rows.end(), c.begin(), c.end());

  const double n = static_cast<double>(instances);
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    TrajectoryRecord mean;
    mean.step_index = static_cast<std::size_t>(cfg.steps);
    mean.time = cfg.steps * cfg.dt;
    mean.strategy = strategies[s];
    mean.aggregate = Aggregate::Mean;
    mean.fidelity = 0.0;
    for (const auto& c : cells) {
      const auto& r = c[s];
      mean.magnetization_exact += r.magnetization_exact / n;
      mean.magnetization_sim += r.magnetization_sim / n;
      mean.trace_distance += r.trace_distance / n;
      mean.fidelity += r.fidelity / n;
      mean.bures_distance += r.bures_distance / n;
    }
    TrajectoryRecord spread = mean;
    spread.aggregate = Aggregate::StdDev;
    spread.magnetization_exact = spread.magnetization_sim = spread.trace_distance = spread.fidelity =
        spread.bures_distance = 0.0;
    for (const auto& c : cells) {
      const auto& r = c[s];
      auto sq = [](double x) { return x * x; };
      spread.magnetization_exact += sq(r.magnetization_exact - mean.magnetization_exact) / n;
      spread.magnetization_sim += sq(r.magnetization_sim - mean.magnetization_sim) / n;
      spread.trace_distance += sq(r.trace_distance - mean.trace_distance) / n;
      spread.fidelity += sq(r.fidelity - mean.fidelity) / n;
      spread.bures_distance += sq(r.bures_distance - mean.bures_distance) / n;
    }
    for (double* v : {&spread.magnetization_exact, &spread.magnetization_sim, &spread.trace_distance,
                      &spread.fidelity, &spread.bures_distance}) {
      *v = std::sqrt(*v);
    }
    result.rows.push_back(mean);
    result.rows.push_back(spread);
  }
  return result;
}

ExperimentResult run_noise_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Strategy> strategies =
      cfg.strategies.empty()
          ? std::vector<Strategy>{Strategy::shallow(), Strategy::wide(), Strategy::fractional(0.1)}
          : cfg.strategies;
  const std::vector<double> levels = cfg.noise_levels.empty() ? default_noise_grid() : cfg.noise_levels;
  const Hamiltonian h = cfg.model.build(cfg.qubits, cfg.base_seed);
  const Reference ref = exact_reference(h, cfg.dt, cfg.steps);

  std::vector<TrajectoryRecord> cells(strategies.size() * levels.size());
  for_each_cell(cells.size(), [&](std::size_t i) {
    const auto& s = strategies[i / levels.size()];
    const double p = levels[i % levels.size()];
    cells[i] = simulate_cell(h, ref, s, cfg.dt, cfg.steps, p, false).front();
  });
  auto result = make_result("noise-sweep", cfg);
  result.rows = std::move(cells);
  return result;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const auto& r : result.rows) {
    line.clear();
    line += result.experiment;
    line += ',';
    line += result.model;
    line += ',' + std::to_string(result.qubits) + ',';
    append_number(line, result.dt);
    line += ',' + std::to_string(result.steps) + ',';
    line += r.strategy.name();
    line += ',';
    if (r.strategy.kind == Strategy::Kind::Fractional) append_number(line, r.strategy.fraction);
    line += ',';
    if (r.noise) append_number(line, *r.noise);
    line += ',';
    switch (r.aggregate) {
      case Aggregate::None:
        if (r.instance) line += std::to_string(*r.instance);
        break;
      case Aggregate::Mean: line += "mean"; break;
      case Aggregate::StdDev: line += "std"; break;
    }
    line += ',' + std::to_string(r.step_index) + ',';
    append_number(line, r.time);
    line += ',';
    if (r.aggregate == Aggregate::None) line += std::to_string(r.sequence_length);
    for (double v : {r.magnetization_exact, r.magnetization_sim, r.trace_distance, r.fidelity, r.bures_distance}) {
      line += ',';
      append_number(line, v);
    }
    out << line << '\n';
  }
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream out;
  write_csv(out, result);
  return out.str();
}

}  // namespace pforder
