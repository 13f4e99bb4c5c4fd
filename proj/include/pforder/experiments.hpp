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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pforder/decomposition.hpp"
#include "pforder/pauli.hpp"

namespace pforder {

enum class ModelKind { Tfim, Xyz, RandomPauli };

struct ModelSpec {
  ModelKind kind = ModelKind::Tfim;
  double coupling = 1.0;  // TFIM J
  double field = 5.0;     // TFIM h
  double jx = 3.0;
  double jy = 2.0;
  double jz = 1.0;

  /// tfim, xyz or random.
  std::string_view name() const;
  static ModelKind parse_kind(std::string_view name);
  /// `seed` is only consulted by the random model.
  Hamiltonian build(int qubits, std::uint64_t seed) const;
};

struct ExperimentConfig {
  ModelSpec model;
  int qubits = 5;
  double dt = 0.01;
  int steps = 500;
  /// Empty means the experiment's default strategy set.
  std::vector<Strategy> strategies;
  /// Empty means noiseless (or, for the noise sweep, the default grid).
  std::vector<double> noise_levels;
  int ensemble_size = 100;
  std::uint64_t base_seed = 20250701;

  /// Throws std::invalid_argument on dt <= 0, steps < 1, a fraction or
  /// probability outside [0, 1], or a non-positive ensemble size.
  void validate() const;
};

/// Shallow, wide, hybrid, then fractional 0.1 .. 0.9.
std::vector<Strategy> sweep_strategies();

/// `points` values log-spaced from lo to hi inclusive; decade endpoints are
/// exact powers of ten.
std::vector<double> log_spaced(double lo, double hi, int points);

/// One point per decade from 1e-11 to 1e-2.
std::vector<double> default_noise_grid();

enum class Aggregate { None, Mean, StdDev };

struct TrajectoryRecord {
  std::size_t step_index = 0;
  double time = 0.0;
  Strategy strategy;
  std::optional<double> noise;
  std::optional<std::size_t> instance;
  Aggregate aggregate = Aggregate::None;
  std::uint64_t sequence_length = 0;
  double magnetization_exact = 0.0;
  double magnetization_sim = 0.0;
  double trace_distance = 0.0;
  double fidelity = 1.0;
  double bures_distance = 0.0;

  /// |M_sim - M_exact| / |M_exact| * 100, or |M_sim - M_exact| * 100 when
  /// |M_exact| < 1e-8 (see magnetization_error_is_absolute).
  double magnetization_error_percent() const;
  bool magnetization_error_is_absolute() const;
};

struct ExperimentResult {
  std::string experiment;
  std::string model;
  int qubits = 0;
  double dt = 0.0;
  int steps = 0;
  std::vector<TrajectoryRecord> rows;

  /// Last-step row for a strategy (and noise level, if given) among the
  /// non-aggregate rows of instance `instance`.
  const TrajectoryRecord& final_row(const Strategy& strategy, std::optional<double> noise = std::nullopt,
                                    std::optional<std::size_t> instance = std::nullopt) const;
  /// Aggregate row for a strategy in an ensemble result.
  const TrajectoryRecord& aggregate_row(const Strategy& strategy, Aggregate which) const;
};

/// Shallow, wide and hybrid (at least) simulated noiselessly; every step recorded.
ExperimentResult run_extremal_comparison(const ExperimentConfig& cfg);

/// sweep_strategies() simulated noiselessly; every step recorded.
ExperimentResult run_fractional_sweep(const ExperimentConfig& cfg);

/// Random Pauli instances with seeds base_seed + i. Final-step rows per
/// instance and strategy, then mean and population standard deviation rows.
ExperimentResult run_random_ensemble(const ExperimentConfig& cfg);

/// Final-step rows per (strategy, p) against the noiseless exact evolution.
/// Defaults: shallow, wide, fractional 0.1 on default_noise_grid().
ExperimentResult run_noise_sweep(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader =
    "experiment,model,L,dt,steps,strategy,fraction,p,instance,step_index,time,seq_length,"
    "mag_exact,mag_sim,trace_distance,fidelity,bures";

void write_csv(std::ostream& out, const ExperimentResult& result);
std::string to_csv(const ExperimentResult& result);

}  // namespace pforder
