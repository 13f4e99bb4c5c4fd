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

#include "pforder/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "pforder/decomposition.hpp"
#include "pforder/experiments.hpp"
#include "text_util.hpp"

namespace pforder::cli {
namespace {

// Raised for bad user input after CLI11 parsing succeeded (config file
// contents, cross-field validation). Maps to kExitUsageError.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Flags {
  std::optional<std::string> model;
  std::optional<int> qubits;
  std::optional<double> dt;
  std::optional<int> steps;
  std::optional<double> coupling;
  std::optional<double> field;
  std::optional<double> jx;
  std::optional<double> jy;
  std::optional<double> jz;
  std::optional<std::string> strategy;
  std::optional<double> fraction;
  std::optional<double> p_min;
  std::optional<double> p_max;
  std::optional<int> p_points;
  std::optional<int> ensemble_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> config;
  std::optional<std::string> hamiltonian;
  std::optional<int> order;
  bool dry_run = false;
  bool include_hybrid = false;
};

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "model", "qubits", "dt", "steps", "J", "h", "Jx", "Jy", "Jz", "strategy", "fraction", "p-min",
      "p-max", "p-points", "ensemble-size", "seed", "out", "hamiltonian", "order", "dry-run", "include-hybrid"};
  return keys;
}

void add_common_options(CLI::App& sub, Flags& f) {
  sub.set_help_flag("--help", "Print this help message and exit");
  sub.add_option("--model", f.model, "Hamiltonian family: tfim, xyz or random (default tfim)")
      ->check(CLI::IsMember({"tfim", "xyz", "random"}));
  sub.add_option("--qubits", f.qubits, "Chain length L (default 5)")->check(CLI::Range(2, 12));
  sub.add_option("--dt", f.dt, "Timestep (default 0.01)")->check(CLI::PositiveNumber);
  sub.add_option("--steps", f.steps, "Number of timesteps r (default 500)")->check(CLI::Range(1, 100000000));
  sub.add_option("--J", f.coupling, "TFIM coupling J (default 1)");
  sub.add_option("--h", f.field, "TFIM transverse field h (default 5)");
  sub.add_option("--Jx", f.jx, "XYZ coupling Jx (default 3)");
  sub.add_option("--Jy", f.jy, "XYZ coupling Jy (default 2)");
  sub.add_option("--Jz", f.jz, "XYZ coupling Jz (default 1)");
  sub.add_option("--strategy", f.strategy, "shallow, wide, hybrid or fractional (default shallow)")
      ->check(CLI::IsMember({"shallow", "wide", "hybrid", "fractional"}));
  sub.add_option("--fraction", f.fraction, "Wide-step fraction for the fractional strategy, in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  sub.add_option("--p-min", f.p_min, "Smallest depolarizing probability (default 1e-11)")->check(CLI::Range(0.0, 1.0));
  sub.add_option("--p-max", f.p_max, "Largest depolarizing probability (default 1e-2)")->check(CLI::Range(0.0, 1.0));
  sub.add_option("--p-points", f.p_points, "Number of log-spaced probabilities (default 10)")->check(CLI::Range(1, 100000));
  sub.add_option("--ensemble-size", f.ensemble_size, "Random instances (default 100)")->check(CLI::Range(1, 1000000));
  sub.add_option("--seed", f.seed, "Base seed; instance i uses seed + i (default 20250701)");
  sub.add_option("--out", f.out, "Output file (default stdout)");
  sub.add_option("--config", f.config, "key=value config file; flags take precedence");
  sub.add_option("--hamiltonian", f.hamiltonian, "Hamiltonian text file (build-sequence, info)");
  sub.add_option("--order", f.order, "Compose an order-2k formula from the built sequence (build-sequence)")
      ->check(CLI::Range(2, 12));
  sub.add_flag("--dry-run", f.dry_run, "Report sequence lengths without building or simulating");
  sub.add_flag("--include-hybrid", f.include_hybrid, "Add the hybrid strategy to the noise sweep");
}

// Resolves one setting with precedence flag > config file > default.
class Settings {
 public:
  Settings(const Flags& flags, std::map<std::string, std::string> file) : flags_(flags), file_(std::move(file)) {
    for (const auto& [key, value] : file_) {
      if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  }

  template <typename T>
  T get(const std::optional<T>& flag, const std::string& key, T fallback) const {
    if (flag) return *flag;
    auto it = file_.find(key);
    if (it == file_.end()) return fallback;
    return parse<T>(it->second, key);
  }

  template <typename T>
  std::optional<T> get_optional(const std::optional<T>& flag, const std::string& key) const {
    if (flag) return flag;
    auto it = file_.find(key);
    if (it == file_.end()) return std::nullopt;
    return parse<T>(it->second, key);
  }

  bool get_bool(bool flag, const std::string& key) const {
    if (flag) return true;
    auto it = file_.find(key);
    if (it == file_.end()) return false;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw UsageError("config key '" + key + "' expects true or false");
  }

 private:
  template <typename T>
  static T parse(const std::string& text, const std::string& key) {
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        return text;
      } else if constexpr (std::is_floating_point_v<T>) {
        return detail::parse_double(text, key);
      } else {
        return detail::parse_integer<T>(text, key);
      }
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  const Flags& flags_;
  std::map<std::string, std::string> file_;
};

struct Resolved {
  ExperimentConfig config;
  std::string strategy_name = "shallow";
  std::optional<double> fraction;
  double p_min = 1e-11;
  double p_max = 1e-2;
  int p_points = 10;
  std::optional<std::string> out;
  std::optional<std::string> hamiltonian_path;
  std::optional<int> order;
  bool dry_run = false;
  bool include_hybrid = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Resolved resolve(const Flags& flags) {
  std::map<std::string, std::string> file;
  if (flags.config) {
    std::string text;
    try {
      text = read_file(*flags.config);
    } catch (const std::runtime_error& e) {
      throw UsageError(e.what());
    }
    try {
      file = parse_config_text(text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  Settings s(flags, std::move(file));
  Resolved r;
  auto& c = r.config;
  try {
    c.model.kind = ModelSpec::parse_kind(s.get<std::string>(flags.model, "model", "tfim"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.qubits = s.get(flags.qubits, "qubits", 5);
  c.dt = s.get(flags.dt, "dt", 0.01);
  c.steps = s.get(flags.steps, "steps", 500);
  c.model.coupling = s.get(flags.coupling, "J", 1.0);
  c.model.field = s.get(flags.field, "h", 5.0);
  c.model.jx = s.get(flags.jx, "Jx", 3.0);
  c.model.jy = s.get(flags.jy, "Jy", 2.0);
  c.model.jz = s.get(flags.jz, "Jz", 1.0);
  c.ensemble_size = s.get(flags.ensemble_size, "ensemble-size", 100);
  c.base_seed = s.get<std::uint64_t>(flags.seed, "seed", c.base_seed);
  r.strategy_name = s.get<std::string>(flags.strategy, "strategy", "shallow");
  r.fraction = s.get_optional(flags.fraction, "fraction");
  r.p_min = s.get(flags.p_min, "p-min", 1e-11);
  r.p_max = s.get(flags.p_max, "p-max", 1e-2);
  r.p_points = s.get(flags.p_points, "p-points", 10);
  r.out = s.get_optional(flags.out, "out");
  r.hamiltonian_path = s.get_optional(flags.hamiltonian, "hamiltonian");
  r.order = s.get_optional(flags.order, "order");
  r.dry_run = s.get_bool(flags.dry_run, "dry-run");
  r.include_hybrid = s.get_bool(flags.include_hybrid, "include-hybrid");

  if (r.fraction && !(*r.fraction >= 0.0 && *r.fraction <= 1.0)) throw UsageError("fraction must lie in [0, 1]");
  if (!(r.p_min > 0.0) || !(r.p_max >= r.p_min) || r.p_max > 1.0) {
    throw UsageError("noise grid needs 0 < p-min <= p-max <= 1");
  }
  if (r.p_points < 1) throw UsageError("p-points must be at least 1");
  if (r.order && *r.order < 2) throw UsageError("order must be at least 2");
  try {
    c.validate();
    if (!r.hamiltonian_path) c.model.build(c.qubits, c.base_seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return r;
}

Strategy resolved_strategy(const Resolved& r) {
  if (r.strategy_name == "fractional") {
    if (!r.fraction) throw UsageError("the fractional strategy needs --fraction");
    return Strategy::fractional(*r.fraction);
  }
  try {
    return Strategy::parse(r.strategy_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Hamiltonian resolved_hamiltonian(const Resolved& r) {
  if (r.hamiltonian_path) return parse_hamiltonian(read_file(*r.hamiltonian_path));
  return r.config.model.build(r.config.qubits, r.config.base_seed);
}

// Writes to --out when given, else to `out`.
void emit(const Resolved& r, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (!r.out) {
    body(out);
    return;
  }
  std::ofstream file(*r.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + *r.out + "' for writing");
  body(file);
  if (!file) throw std::runtime_error("failed writing '" + *r.out + "'");
}

void report_lengths(std::ostream& out, const Hamiltonian& h, const std::vector<Strategy>& strategies, double dt) {
  out << "m=" << h.term_count() << "\n";
  for (const auto& s : strategies) {
    std::uint64_t length = 0;
    try {
      length = predicted_length(h.term_count(), s);
    } catch (const std::invalid_argument&) {
      length = build_sequence(h, s, dt).length();
    }
    out << s.tag() << " " << length << "\n";
  }
}

int build_sequence_command(const Resolved& r, std::ostream& out) {
  const Hamiltonian h = resolved_hamiltonian(r);
  const Strategy strategy = resolved_strategy(r);
  if (r.dry_run && !r.order && strategy.kind != Strategy::Kind::Hybrid) {
    const auto length = predicted_length(h.term_count(), strategy);
    emit(r, out, [&](std::ostream& o) { o << length << "\n"; });
    return kExitOk;
  }
  SuzukiSequence seq = build_sequence(h, strategy, r.config.dt);
  if (r.order) seq = compose_higher_order(seq, *r.order);
  if (r.dry_run) {
    emit(r, out, [&](std::ostream& o) { o << seq.length() << "\n"; });
    return kExitOk;
  }
  emit(r, out, [&](std::ostream& o) { o << to_text(seq); });
  return kExitOk;
}

int info_command(const Resolved& r, std::ostream& out) {
  const Hamiltonian h = resolved_hamiltonian(r);
  emit(r, out, [&](std::ostream& o) {
    o << to_text(h);
    report_lengths(o, h, {Strategy::shallow(), Strategy::wide(), Strategy::hybrid(), Strategy::fractional(0.1)},
                   r.config.dt);
  });
  return kExitOk;
}

int experiment_command(const std::string& name, Resolved r, std::ostream& out) {
  auto& cfg = r.config;
  if (name == "ensemble") cfg.model.kind = ModelKind::RandomPauli;
  if (name == "noise-sweep") {
    cfg.noise_levels = log_spaced(r.p_min, r.p_max, r.p_points);
    cfg.strategies = {Strategy::shallow(), Strategy::wide(), Strategy::fractional(0.1)};
    if (r.include_hybrid) cfg.strategies.push_back(Strategy::hybrid());
  }
  if (r.dry_run) {
    std::vector<Strategy> strategies = cfg.strategies;
    if (strategies.empty()) {
      strategies = name == "extremal" ? std::vector<Strategy>{Strategy::shallow(), Strategy::wide(), Strategy::hybrid()}
                                      : sweep_strategies();
    }
    const Hamiltonian h = cfg.model.build(cfg.qubits, cfg.base_seed);
    emit(r, out, [&](std::ostream& o) { report_lengths(o, h, strategies, cfg.dt); });
    return kExitOk;
  }
  ExperimentResult result;
  if (name == "extremal") {
    result = run_extremal_comparison(cfg);
  } else if (name == "fractional-sweep") {
    result = run_fractional_sweep(cfg);
  } else if (name == "ensemble") {
    result = run_random_ensemble(cfg);
  } else {
    result = run_noise_sweep(cfg);
  }
  emit(r, out, [&](std::ostream& o) { write_csv(o, result); });
  return kExitOk;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    }
    auto key = detail::trim(view.substr(0, eq));
    if (key.starts_with("--")) key.remove_prefix(2);
    out[std::string(key)] = std::string(detail::trim(view.substr(eq + 1)));
  }
  return out;
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order Suzuki product-formula decompositions and their simulation", "pforder"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"extremal", "Shallow vs wide vs hybrid trajectories (CSV)"},
      {"fractional-sweep", "Fractional sweep f = 0.1 .. 0.9 with the extremal strategies (CSV)"},
      {"ensemble", "Final trace distances over an ensemble of random Pauli chains (CSV)"},
      {"noise-sweep", "Final errors under depolarizing noise on a log grid of p (CSV)"},
      {"build-sequence", "Print a sequence in the text format, or its length with --dry-run"},
      {"info", "Print the Hamiltonian and the sequence lengths per strategy"},
  };
  for (const auto& [name, help] : commands) add_common_options(*app.add_subcommand(name, help), flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pforder: " << e.what() << "\n";
    const CLI::App* target = &app;
    for (const auto* sub : app.get_subcommands()) target = sub;
    err << target->help();
    return kExitUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Resolved resolved = resolve(flags);
    if (command == "build-sequence") return build_sequence_command(resolved, out);
    if (command == "info") return info_command(resolved, out);
    return experiment_command(command, std::move(resolved), out);
  } catch (const UsageError& e) {
    err << "pforder " << command << ": " << e.what() << "\n";
    err << "Run 'pforder " << command << " --help' for usage.\n";
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "pforder " << command << ": " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace pforder::cli
