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

#include "pforder/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace pforder {
namespace {

struct PlanStep {
  std::size_t term;
  StepType type;
};

// Factor count of a plan of recursive steps (outermost first).
std::uint64_t plan_length(const std::vector<PlanStep>& plan) {
  std::uint64_t len = 1;
  for (auto it = plan.rbegin(); it != plan.rend(); ++it) {
    if (it->type == StepType::Shallow) {
      len += 2;
    } else {
      if (len > (std::numeric_limits<std::uint64_t>::max() - 1) / 2) {
        throw std::length_error("sequence length overflows 64 bits");
      }
      len = 2 * len + 1;
    }
  }
  return len;
}

void check_cap(std::uint64_t length, std::size_t max_length) {
  if (length > max_length) {
    throw std::length_error("sequence length " + std::to_string(length) +
                            " exceeds the configured cap of " + std::to_string(max_length));
  }
}

std::vector<Factor> emit(const std::vector<PlanStep>& plan, std::size_t level, std::size_t last_term,
                         double scale) {
  if (level == plan.size()) return {{last_term, scale}};
  const auto& step = plan[level];
  std::vector<Factor> out;
  if (step.type == StepType::Shallow) {
    auto inner = emit(plan, level + 1, last_term, scale);
    out.reserve(inner.size() + 2);
    out.push_back({step.term, scale / 2});
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back({step.term, scale / 2});
  } else {
    auto inner = emit(plan, level + 1, last_term, scale / 2);
    out.reserve(2 * inner.size() + 1);
    out.insert(out.end(), inner.begin(), inner.end());
    out.push_back({step.term, scale});
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return out;
}

SuzukiSequence realize(const std::vector<PlanStep>& plan, std::size_t last_term, std::size_t term_count,
                       Strategy strategy, std::size_t max_length) {
  check_cap(plan_length(plan), max_length);
  SuzukiSequence seq;
  seq.factors = emit(plan, 0, last_term, 1.0);
  seq.term_count = term_count;
  seq.strategy = strategy;
  seq.wide_steps = static_cast<std::size_t>(
      std::count_if(plan.begin(), plan.end(), [](const PlanStep& s) { return s.type == StepType::Wide; }));
  return seq;
}

bool strictly_below(double candidate, double best) {
  return candidate < best - 1e-12 * std::max(std::abs(candidate), std::abs(best));
}

struct Candidate {
  std::size_t position;  // index into the remaining list
  StepType type;
  double bound;
};

// Scan the remaining terms for the minimal local bound among `types`, in
// preference order: earlier types win ties, then lower term indices.
Candidate select_step(const std::vector<Matrix>& term_matrices, const std::vector<std::size_t>& remaining,
                      const Matrix& remaining_sum, double dt, std::span<const StepType> types) {
  std::vector<Matrix> rests;
  rests.reserve(remaining.size());
  for (std::size_t j : remaining) rests.push_back(remaining_sum - term_matrices[j]);

  Candidate best{0, types.front(), std::numeric_limits<double>::infinity()};
  bool have_best = false;
  for (StepType type : types) {
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      double b = local_step_bound(term_matrices[remaining[pos]], rests[pos], dt, type);
      if (!have_best || strictly_below(b, best.bound)) {
        best = {pos, type, b};
        have_best = true;
      }
    }
  }
  return best;
}

class GreedyBuilder {
 public:
  GreedyBuilder(const Hamiltonian& h, double dt) : dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("timestep must be positive");
    remaining_.resize(h.term_count());
    std::iota(remaining_.begin(), remaining_.end(), std::size_t{0});
    for (const auto& t : h.terms()) matrices_.push_back(term_matrix(t));
    sum_ = hamiltonian_matrix(h);
  }

  std::size_t remaining() const { return remaining_.size(); }

  void step(std::span<const StepType> types) {
    auto pick = select_step(matrices_, remaining_, sum_, dt_ * scale_, types);
    const std::size_t term = remaining_[pick.position];
    plan_.push_back({term, pick.type});
    choices_.push_back({term, pick.type, pick.bound});
    sum_ -= matrices_[term];
    remaining_.erase(remaining_.begin() + static_cast<std::ptrdiff_t>(pick.position));
    if (pick.type == StepType::Wide) scale_ /= 2;
  }

  SuzukiSequence finish(std::size_t term_count, Strategy strategy, std::size_t max_length) {
    auto seq = realize(plan_, remaining_.front(), term_count, strategy, max_length);
    seq.choices = std::move(choices_);
    return seq;
  }

 private:
  double dt_;
  double scale_ = 1.0;
  std::vector<std::size_t> remaining_;
  std::vector<Matrix> matrices_;
  Matrix sum_;
  std::vector<PlanStep> plan_;
  std::vector<StepChoice> choices_;
};

constexpr StepType kBothTypes[] = {StepType::Shallow, StepType::Wide};
constexpr StepType kWideOnly[] = {StepType::Wide};
constexpr StepType kShallowOnly[] = {StepType::Shallow};

}  // namespace

std::string_view to_string(StepType type) { return type == StepType::Shallow ? "shallow" : "wide"; }

std::string_view Strategy::name() const {
  switch (kind) {
    case Kind::Shallow: return "shallow";
    case Kind::Wide: return "wide";
    case Kind::Hybrid: return "hybrid";
    case Kind::Fractional: return "fractional";
    case Kind::HigherOrder: return "higher-order";
  }
  return "unknown";
}

std::string Strategy::tag() const {
  std::string out(name());
  if (kind == Kind::Fractional) out += ":" + detail::format_shortest(fraction);
  if (kind == Kind::HigherOrder) out += ":" + std::to_string(order);
  return out;
}

Strategy Strategy::parse(std::string_view tag) {
  auto colon = tag.find(':');
  auto head = tag.substr(0, colon);
  auto param = colon == std::string_view::npos ? std::string_view{} : tag.substr(colon + 1);
  auto no_param = [&](Strategy s) {
    if (colon != std::string_view::npos) throw std::invalid_argument("strategy '" + std::string(head) + "' takes no parameter");
    return s;
  };
  if (head == "shallow") return no_param(shallow());
  if (head == "wide") return no_param(wide());
  if (head == "hybrid") return no_param(hybrid());
  if (head == "fractional") {
    if (param.empty()) throw std::invalid_argument("fractional strategy needs a fraction, e.g. fractional:0.4");
    double f = detail::parse_double(param, "fraction");
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fraction must lie in [0, 1]");
    return fractional(f);
  }
  if (head == "higher-order") {
    int k = detail::parse_integer<int>(param, "order");
    if (k < 2) throw std::invalid_argument("higher-order strategy needs k >= 2");
    return higher_order(k);
  }
  throw std::invalid_argument("unknown strategy '" + std::string(tag) + "'");
}

std::vector<double> SuzukiSequence::coefficient_sums() const {
  std::vector<double> sums(term_count, 0.0);
  for (const auto& f : factors) sums.at(f.term) += f.coefficient;
  return sums;
}

bool operator==(const SuzukiSequence& a, const SuzukiSequence& b) {
  return a.term_count == b.term_count && a.strategy == b.strategy && a.factors == b.factors;
}

SuzukiSequence shallow_sequence(std::size_t term_count) {
  if (term_count == 0) throw std::invalid_argument("sequence needs at least one term");
  std::vector<PlanStep> plan;
  for (std::size_t j = 0; j + 1 < term_count; ++j) plan.push_back({j, StepType::Shallow});
  return realize(plan, term_count - 1, term_count, Strategy::shallow(), kDefaultMaxSequenceLength);
}

SuzukiSequence shallow_sequence(const Hamiltonian& h) { return shallow_sequence(h.term_count()); }

SuzukiSequence wide_sequence(std::size_t term_count, std::size_t max_length) {
  if (term_count == 0) throw std::invalid_argument("sequence needs at least one term");
  if (term_count >= 64) check_cap(std::numeric_limits<std::uint64_t>::max(), max_length);
  std::vector<PlanStep> plan;
  if (term_count == 2) {
    plan.push_back({0, StepType::Wide});
  } else if (term_count > 2) {
    for (std::size_t j = 0; j + 2 < term_count; ++j) plan.push_back({j, StepType::Wide});
    plan.push_back({term_count - 2, StepType::Shallow});
  }
  return realize(plan, term_count - 1, term_count, Strategy::wide(), max_length);
}

SuzukiSequence wide_sequence(const Hamiltonian& h, std::size_t max_length) {
  return wide_sequence(h.term_count(), max_length);
}

double local_step_bound(const Matrix& term, const Matrix& rest, double dt, StepType type) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("timestep must be positive");
  const Matrix& a = type == StepType::Shallow ? term : rest;
  const Matrix& b = type == StepType::Shallow ? rest : term;
  const Matrix ab = commutator(a, b);
  return dt * dt * dt * (spectral_norm(commutator(a, ab)) + 2.0 * spectral_norm(commutator(b, ab)));
}

SuzukiSequence hybrid_sequence(const Hamiltonian& h, double dt, std::size_t max_length) {
  GreedyBuilder builder(h, dt);
  while (builder.remaining() > 1) {
    builder.step(kBothTypes);
  }
  return builder.finish(h.term_count(), Strategy::hybrid(), max_length);
}

std::size_t fractional_wide_budget(std::size_t term_count, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::invalid_argument("fraction must lie in [0, 1]");
  if (term_count == 0) throw std::invalid_argument("sequence needs at least one term");
  const double steps = static_cast<double>(term_count - 1);
  const double budget = std::round(fraction * steps);
  return static_cast<std::size_t>(std::clamp(budget, 0.0, steps));
}

SuzukiSequence fractional_sequence(const Hamiltonian& h, double dt, double fraction, std::size_t max_length) {
  if (h.term_count() < 2) throw std::invalid_argument("fractional sequence needs at least two terms");
  const std::size_t wide_budget = fractional_wide_budget(h.term_count(), fraction);
  check_cap(predicted_length(h.term_count(), Strategy::fractional(fraction)), max_length);
  GreedyBuilder builder(h, dt);
  for (std::size_t i = 0; i < wide_budget; ++i) builder.step(kWideOnly);
  while (builder.remaining() > 1) builder.step(kShallowOnly);
  return builder.finish(h.term_count(), Strategy::fractional(fraction), max_length);
}

double suzuki_weight(int k) {
  if (k < 2) throw std::invalid_argument("Suzuki weight needs k >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

namespace {

std::vector<Factor> compose_level(const std::vector<Factor>& base, int k) {
  if (k == 1) return base;
  const auto inner = compose_level(base, k - 1);
  const double p = suzuki_weight(k);
  const double middle = 1.0 - 4.0 * p;
  std::vector<Factor> out;
  out.reserve(5 * inner.size());
  for (double scale : {p, p, middle, p, p}) {
    for (const auto& f : inner) out.push_back({f.term, f.coefficient * scale});
  }
  return out;
}

}  // namespace

SuzukiSequence compose_higher_order(const SuzukiSequence& base, int k, std::size_t max_length) {
  if (k < 2) throw std::invalid_argument("higher-order composition needs k >= 2");
  if (base.strategy.kind == Strategy::Kind::HigherOrder) {
    throw std::invalid_argument("base sequence must be second order");
  }
  for (const auto& f : base.factors) {
    if (!(f.coefficient > 0.0 && f.coefficient <= 1.0) || f.term >= base.term_count) {
      throw std::invalid_argument("base sequence has an out-of-range factor");
    }
  }
  for (double s : base.coefficient_sums()) {
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("base sequence coefficients do not sum to 1");
  }
  std::uint64_t length = base.length();
  for (int level = 2; level <= k; ++level) {
    if (length > max_length / 5 + 1) check_cap(std::numeric_limits<std::uint64_t>::max(), max_length);
    length *= 5;
  }
  check_cap(length, max_length);

  SuzukiSequence out;
  out.factors = compose_level(base.factors, k);
  out.term_count = base.term_count;
  out.strategy = Strategy::higher_order(k);
  out.wide_steps = base.wide_steps;
  return out;
}

SuzukiSequence build_sequence(const Hamiltonian& h, const Strategy& strategy, double dt, std::size_t max_length) {
  switch (strategy.kind) {
    case Strategy::Kind::Shallow: return shallow_sequence(h);
    case Strategy::Kind::Wide: return wide_sequence(h, max_length);
    case Strategy::Kind::Hybrid: return hybrid_sequence(h, dt, max_length);
    case Strategy::Kind::Fractional: return fractional_sequence(h, dt, strategy.fraction, max_length);
    case Strategy::Kind::HigherOrder: break;
  }
  throw std::invalid_argument("higher-order sequences are composed from an explicit base sequence");
}

std::uint64_t predicted_length(std::size_t term_count, const Strategy& strategy) {
  if (term_count == 0) throw std::invalid_argument("sequence needs at least one term");
  std::vector<PlanStep> plan;
  switch (strategy.kind) {
    case Strategy::Kind::Shallow:
      return 2 * static_cast<std::uint64_t>(term_count) - 1;
    case Strategy::Kind::Wide:
      if (term_count >= 64) throw std::length_error("sequence length overflows 64 bits");
      return (std::uint64_t{1} << term_count) - 1;
    case Strategy::Kind::Fractional: {
      const std::size_t wide = fractional_wide_budget(term_count, strategy.fraction);
      for (std::size_t i = 0; i + 1 < term_count; ++i) {
        plan.push_back({0, i < wide ? StepType::Wide : StepType::Shallow});
      }
      return plan_length(plan);
    }
    case Strategy::Kind::Hybrid:
    case Strategy::Kind::HigherOrder:
      break;
  }
  throw std::invalid_argument("length of a " + std::string(strategy.name()) +
                              " sequence depends on the Hamiltonian; build it instead");
}

std::string to_text(const SuzukiSequence& seq) {
  std::string out = "m=" + std::to_string(seq.term_count) + " strategy=" + seq.strategy.tag() + "\n";
  for (const auto& f : seq.factors) {
    out += std::to_string(f.term);
    out += ' ';
    out += detail::format_shortest(f.coefficient);
    out += '\n';
  }
  return out;
}

SuzukiSequence parse_sequence(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  SuzukiSequence seq;
  bool have_header = false;
  while (std::getline(in, line)) {
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!have_header) {
      std::istringstream header{std::string(view)};
      std::string m_field, strategy_field;
      header >> m_field >> strategy_field;
      if (!m_field.starts_with("m=") || !strategy_field.starts_with("strategy=")) {
        throw std::invalid_argument("expected 'm=<m> strategy=<tag>' header");
      }
      seq.term_count = detail::parse_integer<std::size_t>(std::string_view(m_field).substr(2), "term count");
      seq.strategy = Strategy::parse(std::string_view(strategy_field).substr(9));
      have_header = true;
      continue;
    }
    auto space = view.find_first_of(" \t");
    if (space == std::string_view::npos) throw std::invalid_argument("malformed factor line '" + line + "'");
    Factor f{detail::parse_integer<std::size_t>(view.substr(0, space), "term index"),
             detail::parse_double(detail::trim(view.substr(space)), "coefficient")};
    if (f.term >= seq.term_count) throw std::invalid_argument("factor term index out of range");
    seq.factors.push_back(f);
  }
  if (!have_header) throw std::invalid_argument("missing sequence header");
  return seq;
}

}  // namespace pforder
