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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pforder/pauli.hpp"

namespace pforder {

/// Default cap on the number of factors a builder may emit (2^24).
inline constexpr std::size_t kDefaultMaxSequenceLength = std::size_t{1} << 24;

/// One exponential e^{-i c dt H_term} in a product formula.
struct Factor {
  std::size_t term;
  double coefficient;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Which way a recursive Strang step places the extracted term.
enum class StepType {
  Shallow,  ///< term/2, rest, term/2
  Wide,     ///< rest/2, term, rest/2
};

std::string_view to_string(StepType type);

/// Construction strategy of a sequence. `fraction` is meaningful for
/// Fractional, `order` (k, giving a formula of order 2k) for HigherOrder.
struct Strategy {
  enum class Kind { Shallow, Wide, Hybrid, Fractional, HigherOrder };

  Kind kind = Kind::Shallow;
  double fraction = 0.0;
  int order = 1;

  static Strategy shallow() { return {Kind::Shallow}; }
  static Strategy wide() { return {Kind::Wide}; }
  static Strategy hybrid() { return {Kind::Hybrid}; }
  static Strategy fractional(double f) { return {Kind::Fractional, f}; }
  static Strategy higher_order(int k) { return {Kind::HigherOrder, 0.0, k}; }

  /// Lower-case name without parameters: shallow, wide, hybrid, fractional, higher-order.
  std::string_view name() const;
  /// Round-trippable tag, e.g. `wide`, `fractional:0.4`, `higher-order:2`.
  std::string tag() const;
  static Strategy parse(std::string_view tag);

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// A committed step of the greedy builders, with the bound that won.
struct StepChoice {
  std::size_t term;
  StepType type;
  double bound;
};

struct SuzukiSequence {
  std::vector<Factor> factors;
  std::size_t term_count = 0;
  Strategy strategy;
  std::size_t wide_steps = 0;
  /// Filled by hybrid and fractional builders, one entry per recursive step.
  std::vector<StepChoice> choices;

  std::size_t length() const { return factors.size(); }

  /// Sum of coefficients per term index.
  std::vector<double> coefficient_sums() const;
};

/// Structural equality: factors, term count and strategy. Builder metadata
/// (wide_steps, choices) is not part of the serialized form and is ignored.
bool operator==(const SuzukiSequence& a, const SuzukiSequence& b);

/// Nested Strang ladder pulling terms in Hamiltonian order; length 2m-1.
SuzukiSequence shallow_sequence(std::size_t term_count);
SuzukiSequence shallow_sequence(const Hamiltonian& h);

/// Full binary-tree sequence pulling terms in Hamiltonian order; length 2^m-1.
/// A two-term remainder inside a duplicated branch is emitted Strang style
/// (first term outside), so the three-term case reads
/// H1/4 H2/2 H1/4 H0 H1/4 H2/2 H1/4.
SuzukiSequence wide_sequence(std::size_t term_count,
                             std::size_t max_length = kDefaultMaxSequenceLength);
SuzukiSequence wide_sequence(const Hamiltonian& h,
                             std::size_t max_length = kDefaultMaxSequenceLength);

/// dt^3 (||[A,[A,B]]|| + 2 ||[B,[A,B]]||), with (A, B) = (term, rest) for a
/// shallow step and (rest, term) for a wide step.
double local_step_bound(const Matrix& term, const Matrix& rest, double dt, StepType type);

/// Greedy joint choice of (remaining term, step type) minimizing
/// local_step_bound at every recursive step. Ties go to Shallow, then to
/// the lowest term index.
SuzukiSequence hybrid_sequence(const Hamiltonian& h, double dt,
                               std::size_t max_length = kDefaultMaxSequenceLength);

/// round(f (m-1)) minimal-bound wide steps, followed by minimal-bound shallow
/// steps for the rest of the recursion.
SuzukiSequence fractional_sequence(const Hamiltonian& h, double dt, double fraction,
                                   std::size_t max_length = kDefaultMaxSequenceLength);

/// Number of wide steps a fractional build takes for m terms.
std::size_t fractional_wide_budget(std::size_t term_count, double fraction);

/// Suzuki reweighting factor p_k = 1 / (4 - 4^{1/(2k-1)}).
double suzuki_weight(int k);

/// Order-2k formula by the Suzuki recursion
///   S_{2k}(x) = S_{2k-2}(p_k x)^2 S_{2k-2}((1 - 4 p_k) x) S_{2k-2}(p_k x)^2,
/// bottoming out at `base`. Adjacent same-term factors are not merged, so the
/// length is 5^{k-1} times the base length.
SuzukiSequence compose_higher_order(const SuzukiSequence& base, int k,
                                    std::size_t max_length = kDefaultMaxSequenceLength);

/// Dispatch on `strategy`. HigherOrder needs an explicit base sequence and
/// is rejected here; use compose_higher_order.
SuzukiSequence build_sequence(const Hamiltonian& h, const Strategy& strategy, double dt,
                              std::size_t max_length = kDefaultMaxSequenceLength);

/// Exact factor count without building. Hybrid and HigherOrder sequences
/// depend on the Hamiltonian and throw std::invalid_argument here.
std::uint64_t predicted_length(std::size_t term_count, const Strategy& strategy);

/// `m=<m> strategy=<tag>` header, then `<term_index> <coefficient>` per line.
std::string to_text(const SuzukiSequence& seq);
SuzukiSequence parse_sequence(std::string_view text);

}  // namespace pforder
