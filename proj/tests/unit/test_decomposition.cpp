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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pforder/decomposition.hpp"

namespace pforder {
namespace {

// Reference Suzuki weights evaluated to 30 digits in arbitrary precision.
constexpr double kP2 = 0.414490771794375737142354062861;
constexpr double kP3 = 0.373065827733272824775863041073;

std::vector<Factor> F(std::initializer_list<std::pair<std::size_t, double>> list) {
  std::vector<Factor> out;
  for (const auto& [t, c] : list) out.push_back({t, c});
  return out;
}

bool is_palindrome(const SuzukiSequence& s) {
  const auto n = s.factors.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!(s.factors[i] == s.factors[n - 1 - i])) return false;
  return true;
}

void expect_normalized(const SuzukiSequence& s, const std::string& label) {
  const auto sums = s.coefficient_sums();
  ASSERT_EQ(sums.size(), s.term_count);
  for (std::size_t j = 0; j < sums.size(); ++j) EXPECT_NEAR(sums[j], 1.0, 1e-12) << label << " term " << j;
}

// Factor count implied by a list of recursive steps, outermost first.
std::size_t length_from_choices(const std::vector<StepChoice>& choices) {
  std::size_t len = 1;
  for (auto it = choices.rbegin(); it != choices.rend(); ++it)
    len = it->type == StepType::Shallow ? len + 2 : 2 * len + 1;
  return len;
}

TEST(Shallow, ThreeTermGolden) {
  EXPECT_EQ(shallow_sequence(3).factors, F({{0, 0.5}, {1, 0.5}, {2, 1}, {1, 0.5}, {0, 0.5}}));
  EXPECT_EQ(shallow_sequence(build_tfim(2, 1, 5)).factors, shallow_sequence(3).factors);
}

TEST(Shallow, BaseCase) {
  EXPECT_EQ(shallow_sequence(1).factors, F({{0, 1}}));
  EXPECT_THROW(shallow_sequence(0), std::invalid_argument);
}

TEST(Wide, ThreeTermGolden) {
  EXPECT_EQ(wide_sequence(3).factors,
            F({{1, 0.25}, {2, 0.5}, {1, 0.25}, {0, 1}, {1, 0.25}, {2, 0.5}, {1, 0.25}}));
}

TEST(Wide, SmallCases) {
  EXPECT_EQ(wide_sequence(1).factors, F({{0, 1}}));
  EXPECT_EQ(wide_sequence(2).factors, F({{1, 0.5}, {0, 1}, {1, 0.5}}));
}

TEST(Wide, LengthCap) {
  EXPECT_EQ(wide_sequence(15).length(), 32767u);
  try {
    wide_sequence(25);
    FAIL() << "expected length_error";
  } catch (const std::length_error& e) {
    EXPECT_NE(std::string(e.what()).find("16777216"), std::string::npos) << e.what();
  }
  EXPECT_THROW(wide_sequence(5, 30), std::length_error);
  EXPECT_EQ(wide_sequence(5, 31).length(), 31u);
}

TEST(StructuralLaws, LengthsSumsPalindromes) {
  for (std::size_t m = 1; m <= 12; ++m) {
    const auto s = shallow_sequence(m);
    const auto w = wide_sequence(m);
    EXPECT_EQ(s.length(), 2 * m - 1);
    EXPECT_EQ(w.length(), (std::size_t{1} << m) - 1);
    EXPECT_TRUE(is_palindrome(s)) << m;
    EXPECT_TRUE(is_palindrome(w)) << m;
    expect_normalized(s, "shallow");
    expect_normalized(w, "wide");
    EXPECT_EQ(predicted_length(m, Strategy::shallow()), s.length());
    EXPECT_EQ(predicted_length(m, Strategy::wide()), w.length());
    for (const auto& f : s.factors) EXPECT_TRUE(f.coefficient > 0 && f.coefficient <= 1);
    for (const auto& f : w.factors) EXPECT_TRUE(f.coefficient > 0 && f.coefficient <= 1);
  }
}

TEST(PredictedLength, Examples) {
  EXPECT_EQ(predicted_length(3, Strategy::shallow()), 5u);
  EXPECT_EQ(predicted_length(3, Strategy::wide()), 7u);
  EXPECT_EQ(predicted_length(10, Strategy::wide()), 1023u);
  EXPECT_EQ(predicted_length(9, Strategy::fractional(0.0)), 17u);
  EXPECT_EQ(predicted_length(9, Strategy::fractional(1.0)), 511u);
  EXPECT_EQ(predicted_length(9, Strategy::fractional(0.1)), 31u);
  EXPECT_THROW(predicted_length(5, Strategy::hybrid()), std::invalid_argument);
  EXPECT_THROW(predicted_length(5, Strategy::higher_order(2)), std::invalid_argument);
  EXPECT_THROW(predicted_length(0, Strategy::shallow()), std::invalid_argument);
  EXPECT_THROW(predicted_length(64, Strategy::wide()), std::length_error);
}

TEST(LocalBound, XZExample) {
  const Matrix x = oracle::kron_pauli("X");
  const Matrix z = oracle::kron_pauli("Z");
  EXPECT_NEAR(local_step_bound(x, z, 1.0, StepType::Shallow), 12.0, 1e-12);
  EXPECT_NEAR(local_step_bound(x, z, 0.01, StepType::Shallow), 12e-6, 1e-17);
  // Wide swaps roles; for X and Z the value is symmetric.
  EXPECT_NEAR(local_step_bound(z, x, 1.0, StepType::Wide), 12.0, 1e-12);
}

TEST(LocalBound, CommutingIsZeroAndErrors) {
  const Matrix a = oracle::kron_pauli("ZI");
  const Matrix b = oracle::kron_pauli("IZ") + oracle::kron_pauli("ZZ");
  EXPECT_EQ(local_step_bound(a, b, 0.3, StepType::Shallow), 0.0);
  EXPECT_EQ(local_step_bound(a, b, 0.3, StepType::Wide), 0.0);
  EXPECT_THROW(local_step_bound(a, b, 0.0, StepType::Shallow), std::invalid_argument);
  EXPECT_THROW(local_step_bound(a, b, -1.0, StepType::Wide), std::invalid_argument);
  EXPECT_THROW(local_step_bound(a, oracle::kron_pauli("Z"), 1.0, StepType::Wide), std::invalid_argument);
}

TEST(LocalBound, MatchesNaiveOracleAndIsCubic) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Hamiltonian h = oracle::random_three_term(rng);
    const Matrix term = oracle::kron_hamiltonian(Hamiltonian(2, {h.term(0)}));
    const Matrix rest = oracle::kron_hamiltonian(Hamiltonian(2, {h.term(1), h.term(2)}));
    const double s = local_step_bound(term, rest, 0.05, StepType::Shallow);
    const double w = local_step_bound(term, rest, 0.05, StepType::Wide);
    EXPECT_NEAR(s, oracle::naive_bound(term, rest, 0.05), 1e-12 * (1 + s));
    EXPECT_NEAR(w, oracle::naive_bound(rest, term, 0.05), 1e-12 * (1 + w));
    EXPECT_NEAR(local_step_bound(term, rest, 0.1, StepType::Shallow), 8.0 * s, 1e-10 * (1 + s));
  }
}

TEST(Hybrid, SingleTerm) {
  const Hamiltonian h(1, {{2.0, PauliString("X")}});
  EXPECT_EQ(hybrid_sequence(h, 0.01).factors, F({{0, 1}}));
  EXPECT_EQ(hybrid_sequence(h, 100.0).factors, F({{0, 1}}));
}

TEST(Hybrid, FirstStepMatchesBruteForce) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const Hamiltonian h = oracle::random_three_term(rng);
    const auto seq = hybrid_sequence(h, 0.01);
    const auto best = oracle::brute_force_first_step(h, 0.01);
    ASSERT_FALSE(seq.choices.empty());
    EXPECT_EQ(seq.choices.front().term, best.term) << to_text(h);
    EXPECT_EQ(seq.choices.front().type, best.type) << to_text(h);
    EXPECT_NEAR(seq.choices.front().bound, best.bound, 1e-12 * (1 + best.bound));
    expect_normalized(seq, "hybrid");
    EXPECT_EQ(seq.choices.size(), 2u);
  }
}

TEST(Hybrid, CommutingTermsTieToShallowInOrder) {
  const Hamiltonian h(3, {{1.0, PauliString("ZII")}, {0.5, PauliString("IZI")}, {2.0, PauliString("ZZZ")}});
  const auto seq = hybrid_sequence(h, 0.01);
  EXPECT_EQ(seq.factors, shallow_sequence(3).factors);
  EXPECT_EQ(seq.wide_steps, 0u);
  for (const auto& c : seq.choices) {
    EXPECT_EQ(c.type, StepType::Shallow);
    EXPECT_EQ(c.bound, 0.0);
  }
}

TEST(Hybrid, TfimDefaultsTakeWideStructure) {
  const auto seq = hybrid_sequence(build_tfim(5, 1, 5), 0.01);
  EXPECT_EQ(seq.length(), 511u);
  // The final two-term step is shallow; at that depth both types give length 3.
  EXPECT_EQ(seq.wide_steps, 7u);
  EXPECT_EQ(seq.choices.back().type, StepType::Shallow);
  expect_normalized(seq, "hybrid tfim");
}

TEST(Hybrid, XyzDefaultsFrozenChoiceSequence) {
  // Open-boundary XYZ at L=5 picks two shallow steps under joint selection.
  const auto seq = hybrid_sequence(build_xyz(5, 3, 2, 1), 0.01);
  EXPECT_EQ(seq.length(), 2175u);
  const std::vector<std::pair<std::size_t, StepType>> expected = {
      {2, StepType::Wide}, {11, StepType::Wide}, {1, StepType::Wide}, {10, StepType::Wide},
      {5, StepType::Wide}, {0, StepType::Wide}, {6, StepType::Shallow}, {4, StepType::Wide},
      {8, StepType::Wide}, {3, StepType::Wide}, {9, StepType::Shallow}};
  ASSERT_EQ(seq.choices.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(seq.choices[i].term, expected[i].first) << i;
    EXPECT_EQ(seq.choices[i].type, expected[i].second) << i;
  }
}

TEST(Hybrid, ChoicesCoverEveryTermOnce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Hamiltonian h = build_random_pauli(4, seed);
    const auto seq = hybrid_sequence(h, 0.01);
    std::vector<int> seen(h.term_count(), 0);
    for (const auto& c : seq.choices) {
      ++seen[c.term];
      EXPECT_GE(c.bound, 0.0);
    }
    for (const auto& f : seq.factors) EXPECT_LT(f.term, h.term_count());
    int total = 0;
    for (int s : seen) {
      EXPECT_LE(s, 1);
      total += s;
    }
    EXPECT_EQ(total, static_cast<int>(h.term_count()) - 1);
    expect_normalized(seq, "hybrid random");
    EXPECT_EQ(seq.length(), length_from_choices(seq.choices));
    EXPECT_EQ(seq.wide_steps, static_cast<std::size_t>(std::count_if(
                                  seq.choices.begin(), seq.choices.end(),
                                  [](const StepChoice& c) { return c.type == StepType::Wide; })));
  }
}

TEST(Hybrid, CapIsEnforced) {
  EXPECT_THROW(hybrid_sequence(build_tfim(5, 1, 5), 0.01, 100), std::length_error);
}

TEST(Fractional, Limits) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Hamiltonian h = build_random_pauli(4, seed);
    const auto m = h.term_count();
    EXPECT_EQ(fractional_sequence(h, 0.01, 0.0).length(), 2 * m - 1);
    EXPECT_EQ(fractional_sequence(h, 0.01, 1.0).length(), (std::size_t{1} << m) - 1);
  }
}

TEST(Fractional, WideBudgetAndLengths) {
  const Hamiltonian h = build_tfim(5, 1, 5);
  const std::size_t frozen[] = {31, 55, 55, 95, 159, 255, 383, 383, 511};
  for (int i = 1; i <= 9; ++i) {
    const double f = i / 10.0;
    const auto seq = fractional_sequence(h, 0.01, f);
    EXPECT_EQ(seq.wide_steps, static_cast<std::size_t>(std::lround(f * 8))) << f;
    EXPECT_EQ(seq.wide_steps, fractional_wide_budget(9, f));
    EXPECT_EQ(seq.length(), predicted_length(9, Strategy::fractional(f))) << f;
    EXPECT_EQ(seq.length(), frozen[i - 1]) << f;
    EXPECT_EQ(seq.strategy, Strategy::fractional(f));
    expect_normalized(seq, "fractional");
    ASSERT_EQ(seq.choices.size(), 8u);
    for (std::size_t k = 0; k < seq.choices.size(); ++k)
      EXPECT_EQ(seq.choices[k].type, k < seq.wide_steps ? StepType::Wide : StepType::Shallow);
  }
  EXPECT_EQ(fractional_sequence(h, 0.01, 0.1).wide_steps, 1u);
}

TEST(Fractional, BudgetRoundsHalfUp) {
  EXPECT_EQ(fractional_wide_budget(3, 0.25), 1u);
  EXPECT_EQ(fractional_wide_budget(5, 0.125), 1u);
  EXPECT_EQ(fractional_wide_budget(5, 0.0), 0u);
  EXPECT_EQ(fractional_wide_budget(5, 1.0), 4u);
  EXPECT_EQ(fractional_wide_budget(1, 1.0), 0u);
  EXPECT_THROW(fractional_wide_budget(5, 1.5), std::invalid_argument);
}

TEST(Fractional, Errors) {
  const Hamiltonian h = build_tfim(3, 1, 5);
  EXPECT_THROW(fractional_sequence(h, 0.01, -0.1), std::invalid_argument);
  EXPECT_THROW(fractional_sequence(h, 0.01, 1.1), std::invalid_argument);
  EXPECT_THROW(fractional_sequence(h, 0.01, std::nan("")), std::invalid_argument);
  EXPECT_THROW(fractional_sequence(h, 0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(fractional_sequence(Hamiltonian(1, {{1.0, PauliString("X")}}), 0.01, 0.5),
               std::invalid_argument);
}

TEST(Suzuki, Weights) {
  EXPECT_NEAR(suzuki_weight(2), kP2, 1e-15);
  EXPECT_NEAR(suzuki_weight(3), kP3, 1e-15);
  EXPECT_NEAR(1.0 - 4.0 * suzuki_weight(2), -0.657963087177502948569416251443, 1e-14);
  for (int k = 2; k <= 8; ++k) EXPECT_NEAR(4 * suzuki_weight(k) + (1 - 4 * suzuki_weight(k)), 1.0, 1e-15);
  EXPECT_THROW(suzuki_weight(1), std::invalid_argument);
}

TEST(Suzuki, ComposeLengthsAndSums) {
  const auto base = shallow_sequence(3);
  const auto s4 = compose_higher_order(base, 2);
  EXPECT_EQ(s4.length(), 25u);
  EXPECT_EQ(s4.strategy, Strategy::higher_order(2));
  expect_normalized(s4, "order 4");
  bool has_negative = false;
  for (const auto& f : s4.factors) has_negative |= f.coefficient < 0;
  EXPECT_TRUE(has_negative);
  // The middle block holds the central factor of term 2 scaled by 1 - 4 p_2.
  EXPECT_NEAR(s4.factors[12].coefficient, 1 - 4 * kP2, 1e-15);
  EXPECT_EQ(s4.factors[12].term, 2u);

  EXPECT_EQ(compose_higher_order(shallow_sequence(2), 2).length(), 15u);
  const auto s6 = compose_higher_order(base, 3);
  EXPECT_EQ(s6.length(), 125u);
  expect_normalized(s6, "order 6");
}

TEST(Suzuki, ComposeErrors) {
  EXPECT_THROW(compose_higher_order(shallow_sequence(3), 1), std::invalid_argument);
  SuzukiSequence bad = shallow_sequence(2);
  bad.factors.pop_back();
  EXPECT_THROW(compose_higher_order(bad, 2), std::invalid_argument);
  EXPECT_THROW(compose_higher_order(compose_higher_order(shallow_sequence(2), 2), 2), std::invalid_argument);
  EXPECT_THROW(compose_higher_order(wide_sequence(3), 8, 1000), std::length_error);
}

TEST(Suzuki, FourthOrderLocalError) {
  // Local error of an order-4 formula is O(dt^5): halving dt divides it by ~32.
  const Hamiltonian h(1, {{1.0, PauliString("X")}, {1.0, PauliString("Z")}});
  const auto s4 = compose_higher_order(shallow_sequence(2), 2);
  auto err = [&](double dt) {
    return oracle::naive_spectral_norm(oracle::product_formula(h, s4.factors, dt) -
                                       oracle::expm_minus_i(oracle::kron_hamiltonian(h), dt));
  };
  const double ratio = err(0.1) / err(0.05);
  EXPECT_GT(ratio, 25.0);
  EXPECT_LT(ratio, 40.0);
}

TEST(BuildSequence, Dispatch) {
  const Hamiltonian h = build_tfim(3, 1, 5);
  EXPECT_EQ(build_sequence(h, Strategy::shallow(), 0.01), shallow_sequence(h));
  EXPECT_EQ(build_sequence(h, Strategy::wide(), 0.01), wide_sequence(h));
  EXPECT_EQ(build_sequence(h, Strategy::hybrid(), 0.01), hybrid_sequence(h, 0.01));
  EXPECT_EQ(build_sequence(h, Strategy::fractional(0.5), 0.01), fractional_sequence(h, 0.01, 0.5));
  EXPECT_THROW(build_sequence(h, Strategy::higher_order(2), 0.01), std::invalid_argument);
}

TEST(StrategyTag, RoundTrip) {
  for (const auto& s : {Strategy::shallow(), Strategy::wide(), Strategy::hybrid(), Strategy::fractional(0.4),
                        Strategy::fractional(0.0), Strategy::fractional(1.0), Strategy::higher_order(3)})
    EXPECT_EQ(Strategy::parse(s.tag()), s) << s.tag();
  EXPECT_EQ(Strategy::fractional(0.4).tag(), "fractional:0.4");
  EXPECT_EQ(Strategy::higher_order(2).tag(), "higher-order:2");
  for (const char* bad : {"", "deep", "wide:1", "fractional", "fractional:2", "fractional:x", "higher-order:1"})
    EXPECT_THROW(Strategy::parse(bad), std::invalid_argument) << bad;
}

TEST(SequenceText, Format) {
  EXPECT_EQ(to_text(wide_sequence(3)),
            "m=3 strategy=wide\n1 0.25\n2 0.5\n1 0.25\n0 1\n1 0.25\n2 0.5\n1 0.25\n");
  EXPECT_THROW(parse_sequence(""), std::invalid_argument);
  EXPECT_THROW(parse_sequence("m=2 strategy=wide\n5 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("m=2 strategy=wide\n0\n"), std::invalid_argument);
  EXPECT_THROW(parse_sequence("strategy=wide m=2\n"), std::invalid_argument);
}

TEST(SequenceText, RoundTripEveryStrategy) {
  const Hamiltonian h = build_random_pauli(4, 5);
  std::vector<SuzukiSequence> all = {shallow_sequence(h), wide_sequence(h), hybrid_sequence(h, 0.01),
                                     compose_higher_order(shallow_sequence(h), 3)};
  for (int i = 0; i <= 10; ++i) all.push_back(fractional_sequence(h, 0.01, i / 10.0));
  for (const auto& s : all) EXPECT_EQ(parse_sequence(to_text(s)), s) << s.strategy.tag();
}

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(PFORDER_TEST_DATA_DIR) + "/" + name);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(GoldenFiles, ThreeTermSequences) {
  const Hamiltonian h = parse_hamiltonian(read_data("tfim_l2.ham"));
  EXPECT_EQ(h, build_tfim(2, 1, 5));
  EXPECT_EQ(to_text(shallow_sequence(h)), read_data("shallow_m3.seq"));
  EXPECT_EQ(to_text(wide_sequence(h)), read_data("wide_m3.seq"));
  EXPECT_EQ(parse_sequence(read_data("wide_m3.seq")), wide_sequence(h));
}

}  // namespace
}  // namespace pforder
