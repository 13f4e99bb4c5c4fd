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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pforder {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Largest register for which dense 2^L x 2^L matrices are synthesized.
inline constexpr int kDefaultQubitCap = 12;

/// Longest Pauli word supported; the bit-mask representation uses 64 bits.
inline constexpr int kMaxPauliLength = 64;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/**
 * A fixed-length word over {I, X, Y, Z}.
 *
 * Site 0 is the leftmost Kronecker factor, i.e. the most significant bit of a
 * computational basis index. The string acts on basis states as
 *
 *   P |b> = phase(b) |b ^ x_mask()>
 *
 * with phase(b) = i^{#Y} (-1)^{popcount(b & z_mask())}, which is what the
 * O(d^2) density-matrix kernels in simulation.hpp rely on.
 */
class PauliString {
 public:
  explicit PauliString(std::string_view letters);
  explicit PauliString(std::vector<Pauli> letters);

  /// Identity everywhere except `p` on `site`.
  static PauliString single(int qubits, int site, Pauli p);
  /// Identity everywhere except `a` on `site` and `b` on `site + 1`.
  static PauliString bond(int qubits, int site, Pauli a, Pauli b);

  int qubits() const { return static_cast<int>(letters_.size()); }
  Pauli operator[](int site) const { return letters_[static_cast<std::size_t>(site)]; }
  std::string str() const;

  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }
  Complex phase(std::uint64_t basis) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_;
  }

 private:
  void index_masks();

  std::vector<Pauli> letters_;
  std::uint64_t x_mask_ = 0;
  std::uint64_t z_mask_ = 0;
  Complex y_phase_{1.0, 0.0};
};

struct HamiltonianTerm {
  double weight;
  PauliString string;

  friend bool operator==(const HamiltonianTerm&, const HamiltonianTerm&) = default;
};

/// Ordered sum of weighted Pauli strings. Term order is part of the value.
class Hamiltonian {
 public:
  /// Throws std::invalid_argument on an empty term list, a zero or non-finite
  /// weight, or a string whose length differs from `qubits`.
  Hamiltonian(int qubits, std::vector<HamiltonianTerm> terms);

  int qubits() const { return qubits_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const HamiltonianTerm& term(std::size_t j) const { return terms_.at(j); }

  friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;

 private:
  int qubits_;
  std::vector<HamiltonianTerm> terms_;
};

Matrix dense_pauli(const PauliString& string, int qubit_cap = kDefaultQubitCap);
Matrix term_matrix(const HamiltonianTerm& term, int qubit_cap = kDefaultQubitCap);
Matrix hamiltonian_matrix(const Hamiltonian& h, int qubit_cap = kDefaultQubitCap);

/// Sum of the selected terms' matrices; an empty selection gives the zero matrix.
Matrix partial_sum_matrix(const Hamiltonian& h, std::span<const std::size_t> indices,
                          int qubit_cap = kDefaultQubitCap);

/// Open-boundary transverse-field Ising chain. Terms: the L-1 couplings
/// -J Z_j Z_{j+1}, then the L fields -h X_j.
Hamiltonian build_tfim(int qubits, double coupling, double field);

/// Open-boundary Heisenberg XYZ chain, ordered bond by bond as (XX, YY, ZZ).
Hamiltonian build_xyz(int qubits, double jx, double jy, double jz);

/**
 * Random nearest-neighbour Pauli chain with unit weights.
 *
 * Draw order: L on-site letters (uniform over X, Y, Z) from left to right,
 * then L-1 bond letter pairs (uniform over the nine non-identity pairs) from
 * left to right. Generator: std::mt19937_64 seeded with `seed`, with
 * rejection sampling so the stream is identical on every standard library.
 */
Hamiltonian build_random_pauli(int qubits, std::uint64_t seed);

Matrix commutator(const Matrix& a, const Matrix& b);

/// Largest singular value. Hermitian and anti-Hermitian inputs go through a
/// self-adjoint eigensolver; anything else through an SVD.
double spectral_norm(const Matrix& a);

/// `qubits=<L>` header followed by one `<weight> <letters>` line per term.
/// Weights use the shortest representation that parses back bit-exactly.
std::string to_text(const Hamiltonian& h);
Hamiltonian parse_hamiltonian(std::string_view text);

}  // namespace pforder
