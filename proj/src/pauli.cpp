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

#include "pforder/pauli.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace pforder {
namespace {

void check_qubit_cap(int qubits, int cap) {
  if (qubits > cap) {
    throw std::length_error("dense matrix for " + std::to_string(qubits) +
                            " qubits exceeds the configured cap of " + std::to_string(cap));
  }
}

// Uniform integer in [0, n) from a 64-bit engine, by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

bool is_hermitian(const Matrix& a, double tol) { return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol; }
bool is_anti_hermitian(const Matrix& a, double tol) {
  return (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
  }
}

PauliString::PauliString(std::string_view letters) {
  letters_.reserve(letters.size());
  for (char c : letters) letters_.push_back(pauli_from_char(c));
  index_masks();
}

PauliString::PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) { index_masks(); }

PauliString PauliString::single(int qubits, int site, Pauli p) {
  if (qubits <= 0 || site < 0 || site >= qubits) throw std::invalid_argument("site out of range");
  std::vector<Pauli> letters(static_cast<std::size_t>(qubits), Pauli::I);
  letters[static_cast<std::size_t>(site)] = p;
  return PauliString(std::move(letters));
}

PauliString PauliString::bond(int qubits, int site, Pauli a, Pauli b) {
  if (qubits < 2 || site < 0 || site + 1 >= qubits) throw std::invalid_argument("bond out of range");
  std::vector<Pauli> letters(static_cast<std::size_t>(qubits), Pauli::I);
  letters[static_cast<std::size_t>(site)] = a;
  letters[static_cast<std::size_t>(site) + 1] = b;
  return PauliString(std::move(letters));
}

void PauliString::index_masks() {
  if (letters_.empty()) throw std::invalid_argument("Pauli string must have at least one site");
  if (letters_.size() > static_cast<std::size_t>(kMaxPauliLength)) {
    throw std::invalid_argument("Pauli string longer than " + std::to_string(kMaxPauliLength) +
                                " sites");
  }
  const int n = qubits();
  int y_count = 0;
  for (int site = 0; site < n; ++site) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - site);
    switch (letters_[static_cast<std::size_t>(site)]) {
      case Pauli::I: break;
      case Pauli::X: x_mask_ |= bit; break;
      case Pauli::Z: z_mask_ |= bit; break;
      case Pauli::Y:
        x_mask_ |= bit;
        z_mask_ |= bit;
        ++y_count;
        break;
    }
  }
  // Y = i X Z on each site.
  static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  y_phase_ = kPowers[y_count % 4];
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(letters_.size());
  for (Pauli p : letters_) out.push_back(to_char(p));
  return out;
}

Complex PauliString::phase(std::uint64_t basis) const {
  return (std::popcount(basis & z_mask_) & 1) ? -y_phase_ : y_phase_;
}

Hamiltonian::Hamiltonian(int qubits, std::vector<HamiltonianTerm> terms)
    : qubits_(qubits), terms_(std::move(terms)) {
  if (qubits_ <= 0) throw std::invalid_argument("Hamiltonian needs a positive qubit count");
  if (terms_.empty()) throw std::invalid_argument("Hamiltonian needs at least one term");
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const auto& t = terms_[j];
    if (!std::isfinite(t.weight) || t.weight == 0.0) {
      throw std::invalid_argument("term " + std::to_string(j) + " has zero or non-finite weight");
    }
    if (t.string.qubits() != qubits_) {
      throw std::invalid_argument("term " + std::to_string(j) + " acts on " +
                                  std::to_string(t.string.qubits()) + " sites, expected " +
                                  std::to_string(qubits_));
    }
  }
}

Matrix dense_pauli(const PauliString& string, int qubit_cap) {
  check_qubit_cap(string.qubits(), qubit_cap);
  const std::uint64_t dim = std::uint64_t{1} << string.qubits();
  const std::uint64_t flip = string.x_mask();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t col = 0; col < dim; ++col) {
    out(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) = string.phase(col);
  }
  return out;
}

Matrix term_matrix(const HamiltonianTerm& term, int qubit_cap) {
  return term.weight * dense_pauli(term.string, qubit_cap);
}

Matrix hamiltonian_matrix(const Hamiltonian& h, int qubit_cap) {
  check_qubit_cap(h.qubits(), qubit_cap);
  const auto dim = Eigen::Index{1} << h.qubits();
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& t : h.terms()) out += term_matrix(t, qubit_cap);
  return out;
}

Matrix partial_sum_matrix(const Hamiltonian& h, std::span<const std::size_t> indices, int qubit_cap) {
  check_qubit_cap(h.qubits(), qubit_cap);
  const auto dim = Eigen::Index{1} << h.qubits();
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t j : indices) out += term_matrix(h.term(j), qubit_cap);
  return out;
}

Hamiltonian build_tfim(int qubits, double coupling, double field) {
  if (qubits < 2) throw std::invalid_argument("TFIM chain needs at least 2 qubits");
  std::vector<HamiltonianTerm> terms;
  for (int j = 0; j + 1 < qubits; ++j) {
    terms.push_back({-coupling, PauliString::bond(qubits, j, Pauli::Z, Pauli::Z)});
  }
  for (int j = 0; j < qubits; ++j) terms.push_back({-field, PauliString::single(qubits, j, Pauli::X)});
  return Hamiltonian(qubits, std::move(terms));
}

Hamiltonian build_xyz(int qubits, double jx, double jy, double jz) {
  if (qubits < 2) throw std::invalid_argument("XYZ chain needs at least 2 qubits");
  if (jx == 0.0 && jy == 0.0 && jz == 0.0) throw std::invalid_argument("all XYZ couplings are zero");
  std::vector<HamiltonianTerm> terms;
  for (int j = 0; j + 1 < qubits; ++j) {
    terms.push_back({jx, PauliString::bond(qubits, j, Pauli::X, Pauli::X)});
    terms.push_back({jy, PauliString::bond(qubits, j, Pauli::Y, Pauli::Y)});
    terms.push_back({jz, PauliString::bond(qubits, j, Pauli::Z, Pauli::Z)});
  }
  return Hamiltonian(qubits, std::move(terms));
}

Hamiltonian build_random_pauli(int qubits, std::uint64_t seed) {
  if (qubits < 2) throw std::invalid_argument("random Pauli chain needs at least 2 qubits");
  static constexpr Pauli kLetters[3] = {Pauli::X, Pauli::Y, Pauli::Z};
  std::mt19937_64 rng(seed);
  std::vector<HamiltonianTerm> terms;
  for (int j = 0; j < qubits; ++j) {
    terms.push_back({1.0, PauliString::single(qubits, j, kLetters[uniform_below(rng, 3)])});
  }
  for (int j = 0; j + 1 < qubits; ++j) {
    const auto pair = uniform_below(rng, 9);
    terms.push_back({1.0, PauliString::bond(qubits, j, kLetters[pair / 3], kLetters[pair % 3])});
  }
  return Hamiltonian(qubits, std::move(terms));
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("commutator needs square matrices of equal dimension");
  }
  return a * b - b * a;
}

double spectral_norm(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("spectral_norm needs a square matrix");
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw std::domain_error("spectral_norm: non-finite matrix entry");
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const double tol = 1e-12 * scale;
  if (is_hermitian(a, tol)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (is_anti_hermitian(a, tol)) {
    Matrix h = Complex(0.0, 1.0) * a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

std::string to_text(const Hamiltonian& h) {
  std::string out = "qubits=" + std::to_string(h.qubits()) + "\n";
  for (const auto& t : h.terms()) {
    out += detail::format_shortest(t.weight);
    out += ' ';
    out += t.string.str();
    out += '\n';
  }
  return out;
}

Hamiltonian parse_hamiltonian(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int qubits = -1;
  std::vector<HamiltonianTerm> terms;
  while (std::getline(in, line)) {
    auto view = detail::trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (qubits < 0) {
      if (!view.starts_with("qubits=")) throw std::invalid_argument("expected 'qubits=<L>' header");
      qubits = detail::parse_integer<int>(view.substr(7), "qubit count");
      continue;
    }
    auto space = view.find_first_of(" \t");
    if (space == std::string_view::npos) throw std::invalid_argument("malformed term line '" + line + "'");
    double weight = detail::parse_double(view.substr(0, space), "term weight");
    terms.push_back({weight, PauliString(detail::trim(view.substr(space)))});
  }
  if (qubits < 0) throw std::invalid_argument("missing 'qubits=<L>' header");
  return Hamiltonian(qubits, std::move(terms));
}

}  // namespace pforder
