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

#include "pforder/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace pforder {
namespace {

constexpr double kStateTolerance = 1e-10;

int qubits_for_dimension(Eigen::Index dim) {
  int qubits = 0;
  while ((Eigen::Index{1} << qubits) < dim) ++qubits;
  if ((Eigen::Index{1} << qubits) != dim || qubits == 0) {
    throw std::invalid_argument("density matrix dimension must be a power of two >= 2");
  }
  return qubits;
}

void check_same_shape(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("density matrices have different dimensions");
}

void check_timestep(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("timestep must be positive");
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
}

Eigen::VectorXd clamped_eigenvalues(const Eigen::VectorXd& values) {
  Eigen::VectorXd out = values;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < -kPsdTolerance) {
      throw std::domain_error("matrix is not positive semidefinite (eigenvalue " + std::to_string(out(i)) + ")");
    }
    out(i) = std::max(out(i), 0.0);
  }
  return out;
}

bool is_pure(const Matrix& rho) { return std::abs(rho.squaredNorm() - 1.0) <= kStateTolerance; }

}  // namespace

DensityMatrix::DensityMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) throw std::invalid_argument("density matrix must be square");
  qubits_ = qubits_for_dimension(data_.rows());
  if (!data_.allFinite()) throw std::domain_error("density matrix has non-finite entries");
  if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(data_.trace() - Complex(1.0, 0.0)) > kStateTolerance) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
}

DensityMatrix::DensityMatrix(Matrix data, Unchecked) : data_(std::move(data)) {
  qubits_ = qubits_for_dimension(data_.rows());
}

DensityMatrix adopt_state(Matrix data) { return DensityMatrix(std::move(data), DensityMatrix::Unchecked{}); }

double DensityMatrix::purity() const { return data_.squaredNorm(); }

void DensityMatrix::check_positive() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
  clamped_eigenvalues(es.eigenvalues());
}

PauliRotation::PauliRotation(const PauliString& string, double theta)
    : flip_(string.x_mask()), cos_(std::cos(theta)) {
  if (string.qubits() > kDefaultQubitCap) throw std::length_error("Pauli rotation exceeds the qubit cap");
  const double s = std::sin(theta);
  const std::uint64_t dim = std::uint64_t{1} << string.qubits();
  offdiag_.resize(dim);
  for (std::uint64_t r = 0; r < dim; ++r) offdiag_[r] = Complex(0.0, -s) * string.phase(r ^ flip_);
}

void PauliRotation::apply_left(Matrix& m) const {
  const auto dim = static_cast<std::uint64_t>(m.rows());
  if (dim != offdiag_.size()) throw std::invalid_argument("rotation and matrix dimensions differ");
  if (flip_ == 0) {
    for (std::uint64_t r = 0; r < dim; ++r) m.row(static_cast<Eigen::Index>(r)) *= cos_ + offdiag_[r];
    return;
  }
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Complex* col = m.col(c).data();
    for (std::uint64_t r = 0; r < dim; ++r) {
      const std::uint64_t partner = r ^ flip_;
      if (partner < r) continue;
      const Complex a = col[r];
      const Complex b = col[partner];
      col[r] = cos_ * a + offdiag_[r] * b;
      col[partner] = cos_ * b + offdiag_[partner] * a;
    }
  }
}

void PauliRotation::conjugate(Matrix& rho) const {
  apply_left(rho);
  const auto dim = static_cast<std::uint64_t>(rho.cols());
  // Right multiplication by U^dagger: column c mixes with column c ^ flip.
  if (flip_ == 0) {
    for (std::uint64_t c = 0; c < dim; ++c) rho.col(static_cast<Eigen::Index>(c)) *= std::conj(cos_ + offdiag_[c]);
    return;
  }
  for (std::uint64_t c = 0; c < dim; ++c) {
    const std::uint64_t partner = c ^ flip_;
    if (partner < c) continue;
    auto left = rho.col(static_cast<Eigen::Index>(c));
    auto right = rho.col(static_cast<Eigen::Index>(partner));
    const Complex wc = std::conj(offdiag_[c]);
    const Complex wp = std::conj(offdiag_[partner]);
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      const Complex a = left(r);
      const Complex b = right(r);
      left(r) = cos_ * a + wc * b;
      right(r) = cos_ * b + wp * a;
    }
  }
}

Matrix PauliRotation::dense() const {
  Matrix out = Matrix::Identity(static_cast<Eigen::Index>(offdiag_.size()), static_cast<Eigen::Index>(offdiag_.size()));
  apply_left(out);
  return out;
}

DensityMatrix initial_all_zero(int qubits) {
  if (qubits < 1) throw std::invalid_argument("register needs at least one qubit");
  if (qubits > kDefaultQubitCap) throw std::length_error("register exceeds the qubit cap");
  const auto dim = Eigen::Index{1} << qubits;
  Matrix rho = Matrix::Zero(dim, dim);
  rho(0, 0) = 1.0;
  return DensityMatrix(std::move(rho));
}

StepUnitary exact_step_unitary(const Hamiltonian& h, double dt) {
  check_timestep(dt);
  const Matrix hm = hamiltonian_matrix(h);
  if (!hm.allFinite()) throw std::domain_error("Hamiltonian matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigendecomposition failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index n = 0; n < phases.size(); ++n) phases(n) = std::polar(1.0, -es.eigenvalues()(n) * dt);
  const Matrix& v = es.eigenvectors();
  return {v * phases.asDiagonal() * v.adjoint(), std::nullopt};
}

StepUnitary factor_unitary(const HamiltonianTerm& term, double coefficient, double dt) {
  check_timestep(dt);
  const double theta = term.weight * coefficient * dt;
  const Matrix p = dense_pauli(term.string);
  Matrix u = std::cos(theta) * Matrix::Identity(p.rows(), p.cols()) - Complex(0.0, std::sin(theta)) * p;
  return {std::move(u), std::nullopt};
}

StepUnitary sequence_step_unitary(const Hamiltonian& h, const SuzukiSequence& seq, double dt) {
  check_timestep(dt);
  if (seq.term_count != h.term_count()) {
    throw std::invalid_argument("sequence built for " + std::to_string(seq.term_count) +
                                " terms, Hamiltonian has " + std::to_string(h.term_count()));
  }
  if (h.qubits() > kDefaultQubitCap) throw std::length_error("register exceeds the qubit cap");
  const auto dim = Eigen::Index{1} << h.qubits();
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& f : seq.factors) {
    const auto& term = h.term(f.term);
    PauliRotation(term.string, term.weight * f.coefficient * dt).apply_left(u);
  }
  return {std::move(u), seq.strategy};
}

std::vector<DensityMatrix> evolve_noiseless(const DensityMatrix& rho0, const StepUnitary& u, int steps) {
  if (steps < 1) throw std::invalid_argument("need at least one step");
  if (u.matrix.rows() != rho0.dim()) throw std::invalid_argument("unitary and state dimensions differ");
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(steps));
  const Matrix u_dag = u.matrix.adjoint();
  Matrix rho = rho0.matrix();
  Matrix tmp(rho.rows(), rho.cols());
  for (int k = 0; k < steps; ++k) {
    tmp.noalias() = u.matrix * rho;
    rho.noalias() = tmp * u_dag;
    out.push_back(adopt_state(rho));
  }
  return out;
}

void depolarize_in_place(Matrix& rho, double p) {
  check_probability(p);
  if (p == 0.0) return;
  const double mixed = p / static_cast<double>(rho.rows());
  rho *= 1.0 - p;
  rho.diagonal().array() += mixed;
}

DensityMatrix depolarize(const DensityMatrix& rho, double p) {
  Matrix out = rho.matrix();
  depolarize_in_place(out, p);
  return adopt_state(std::move(out));
}

std::vector<DensityMatrix> evolve_with_noise(const DensityMatrix& rho0, const Hamiltonian& h,
                                             const SuzukiSequence& seq, double dt, int steps, double p) {
  check_timestep(dt);
  check_probability(p);
  if (steps < 1) throw std::invalid_argument("need at least one step");
  if (seq.term_count != h.term_count()) throw std::invalid_argument("sequence and Hamiltonian term counts differ");
  if (rho0.qubits() != h.qubits()) throw std::invalid_argument("state and Hamiltonian sizes differ");

  // Wide sequences repeat a handful of (term, coefficient) pairs many times.
  std::map<std::pair<std::size_t, double>, std::size_t> index;
  std::vector<PauliRotation> rotations;
  std::vector<std::size_t> schedule;
  schedule.reserve(seq.factors.size());
  for (const auto& f : seq.factors) {
    auto [it, inserted] = index.try_emplace({f.term, f.coefficient}, rotations.size());
    if (inserted) {
      const auto& term = h.term(f.term);
      rotations.emplace_back(term.string, term.weight * f.coefficient * dt);
    }
    schedule.push_back(it->second);
  }

  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(steps));
  Matrix rho = rho0.matrix();
  for (int k = 0; k < steps; ++k) {
    for (std::size_t r : schedule) {
      rotations[r].conjugate(rho);
      depolarize_in_place(rho, p);
    }
    out.push_back(adopt_state(rho));
  }
  return out;
}

double pauli_expectation(const DensityMatrix& rho, const PauliString& string) {
  if (string.qubits() != rho.qubits()) throw std::invalid_argument("observable and state sizes differ");
  const auto dim = static_cast<std::uint64_t>(rho.dim());
  const std::uint64_t flip = string.x_mask();
  const Matrix& m = rho.matrix();
  Complex total = 0.0;
  for (std::uint64_t k = 0; k < dim; ++k) {
    total += m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k ^ flip)) * string.phase(k);
  }
  return total.real();
}

double magnetization_x(const DensityMatrix& rho) {
  const int n = rho.qubits();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += pauli_expectation(rho, PauliString::single(n, j, Pauli::X));
  return sum / n;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  check_same_shape(a, b);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  check_same_shape(a, b);
  if (is_pure(a.matrix()) || is_pure(b.matrix())) {
    // Tr(a b) for Hermitian a, b.
    const double overlap = (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
    return std::clamp(overlap, 0.0, 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  const Eigen::VectorXd roots = clamped_eigenvalues(es.eigenvalues()).cwiseSqrt();
  const Matrix sqrt_a = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
  Matrix inner = sqrt_a * b.matrix() * sqrt_a;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> inner_es(inner, Eigen::EigenvaluesOnly);
  const double root_fidelity = clamped_eigenvalues(inner_es.eigenvalues()).cwiseSqrt().sum();
  return std::clamp(root_fidelity * root_fidelity, 0.0, 1.0);
}

double bures_from_fidelity(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - std::sqrt(f))));
}

double bures_distance(const DensityMatrix& a, const DensityMatrix& b) { return bures_from_fidelity(fidelity(a, b)); }

}  // namespace pforder
