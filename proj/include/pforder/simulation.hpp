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

#include <optional>
#include <vector>

#include "pforder/decomposition.hpp"
#include "pforder/pauli.hpp"

namespace pforder {

/// Eigenvalues above -kPsdTolerance are clamped to zero before square roots;
/// anything more negative is an error.
inline constexpr double kPsdTolerance = 1e-10;

/**
 * A 2^L x 2^L density matrix.
 *
 * Construction checks shape, Hermiticity and unit trace (1e-10). Positivity
 * costs an eigendecomposition and is checked on demand by check_positive().
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix data);

  const Matrix& matrix() const { return data_; }
  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return data_.rows(); }

  double purity() const;
  /// Throws std::domain_error if an eigenvalue falls below -kPsdTolerance.
  void check_positive() const;

 private:
  struct Unchecked {};
  DensityMatrix(Matrix data, Unchecked);
  friend DensityMatrix adopt_state(Matrix data);

  Matrix data_;
  int qubits_ = 0;
};

/// Wrap a matrix produced by a trace-preserving update without re-validating.
DensityMatrix adopt_state(Matrix data);

/// A one-timestep propagator. `strategy` is empty for the exact e^{-iH dt}.
struct StepUnitary {
  Matrix matrix;
  std::optional<Strategy> strategy;
};

/**
 * e^{-i theta P} = cos(theta) I - i sin(theta) P for a Pauli string P,
 * applied to density matrices in O(d^2) using the signed-permutation
 * structure of P.
 */
class PauliRotation {
 public:
  PauliRotation(const PauliString& string, double theta);

  /// rho -> U rho U^dagger, in place.
  void conjugate(Matrix& rho) const;
  /// m -> U m, in place.
  void apply_left(Matrix& m) const;
  Matrix dense() const;

 private:
  std::uint64_t flip_;
  double cos_;
  // Off-diagonal amplitude -i sin(theta) <r|P|r^flip>, indexed by row r.
  std::vector<Complex> offdiag_;
};

DensityMatrix initial_all_zero(int qubits);

/// V diag(e^{-i e_n dt}) V^dagger from the Hermitian eigendecomposition of H.
StepUnitary exact_step_unitary(const Hamiltonian& h, double dt);

/// e^{-i weight * coefficient * dt * P} in closed form.
StepUnitary factor_unitary(const HamiltonianTerm& term, double coefficient, double dt);

/// Ordered product of the factor unitaries; the first listed factor acts
/// first on the state and is therefore rightmost in the matrix product.
StepUnitary sequence_step_unitary(const Hamiltonian& h, const SuzukiSequence& seq, double dt);

/// rho_k = U rho_{k-1} U^dagger for k = 1..steps.
std::vector<DensityMatrix> evolve_noiseless(const DensityMatrix& rho0, const StepUnitary& u, int steps);

/// (1 - p) rho + p I/d on the full register.
DensityMatrix depolarize(const DensityMatrix& rho, double p);
void depolarize_in_place(Matrix& rho, double p);

/// Each factor is followed by a full-register depolarizing channel with
/// probability p. One snapshot per completed timestep.
std::vector<DensityMatrix> evolve_with_noise(const DensityMatrix& rho0, const Hamiltonian& h,
                                             const SuzukiSequence& seq, double dt, int steps, double p);

/// Re Tr(rho P).
double pauli_expectation(const DensityMatrix& rho, const PauliString& string);

/// Site-averaged (1/L) sum_j Tr(rho X_j).
double magnetization_x(const DensityMatrix& rho);

/// (1/2) sum |eig(a - b)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. A pure argument
/// (purity within 1e-10 of one) takes the Tr(a b) shortcut.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// sqrt(2 (1 - sqrt(F))).
double bures_distance(const DensityMatrix& a, const DensityMatrix& b);
double bures_from_fidelity(double f);

}  // namespace pforder
