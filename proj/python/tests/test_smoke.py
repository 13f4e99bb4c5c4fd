# Copyright 2026 The pforder Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv
import io
import math

import numpy as np
import pytest

import pforder as pf


def test_tfim_matrix_matches_kronecker_products():
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    i2 = np.eye(2)
    expected = -np.kron(z, z) - 5 * np.kron(x, i2) - 5 * np.kron(i2, x)
    np.testing.assert_array_equal(pf.build_tfim(2).matrix(), expected)


def test_three_term_sequences():
    h = pf.build_tfim(2)
    assert pf.shallow_sequence(h).factors == [(0, 0.5), (1, 0.5), (2, 1.0), (1, 0.5), (0, 0.5)]
    assert pf.wide_sequence(h).factors == [
        (1, 0.25), (2, 0.5), (1, 0.25), (0, 1.0), (1, 0.25), (2, 0.5), (1, 0.25)]


def test_lengths_and_text_round_trip():
    h = pf.build_xyz(5)
    assert h.term_count == 12
    assert pf.predicted_length(12, pf.Strategy.wide()) == 4095
    seq = pf.fractional_sequence(h, 0.01, 0.4)
    assert seq.wide_steps == round(0.4 * 11)
    assert len(seq) == pf.predicted_length(12, seq.strategy)
    assert pf.parse_sequence(seq.to_text()) == seq
    assert all(math.isclose(s, 1.0, abs_tol=1e-12) for s in seq.coefficient_sums())


def test_hybrid_choices_exposed():
    seq = pf.hybrid_sequence(pf.build_tfim(5), 0.01)
    assert len(seq) == 511
    assert len(seq.choices) == 8
    assert all(c.bound >= 0 for c in seq.choices)
    assert {c.type for c in seq.choices} <= {pf.StepType.SHALLOW, pf.StepType.WIDE}


def test_local_bound_example():
    x = pf.dense_pauli("X")
    z = pf.dense_pauli("Z")
    assert pf.local_step_bound(x, z, 1.0, pf.StepType.SHALLOW) == pytest.approx(12.0)


def test_simulation_and_metrics():
    h = pf.build_tfim(3)
    rho0 = pf.initial_all_zero(3)
    exact = pf.evolve_noiseless(rho0, pf.exact_step_unitary(h, 0.01), 10)
    seq = pf.shallow_sequence(h)
    approx = pf.evolve_noiseless(rho0, pf.sequence_step_unitary(h, seq, 0.01), 10)
    d = pf.trace_distance(exact[-1], approx[-1])
    assert 0 < d < 1e-3
    assert pf.fidelity(exact[-1], exact[-1]) == pytest.approx(1.0)
    noisy = pf.evolve_with_noise(rho0, h, seq, 0.01, 10, 0.0)
    np.testing.assert_allclose(noisy[-1], approx[-1], atol=1e-10)
    mixed = pf.depolarize(np.diag([1.0, 0.0]).astype(complex), 0.5)
    np.testing.assert_array_equal(mixed, np.diag([0.75, 0.25]))
    assert pf.magnetization_x(np.full((4, 4), 0.25, dtype=complex)) == pytest.approx(1.0)


def test_runner_returns_csv():
    cfg = pf.ExperimentConfig(model="tfim", qubits=3, steps=4)
    text = pf.run_extremal_comparison(cfg)
    rows = list(csv.DictReader(io.StringIO(text)))
    assert text.splitlines()[0] == pf.CSV_HEADER
    assert len(rows) == 12
    assert {r["strategy"] for r in rows} == {"shallow", "wide", "hybrid"}
    assert all(0 <= float(r["trace_distance"]) <= 1 for r in rows)


def test_errors_surface_as_value_errors():
    with pytest.raises(ValueError):
        pf.fractional_sequence(pf.build_tfim(3), 0.01, 1.5)
    with pytest.raises(ValueError):
        pf.ExperimentConfig(steps=0)
    with pytest.raises(ValueError):
        pf.depolarize(np.eye(2, dtype=complex), 0.5)
    with pytest.raises(ValueError):
        pf.Hamiltonian(2, [(0.0, "ZZ")])
