"""
Tests for the Fock-space oracle
"""

import math

import numpy as np
import pytest

from photodetect.errors import OracleError
from photodetect.models import DetectionCoefficients, DetectorFrame, DetectorSpec, Direction, ModeSpace, QuantumState
from photodetect.services.detector_service import detection_amplitude
from photodetect.services.field_service import concatenate, single_emitter, symmetric_pair, total_farfield
from photodetect.services.geometry_service import build_sphere_grid
from photodetect.services.quantum_service import (
    QuantumOracle,
    annihilation_matrix,
    build_detection_operator,
    detection_coefficients,
    expectation_normal_ordered,
    fock_index,
    fock_state,
    number_operator,
    random_zetas,
    symmetric_single_photon,
    total_number_operator,
    vacuum_state,
)

PAIR_SPACE = ModeSpace(n_modes=2)


def test_fock_index_puts_mode_zero_fastest():
    assert fock_index(PAIR_SPACE, [0, 0]) == 0
    assert fock_index(PAIR_SPACE, [1, 0]) == 1
    assert fock_index(PAIR_SPACE, [0, 1]) == 2
    assert fock_index(ModeSpace(n_modes=2, cutoff=2), [2, 1]) == 5
    with pytest.raises(OracleError):
        fock_index(PAIR_SPACE, [2, 0])
    with pytest.raises(OracleError):
        fock_index(PAIR_SPACE, [1])


def test_annihilation_lowers_the_right_mode():
    a1 = annihilation_matrix(PAIR_SPACE, 1)
    result = a1 @ fock_state(PAIR_SPACE, [1, 1]).amplitudes
    np.testing.assert_allclose(result, fock_state(PAIR_SPACE, [1, 0]).amplitudes)
    np.testing.assert_allclose(a1 @ vacuum_state(PAIR_SPACE).amplitudes, 0)
    with pytest.raises(OracleError):
        annihilation_matrix(PAIR_SPACE, 2)


def test_number_operators_count_occupation():
    space = ModeSpace(n_modes=3, cutoff=2)
    psi = fock_state(space, [2, 0, 1]).amplitudes
    for j, n in enumerate([2, 0, 1]):
        np.testing.assert_allclose(number_operator(space, j) @ psi, n * psi)
    single = symmetric_single_photon(space).amplitudes
    assert np.vdot(single, total_number_operator(space) @ single).real == pytest.approx(1.0)


def test_symmetric_pair_expectation_is_half_coherent_sum():
    rng = np.random.default_rng(2)
    state = symmetric_single_photon(PAIR_SPACE)
    for _ in range(20):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        op = build_detection_operator(PAIR_SPACE, DetectionCoefficients(values=c))
        assert expectation_normal_ordered(state, op) == pytest.approx(0.5 * abs(c.sum()) ** 2, abs=1e-12)


def test_vacuum_never_clicks():
    op = build_detection_operator(PAIR_SPACE, DetectionCoefficients(values=np.array([1.0, 2j])))
    assert expectation_normal_ordered(vacuum_state(PAIR_SPACE), op) == 0.0


def test_expectation_validates_inputs():
    op = build_detection_operator(PAIR_SPACE, DetectionCoefficients(values=np.array([1.0, 1.0])))
    unnormalized = QuantumState(space=PAIR_SPACE, amplitudes=np.array([0, 1, 1, 0], dtype=complex))
    with pytest.raises(OracleError):
        expectation_normal_ordered(unnormalized, op)
    with pytest.raises(OracleError):
        expectation_normal_ordered(symmetric_single_photon(PAIR_SPACE), np.eye(3))
    with pytest.raises(OracleError):
        build_detection_operator(PAIR_SPACE, DetectionCoefficients(values=np.ones(3)))


def test_coefficients_sum_to_classical_amplitude():
    config = symmetric_pair(3.0)
    spec = DetectorSpec(zeta=0.3 - 0.8j)
    d = Direction(theta=1.3, phi=2.2)
    coeffs = detection_coefficients(config, spec, DetectorFrame.local(), d)
    amplitude = detection_amplitude(total_farfield(config, d), spec, DetectorFrame.local(), d)
    assert complex(coeffs.values.sum()) == pytest.approx(amplitude, abs=1e-12)


def test_oracle_agrees_with_classical_pair():
    oracle = QuantumOracle(symmetric_pair(3.0))
    grid = build_sphere_grid(16, 32)
    zetas = random_zetas(20, seed=7)
    result = oracle.verify(DetectorSpec(), DetectorFrame.local(), grid, zetas, tolerance=1e-10)
    assert result["passed"]
    assert result["max_deviation"] < 1e-10
    assert result["n_directions"] == 16 * 32
    assert result["state_weight"] == pytest.approx(0.5)


def test_oracle_dark_detector_is_zero_on_both_sides():
    oracle = QuantumOracle(symmetric_pair(3.0))
    result = oracle.verify(DetectorSpec(), DetectorFrame.local(), build_sphere_grid(8, 16), [-1.0])
    assert result["passed"]
    assert result["worst"]["quantum"] < 1e-24
    assert result["worst"]["classical"] < 1e-24


def test_oracle_three_emitters_lab_frame():
    config = concatenate(symmetric_pair(1.0), single_emitter(moment=(1, 0, 0), position=(0, 0.7, 0)))
    oracle = QuantumOracle(config)
    spec = DetectorSpec(u_e=(0, 0, 1), u_b=(0, 1, 0))
    result = oracle.verify(spec, DetectorFrame.lab(), build_sphere_grid(8, 16), random_zetas(5, seed=1))
    assert result["passed"]
    assert result["state_weight"] == pytest.approx(1 / 3)


def test_oracle_refuses_more_than_four_emitters():
    config = concatenate(symmetric_pair(1.0), concatenate(symmetric_pair(2.0), single_emitter()))
    with pytest.raises(OracleError):
        QuantumOracle(config)


def test_random_zetas_are_reproducible():
    assert random_zetas(4, seed=9) == random_zetas(4, seed=9)
    assert all(isinstance(z, complex) for z in random_zetas(4, seed=9))
    assert not math.isclose(abs(random_zetas(1, seed=1)[0]), abs(random_zetas(1, seed=2)[0]))


def test_single_mode_ladder_and_one_photon_expectation():
    space = ModeSpace(n_modes=1)
    a = annihilation_matrix(space, 0)
    np.testing.assert_array_equal(a, [[0, 1], [0, 0]])
    one = fock_state(space, [1])
    for c in (1.0, 0.6 - 0.8j, 2j):
        op = build_detection_operator(space, DetectionCoefficients(values=np.array([c])))
        assert expectation_normal_ordered(one, op) == pytest.approx(abs(c) ** 2, abs=1e-14)


def test_oracle_expectation_scales_quadratically():
    oracle = QuantumOracle(symmetric_pair(3.0))
    rng = np.random.default_rng(5)
    c = rng.normal(size=2) + 1j * rng.normal(size=2)
    for w in (2.0, -0.5j, 1 + 1j):
        assert oracle.expectation(w * c) == pytest.approx(abs(w) ** 2 * oracle.expectation(c), rel=1e-12)
