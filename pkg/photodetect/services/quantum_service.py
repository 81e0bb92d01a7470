import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from photodetect.errors import OracleError
from photodetect.models import (
    DetectionCoefficients,
    DetectorFrame,
    DetectorSpec,
    Direction,
    FieldConfig,
    ModeSpace,
    QuantumState,
    SphereGrid,
)
from photodetect.services.detector_service import amplitude_arrays, resolve_sensitivity_arrays
from photodetect.services.field_service import farfield_arrays, per_emitter_arrays

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
IMAG_TOLERANCE = 1e-12
MAX_ORACLE_MODES = 4


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), k=1).astype(complex)


def annihilation_matrix(space: ModeSpace, mode_index: int) -> np.ndarray:
    """Dense annihilation operator of one mode on the truncated Fock space.

    Basis index = sum_j n_j (cutoff + 1)^j, so mode 0 is the fastest
    varying factor and therefore the last one in the Kronecker product.
    """
    if not 0 <= mode_index < space.n_modes:
        raise OracleError(f"mode index {mode_index} out of range for {space.n_modes} modes")

    identity = np.eye(space.cutoff + 1, dtype=complex)
    operator = np.ones((1, 1), dtype=complex)
    for j in reversed(range(space.n_modes)):
        factor = _ladder(space.cutoff) if j == mode_index else identity
        operator = np.kron(operator, factor)
    return operator


def number_operator(space: ModeSpace, mode_index: int) -> np.ndarray:
    a = annihilation_matrix(space, mode_index)
    return a.conj().T @ a


def total_number_operator(space: ModeSpace) -> np.ndarray:
    return sum(number_operator(space, j) for j in range(space.n_modes))


def fock_index(space: ModeSpace, occupations: Sequence[int]) -> int:
    if len(occupations) != space.n_modes:
        raise OracleError(f"expected {space.n_modes} occupation numbers, got {len(occupations)}")
    index = 0
    for j, n in enumerate(occupations):
        if not 0 <= n <= space.cutoff:
            raise OracleError(f"occupation {n} of mode {j} exceeds cutoff {space.cutoff}")
        index += n * (space.cutoff + 1) ** j
    return index


def fock_state(space: ModeSpace, occupations: Sequence[int]) -> QuantumState:
    amplitudes = np.zeros(space.dimension, dtype=complex)
    amplitudes[fock_index(space, occupations)] = 1.0
    return QuantumState(space=space, amplitudes=amplitudes)


def vacuum_state(space: ModeSpace) -> QuantumState:
    return fock_state(space, [0] * space.n_modes)


def symmetric_single_photon(space: ModeSpace) -> QuantumState:
    """One photon shared with equal amplitude by every mode"""
    amplitudes = np.zeros(space.dimension, dtype=complex)
    weight = 1.0 / np.sqrt(space.n_modes)
    for j in range(space.n_modes):
        occupations = [0] * space.n_modes
        occupations[j] = 1
        amplitudes[fock_index(space, occupations)] = weight
    return QuantumState(space=space, amplitudes=amplitudes)


def build_detection_operator(space: ModeSpace, coeffs: DetectionCoefficients) -> np.ndarray:
    """O = sum_j c_j a_j"""
    if coeffs.n_modes != space.n_modes:
        raise OracleError(f"{coeffs.n_modes} coefficients for {space.n_modes} modes")
    operator = np.zeros((space.dimension, space.dimension), dtype=complex)
    for j, c in enumerate(coeffs.values):
        operator += complex(c) * annihilation_matrix(space, j)
    return operator


def expectation_normal_ordered(state: QuantumState, op: np.ndarray) -> float:
    """<psi| O^dagger O |psi> for a normalized state"""
    if abs(state.norm - 1.0) > NORM_TOLERANCE:
        raise OracleError(f"state is not normalized (norm = {state.norm})")
    if op.shape != (state.space.dimension, state.space.dimension):
        raise OracleError(f"operator shape {op.shape} does not match the Fock dimension {state.space.dimension}")

    psi = state.amplitudes
    value = complex(np.vdot(psi, op.conj().T @ (op @ psi)))
    if abs(value.imag) > IMAG_TOLERANCE * max(1.0, abs(value.real)):
        raise OracleError(f"normally ordered expectation has imaginary part {value.imag}")
    return max(value.real, 0.0)


def detection_coefficients(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame,
                           d: Direction) -> DetectionCoefficients:
    """c_j = u_e* . E_j + zeta u_b* . B_j from each emitter's own far field"""
    theta, phi = np.float64(d.theta), np.float64(d.phi)
    u_e, u_b = resolve_sensitivity_arrays(spec, frame, theta, phi)
    values = [
        complex(amplitude_arrays(e_field, b_field, u_e, u_b, spec.zeta))
        for e_field, b_field in per_emitter_arrays(config, theta, phi)
    ]
    return DetectionCoefficients(values=np.asarray(values, dtype=complex))


class QuantumOracle:
    """Compares the classical detection probability with <O^dagger O> on the
    symmetric single-photon state over one mode per emitter"""

    def __init__(self, config: FieldConfig, cutoff: int = 1):
        n_modes = len(config.emitters)
        if n_modes > MAX_ORACLE_MODES:
            raise OracleError(f"oracle supports at most {MAX_ORACLE_MODES} emitters, got {n_modes}")
        self.config = config
        self.space = ModeSpace(n_modes=n_modes, cutoff=cutoff)
        self.state = symmetric_single_photon(self.space)
        self.ladders = [annihilation_matrix(self.space, j) for j in range(n_modes)]

    def expectation(self, coeffs: np.ndarray) -> float:
        operator = np.zeros((self.space.dimension, self.space.dimension), dtype=complex)
        for c, a in zip(coeffs, self.ladders):
            operator += complex(c) * a
        return expectation_normal_ordered(self.state, operator)

    def verify(self, spec: DetectorSpec, frame: DetectorFrame, grid: SphereGrid,
               zetas: Sequence[complex], tolerance: float = 1e-10) -> Dict:
        """Largest |quantum - classical/M| over every grid node and every zeta"""
        theta, phi = grid.theta, grid.phi
        emitter_fields = per_emitter_arrays(self.config, theta, phi)
        e_total, b_total = farfield_arrays(self.config, theta, phi)
        weight = 1.0 / self.space.n_modes

        max_deviation = 0.0
        max_coefficient_deviation = 0.0
        worst: Optional[Dict] = None
        for zeta in zetas:
            trial = spec.with_zeta(zeta)
            u_e, u_b = resolve_sensitivity_arrays(trial, frame, theta, phi)
            coefficients = np.stack(
                [amplitude_arrays(e, b, u_e, u_b, trial.zeta) for e, b in emitter_fields], axis=-1
            )
            classical = np.abs(amplitude_arrays(e_total, b_total, u_e, u_b, trial.zeta)) ** 2

            for node in range(coefficients.shape[0]):
                quantum = self.expectation(coefficients[node])
                deviation = float(abs(quantum - weight * classical[node]))
                coefficient_deviation = float(abs(quantum - weight * abs(coefficients[node].sum()) ** 2))
                max_coefficient_deviation = max(max_coefficient_deviation, coefficient_deviation)
                if deviation > max_deviation or worst is None:
                    max_deviation = max(max_deviation, deviation)
                    worst = {
                        "theta": float(theta[node]),
                        "phi": float(phi[node]),
                        "zeta": [trial.zeta.real, trial.zeta.imag],
                        "quantum": quantum,
                        "classical": float(classical[node]),
                    }

        passed = bool(max_deviation < tolerance and max_coefficient_deviation < tolerance)
        logger.info(
            f"Quantum oracle over {len(grid)} directions x {len(zetas)} zetas: "
            f"max deviation {max_deviation:.3e} ({'pass' if passed else 'fail'})"
        )
        return {
            "passed": passed,
            "max_deviation": max_deviation,
            "max_coefficient_deviation": max_coefficient_deviation,
            "tolerance": tolerance,
            "n_directions": len(grid),
            "n_zetas": len(zetas),
            "n_modes": self.space.n_modes,
            "state_weight": weight,
            "worst": worst,
        }


def random_zetas(count: int, seed: int, scale: float = 2.0) -> List[complex]:
    rng = np.random.default_rng(seed)
    values = scale * (rng.standard_normal(count) + 1j * rng.standard_normal(count))
    return [complex(z) for z in values]
