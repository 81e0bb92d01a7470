"""Generalized electric + magnetic detection operator.

A detector with sensitivity vectors u_e, u_b and mixing parameter zeta sees
the amplitude A = u_e* . E + zeta u_b* . B and clicks with probability
s^2 |A|^2. zeta = 0 is the Glauber (electric-only) detector.
"""
import logging
import math
from typing import Dict, Tuple, Union

import numpy as np

from photodetect.errors import DetectorError
from photodetect.models import (
    AbsorptionMode,
    DetectionMode,
    DetectorFrame,
    DetectorSpec,
    Direction,
    FarFieldAmplitude,
    FieldConfig,
    FrameMode,
    PolarizabilityModel,
)
from photodetect.services.field_service import farfield_arrays, per_emitter_arrays
from photodetect.services.geometry_service import hermitian_dot_rows, spherical_basis_arrays

logger = logging.getLogger(__name__)

# Ideal absorber: absorption and scattering cross sections are equal, so half
# of the extinction goes into the detector.
IDEAL_ABSORBER_FRACTION = 0.5
SPEED_OF_LIGHT = 1.0


def enhancement_factor(zeta: complex) -> float:
    """1 + |zeta|^2 + 2 Re(zeta), i.e. |1 + zeta|^2"""
    return abs(1.0 + complex(zeta)) ** 2


def resolve_sensitivity_arrays(spec: DetectorSpec, frame: DetectorFrame, theta, phi) -> Tuple[np.ndarray, np.ndarray]:
    """Sensitivity vectors at each direction: local frame attaches u_e = theta_hat, u_b = phi_hat"""
    if frame.mode == FrameMode.LOCAL:
        _, theta_hat, phi_hat = spherical_basis_arrays(theta, phi)
        return theta_hat.astype(complex), phi_hat.astype(complex)
    if frame.mode == FrameMode.LAB:
        shape = np.broadcast(np.asarray(theta), np.asarray(phi)).shape + (3,)
        return np.broadcast_to(spec.u_e, shape), np.broadcast_to(spec.u_b, shape)
    raise DetectorError(f"unknown detector frame: {frame.mode}")


def amplitude_arrays(e_field, b_field, u_e, u_b, zeta: complex) -> np.ndarray:
    return hermitian_dot_rows(u_e, e_field) + complex(zeta) * hermitian_dot_rows(u_b, b_field)


def detection_amplitude(f: FarFieldAmplitude, spec: DetectorSpec, frame: DetectorFrame, d: Direction) -> complex:
    u_e, u_b = resolve_sensitivity_arrays(spec, frame, np.float64(d.theta), np.float64(d.phi))
    return complex(amplitude_arrays(f.e_field, f.b_field, u_e, u_b, spec.zeta))


def detection_probability(f: FarFieldAmplitude, spec: DetectorSpec, frame: DetectorFrame, d: Direction) -> float:
    amplitude = detection_amplitude(f, spec, frame, d)
    return spec.sensitivity ** 2 * abs(amplitude) ** 2


def glauber_probability(f: FarFieldAmplitude, u_e, s: float = 1.0) -> float:
    """Electric-only detection, the zeta = 0 limit"""
    u_e = np.asarray(u_e, dtype=complex)
    norm = float(np.vdot(u_e, u_e).real)
    if abs(norm - 1.0) > 1e-12:
        raise DetectorError(f"u_e must be a unit vector (norm^2 = {norm})")
    amplitude = complex(hermitian_dot_rows(u_e, f.e_field))
    return s ** 2 * abs(amplitude) ** 2


def probability_arrays(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame,
                       mode: DetectionMode, theta, phi) -> np.ndarray:
    """Detection probability on angle arrays for any detection mode"""
    mode = _as_detection_mode(mode)
    u_e, u_b = resolve_sensitivity_arrays(spec, frame, theta, phi)
    s2 = spec.sensitivity ** 2

    if mode == DetectionMode.ABSORBED_PARTICLE:
        # Incoherent over emitters and over the E/B channels: no interference term
        zeta2 = abs(spec.zeta) ** 2
        total = None
        for e_field, b_field in per_emitter_arrays(config, theta, phi):
            term = np.abs(hermitian_dot_rows(u_e, e_field)) ** 2 + zeta2 * np.abs(hermitian_dot_rows(u_b, b_field)) ** 2
            total = term if total is None else total + term
        return IDEAL_ABSORBER_FRACTION * s2 * total

    e_field, b_field = farfield_arrays(config, theta, phi)
    probability = s2 * np.abs(amplitude_arrays(e_field, b_field, u_e, u_b, spec.zeta)) ** 2
    if mode == DetectionMode.ABSORBED_COHERENT:
        return IDEAL_ABSORBER_FRACTION * probability
    return probability


def absorbed_distribution(config: FieldConfig, spec: DetectorSpec, mode: Union[AbsorptionMode, str],
                          d: Direction, frame: DetectorFrame = DetectorFrame()) -> float:
    """Absorbed detection probability for an ideal absorber.

    ``coherent`` is half the scattering detection probability;
    ``particle_like`` drops every interference term and keeps the summed
    single-emitter power, giving an azimuthally uniform pattern for the pair.

    The dropped terms include the E-B cross term of each emitter, so even a
    single emitter gives particle_like == coherent only when Re(zeta) == 0;
    with the default local detector the ratio is (1 + |zeta|^2) / |1 + zeta|^2.
    """
    try:
        mode = AbsorptionMode(mode)
    except ValueError:
        raise DetectorError(f"unknown absorption mode: {mode!r}") from None

    detection_mode = (
        DetectionMode.ABSORBED_COHERENT if mode == AbsorptionMode.COHERENT else DetectionMode.ABSORBED_PARTICLE
    )
    value = probability_arrays(config, spec, frame, detection_mode, np.float64(d.theta), np.float64(d.phi))
    return float(value)


def _as_detection_mode(mode) -> DetectionMode:
    try:
        return DetectionMode(mode)
    except ValueError:
        raise DetectorError(f"unknown detection mode: {mode!r}") from None


# ---------------------------------------------------------------------------
# Polarizability and extinction

def lorentzian_polarizability(omega0: float, gamma: float, omega: float, strength: float = 1.0) -> PolarizabilityModel:
    """alpha(w) = strength / (w0^2 - w^2 - i gamma w)"""
    if omega0 <= 0 or gamma <= 0:
        raise DetectorError("Lorentzian needs omega0 > 0 and gamma > 0")

    def alpha(w: float) -> complex:
        return strength / (omega0 ** 2 - w ** 2 - 1j * gamma * w)

    return PolarizabilityModel(omega=omega, alpha=alpha)


def tabulated_polarizability(omegas, alphas, omega: float) -> PolarizabilityModel:
    return PolarizabilityModel(
        omega=omega,
        sample_omegas=np.asarray(omegas, dtype=float),
        sample_alphas=np.asarray(alphas, dtype=complex),
    )


def evaluate_polarizability(model: PolarizabilityModel) -> complex:
    if model.alpha is not None:
        return complex(model.alpha(model.omega))

    omegas = model.sample_omegas
    if not (omegas[0] <= model.omega <= omegas[-1]):
        raise DetectorError(
            f"omega {model.omega} outside tabulated range [{omegas[0]}, {omegas[-1]}]"
        )
    if np.any(model.sample_alphas.imag < 0):
        raise DetectorError("tabulated polarizability is not passive (Im alpha < 0)")
    re = np.interp(model.omega, omegas, model.sample_alphas.real)
    im = np.interp(model.omega, omegas, model.sample_alphas.imag)
    return complex(re, im)


def extinction_scale(model: PolarizabilityModel) -> float:
    """(omega / c) Im alpha(omega), proportional to the extinction cross section"""
    alpha = evaluate_polarizability(model)
    if not math.isfinite(alpha.real) or not math.isfinite(alpha.imag):
        raise DetectorError(f"polarizability is not finite at omega = {model.omega}")
    if alpha.imag < 0:
        raise DetectorError(f"non-passive polarizability: Im alpha = {alpha.imag} < 0")
    return model.omega / SPEED_OF_LIGHT * alpha.imag


def ideal_absorber_split(model: PolarizabilityModel) -> Dict[str, float]:
    extinction = extinction_scale(model)
    absorbed = IDEAL_ABSORBER_FRACTION * extinction
    return {
        "extinction": extinction,
        "absorption": absorbed,
        "scattering": extinction - absorbed,
    }
