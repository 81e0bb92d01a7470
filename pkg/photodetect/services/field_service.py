import hashlib
import json
import logging
import math
from typing import Iterable, Sequence, Tuple

import numpy as np

from photodetect.errors import GeometryError
from photodetect.models import Direction, Emitter, FarFieldAmplitude, FieldConfig
from photodetect.services.geometry_service import cross, spherical_basis_arrays

logger = logging.getLogger(__name__)

Z_HAT = (0.0, 0.0, 1.0)
PAIR_TOLERANCE = 1e-12


def symmetric_pair(separation: float, wavelength: float = 1.0,
                   moment: Sequence[complex] = Z_HAT) -> FieldConfig:
    """Two in-phase dipoles at +/- separation/2 along x (separation in wavelengths)"""
    half = 0.5 * separation
    return FieldConfig(
        wavelength=wavelength,
        emitters=[
            Emitter(position=(half, 0.0, 0.0), moment=moment),
            Emitter(position=(-half, 0.0, 0.0), moment=moment),
        ],
    )


def single_emitter(wavelength: float = 1.0, moment: Sequence[complex] = Z_HAT,
                   position: Tuple[float, float, float] = (0.0, 0.0, 0.0)) -> FieldConfig:
    return FieldConfig(wavelength=wavelength, emitters=[Emitter(position=position, moment=moment)])


def concatenate(first: FieldConfig, second: FieldConfig) -> FieldConfig:
    if first.wavelength != second.wavelength:
        raise GeometryError("configs with different wavelengths cannot be concatenated")
    return FieldConfig(wavelength=first.wavelength, emitters=[*first.emitters, *second.emitters])


def with_common_phase(config: FieldConfig, alpha: float) -> FieldConfig:
    emitters = [e.model_copy(update={"phase": e.phase + alpha}) for e in config.emitters]
    return config.model_copy(update={"emitters": emitters})


def pair_separation(config: FieldConfig) -> float:
    """Separation in wavelengths of an x-axis-symmetric pair; raises otherwise"""
    if len(config.emitters) != 2:
        raise GeometryError(f"phase difference needs exactly 2 emitters, got {len(config.emitters)}")
    a = np.asarray(config.emitters[0].position, dtype=float)
    b = np.asarray(config.emitters[1].position, dtype=float)
    on_axis = max(abs(a[1]), abs(a[2]), abs(b[1]), abs(b[2])) <= PAIR_TOLERANCE
    if not on_axis or abs(a[0] + b[0]) > PAIR_TOLERANCE:
        raise GeometryError("emitters are not a pair at +/- d/2 on the x axis")
    return float(abs(a[0] - b[0]))


def phase_delta(config: FieldConfig, d: Direction) -> float:
    """Far-field phase difference k d sin(theta) cos(phi) of a symmetric pair"""
    separation = pair_separation(config) * config.wavelength
    return config.wavenumber * separation * math.sin(d.theta) * math.cos(d.phi)


def emitter_farfield_arrays(emitter: Emitter, k: float, theta, phi) -> Tuple[np.ndarray, np.ndarray]:
    """E and B of one Hertzian dipole on arbitrary angle arrays.

    E = [(r x p) x r] exp(i phase) exp(-i k r.x); B = r x E. The common
    exp(ikr)/r envelope is dropped.
    """
    r_hat, _, _ = spherical_basis_arrays(theta, phi)
    p = emitter.moment
    wavelength = 2.0 * math.pi / k
    position = np.asarray(emitter.position, dtype=float) * wavelength

    projection = r_hat[..., 0] * position[0] + r_hat[..., 1] * position[1] + r_hat[..., 2] * position[2]
    factor = np.exp(1j * emitter.phase) * np.exp(-1j * k * projection)

    transverse = cross(cross(r_hat, np.broadcast_to(p, r_hat.shape)), r_hat)
    e_field = transverse * factor[..., np.newaxis]
    b_field = cross(r_hat, e_field)
    return e_field, b_field


def farfield_arrays(config: FieldConfig, theta, phi) -> Tuple[np.ndarray, np.ndarray]:
    """Coherent superposition of every emitter, summed in emitter order"""
    k = config.wavenumber
    e_total = None
    b_total = None
    for emitter in config.emitters:
        e_field, b_field = emitter_farfield_arrays(emitter, k, theta, phi)
        if e_total is None:
            e_total, b_total = e_field, b_field
        else:
            e_total = e_total + e_field
            b_total = b_total + b_field
    return e_total, b_total


def per_emitter_arrays(config: FieldConfig, theta, phi) -> Iterable[Tuple[np.ndarray, np.ndarray]]:
    k = config.wavenumber
    return [emitter_farfield_arrays(emitter, k, theta, phi) for emitter in config.emitters]


def single_dipole_farfield(e: Emitter, k: float, d: Direction) -> FarFieldAmplitude:
    e_field, b_field = emitter_farfield_arrays(e, k, np.float64(d.theta), np.float64(d.phi))
    return FarFieldAmplitude(e_field=e_field, b_field=b_field)


def total_farfield(config: FieldConfig, d: Direction) -> FarFieldAmplitude:
    e_field, b_field = farfield_arrays(config, np.float64(d.theta), np.float64(d.phi))
    return FarFieldAmplitude(e_field=e_field, b_field=b_field)


def fingerprint(config: FieldConfig) -> str:
    """SHA-256 of a canonical JSON rendering of the emitter geometry"""
    payload = {
        "wavelength": repr(float(config.wavelength)),
        "emitters": [
            {
                "position": [repr(float(x)) for x in e.position],
                "moment": [[repr(float(c.real)), repr(float(c.imag))] for c in e.moment],
                "phase": repr(float(e.phase)),
            }
            for e in config.emitters
        ],
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()
