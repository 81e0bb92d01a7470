"""
Tests for dipole far fields and their superposition
"""

import math

import numpy as np
import pytest

from photodetect.errors import GeometryError
from photodetect.models import Direction, Emitter, FieldConfig
from photodetect.services.field_service import (
    concatenate,
    farfield_arrays,
    fingerprint,
    phase_delta,
    single_dipole_farfield,
    single_emitter,
    symmetric_pair,
    total_farfield,
    with_common_phase,
)
from photodetect.services.geometry_service import build_sphere_grid, hermitian_dot_rows, spherical_basis


def _norm(vectors):
    return np.sqrt(hermitian_dot_rows(vectors, vectors).real)


def test_z_dipole_field_points_along_minus_theta_hat():
    d = Direction(theta=1.1, phi=0.4)
    f = single_dipole_farfield(Emitter(position=(0, 0, 0), moment=(0, 0, 1)), 2 * math.pi, d)
    _, theta_hat, phi_hat = spherical_basis(d)
    np.testing.assert_allclose(f.e_field, -math.sin(d.theta) * theta_hat, atol=1e-15)
    np.testing.assert_allclose(f.b_field, -math.sin(d.theta) * phi_hat, atol=1e-15)


def test_z_dipole_vanishes_on_axis():
    f = total_farfield(single_emitter(), Direction(theta=0.0, phi=1.0))
    assert np.abs(f.e_field).max() < 1e-15
    assert np.abs(f.b_field).max() < 1e-15


def test_pair_matches_closed_form_magnitude():
    config = symmetric_pair(3.0)
    grid = build_sphere_grid(64, 128)
    e_field, _ = farfield_arrays(config, grid.theta, grid.phi)
    k_d = 2 * math.pi * 3.0
    expected = 2 * np.sin(grid.theta) * np.abs(np.cos(0.5 * k_d * np.sin(grid.theta) * np.cos(grid.phi)))
    assert np.max(np.abs(_norm(e_field) - expected)) < 1e-12


def test_fields_are_transverse_and_equal_in_magnitude():
    config = FieldConfig(emitters=[
        Emitter(position=(0.2, -0.4, 0.1), moment=(1, 1j, 0.5)),
        Emitter(position=(-1.0, 0.3, 0.0), moment=(0, 0.3, 1 - 1j), phase=0.7),
    ])
    grid = build_sphere_grid(8, 16)
    e_field, b_field = farfield_arrays(config, grid.theta, grid.phi)
    r_hat = np.stack([
        np.sin(grid.theta) * np.cos(grid.phi),
        np.sin(grid.theta) * np.sin(grid.phi),
        np.cos(grid.theta),
    ], axis=-1)
    assert np.max(np.abs(hermitian_dot_rows(r_hat, e_field))) < 1e-12
    assert np.max(np.abs(hermitian_dot_rows(r_hat, b_field))) < 1e-12
    np.testing.assert_allclose(_norm(b_field), _norm(e_field), atol=1e-12)


def test_superposition_is_linear():
    left = single_emitter(position=(0.5, 0, 0))
    right = single_emitter(moment=(1, 0, 0), position=(0, 0.25, 0))
    both = concatenate(left, right)
    theta = np.linspace(0, math.pi, 7)
    phi = np.linspace(0, 2 * math.pi, 7, endpoint=False)
    e_l, b_l = farfield_arrays(left, theta, phi)
    e_r, b_r = farfield_arrays(right, theta, phi)
    e_t, b_t = farfield_arrays(both, theta, phi)
    np.testing.assert_allclose(e_t, e_l + e_r, atol=1e-15)
    np.testing.assert_allclose(b_t, b_l + b_r, atol=1e-15)


def test_common_phase_leaves_magnitude_unchanged():
    config = symmetric_pair(3.0)
    grid = build_sphere_grid(8, 16)
    e_a, _ = farfield_arrays(config, grid.theta, grid.phi)
    e_b, _ = farfield_arrays(with_common_phase(config, 1.234), grid.theta, grid.phi)
    np.testing.assert_allclose(_norm(e_a), _norm(e_b), atol=1e-12)


def test_phase_delta_of_fig2_pair():
    config = symmetric_pair(3.0)
    assert phase_delta(config, Direction(theta=0.5 * math.pi, phi=0.0)) == pytest.approx(6 * math.pi)
    assert phase_delta(config, Direction(theta=0.5 * math.pi, phi=0.5 * math.pi)) == pytest.approx(0.0, abs=1e-12)


def test_phase_delta_needs_symmetric_pair():
    three = concatenate(symmetric_pair(1.0), single_emitter())
    with pytest.raises(GeometryError):
        phase_delta(three, Direction(theta=1.0, phi=0.0))
    shifted = concatenate(single_emitter(position=(1.0, 0, 0)), single_emitter(position=(0.0, 0, 0)))
    with pytest.raises(GeometryError):
        phase_delta(shifted, Direction(theta=1.0, phi=0.0))


def test_concatenate_requires_same_wavelength():
    with pytest.raises(GeometryError):
        concatenate(single_emitter(wavelength=1.0), single_emitter(wavelength=2.0))


def test_zero_moment_is_rejected():
    with pytest.raises(ValueError):
        Emitter(position=(0, 0, 0), moment=(0, 0, 0))


def test_non_positive_wavelength_is_rejected():
    with pytest.raises(ValueError):
        FieldConfig(wavelength=0.0, emitters=[Emitter(position=(0, 0, 0), moment=(0, 0, 1))])


def test_fingerprint_is_stable_and_geometry_sensitive():
    assert fingerprint(symmetric_pair(3.0)) == fingerprint(symmetric_pair(3.0))
    assert fingerprint(symmetric_pair(3.0)) != fingerprint(symmetric_pair(2.0))


def test_pair_intensity_has_mirror_symmetries():
    config = symmetric_pair(3.0)
    rng = np.random.default_rng(4)
    theta = rng.uniform(0, math.pi, 40)
    phi = rng.uniform(0, 2 * math.pi, 40)
    reference = _norm(farfield_arrays(config, theta, phi)[0])
    for mirrored_theta, mirrored_phi in (
        (theta, -phi),
        (theta, math.pi - phi),
        (math.pi - theta, phi),
    ):
        mirrored = _norm(farfield_arrays(config, mirrored_theta, np.mod(mirrored_phi, 2 * math.pi))[0])
        np.testing.assert_allclose(mirrored, reference, atol=1e-12)


def test_emitter_at_one_and_a_half_wavelengths_flips_sign_along_x():
    d = Direction(theta=0.5 * math.pi, phi=0.0)
    k = 2 * math.pi
    origin = single_dipole_farfield(Emitter(position=(0, 0, 0), moment=(0, 0, 1)), k, d)
    shifted = single_dipole_farfield(Emitter(position=(1.5, 0, 0), moment=(0, 0, 1)), k, d)
    np.testing.assert_allclose(shifted.e_field, -origin.e_field, atol=1e-12)
    np.testing.assert_allclose(shifted.b_field, -origin.b_field, atol=1e-12)
