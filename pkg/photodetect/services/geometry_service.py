"""Complex 3-vector algebra, spherical bases and sphere quadrature.

Every function is pure. The ``*_arrays`` variants accept any broadcastable
angle arrays and return vectors stacked on the last axis; the scalar
variants take a single :class:`Direction`.
"""
import logging
import math
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from photodetect.errors import GeometryError
from photodetect.models import Direction, SphereGrid, SphereScheme

logger = logging.getLogger(__name__)

ComplexVec3 = np.ndarray

MIN_GRID_THETA = 2
MIN_GRID_PHI = 4


def vec3(x: complex, y: complex, z: complex) -> ComplexVec3:
    return np.array([x, y, z], dtype=complex)


def spherical_basis(d: Direction) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (r_hat, theta_hat, phi_hat) at one direction.

    At the poles the basis is taken at the given phi; it is not continuous
    in phi there.
    """
    r_hat, theta_hat, phi_hat = spherical_basis_arrays(np.float64(d.theta), np.float64(d.phi))
    return r_hat, theta_hat, phi_hat


def spherical_basis_arrays(theta, phi) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta, phi = np.broadcast_arrays(theta, phi)

    sin_t, cos_t = np.sin(theta), np.cos(theta)
    sin_p, cos_p = np.sin(phi), np.cos(phi)

    r_hat = np.stack([sin_t * cos_p, sin_t * sin_p, cos_t], axis=-1)
    theta_hat = np.stack([cos_t * cos_p, cos_t * sin_p, -sin_t], axis=-1)
    phi_hat = np.stack([-sin_p, cos_p, np.zeros_like(phi)], axis=-1)
    return r_hat, theta_hat, phi_hat


def hermitian_dot(a: ComplexVec3, b: ComplexVec3) -> complex:
    """Sum of conj(a_i) * b_i"""
    return complex(np.vdot(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)))


def hermitian_dot_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise hermitian product over the last axis"""
    a = np.asarray(a)
    b = np.asarray(b)
    return np.conj(a[..., 0]) * b[..., 0] + np.conj(a[..., 1]) * b[..., 1] + np.conj(a[..., 2]) * b[..., 2]


def cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Componentwise cross product (no conjugation)"""
    return np.cross(a, b)


def build_sphere_grid(n_theta: int, n_phi: int,
                      scheme: SphereScheme = SphereScheme.PRODUCT_GAUSS) -> SphereGrid:
    """Product quadrature over the sphere.

    ``product-gauss`` places Gauss-Legendre nodes in cos(theta) and
    ``uniform-azimuth`` uses equal-width cos(theta) bands with midpoint
    nodes. Both use a uniform trapezoid rule in phi. Nodes are ordered by
    increasing theta, then increasing phi.
    """
    if n_theta < MIN_GRID_THETA or n_phi < MIN_GRID_PHI:
        raise GeometryError(
            f"sphere grid needs n_theta >= {MIN_GRID_THETA} and n_phi >= {MIN_GRID_PHI}, "
            f"got ({n_theta}, {n_phi})"
        )

    if scheme == SphereScheme.PRODUCT_GAUSS:
        x, w_x = leggauss(n_theta)
    elif scheme == SphereScheme.UNIFORM_AZIMUTH:
        edges = np.linspace(-1.0, 1.0, n_theta + 1)
        x = 0.5 * (edges[:-1] + edges[1:])
        w_x = np.diff(edges)
    else:
        raise GeometryError(f"unknown sphere scheme: {scheme}")

    # descending cos(theta) gives ascending theta
    order = np.argsort(-x)
    theta_nodes = np.arccos(np.clip(x[order], -1.0, 1.0))
    w_theta = w_x[order]

    phi_nodes = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * math.pi / n_phi

    theta, phi = np.meshgrid(theta_nodes, phi_nodes, indexing="ij")
    weights = np.repeat(w_theta * w_phi, n_phi)

    grid = SphereGrid(
        theta=theta.ravel(),
        phi=phi.ravel(),
        weights=weights,
        scheme=scheme,
        n_theta=n_theta,
        n_phi=n_phi,
    )
    logger.debug(f"Built {scheme.value} sphere grid with {len(grid)} nodes")
    return grid


def integrate(grid: SphereGrid, values) -> float:
    """Quadrature sum of per-node values"""
    values = np.asarray(values, dtype=float)
    if values.shape != grid.weights.shape:
        raise GeometryError(f"expected {grid.weights.size} values, got shape {values.shape}")
    return float(np.dot(grid.weights, values))
