"""
Tests for angular scans, visibility, zero counting and power quadrature
"""

import math

import numpy as np
import pytest

from photodetect.config import settings
from photodetect.errors import AnalysisError
from photodetect.models import DetectionMode, DetectorFrame, DetectorSpec, Normalization, ScanPlane
from photodetect.services.analysis_service import (
    compare_scans,
    count_zeros,
    normalize_scan,
    plane_angles,
    reference_maximum,
    refinement_samples,
    scan_plane,
    scan_sphere,
    total_power,
    visibility,
    zeta_sweep,
)
from photodetect.services.field_service import single_emitter, symmetric_pair
from photodetect.services.geometry_service import build_sphere_grid

LOCAL = DetectorFrame.local()
PAIR = symmetric_pair(3.0)
SCATTERING = DetectionMode.SCATTERING


def _scan(config=PAIR, zeta=0, mode=SCATTERING, plane=ScanPlane.XY, n=720, **kwargs):
    return scan_plane(config, DetectorSpec(zeta=zeta), LOCAL, mode, plane, n, **kwargs)


def test_plane_parameterization():
    theta, phi = plane_angles(ScanPlane.XZ, [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi])
    np.testing.assert_allclose(theta, [0.0, 0.5 * math.pi, math.pi, 0.5 * math.pi])
    np.testing.assert_allclose(phi, [0.0, 0.0, 0.0, math.pi])
    theta, phi = plane_angles(ScanPlane.XY, [0.0, 1.0])
    np.testing.assert_allclose(theta, 0.5 * math.pi)
    np.testing.assert_allclose(phi, [0.0, 1.0])


def test_glauber_pair_has_twelve_zeros_in_xy_plane():
    scan = _scan()
    assert len(scan) == 720
    assert count_zeros(scan) == 12
    assert visibility(scan).v == pytest.approx(1.0, abs=1e-9)


def test_half_wavelength_pair_has_two_zeros():
    assert count_zeros(_scan(config=symmetric_pair(0.5))) == 2


def test_single_dipole_xy_scan_is_flat():
    scan = _scan(config=single_emitter())
    assert count_zeros(scan) == 0
    assert visibility(scan).v == pytest.approx(0.0, abs=1e-12)


def test_unit_zeta_scan_is_four_times_glauber():
    deviation = compare_scans(_scan(zeta=1), _scan(zeta=0))
    assert deviation.ratio_mean == pytest.approx(4.0, rel=1e-12)
    assert deviation.ratio_deviation < 1e-12


def test_particle_like_minus_one_is_constant_with_zero_visibility():
    scan = _scan(zeta=-1, mode=DetectionMode.ABSORBED_PARTICLE)
    p = scan.probability
    assert p.max() - p.min() < 1e-12 * p.max()
    assert visibility(scan).v == pytest.approx(0.0, abs=1e-12)
    assert count_zeros(scan) == 0


def test_xz_scan_vanishes_on_axis_and_is_mirror_symmetric():
    scan = _scan(plane=ScanPlane.XZ)
    p = scan.probability
    half = len(scan) // 2
    assert p[0] < 1e-24
    assert p[half] < 1e-24
    np.testing.assert_allclose(p[1:half], p[half - 1:0:-1], atol=1e-10)


def test_identically_zero_scan_reports_no_zeros():
    scan = _scan().model_copy(update={"probability": np.zeros(720)})
    assert visibility(scan).v == 0.0
    assert count_zeros(scan) == 0


def test_scan_validation():
    with pytest.raises(AnalysisError):
        _scan(n=4)
    with pytest.raises(AnalysisError):
        _scan(plane=ScanPlane.FULL_SPHERE)
    with pytest.raises(AnalysisError):
        _scan(mode="diffuse")
    with pytest.raises(AnalysisError):
        count_zeros(_scan(n=16), tol=0.0)


def test_compare_scans_requires_same_sampling():
    with pytest.raises(AnalysisError):
        compare_scans(_scan(n=16), _scan(n=32))


def test_scans_are_deterministic():
    a, b = _scan(zeta=0.3 + 0.4j), _scan(zeta=0.3 + 0.4j)
    np.testing.assert_array_equal(a.probability, b.probability)
    assert a.provenance == b.provenance


def test_parallel_and_sequential_scans_agree_exactly(monkeypatch):
    monkeypatch.setattr(settings, "scan_chunk_size", 16)
    monkeypatch.setattr(settings, "max_workers", 4)
    parallel = _scan(zeta=0.5 - 0.2j, parallel=True)
    sequential = _scan(zeta=0.5 - 0.2j, parallel=False)
    np.testing.assert_array_equal(parallel.probability, sequential.probability)


def test_single_dipole_total_power():
    power = total_power(single_emitter(), DetectorSpec(), LOCAL, SCATTERING, build_sphere_grid(64, 128))
    assert power == pytest.approx(8 * math.pi / 3, abs=1e-10)


def test_pair_power_ratios_and_convergence():
    grid = build_sphere_grid(64, 128)
    glauber = total_power(PAIR, DetectorSpec(), LOCAL, SCATTERING, grid)
    enhanced = total_power(PAIR, DetectorSpec(zeta=1), LOCAL, SCATTERING, grid)
    assert enhanced / glauber == pytest.approx(4.0, rel=1e-12)

    fine = total_power(PAIR, DetectorSpec(), LOCAL, SCATTERING, build_sphere_grid(128, 256))
    assert abs(fine - glauber) < 1e-8


def test_coincident_pair_radiates_four_times_single():
    grid = build_sphere_grid(32, 64)
    single = total_power(single_emitter(), DetectorSpec(), LOCAL, SCATTERING, grid)
    merged = total_power(symmetric_pair(0.0), DetectorSpec(), LOCAL, SCATTERING, grid)
    assert merged == pytest.approx(4 * single, rel=1e-12)


def test_sphere_scan_carries_weights():
    grid = build_sphere_grid(8, 16)
    scan = scan_sphere(PAIR, DetectorSpec(), LOCAL, SCATTERING, grid)
    assert scan.plane == ScanPlane.FULL_SPHERE
    np.testing.assert_array_equal(scan.weights, grid.weights)
    with pytest.raises(AnalysisError):
        count_zeros(scan)


def test_relative_normalization_uses_glauber_maximum():
    reference = reference_maximum(PAIR, DetectorSpec(zeta=1), LOCAL, SCATTERING, ScanPlane.XY, 720)
    assert reference == pytest.approx(4.0)
    scan = normalize_scan(_scan(zeta=1), reference)
    assert scan.probability.max() == pytest.approx(4.0)
    assert scan.provenance.normalization == Normalization.RELATIVE
    # refinement follows the rescaled curve
    assert count_zeros(scan) == 12


def test_absorbed_modes_share_coherent_reference():
    for mode in (DetectionMode.ABSORBED_COHERENT, DetectionMode.ABSORBED_PARTICLE):
        reference = reference_maximum(PAIR, DetectorSpec(zeta=-1), LOCAL, mode, ScanPlane.XY, 360)
        assert reference == pytest.approx(2.0)


def test_zeta_sweep_reports_each_value():
    reports = zeta_sweep(PAIR, DetectorSpec(), LOCAL, SCATTERING, ScanPlane.XY, 360, [-0.5, 0.25j, 1.0])
    assert [r.zeta for r in reports] == [(-0.5, 0.0), (0.0, 0.25), (1.0, 0.0)]
    for report in reports:
        assert report.v == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [8, 16, 90])
def test_coarse_scans_still_resolve_every_zero(n):
    scan = _scan(n=n)
    assert count_zeros(scan) == 12
    assert visibility(scan).p_min < 1e-9 * visibility(scan).p_max


def test_refinement_grid_keeps_scan_samples():
    assert refinement_samples(_scan(n=16)) % 16 == 0
    assert refinement_samples(_scan(n=16)) >= 76
    assert refinement_samples(_scan(n=720)) == 720
    assert refinement_samples(_scan(config=single_emitter(), n=8)) == 8


@pytest.mark.parametrize("separation, zeros", [(1.0, 4), (2.2, 8), (3.0, 12)])
def test_xy_zero_count_is_even_and_follows_separation(separation, zeros):
    count = count_zeros(_scan(config=symmetric_pair(separation)))
    assert count == zeros
    assert count % 2 == 0


def test_xy_scan_mirror_symmetries():
    n = 720
    p = _scan(zeta=0.4 - 0.3j, n=n).probability
    i = np.arange(n)
    # phi -> -phi and phi -> pi - phi
    np.testing.assert_allclose(p, p[(n - i) % n], rtol=1e-9, atol=1e-14)
    np.testing.assert_allclose(p, p[(n // 2 - i) % n], rtol=1e-9, atol=1e-14)


def test_absorbed_coherent_is_half_of_scattering():
    deviation = compare_scans(_scan(zeta=0.5j, mode=DetectionMode.ABSORBED_COHERENT), _scan(zeta=0.5j))
    assert deviation.ratio_mean == pytest.approx(0.5, rel=1e-12)
    assert deviation.ratio_deviation < 1e-12
