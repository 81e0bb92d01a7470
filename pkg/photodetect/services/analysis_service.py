import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from photodetect.config import settings
from photodetect.errors import AnalysisError
from photodetect.models import (
    AngularScan,
    DetectionMode,
    DetectorFrame,
    DetectorSpec,
    Direction,
    FieldConfig,
    Normalization,
    ScanDeviation,
    ScanPlane,
    ScanProvenance,
    SphereGrid,
    VisibilityReport,
)
from photodetect.services.detector_service import probability_arrays
from photodetect.services.field_service import fingerprint
from photodetect.services.geometry_service import integrate

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MIN_SCAN_SAMPLES = 8
DEFAULT_ZERO_TOLERANCE = 1e-9
# Sampled minima deeper than this fraction of the maximum are refined
REFINE_THRESHOLD = 0.25
# Refinement grid points per 2*pi of relative emitter phase
SAMPLES_PER_FRINGE = 4

PARAMETERIZATIONS = {
    ScanPlane.XZ: "t in [0, 2pi): t <= pi -> (theta=t, phi=0); t > pi -> (theta=2pi-t, phi=pi)",
    ScanPlane.XY: "t in [0, 2pi): (theta=pi/2, phi=t)",
    ScanPlane.FULL_SPHERE: "t = quadrature node index, theta ascending then phi ascending",
}


def plane_angles(plane: ScanPlane, params) -> Tuple[np.ndarray, np.ndarray]:
    """Map the scan parameter of a closed plane scan onto (theta, phi)"""
    t = np.mod(np.asarray(params, dtype=float), TWO_PI)
    if plane == ScanPlane.XY:
        return np.full_like(t, 0.5 * math.pi), t
    if plane == ScanPlane.XZ:
        upper = t <= math.pi
        theta = np.where(upper, t, TWO_PI - t)
        phi = np.where(upper, 0.0, math.pi)
        return theta, phi
    raise AnalysisError(f"unknown scan plane: {plane!r}")


def evaluate_directions(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame,
                        mode: DetectionMode, theta: np.ndarray, phi: np.ndarray,
                        parallel: Optional[bool] = None) -> np.ndarray:
    """Probability at every direction.

    Directions are always split into chunks of ``settings.scan_chunk_size``
    so the sequential and threaded paths perform identical arithmetic.
    """
    if parallel is None:
        parallel = settings.parallel_scans
    chunk = max(1, settings.scan_chunk_size)
    bounds = [(start, min(start + chunk, theta.size)) for start in range(0, theta.size, chunk)]

    def run(bound: Tuple[int, int]) -> np.ndarray:
        lo, hi = bound
        return probability_arrays(config, spec, frame, mode, theta[lo:hi], phi[lo:hi])

    if parallel and settings.max_workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=settings.max_workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(bound) for bound in bounds]
    logger.debug(f"Evaluated {theta.size} directions in {len(bounds)} chunks (parallel={parallel})")
    return np.concatenate(parts) if parts else np.zeros(0)


def _provenance(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
                plane: ScanPlane, n_samples: int) -> ScanProvenance:
    return ScanProvenance(
        config_hash=fingerprint(config),
        plane=plane,
        mode=mode,
        frame=frame.mode,
        zeta_re=spec.zeta.real,
        zeta_im=spec.zeta.imag,
        sensitivity=spec.sensitivity,
        n_emitters=len(config.emitters),
        wavelength=config.wavelength,
        n_samples=n_samples,
        parameterization=PARAMETERIZATIONS[plane],
    )


def scan_plane(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
               plane: ScanPlane, n_samples: int, parallel: Optional[bool] = None) -> AngularScan:
    try:
        mode = DetectionMode(mode)
        plane = ScanPlane(plane)
    except ValueError as e:
        raise AnalysisError(f"invalid scan request: {e}") from None
    if plane == ScanPlane.FULL_SPHERE:
        raise AnalysisError("full-sphere scans take a quadrature grid; use scan_sphere")
    if n_samples < MIN_SCAN_SAMPLES:
        raise AnalysisError(f"a plane scan needs at least {MIN_SCAN_SAMPLES} samples, got {n_samples}")

    params = TWO_PI * np.arange(n_samples) / n_samples
    theta, phi = plane_angles(plane, params)
    probability = evaluate_directions(config, spec, frame, mode, theta, phi, parallel=parallel)

    logger.info(f"Scanned {plane.value} plane ({n_samples} samples, mode={mode.value}, zeta={spec.zeta})")
    return AngularScan(
        plane=plane,
        params=params,
        theta=theta,
        phi=phi,
        probability=probability,
        provenance=_provenance(config, spec, frame, mode, plane, n_samples),
        config=config,
        spec=spec,
        frame=frame,
        mode=mode,
    )


def scan_sphere(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
                grid: SphereGrid, parallel: Optional[bool] = None) -> AngularScan:
    mode = DetectionMode(mode)
    probability = evaluate_directions(config, spec, frame, mode, grid.theta, grid.phi, parallel=parallel)
    return AngularScan(
        plane=ScanPlane.FULL_SPHERE,
        params=np.arange(len(grid), dtype=float),
        theta=grid.theta,
        phi=grid.phi,
        probability=probability,
        weights=grid.weights,
        provenance=_provenance(config, spec, frame, mode, ScanPlane.FULL_SPHERE, len(grid)),
        config=config,
        spec=spec,
        frame=frame,
        mode=mode,
    )


def total_power(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
                grid: SphereGrid) -> float:
    """Quadrature of the detection probability over the whole sphere"""
    scan = scan_sphere(config, spec, frame, mode, grid)
    return integrate(grid, scan.probability)


# ---------------------------------------------------------------------------
# Minimum refinement

def _probability_at(scan: AngularScan, t: float) -> float:
    theta, phi = plane_angles(scan.plane, np.array([t]))
    value = probability_arrays(scan.config, scan.spec, scan.frame, scan.mode, theta, phi)
    return float(value[0]) * scan.provenance.scale


def refinement_samples(scan: AngularScan) -> int:
    """Samples needed so every interference fringe of the array spans several points.

    With every emitter within r wavelengths of the origin, the relative phase
    of two emitters changes by at most 4*pi*r per radian of scan, i.e. 4*pi*r
    fringes over the closed scan. Returns a multiple of the scan length so the
    scan samples are kept.
    """
    n = len(scan)
    reach = max(float(np.linalg.norm(e.position)) for e in scan.config.emitters)
    needed = max(MIN_SCAN_SAMPLES, math.ceil(SAMPLES_PER_FRINGE * 2.0 * TWO_PI * reach))
    return n * math.ceil(needed / n)


def _dense_profile(scan: AngularScan) -> Tuple[np.ndarray, np.ndarray]:
    """(params, probability) on the refinement grid, in the scan's units"""
    n_dense = refinement_samples(scan)
    if n_dense == len(scan):
        return scan.params, scan.probability
    logger.debug(f"Oversampling {len(scan)}-sample {scan.plane.value} scan to {n_dense} for minimum search")
    params = TWO_PI * np.arange(n_dense) / n_dense
    theta, phi = plane_angles(scan.plane, params)
    probability = probability_arrays(scan.config, scan.spec, scan.frame, scan.mode, theta, phi)
    return params, probability * scan.provenance.scale


def _refined_minima(scan: AngularScan, include_global: bool = False) -> Tuple[List[Tuple[float, float]], float, float]:
    """(t, value) of local minima after bounded minimisation, with the bracket width and maximum used.

    Plane scans are closed, so neighbours wrap around. Coarse scans are
    resampled first (see refinement_samples). Only minima below
    REFINE_THRESHOLD of the maximum are refined, plus the global sampled
    minimum when ``include_global`` is set.
    """
    params, p = _dense_profile(scan)
    n = p.size
    h = TWO_PI / n
    p_max = float(p.max())
    if p_max <= 0.0:
        return [], h, p_max

    previous = np.roll(p, 1)
    following = np.roll(p, -1)
    candidates = np.flatnonzero((p < previous) & (p <= following) & (p <= REFINE_THRESHOLD * p_max))
    if include_global:
        candidates = np.union1d(candidates, [int(np.argmin(p))])

    minima = []
    for i in candidates:
        t0 = float(params[i])
        result = minimize_scalar(
            lambda t: _probability_at(scan, t),
            bounds=(t0 - h, t0 + h),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if result.fun < p[i]:
            minima.append((float(np.mod(result.x, TWO_PI)), float(max(result.fun, 0.0))))
        else:
            minima.append((t0, float(p[i])))
    return minima, h, p_max


def visibility(scan: AngularScan) -> VisibilityReport:
    """(p_max - p_min) / (p_max + p_min), with the minimum refined between samples"""
    if len(scan) == 0:
        raise AnalysisError("visibility of an empty scan")

    p = scan.probability
    i_max = int(np.argmax(p))
    i_min = int(np.argmin(p))
    p_max = float(p[i_max])
    p_min = float(p[i_min])
    argmin = scan.direction(i_min)

    if scan.plane != ScanPlane.FULL_SPHERE:
        minima, _, _ = _refined_minima(scan, include_global=True)
        for t, value in minima:
            if value < p_min:
                p_min = value
                theta, phi = plane_angles(scan.plane, np.array([t]))
                argmin = Direction(theta=float(theta[0]), phi=float(phi[0]))

    if p_max + p_min <= 0.0:
        logger.warning("Visibility requested for an identically zero scan")
        v = 0.0
    else:
        v = (p_max - p_min) / (p_max + p_min)
    return VisibilityReport(
        v=min(max(v, 0.0), 1.0),
        p_max=p_max,
        p_min=p_min,
        argmax=scan.direction(i_max),
        argmin=argmin,
    )


def count_zeros(scan: AngularScan, tol: float = DEFAULT_ZERO_TOLERANCE) -> int:
    """Number of interference zeros: refined minima below tol * p_max, merged within one bracket width"""
    if tol <= 0:
        raise AnalysisError(f"zero tolerance must be positive, got {tol}")
    if scan.plane == ScanPlane.FULL_SPHERE:
        raise AnalysisError("zero counting needs a closed plane scan")
    if len(scan) == 0:
        return 0

    minima, h, p_max = _refined_minima(scan)
    zeros = sorted(t for t, value in minima if value < tol * p_max)
    if not zeros:
        return 0

    merged = [zeros[0]]
    for t in zeros[1:]:
        if t - merged[-1] > h:
            merged.append(t)
    # closed scan: first and last may be the same zero seen across t = 0
    if len(merged) > 1 and (merged[0] + TWO_PI - merged[-1]) <= h:
        merged.pop()
    return len(merged)


# ---------------------------------------------------------------------------
# Comparison, normalisation and sweeps

def compare_scans(a: AngularScan, b: AngularScan) -> ScanDeviation:
    if a.plane != b.plane or len(a) != len(b) or not np.array_equal(a.params, b.params):
        raise AnalysisError("scans are not sampled identically")

    pa, pb = a.probability, b.probability
    scale = np.maximum(np.abs(pa), np.abs(pb))
    relative = np.divide(np.abs(pa - pb), scale, out=np.zeros_like(pa), where=scale > 0)

    significant = pb > 1e-12 * float(pb.max()) if pb.size and pb.max() > 0 else np.zeros(pb.shape, dtype=bool)
    if np.any(significant):
        ratios = pa[significant] / pb[significant]
        ratio_mean = float(ratios.mean())
        ratio_deviation = float(np.max(np.abs(ratios - ratio_mean)) / abs(ratio_mean)) if ratio_mean else 0.0
    else:
        ratio_mean = 0.0
        ratio_deviation = 0.0

    return ScanDeviation(
        max_relative_deviation=float(relative.max()) if relative.size else 0.0,
        mean_relative_deviation=float(relative.mean()) if relative.size else 0.0,
        ratio_mean=ratio_mean,
        ratio_deviation=ratio_deviation,
    )


def reference_maximum(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
                      plane: ScanPlane, n_samples: int) -> float:
    """Maximum of the zeta = 0 curve matching a scan (Glauber detector)"""
    mode = DetectionMode(mode)
    reference_mode = DetectionMode.SCATTERING if mode == DetectionMode.SCATTERING else DetectionMode.ABSORBED_COHERENT
    reference = scan_plane(config, spec.with_zeta(0j), frame, reference_mode, plane, n_samples)
    return float(reference.probability.max())


def normalize_scan(scan: AngularScan, reference_max: float) -> AngularScan:
    if reference_max <= 0.0:
        logger.warning("Reference maximum is zero; keeping raw units")
        return scan
    factor = 1.0 / reference_max
    provenance = scan.provenance.model_copy(
        update={"normalization": Normalization.RELATIVE, "scale": scan.provenance.scale * factor}
    )
    return scan.model_copy(update={"probability": scan.probability * factor, "provenance": provenance})


def zeta_sweep(config: FieldConfig, spec: DetectorSpec, frame: DetectorFrame, mode: DetectionMode,
               plane: ScanPlane, n_samples: int, zetas: Sequence[complex]) -> List[VisibilityReport]:
    reports = []
    for zeta in zetas:
        scan = scan_plane(config, spec.with_zeta(zeta), frame, mode, plane, n_samples)
        report = visibility(scan)
        z = complex(zeta)
        reports.append(report.model_copy(update={"zeta": (z.real, z.imag)}))
    logger.info(f"Swept {len(reports)} zeta values on the {ScanPlane(plane).value} plane")
    return reports
