import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from photodetect.models import (
    AngularScan,
    DetectionMode,
    ExportFormat,
    Normalization,
    RunConfig,
    VisibilityReport,
)
from photodetect.services.analysis_service import (
    count_zeros,
    normalize_scan,
    reference_maximum,
    scan_plane,
    total_power,
    visibility,
    zeta_sweep,
)
from photodetect.services.export_service import build_detector, build_field_config, config_hash, export_scan
from photodetect.services.geometry_service import build_sphere_grid

logger = logging.getLogger(__name__)


class ScanService:
    """Scans, summaries, sweeps and power for one validated run configuration"""

    def __init__(self, run: RunConfig):
        self.run = run
        self.config = build_field_config(run)
        self.spec, self.frame = build_detector(run)
        self.mode = DetectionMode(run.scan.mode)
        self.plane = run.scan.plane
        self.samples = run.scan.samples
        self._hash: Optional[str] = None

    @property
    def config_hash(self) -> str:
        if self._hash is None:
            self._hash = config_hash(self.run)
        return self._hash

    def scan(self) -> AngularScan:
        """Plane scan in the configured normalization"""
        scan = scan_plane(self.config, self.spec, self.frame, self.mode, self.plane, self.samples)
        if self.run.output.normalization == Normalization.RELATIVE:
            reference = reference_maximum(self.config, self.spec, self.frame, self.mode, self.plane, self.samples)
            scan = normalize_scan(scan, reference)
        return scan

    def summary(self, scan: AngularScan, report: Optional[VisibilityReport] = None) -> Dict:
        report = report or visibility(scan)
        return {
            "plane": scan.plane.value,
            "mode": scan.mode.value,
            "zeta": [scan.spec.zeta.real, scan.spec.zeta.imag],
            "samples": len(scan),
            "normalization": scan.provenance.normalization.value,
            "visibility": report.v,
            "zeros": count_zeros(scan),
            "p_max": report.p_max,
            "p_min": report.p_min,
            "config_hash": self.config_hash,
        }

    def sweep(self, zetas: Sequence[complex]) -> List[VisibilityReport]:
        return zeta_sweep(self.config, self.spec, self.frame, self.mode, self.plane, self.samples, zetas)

    def total_power(self, n_theta: int, n_phi: int) -> float:
        grid = build_sphere_grid(n_theta, n_phi)
        power = total_power(self.config, self.spec, self.frame, self.mode, grid)
        logger.info(f"Total power on {n_theta}x{n_phi} grid: {power:.15g}")
        return power

    def export(self, scan: AngularScan, path: Optional[str] = None,
               fmt: Optional[ExportFormat] = None) -> Path:
        return export_scan(scan, fmt or self.run.output.format, path or self.run.output.path)
