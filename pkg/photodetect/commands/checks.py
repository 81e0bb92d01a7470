import argparse
import logging
import math

from photodetect.commands.common import add_run_arguments, load_run_config
from photodetect.config import settings
from photodetect.models import CommandResponse
from photodetect.services.geometry_service import build_sphere_grid
from photodetect.services.preset_service import list_presets
from photodetect.services.quantum_service import QuantumOracle, random_zetas
from photodetect.services.scan_service import ScanService

logger = logging.getLogger(__name__)

POWER_CONVERGENCE_TOLERANCE = 1e-8
SINGLE_DIPOLE_POWER = 8.0 * math.pi / 3.0


def register(subparsers) -> None:
    quantum_parser = subparsers.add_parser("quantum-check", help="compare classical and Fock-space detection")
    add_run_arguments(quantum_parser)
    quantum_parser.set_defaults(handler=run_quantum_check)

    power_parser = subparsers.add_parser("power", help="total detected power at two grid resolutions")
    add_run_arguments(power_parser)
    power_parser.set_defaults(handler=run_power)

    presets_parser = subparsers.add_parser("presets", help="list the built-in presets")
    presets_parser.set_defaults(handler=run_presets)


def run_quantum_check(args: argparse.Namespace) -> CommandResponse:
    service = ScanService(load_run_config(args))
    spec, frame = service.spec, service.frame

    oracle = QuantumOracle(service.config)
    grid = build_sphere_grid(settings.oracle_grid_theta, settings.oracle_grid_phi)
    zetas = [spec.zeta] + random_zetas(settings.oracle_random_zetas, settings.oracle_seed)
    result = oracle.verify(spec, frame, grid, zetas, tolerance=settings.check_tolerance)

    verdict = "pass" if result["passed"] else "fail"
    return CommandResponse(
        success=result["passed"],
        message=f"Quantum-classical check {verdict}: max deviation {result['max_deviation']:.3e}",
        data=result,
    )


def run_power(args: argparse.Namespace) -> CommandResponse:
    service = ScanService(load_run_config(args))

    rows = []
    for scale in (1, 2):
        n_theta = settings.power_grid_theta * scale
        n_phi = settings.power_grid_phi * scale
        rows.append({"n_theta": n_theta, "n_phi": n_phi, "total_power": service.total_power(n_theta, n_phi)})

    difference = abs(rows[1]["total_power"] - rows[0]["total_power"])
    converged = difference < POWER_CONVERGENCE_TOLERANCE
    return CommandResponse(
        success=converged,
        message=f"Total power {rows[1]['total_power']:.12g} (grid change {difference:.3e})",
        data={
            "mode": service.mode.value,
            "grids": rows,
            "difference": difference,
            "converged": converged,
            "single_dipole_reference": SINGLE_DIPOLE_POWER,
        },
    )


def run_presets(args: argparse.Namespace) -> CommandResponse:
    presets = list_presets()
    return CommandResponse(success=True, message=f"{len(presets)} presets", data={"presets": presets})
