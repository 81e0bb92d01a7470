import argparse
import logging

import numpy as np

from photodetect.commands.common import add_run_arguments, load_run_config
from photodetect.errors import ConfigError
from photodetect.models import CommandResponse
from photodetect.services.analysis_service import visibility
from photodetect.services.scan_service import ScanService

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    scan_parser = subparsers.add_parser("scan", help="sample a plane and export the detection probability")
    add_run_arguments(scan_parser)
    scan_parser.set_defaults(handler=run_scan)

    visibility_parser = subparsers.add_parser("visibility", help="fringe visibility and zero count of a plane scan")
    add_run_arguments(visibility_parser)
    visibility_parser.set_defaults(handler=run_visibility)

    sweep_parser = subparsers.add_parser("sweep", help="visibility for a range of real zeta values")
    add_run_arguments(sweep_parser)
    sweep_parser.add_argument("--zeta-min", type=float, default=-1.0)
    sweep_parser.add_argument("--zeta-max", type=float, default=1.0)
    sweep_parser.add_argument("--steps", type=int, default=9)
    sweep_parser.set_defaults(handler=run_sweep)


def run_scan(args: argparse.Namespace) -> CommandResponse:
    service = ScanService(load_run_config(args))
    scan = service.scan()
    path = service.export(scan)
    data = {"path": str(path), "format": service.run.output.format.value, **service.summary(scan)}
    return CommandResponse(success=True, message=f"Wrote {len(scan)} records", data=data)


def run_visibility(args: argparse.Namespace) -> CommandResponse:
    service = ScanService(load_run_config(args))
    scan = service.scan()
    report = visibility(scan)
    data = {
        **service.summary(scan, report),
        "argmax": report.argmax.model_dump(),
        "argmin": report.argmin.model_dump(),
    }
    return CommandResponse(success=True, message=f"Visibility {report.v:.6f}", data=data)


def run_sweep(args: argparse.Namespace) -> CommandResponse:
    if args.steps < 1:
        raise ConfigError("--steps must be at least 1", field="steps")
    service = ScanService(load_run_config(args))
    reports = service.sweep(np.linspace(args.zeta_min, args.zeta_max, args.steps))
    rows = [
        {"zeta": list(report.zeta), "visibility": report.v, "p_max": report.p_max, "p_min": report.p_min}
        for report in reports
    ]
    return CommandResponse(success=True, message=f"Swept {len(rows)} zeta values", data={"rows": rows})
