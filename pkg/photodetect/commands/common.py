import argparse
import logging
from pathlib import Path
from typing import Tuple

from photodetect.errors import ConfigError
from photodetect.models import DetectionMode, ExportFormat, FrameMode, Normalization, RunConfig, ScanPlane
from photodetect.services.export_service import parse_config, validate_config
from photodetect.services.preset_service import preset_config

logger = logging.getLogger(__name__)


def parse_zeta(text: str) -> Tuple[float, float]:
    """'RE' or 'RE,IM'"""
    parts = text.split(",")
    if len(parts) > 2:
        raise argparse.ArgumentTypeError(f"zeta must be RE or RE,IM, got {text!r}")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"zeta must be numeric, got {text!r}") from None
    return re, im


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", metavar="PATH", help="JSON run configuration")
    source.add_argument("--preset", metavar="NAME", help="named preset (see the presets command)")
    parser.add_argument("--separation", type=float, help="pair separation in wavelengths (pair preset)")
    parser.add_argument("--zeta", type=parse_zeta, metavar="RE[,IM]",
                        help="mixing parameter; use --zeta=-1,0.5 for a negative real part with an imaginary part")
    parser.add_argument("--frame", choices=[m.value for m in FrameMode])
    parser.add_argument("--mode", choices=[m.value for m in DetectionMode])
    parser.add_argument("--plane", choices=[ScanPlane.XZ.value, ScanPlane.XY.value])
    parser.add_argument("--samples", type=int)
    parser.add_argument("--out", metavar="PATH")
    parser.add_argument("--format", choices=[f.value for f in ExportFormat])
    parser.add_argument("--normalization", choices=[n.value for n in Normalization])


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Config file or preset, then command-line overrides, validated as one document"""
    if getattr(args, "config", None):
        if args.separation is not None:
            raise ConfigError("--separation only applies to presets", field="separation")
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}", field="config") from None
        run = parse_config(text)
    elif getattr(args, "preset", None):
        run = preset_config(args.preset, args.separation)
    else:
        raise ConfigError("give --config PATH or --preset NAME", field="config")

    data = run.model_dump(mode="json")
    overrides = {
        ("detector", "zeta"): list(args.zeta) if args.zeta is not None else None,
        ("detector", "frame"): args.frame,
        ("scan", "mode"): args.mode,
        ("scan", "plane"): args.plane,
        ("scan", "samples"): args.samples,
        ("output", "path"): args.out,
        ("output", "format"): args.format,
        ("output", "normalization"): args.normalization,
    }
    for (section, key), value in overrides.items():
        if value is not None:
            data[section][key] = value
    run = validate_config(data)
    logger.debug(f"Run configuration: {run.model_dump(mode='json')}")
    return run
