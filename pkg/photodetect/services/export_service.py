import hashlib
import json
import logging
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd
from pydantic import ValidationError

from photodetect.config import settings
from photodetect.errors import ConfigError, ExportError
from photodetect.models import (
    AngularScan,
    DetectorFrame,
    DetectorSpec,
    Emitter,
    ExportFormat,
    FieldConfig,
    FrameMode,
    RunConfig,
    ScanRecord,
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["param", "theta", "phi", "probability", "mode", "zeta_re", "zeta_im"]
FLOAT_FORMAT = "%.11e"


def _field_path(error: ValidationError, prefix: str = "") -> Optional[str]:
    errors = error.errors()
    if not errors:
        return prefix or None
    loc = ".".join(str(part) for part in errors[0]["loc"])
    return ".".join(part for part in (prefix, loc) if part) or None


def _first_message(error: ValidationError) -> str:
    errors = error.errors()
    return errors[0]["msg"] if errors else str(error)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a JSON run configuration, filling defaults"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None
    return validate_config(data)


def validate_config(data) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    try:
        run = RunConfig.model_validate(data)
    except ValidationError as e:
        field = _field_path(e)
        raise ConfigError(f"{field}: {_first_message(e)}", field=field) from None
    # Schema-valid entries must also build domain objects (non-zero moments, unit lab vectors)
    build_field_config(run)
    build_detector(run)
    return run


def serialize_config(run: RunConfig) -> str:
    """Canonical JSON; parse(serialize(c)) == c"""
    return json.dumps(run.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def config_hash(run: RunConfig) -> str:
    return hashlib.sha256(serialize_config(run).encode("utf-8")).hexdigest()


def build_field_config(run: RunConfig) -> FieldConfig:
    emitters = []
    for i, entry in enumerate(run.emitters):
        try:
            emitters.append(Emitter(
                position=entry.position,
                moment=[complex(re, im) for re, im in entry.moment],
                phase=entry.phase,
            ))
        except ValidationError as e:
            field = _field_path(e, prefix=f"emitters.{i}")
            raise ConfigError(f"{field}: {_first_message(e)}", field=field) from None
    try:
        return FieldConfig(wavelength=run.wavelength, emitters=emitters)
    except ValidationError as e:
        field = _field_path(e)
        raise ConfigError(f"{field}: {_first_message(e)}", field=field) from None


def build_detector(run: RunConfig) -> Tuple[DetectorSpec, DetectorFrame]:
    entry = run.detector
    values = {
        "zeta": complex(*entry.zeta),
        "sensitivity": entry.sensitivity,
    }
    if entry.u_e is not None:
        values["u_e"] = [complex(re, im) for re, im in entry.u_e]
    if entry.u_b is not None:
        values["u_b"] = [complex(re, im) for re, im in entry.u_b]
    try:
        spec = DetectorSpec(**values)
    except ValidationError as e:
        field = _field_path(e, prefix="detector")
        raise ConfigError(f"{field}: {_first_message(e)}", field=field) from None
    frame = DetectorFrame.local() if entry.frame == FrameMode.LOCAL else DetectorFrame.lab()
    return spec, frame


# ---------------------------------------------------------------------------
# Export

def _fixed(value: float) -> float:
    """Round to the 12 significant digits written to disk"""
    return float(f"{value:.11e}")


def scan_records(scan: AngularScan) -> List[ScanRecord]:
    zeta = scan.spec.zeta
    return [
        ScanRecord(
            param=float(scan.params[i]),
            theta=float(scan.theta[i]),
            phi=float(scan.phi[i]),
            probability=float(scan.probability[i]),
            mode=scan.mode.value,
            zeta_re=zeta.real,
            zeta_im=zeta.imag,
        )
        for i in range(len(scan))
    ]


def scan_frame(scan: AngularScan) -> pd.DataFrame:
    zeta = scan.spec.zeta
    n = len(scan)
    return pd.DataFrame({
        "param": scan.params,
        "theta": scan.theta,
        "phi": scan.phi,
        "probability": scan.probability,
        "mode": [scan.mode.value] * n,
        "zeta_re": [zeta.real] * n,
        "zeta_im": [zeta.imag] * n,
    }, columns=CSV_COLUMNS)


def default_export_path(scan: AngularScan, fmt: ExportFormat) -> Path:
    return Path(settings.output_dir) / f"scan_{scan.plane.value}_{scan.mode.value}.{ExportFormat(fmt).value}"


def export_scan(scan: AngularScan, fmt: ExportFormat = ExportFormat.CSV, path: Optional[str] = None) -> Path:
    """Write a scan as CSV or JSON and return the file path.

    Floats carry 12 significant digits in scientific notation and lines end
    with a bare newline, so identical scans give byte-identical files.
    """
    fmt = ExportFormat(fmt)
    target = Path(path) if path else default_export_path(scan, fmt)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        if fmt == ExportFormat.CSV:
            scan_frame(scan).to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        else:
            payload = {
                "provenance": scan.provenance.model_dump(mode="json"),
                "records": [
                    {
                        key: (_fixed(value) if isinstance(value, float) else value)
                        for key, value in record.model_dump().items()
                    }
                    for record in scan_records(scan)
                ],
            }
            with open(target, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    except OSError as e:
        raise ExportError(f"cannot write {target}: {e}") from None

    logger.info(f"Wrote {len(scan)} {fmt.value.upper()} records to {target}")
    return target
