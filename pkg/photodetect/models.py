import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

TWO_PI = 2.0 * math.pi
UNIT_TOLERANCE = 1e-12


def _as_vec3(value: Any, name: str) -> np.ndarray:
    vec = np.asarray(value, dtype=complex)
    if vec.shape != (3,):
        raise ValueError(f"{name} must have exactly 3 components")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{name} must be finite")
    vec = vec.copy()
    vec.setflags(write=False)
    return vec


class SphereScheme(str, Enum):
    PRODUCT_GAUSS = "product-gauss"
    UNIFORM_AZIMUTH = "uniform-azimuth"

class FrameMode(str, Enum):
    LOCAL = "local"
    LAB = "lab"

class AbsorptionMode(str, Enum):
    COHERENT = "coherent"
    PARTICLE_LIKE = "particle_like"

class DetectionMode(str, Enum):
    SCATTERING = "scattering"
    ABSORBED_COHERENT = "absorbed-coherent"
    ABSORBED_PARTICLE = "absorbed-particle"

class ScanPlane(str, Enum):
    XZ = "xz"
    XY = "xy"
    FULL_SPHERE = "full-sphere"

class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"

class Normalization(str, Enum):
    RELATIVE = "relative"
    RAW = "raw"


# ---------------------------------------------------------------------------
# Geometry

class Direction(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi, description="Polar angle in radians")
    phi: float = Field(..., ge=0.0, lt=TWO_PI, description="Azimuthal angle in radians")

class SphereGrid(BaseModel):
    """Quadrature nodes over the unit sphere stored as flat arrays"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theta: np.ndarray = Field(..., description="Polar angle of every node")
    phi: np.ndarray = Field(..., description="Azimuthal angle of every node")
    weights: np.ndarray = Field(..., description="Quadrature weight of every node in steradians")
    scheme: SphereScheme = Field(..., description="Node construction scheme")
    n_theta: int = Field(..., ge=2)
    n_phi: int = Field(..., ge=4)

    def __len__(self) -> int:
        return int(self.weights.size)


# ---------------------------------------------------------------------------
# Fields

class Emitter(BaseModel):
    """One Hertzian dipole source"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    position: Tuple[float, float, float] = Field(..., description="Position in units of wavelength")
    moment: np.ndarray = Field(..., description="Complex dipole moment")
    phase: float = Field(default=0.0, description="Relative drive phase in radians")

    @field_validator("moment", mode="before")
    @classmethod
    def _check_moment(cls, value):
        vec = _as_vec3(value, "moment")
        if np.linalg.norm(vec) <= 0.0:
            raise ValueError("moment must be non-zero")
        return vec

class FieldConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    wavelength: float = Field(default=1.0, gt=0.0, description="Wavelength setting k = 2*pi/wavelength")
    emitters: List[Emitter] = Field(..., min_length=1, description="Ordered emitter list")

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

class FarFieldAmplitude(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    e_field: np.ndarray = Field(..., description="Transverse electric amplitude")
    b_field: np.ndarray = Field(..., description="Transverse magnetic amplitude (c = 1)")


# ---------------------------------------------------------------------------
# Detector

class DetectorSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u_e: np.ndarray = Field(default_factory=lambda: _as_vec3((0, 0, 1), "u_e"),
                            description="Electric sensitivity polarization")
    u_b: np.ndarray = Field(default_factory=lambda: _as_vec3((0, 1, 0), "u_b"),
                            description="Magnetic sensitivity polarization")
    zeta: complex = Field(default=0j, description="Magnetic/electric mixing parameter")
    sensitivity: float = Field(default=1.0, gt=0.0, description="Empirical detector sensitivity s")

    @field_validator("u_e", "u_b", mode="before")
    @classmethod
    def _check_unit(cls, value, info):
        vec = _as_vec3(value, info.field_name)
        norm = float(np.vdot(vec, vec).real)
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise ValueError(f"{info.field_name} must be a unit vector (norm^2 = {norm})")
        return vec

    @field_validator("zeta", mode="before")
    @classmethod
    def _coerce_zeta(cls, value):
        zeta = complex(value)
        if not (math.isfinite(zeta.real) and math.isfinite(zeta.imag)):
            raise ValueError("zeta must be finite")
        return zeta

    def with_zeta(self, zeta: complex) -> "DetectorSpec":
        return self.model_copy(update={"zeta": complex(zeta)})

class DetectorFrame(BaseModel):
    """Where the sensitivity vectors live: fixed in the lab or attached to the local basis"""
    model_config = ConfigDict(frozen=True)

    mode: FrameMode = Field(default=FrameMode.LOCAL)

    @classmethod
    def local(cls) -> "DetectorFrame":
        return cls(mode=FrameMode.LOCAL)

    @classmethod
    def lab(cls) -> "DetectorFrame":
        return cls(mode=FrameMode.LAB)

class PolarizabilityModel(BaseModel):
    """Polarizability given either as a callable or as tabulated samples"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    omega: float = Field(..., gt=0.0, description="Angular frequency of evaluation")
    alpha: Optional[Callable[[float], complex]] = Field(default=None)
    sample_omegas: Optional[np.ndarray] = Field(default=None)
    sample_alphas: Optional[np.ndarray] = Field(default=None)

    @model_validator(mode="after")
    def _check_source(self):
        tabulated = self.sample_omegas is not None or self.sample_alphas is not None
        if (self.alpha is None) == (not tabulated):
            raise ValueError("give either alpha or tabulated samples, not both")
        if tabulated:
            if self.sample_omegas is None or self.sample_alphas is None:
                raise ValueError("tabulated models need both omegas and alphas")
            if self.sample_omegas.shape != self.sample_alphas.shape or self.sample_omegas.ndim != 1:
                raise ValueError("tabulated omegas and alphas must be 1-D and equally long")
            if self.sample_omegas.size < 2 or np.any(np.diff(self.sample_omegas) <= 0):
                raise ValueError("tabulated omegas must be strictly increasing")
        return self


# ---------------------------------------------------------------------------
# Quantum oracle

class ModeSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_modes: int = Field(..., ge=1, le=4, description="One bosonic mode per emitter")
    cutoff: int = Field(default=1, ge=1, le=2, description="Maximum photons per mode")

    @property
    def dimension(self) -> int:
        return (self.cutoff + 1) ** self.n_modes

class QuantumState(BaseModel):
    """State vector in the occupation basis, mode 0 fastest"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: ModeSpace
    amplitudes: np.ndarray

    @model_validator(mode="after")
    def _check_dimension(self):
        if self.amplitudes.shape != (self.space.dimension,):
            raise ValueError(f"state needs {self.space.dimension} amplitudes")
        return self

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

class DetectionCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray = Field(..., description="Per-mode coefficient c_j")

    @property
    def n_modes(self) -> int:
        return int(self.values.size)


# ---------------------------------------------------------------------------
# Analysis

class ScanProvenance(BaseModel):
    config_hash: str
    plane: ScanPlane
    mode: DetectionMode
    frame: FrameMode
    zeta_re: float
    zeta_im: float
    sensitivity: float
    n_emitters: int
    wavelength: float
    n_samples: int
    parameterization: str
    normalization: Normalization = Normalization.RAW
    scale: float = 1.0

class AngularScan(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    plane: ScanPlane
    params: np.ndarray = Field(..., description="Scan parameter, strictly increasing")
    theta: np.ndarray
    phi: np.ndarray
    probability: np.ndarray
    weights: Optional[np.ndarray] = Field(default=None, description="Quadrature weights of full-sphere scans")
    provenance: ScanProvenance
    config: FieldConfig = Field(..., exclude=True)
    spec: DetectorSpec = Field(..., exclude=True)
    frame: DetectorFrame = Field(..., exclude=True)
    mode: DetectionMode

    @model_validator(mode="after")
    def _check_samples(self):
        n = self.params.size
        if not (self.theta.size == self.phi.size == self.probability.size == n):
            raise ValueError("scan arrays must have equal length")
        if n and np.any(self.probability < 0):
            raise ValueError("probabilities must be non-negative")
        if n > 1 and np.any(np.diff(self.params) <= 0):
            raise ValueError("scan parameter must be strictly increasing")
        return self

    def __len__(self) -> int:
        return int(self.params.size)

    def direction(self, index: int) -> Direction:
        return Direction(theta=float(self.theta[index]), phi=float(self.phi[index]))

class VisibilityReport(BaseModel):
    v: float = Field(..., ge=0.0, le=1.0, description="Fringe visibility")
    p_max: float
    p_min: float
    argmax: Direction
    argmin: Direction
    zeta: Optional[Tuple[float, float]] = Field(default=None, description="Mixing parameter for sweep rows")

class ScanDeviation(BaseModel):
    max_relative_deviation: float
    mean_relative_deviation: float
    ratio_mean: float = Field(..., description="Mean pointwise ratio a/b where b is non-negligible")
    ratio_deviation: float = Field(..., description="Largest relative departure of a/b from its mean")


# ---------------------------------------------------------------------------
# Run configuration (the JSON document accepted by the command line)

ComplexPair = Tuple[float, float]

class EmitterEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    position: Tuple[float, float, float] = Field(..., description="Position in units of wavelength")
    moment: Tuple[ComplexPair, ComplexPair, ComplexPair] = Field(..., description="Dipole moment as (re, im) pairs")
    phase: float = Field(default=0.0, description="Relative drive phase in radians")

class DetectorEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    zeta: ComplexPair = Field(default=(0.0, 0.0), description="Mixing parameter as (re, im)")
    frame: FrameMode = Field(default=FrameMode.LOCAL)
    u_e: Optional[Tuple[ComplexPair, ComplexPair, ComplexPair]] = Field(default=None, description="Lab-frame electric sensitivity")
    u_b: Optional[Tuple[ComplexPair, ComplexPair, ComplexPair]] = Field(default=None, description="Lab-frame magnetic sensitivity")
    sensitivity: float = Field(default=1.0, gt=0.0)

class ScanEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    plane: ScanPlane = Field(default=ScanPlane.XY)
    samples: int = Field(default=720, ge=8)
    mode: DetectionMode = Field(default=DetectionMode.SCATTERING)

class OutputEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    format: ExportFormat = Field(default=ExportFormat.CSV)
    path: Optional[str] = Field(default=None, description="Export file; defaults under settings.output_dir")
    normalization: Normalization = Field(default=Normalization.RELATIVE)

class RunConfig(BaseModel):
    """Validated run configuration

    Schema (JSON)::

        {
          "wavelength": 1.0,
          "emitters": [{"position": [1.5, 0, 0], "moment": [[0, 0], [0, 0], [1, 0]], "phase": 0.0}],
          "detector": {"zeta": [0, 0], "frame": "local", "u_e": null, "u_b": null, "sensitivity": 1.0},
          "scan": {"plane": "xy", "samples": 720, "mode": "scattering"},
          "output": {"format": "csv", "path": null, "normalization": "relative"}
        }
    """
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    wavelength: float = Field(default=1.0, gt=0.0)
    emitters: List[EmitterEntry] = Field(..., min_length=1)
    detector: DetectorEntry = Field(default_factory=DetectorEntry)
    scan: ScanEntry = Field(default_factory=ScanEntry)
    output: OutputEntry = Field(default_factory=OutputEntry)

class ScanRecord(BaseModel):
    param: float
    theta: float
    phi: float
    probability: float
    mode: str
    zeta_re: float
    zeta_im: float

class CommandResponse(BaseModel):
    success: bool = Field(..., description="Command success status")
    message: str = Field(..., description="Response message")
    data: Optional[Dict[str, Any]] = Field(None, description="Response data")
