"""
Run configuration for the billiards CLI.

Values come from ``configs/default.yaml`` (or ``BILLIARDS_CONFIG``), then the
environment, then command-line flags; later sources win.
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.exceptions import ConfigError
from core.models import (
    BilliardShape,
    EnsembleSpec,
    SymmetryClass,
    ellipse_from_sigma,
    rectangle,
)
from core.utils import generate_hash, merge_dicts

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
DEFAULT_CONFIG_PATH = "configs/default.yaml"
CONFIG_ENV = "BILLIARDS_CONFIG"
CACHE_ENV = "BILLIARDS_CACHE_DIR"
LOCATION_FIELDS = {"output_dir", "cache_dir"}
GOLDEN_RATIO = (5 ** 0.5 + 1.0) / 2.0


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class BilliardConfig(_Section):
    """Billiard selection."""

    kind: Literal["ellipse", "circle", "rectangle"] = Field("ellipse", description="Billiard kind")
    sigma: float = Field(0.5, gt=0, le=1, description="Ellipse aspect ratio b/a (a*b = 1)")
    sides: Tuple[float, float] = Field((1.0, GOLDEN_RATIO), description="Rectangle side lengths")
    classes: List[str] = Field(default_factory=lambda: ["odd-odd"], description="Symmetry classes")
    levels: int = Field(300, ge=1, description="Converged levels per class")
    merged: bool = Field(False, description="Merge all four classes")

    @field_validator("sides")
    @classmethod
    def positive_sides(cls, v):
        if min(v) <= 0:
            raise ValueError(f"rectangle sides must be positive, got {v}")
        return v

    @field_validator("classes")
    @classmethod
    def known_classes(cls, v):
        return [SymmetryClass.parse(label).label for label in v]

    def shape(self) -> BilliardShape:
        if self.kind == "rectangle":
            return rectangle(*self.sides)
        return ellipse_from_sigma(1.0 if self.kind == "circle" else self.sigma)

    def symmetry_classes(self) -> List[SymmetryClass]:
        if self.merged:
            return list(SymmetryClass.all())
        return [SymmetryClass.parse(label) for label in self.classes]


class EnsembleConfig(_Section):
    """Aspect-ratio ensemble."""

    billiard: Literal["ellipse", "rectangle"] = "ellipse"
    center: float = Field(0.5, gt=0, le=1)
    spread: Optional[float] = Field(None, gt=0)
    samples: int = Field(50, ge=1)
    levels_per_sample: int = Field(300, ge=1)
    symmetry: str = "odd-odd"

    @field_validator("symmetry")
    @classmethod
    def known_symmetry(cls, v):
        return SymmetryClass.parse(v).label

    def spec(self, seed: int) -> EnsembleSpec:
        return EnsembleSpec(
            center=self.center,
            spread=self.spread,
            samples=self.samples,
            seed=seed,
            levels_per_sample=self.levels_per_sample,
        )


class OrbitConfig(_Section):
    """Orbit catalog limits."""

    l_max: float = Field(10.0, gt=0)
    max_families: Optional[int] = Field(200, ge=1)
    n_max: int = Field(60, ge=2)
    repetitions: bool = True


class FourierConfig(_Section):
    """Length-spectrum window and detection."""

    levels: int = Field(800, ge=1, description="Converged levels (per class for ellipses)")
    k_min: Optional[float] = Field(None, ge=0)
    k_max: Optional[float] = Field(None, gt=0)
    l_max: float = Field(12.0, gt=0)
    dl: Optional[float] = Field(None, gt=0)
    taper: bool = False
    min_height: float = Field(0.05, gt=0, lt=1)
    reference: Optional[str] = Field(None, description="Normalizing family label")

    @model_validator(mode="after")
    def ordered_window(self):
        if self.k_min is not None and self.k_max is not None and self.k_max <= self.k_min:
            raise ValueError(f"k_max must exceed k_min, got ({self.k_min}, {self.k_max})")
        return self

    def window(self, k_lo: float, k_hi: float) -> Tuple[float, float]:
        """Momentum window; unset ends fall back to the available range."""
        return (
            k_lo if self.k_min is None else self.k_min,
            k_hi if self.k_max is None else self.k_max,
        )


class StatisticsConfig(_Section):
    """Statistic grids.

    Energies left unset are placed inside the range every sample converged,
    at ``epsilon_fraction`` for the Sigma/Delta3 curves and over
    ``epsilon_range`` for the saturation and global-variance curves.
    """

    bins: int = Field(50, ge=1)
    s_max: float = Field(5.0, gt=0)
    epsilon: Optional[float] = Field(None, gt=0)
    epsilon_fraction: float = Field(0.6, gt=0, lt=1)
    epsilon_range: Tuple[float, float] = (0.2, 0.9)
    epsilon_points: int = Field(24, ge=2)
    width_max: Optional[float] = Field(None, gt=0)
    width_points: int = Field(80, ge=2)
    poisson: bool = Field(False, description="Run the synthetic Poisson baseline")
    poisson_samples: int = Field(500, ge=2)

    @field_validator("epsilon_range")
    @classmethod
    def ordered_range(cls, v):
        if not 0 < v[0] < v[1] <= 1:
            raise ValueError(f"epsilon_range must satisfy 0 < lo < hi <= 1, got {v}")
        return v


class RunConfig(_Section):
    """Complete configuration of one CLI run."""

    billiard: BilliardConfig = Field(default_factory=BilliardConfig)
    ensemble: EnsembleConfig = Field(default_factory=EnsembleConfig)
    orbits: OrbitConfig = Field(default_factory=OrbitConfig)
    fourier: FourierConfig = Field(default_factory=FourierConfig)
    statistics: StatisticsConfig = Field(default_factory=StatisticsConfig)
    engines: Dict[str, Dict[str, Any]] = Field(default_factory=dict, description="Engine overrides")
    output_dir: str = "output"
    cache_dir: Optional[str] = None
    seed: int = 0

    def provenance(self) -> Dict[str, Any]:
        """Canonical, JSON-ready view of the configuration.

        File locations are left out, so a run written elsewhere hashes the same.
        """
        return self.model_dump(mode="json", exclude=LOCATION_FIELDS)

    @property
    def config_hash(self) -> str:
        return generate_hash(self.provenance())


def read_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"Cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping, got {type(data).__name__}")
    return data


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Build a RunConfig from file, environment and flag overrides.

    Args:
        path: Config file; defaults to ``BILLIARDS_CONFIG`` or configs/default.yaml
        overrides: Nested values from command-line flags (None entries ignored)

    Returns:
        Validated RunConfig (raises pydantic ``ValidationError`` when invalid)
    """
    explicit = path or os.getenv(CONFIG_ENV)
    config_path = Path(explicit or DEFAULT_CONFIG_PATH)
    data: Dict[str, Any] = {}
    if config_path.exists():
        data = read_yaml(config_path)
        logger.debug(f"Loaded config from {config_path}")
    elif explicit:
        raise ConfigError(f"Config file not found: {config_path}")

    cache_dir = os.getenv(CACHE_ENV)
    if cache_dir:
        data["cache_dir"] = cache_dir
    data = merge_dicts(data, overrides or {})
    return RunConfig.model_validate(data)
