"""
Level statistics models.

Ensemble specifications, unfolded spectra and sampled statistic curves.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.exceptions import DomainError
from core.models.spectrum import Spectrum


class StatisticKind(Enum):
    """Enumeration of sampled statistics."""

    SPACING = "P(s)"
    NUMBER_VARIANCE = "Sigma"
    RIGIDITY = "Delta3"
    SATURATED_RIGIDITY = "Delta3_inf"
    GLOBAL_VARIANCE = "Sigma_g"
    THEORY_NUMBER_VARIANCE = "theory-Sigma"
    THEORY_GLOBAL_VARIANCE = "theory-Sigma_g"


SIGMA_MIN = 0.05
SIGMA_MAX = 1.0


def smooth_staircase(coefficients: Tuple[float, float, float], energy):
    """Mean staircase c2 e + c1 sqrt(e) + c0."""
    c2, c1, c0 = coefficients
    return c2 * np.asarray(energy, dtype=float) + c1 * np.sqrt(energy) + c0


@dataclass(frozen=True)
class EnsembleSpec:
    """
    Normal-distribution ensemble over the aspect ratio.

    Attributes:
        center: Mean aspect ratio
        spread: Standard deviation (defaults to 1% of the center)
        samples: Number of members
        seed: PRNG seed
        levels_per_sample: Converged-level target per member
    """

    center: float
    spread: Optional[float] = None
    samples: int = 50
    seed: int = 0
    levels_per_sample: int = 300

    def __post_init__(self):
        """Validate ensemble after initialization."""
        if not SIGMA_MIN < self.center <= SIGMA_MAX:
            raise DomainError(f"Ensemble center {self.center} outside ({SIGMA_MIN}, {SIGMA_MAX}]")
        if self.spread is not None and not self.spread > 0:
            raise DomainError(f"Ensemble spread must be positive, got {self.spread}")
        if self.samples < 1:
            raise DomainError("Ensemble needs at least one sample")

    @property
    def width(self) -> float:
        return self.spread if self.spread is not None else 0.01 * self.center


@dataclass
class UnfoldedSpectrum:
    """
    Levels mapped through the smooth staircase c2*e + c1*sqrt(e) + c0.

    Attributes:
        raw: Source spectrum (None for synthetic input)
        coefficients: (c2, c1, c0)
        levels: Unfolded levels x_i
        weyl_ratio: Staircase slope over the Weyl slope (None without a shape)
    """

    raw: Optional[Spectrum]
    coefficients: Tuple[float, float, float]
    levels: np.ndarray
    weyl_ratio: Optional[float] = None

    @classmethod
    def from_levels(cls, levels) -> "UnfoldedSpectrum":
        """Wrap levels that are already unfolded."""
        return cls(raw=None, coefficients=(1.0, 0.0, 0.0), levels=np.asarray(levels, dtype=float))

    @property
    def spacings(self) -> np.ndarray:
        return np.diff(self.levels)

    @property
    def weyl_deviation(self) -> Optional[float]:
        return None if self.weyl_ratio is None else abs(self.weyl_ratio - 1.0)


@dataclass
class StatCurve:
    """
    Sampled statistic with ensemble standard errors.

    Attributes:
        statistic: Statistic identifier
        abscissa: Grid (spacing s, energy, or interval width)
        values: Ensemble means
        stderr: Standard errors of the means
        n_samples: Ensemble size
        meta: Fixed parameters of the curve (for example the energy of a Sigma(E) curve)
    """

    statistic: StatisticKind
    abscissa: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    n_samples: int
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate curve after initialization."""
        self.abscissa = np.asarray(self.abscissa, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        self.stderr = np.asarray(self.stderr, dtype=float)
        if not (self.abscissa.shape == self.values.shape == self.stderr.shape):
            raise ValueError("Curve arrays must share one shape")

    def rows(self):
        """CSV rows (abscissa, value, stderr, n_samples)."""
        for x, v, e in zip(self.abscissa, self.values, self.stderr):
            yield (float(x), float(v), float(e), self.n_samples)
