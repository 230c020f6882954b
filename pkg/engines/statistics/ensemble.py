"""
Ensembles of billiard spectra, unfolding and synthetic baselines.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np

from core.exceptions import ContractViolation, DomainError, InsufficientLevelsError
from core.models import (
    BilliardShape,
    EnsembleSpec,
    Parity,
    ShapeKind,
    Spectrum,
    SymmetryClass,
    UnfoldedSpectrum,
    area,
    perimeter,
    smooth_staircase,
)
from core.models.statistics import SIGMA_MAX, SIGMA_MIN

logger = logging.getLogger(__name__)

MIN_UNFOLD_LEVELS = 100
WEYL_SLOPE_TOL = 0.02

LevelSource = Union[Spectrum, np.ndarray, Sequence[float]]


@dataclass
class Ensemble:
    """
    Spectra of one billiard kind over sampled aspect ratios.

    Attributes:
        spec: Sampling specification
        billiard: "ellipse" or "rectangle"
        sigmas: Sampled aspect ratios, in draw order
        spectra: One spectrum per aspect ratio
    """

    spec: EnsembleSpec
    billiard: str
    sigmas: np.ndarray
    spectra: List[Spectrum] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.spectra)


def levels_of(sample: LevelSource) -> np.ndarray:
    """Converged energies of a spectrum, or the array itself."""
    if isinstance(sample, Spectrum):
        return sample.converged
    return np.asarray(sample, dtype=float)


def sample_ensemble(spec: EnsembleSpec) -> np.ndarray:
    """Aspect ratios drawn from Normal(center, width), re-drawn outside (0.05, 1].

    Draws happen in fixed-size rounds from ``numpy.random.default_rng(seed)``
    and accepted values keep their draw order, so a seed fixes the sequence.
    """
    rng = np.random.default_rng(spec.seed)
    accepted: List[float] = []
    while len(accepted) < spec.samples:
        draws = rng.normal(spec.center, spec.width, size=spec.samples)
        accepted.extend(float(s) for s in draws if SIGMA_MIN < s <= SIGMA_MAX)
    return np.asarray(accepted[: spec.samples])


def weyl_count(shape: BilliardShape, energy, symmetry: Optional[SymmetryClass] = None):
    """Smooth Dirichlet staircase A e/4pi - L_eff sqrt(e)/4pi.

    For a symmetry class the billiard is cut to a quarter; an axis edge
    carries Dirichlet (odd parity) or Neumann (even parity) conditions and
    adds to or subtracts from the boundary term.
    """
    energy = np.asarray(energy, dtype=float)
    if symmetry is None or shape.kind == ShapeKind.RECTANGLE:
        return (area(shape) * energy - perimeter(shape) * np.sqrt(energy)) / (4.0 * math.pi)
    edge = 0.25 * perimeter(shape)
    # x-odd: Dirichlet on the y axis (length b); y-odd: on the x axis (length a)
    edge += shape.b if symmetry.x_parity == Parity.ODD else -shape.b
    edge += shape.a if symmetry.y_parity == Parity.ODD else -shape.a
    return (0.25 * area(shape) * energy - edge * np.sqrt(energy)) / (4.0 * math.pi)


def weyl_slope_ratio(spectrum: Spectrum) -> float:
    """Staircase slope over the top half of the converged range, relative to Weyl.

    Both slopes are least-squares fits over the same energies, so the
    boundary term of ``weyl_count`` is accounted for.
    """
    if spectrum.shape is None:
        raise ContractViolation("weyl_slope_ratio needs a spectrum with a shape")
    levels = spectrum.converged
    if levels.size < 4:
        raise InsufficientLevelsError(f"weyl_slope_ratio needs 4 converged levels, got {levels.size}")
    half = levels.size // 2
    top = levels[half:]
    symmetry = spectrum.symmetry if isinstance(spectrum.symmetry, SymmetryClass) else None
    measured = np.polyfit(top, np.arange(half, levels.size) + 0.5, 1)[0]
    expected = np.polyfit(top, weyl_count(spectrum.shape, top, symmetry), 1)[0]
    return float(measured / expected)


def unfold(spectrum: LevelSource, min_levels: int = MIN_UNFOLD_LEVELS) -> UnfoldedSpectrum:
    """Map levels through a least-squares fit of c2 e + c1 sqrt(e) + c0.

    The staircase is sampled at the midpoint of each step, i + 1/2 at e_i.
    Spectra with a shape are checked against the Weyl slope; a deviation
    above WEYL_SLOPE_TOL is logged.

    Raises:
        InsufficientLevelsError: fewer than ``min_levels`` converged levels
    """
    levels = levels_of(spectrum)
    if levels.size < min_levels:
        raise InsufficientLevelsError(
            f"unfold needs at least {min_levels} converged levels, got {levels.size}"
        )
    design = np.column_stack([levels, np.sqrt(levels), np.ones_like(levels)])
    steps = np.arange(levels.size) + 0.5
    coefficients, *_ = np.linalg.lstsq(design, steps, rcond=None)
    coefficients = tuple(float(c) for c in coefficients)

    raw = spectrum if isinstance(spectrum, Spectrum) else None
    unfolded = UnfoldedSpectrum(
        raw=raw,
        coefficients=coefficients,
        levels=smooth_staircase(coefficients, levels),
        weyl_ratio=weyl_slope_ratio(raw) if raw is not None and raw.shape is not None else None,
    )
    if unfolded.weyl_deviation is not None and unfolded.weyl_deviation > WEYL_SLOPE_TOL:
        logger.warning(
            f"unfold {raw.symmetry_label}: staircase slope deviates from Weyl by "
            f"{unfolded.weyl_deviation:.2%}"
        )
    return unfolded


def poisson_spectrum(
    count: int, density: float, rng: np.random.Generator, start: Optional[float] = None
) -> Spectrum:
    """Synthetic uncorrelated levels with exponential spacings of mean 1/density."""
    if count < 1 or not density > 0:
        raise DomainError(f"poisson_spectrum needs count >= 1 and density > 0, got ({count}, {density})")
    offset = 1.0 / density if start is None else start
    levels = offset + np.cumsum(rng.exponential(1.0 / density, size=count))
    return Spectrum(
        shape=None,
        symmetry="poisson",
        eigenvalues=levels,
        converged_count=count,
        meta={"solver": "poisson", "density": density},
    )


def poisson_ensemble(
    samples: int, count: int, density: float, seed: int = 0
) -> List[Spectrum]:
    """Independent Poisson spectra from one seeded generator, in sample order."""
    rng = np.random.default_rng(seed)
    return [poisson_spectrum(count, density, rng) for _ in range(samples)]
