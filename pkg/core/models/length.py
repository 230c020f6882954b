"""
Length-spectrum model.

Fourier amplitude of a spectrum over orbit length, its detected peaks and
the theory peaks predicted from an orbit catalog.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from core.models.orbit import PeriodicOrbitFamily


@dataclass
class LengthSpectrum:
    """
    Complex amplitude A(l) = (1/2pi) sum_i exp(-i k_i l) for l >= 0.

    A(-l) is the complex conjugate of A(l), so only l >= 0 is stored.

    Attributes:
        l_grid: Uniform orbit-length grid
        amplitude: Complex amplitude on the grid
        window: Eigen-momentum window (k_min, k_max)
        level_count: Number of eigen-momenta in the window
        source: Identifier of the source spectrum
        taper: Whether a Gaussian momentum taper was applied
    """

    l_grid: np.ndarray
    amplitude: np.ndarray
    window: Tuple[float, float]
    level_count: int
    source: str = ""
    taper: bool = False

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.amplitude)

    @property
    def spacing(self) -> float:
        return float(self.l_grid[1] - self.l_grid[0])

    @property
    def nominal_half_width(self) -> float:
        """Half width at half maximum of the rectangular-window main lobe."""
        return nominal_half_width(self.window)


def nominal_half_width(window: Tuple[float, float]) -> float:
    """Half width of |sinc| at half maximum for a momentum window of width dk.

    |sin(x)/x| = 1/2 at x = 1.8955, and x = dk * dl / 2.
    """
    return 2.0 * 1.895494267 / (window[1] - window[0])


@dataclass
class Peak:
    """
    Local maximum of |A(l)|.

    Attributes:
        position: Peak position l*
        height: |A(l*)|
        half_width: Half of the full width at half maximum
        matched_family: Family the peak was matched to
    """

    position: float
    height: float
    half_width: float
    matched_family: Optional[PeriodicOrbitFamily] = None

    def __post_init__(self):
        if not (self.height > 0 and self.half_width > 0):
            raise ValueError("Peak height and half width must be positive")


@dataclass
class TheoryPeak:
    """
    Predicted peak c*S/sqrt(L), normalized to a reference family.

    Attributes:
        length: Family length L
        relative_amplitude: Amplitude relative to the reference family
        family: Family the peak stems from
        is_reference: True for the normalizing family
    """

    length: float
    relative_amplitude: float
    family: PeriodicOrbitFamily
    is_reference: bool = False


@dataclass
class MatchRow:
    """One theory peak compared with the nearest detected peak."""

    family: str
    l_theory: float
    l_detected: Optional[float]
    height_numeric: Optional[float]
    height_theory: float
    flags: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def delta_l(self) -> Optional[float]:
        if self.l_detected is None:
            return None
        return self.l_detected - self.l_theory

    @property
    def ratio(self) -> Optional[float]:
        if self.height_numeric is None or self.height_theory == 0:
            return None
        return self.height_numeric / self.height_theory

    @property
    def matched(self) -> bool:
        return self.l_detected is not None
