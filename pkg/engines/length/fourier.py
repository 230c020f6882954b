"""
Length spectrum: Fourier transform of the level density over eigen-momentum,
and detection of its peaks.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import signal

from core.exceptions import DomainError, InsufficientLevelsError
from core.models import LengthSpectrum, Peak, Spectrum, nominal_half_width

logger = logging.getLogger(__name__)

MIN_LEVELS = 200
L_MIN = 1.0
GRID_REFINEMENT = 10


def length_spectrum_from_momenta(
    momenta: Union[np.ndarray, Sequence[float]],
    window: Optional[Tuple[float, float]] = None,
    l_max: float = 12.0,
    dl: Optional[float] = None,
    taper: bool = False,
    min_levels: int = MIN_LEVELS,
    chunk: int = 512,
    source: str = "",
) -> LengthSpectrum:
    """A(l) = (1/2pi) sum_i exp(-i k_i l) on a uniform grid 0 <= l <= l_max.

    Args:
        momenta: Eigen-momenta k_i
        window: (k_min, k_max); defaults to the full momentum range
        l_max: Largest orbit length on the grid
        dl: Grid spacing; defaults to a tenth of the nominal half width
        taper: Weight momenta with a Gaussian centred in the window
        min_levels: Fewest momenta accepted in the window
        chunk: Grid points evaluated per block

    Returns:
        LengthSpectrum
    """
    k = np.sort(np.asarray(momenta, dtype=float))
    if k.size == 0:
        raise InsufficientLevelsError("length_spectrum needs eigen-momenta")
    window = (float(k[0]), float(k[-1])) if window is None else (float(window[0]), float(window[1]))
    if not window[1] > window[0]:
        raise DomainError(f"Momentum window must have k_max > k_min, got {window}")
    k = k[(k >= window[0]) & (k <= window[1])]
    if k.size < min_levels:
        raise InsufficientLevelsError(
            f"length_spectrum needs {min_levels} eigen-momenta in {window}, got {k.size}"
        )

    step = dl if dl is not None else nominal_half_width(window) / GRID_REFINEMENT
    l_grid = np.arange(0.0, l_max + 0.5 * step, step)
    weights = np.ones_like(k)
    if taper:
        centre, width = 0.5 * (window[0] + window[1]), 0.25 * (window[1] - window[0])
        weights = np.exp(-0.5 * ((k - centre) / width) ** 2)

    amplitude = np.empty(l_grid.size, dtype=complex)
    for start in range(0, l_grid.size, chunk):
        block = l_grid[start:start + chunk]
        amplitude[start:start + chunk] = np.exp(-1j * np.outer(block, k)) @ weights
    amplitude /= 2.0 * math.pi

    return LengthSpectrum(
        l_grid=l_grid,
        amplitude=amplitude,
        window=window,
        level_count=int(k.size),
        source=source,
        taper=taper,
    )


def length_spectrum(
    spectrum: Spectrum,
    window: Optional[Tuple[float, float]] = None,
    l_max: float = 12.0,
    dl: Optional[float] = None,
    taper: bool = False,
    min_levels: int = MIN_LEVELS,
) -> LengthSpectrum:
    """Length spectrum of the converged levels of a spectrum (k_i = sqrt(e_i))."""
    source = spectrum.symmetry_label
    if spectrum.shape is not None:
        source = f"{spectrum.shape.kind.value} sigma={spectrum.shape.sigma:.6g} {source}"
    return length_spectrum_from_momenta(
        spectrum.momenta[: spectrum.converged_count],
        window=window,
        l_max=l_max,
        dl=dl,
        taper=taper,
        min_levels=min_levels,
        source=source,
    )


def _refine(magnitude: np.ndarray, index: int, l_grid: np.ndarray) -> Tuple[float, float]:
    """Vertex of the parabola through the three samples around a maximum."""
    if index == 0 or index == magnitude.size - 1:
        return float(l_grid[index]), float(magnitude[index])
    left, mid, right = magnitude[index - 1:index + 2]
    curvature = left - 2.0 * mid + right
    if curvature >= 0:
        return float(l_grid[index]), float(mid)
    shift = 0.5 * (left - right) / curvature
    step = l_grid[1] - l_grid[0]
    return float(l_grid[index] + shift * step), float(mid - 0.25 * (left - right) * shift)


def detect_peaks(ls: LengthSpectrum, min_height: float = 0.05, l_min: float = L_MIN) -> List[Peak]:
    """Local maxima of |A(l)| with l >= l_min above ``min_height`` times the largest one.

    Half widths are half of the full width at half maximum, found by linear
    interpolation of the half-maximum crossings.
    """
    magnitude = ls.magnitude
    region = ls.l_grid >= l_min
    if not region.any():
        return []
    threshold = min_height * magnitude[region].max()
    indices, _ = signal.find_peaks(magnitude, height=threshold)
    indices = indices[ls.l_grid[indices] >= l_min]
    if indices.size == 0:
        return []

    heights = magnitude[indices]
    left = np.zeros(indices.size, dtype=np.intp)
    right = np.full(indices.size, magnitude.size - 1, dtype=np.intp)
    widths, *_ = signal.peak_widths(
        magnitude, indices, rel_height=0.5, prominence_data=(heights, left, right)
    )
    peaks = []
    for index, width in zip(indices, widths):
        position, height = _refine(magnitude, int(index), ls.l_grid)
        peaks.append(Peak(position=position, height=height, half_width=0.5 * width * ls.spacing))
    logger.debug(f"detect_peaks: {len(peaks)} peaks above {threshold:.4g}")
    return peaks


def half_width_dispersion(peaks: Sequence[Peak], min_fraction: float = 0.25) -> float:
    """max/min half width over peaks at least ``min_fraction`` of the tallest."""
    if not peaks:
        return float("nan")
    tallest = max(p.height for p in peaks)
    widths = [p.half_width for p in peaks if p.height >= min_fraction * tallest]
    return max(widths) / min(widths)
