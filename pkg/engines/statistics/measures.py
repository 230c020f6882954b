"""
Spectral statistics over ensembles: spacings, number variance, rigidity
and the global variance of the staircase.

Windows are given in raw energy; staircases are evaluated exactly from the
sorted levels, without binning.
"""

import logging
from typing import Dict, Sequence

import numpy as np
from scipy import signal

from core.exceptions import ContractViolation, DomainError, InsufficientLevelsError
from core.models import StatCurve, StatisticKind, UnfoldedSpectrum
from engines.statistics.ensemble import LevelSource, levels_of

logger = logging.getLogger(__name__)

SATURATION_WINDOW = (1.0 / 8.0, 1.0 / 4.0)


def _stderr(per_sample: np.ndarray) -> np.ndarray:
    count = per_sample.shape[0]
    if count < 2:
        return np.zeros(per_sample.shape[1:])
    return per_sample.std(axis=0, ddof=1) / np.sqrt(count)


def _checked_levels(ensemble: Sequence[LevelSource], lo: float, hi: float):
    """Level arrays whose converged range covers [lo, hi]."""
    if not ensemble:
        raise ContractViolation("Statistics need at least one sample")
    samples = []
    for sample_id, sample in enumerate(ensemble):
        levels = levels_of(sample)
        if levels.size == 0 or hi > levels[-1] or lo < 0:
            top = levels[-1] if levels.size else 0.0
            raise InsufficientLevelsError(
                f"Window [{lo:.6g}, {hi:.6g}] leaves the converged range [0, {top:.6g}] "
                f"of sample {sample_id}",
                sample_id=sample_id,
            )
        samples.append(levels)
    return samples


def spacing_distribution(
    ensemble: Sequence[UnfoldedSpectrum], bins: int = 50, s_max: float = 5.0
) -> StatCurve:
    """Histogram density P(s) of nearest-neighbour spacings, pooled over samples.

    Densities are normalized by the total number of spacings, including any
    beyond ``s_max``. Standard errors come from the spread of per-sample
    histograms, or from counting statistics for a single sample.
    """
    if not ensemble:
        raise ContractViolation("spacing_distribution needs at least one sample")
    edges = np.linspace(0.0, s_max, bins + 1)
    width = edges[1] - edges[0]
    per_sample = []
    pooled = np.zeros(bins)
    total = 0
    for unfolded in ensemble:
        spacings = unfolded.spacings
        counts, _ = np.histogram(spacings, bins=edges)
        pooled += counts
        total += spacings.size
        per_sample.append(counts / (max(spacings.size, 1) * width))
    values = pooled / (total * width)
    if len(ensemble) > 1:
        stderr = _stderr(np.asarray(per_sample))
    else:
        stderr = np.sqrt(pooled) / (total * width)
    all_spacings = np.concatenate([u.spacings for u in ensemble])
    return StatCurve(
        statistic=StatisticKind.SPACING,
        abscissa=0.5 * (edges[:-1] + edges[1:]),
        values=values,
        stderr=stderr,
        n_samples=len(ensemble),
        meta={
            "bin_width": width,
            "s_max": s_max,
            "spacings": int(total),
            "mean_spacing": float(all_spacings.mean()),
        },
    )


def window_counts(ensemble: Sequence[LevelSource], epsilon: float, width: float) -> np.ndarray:
    """Level counts in [epsilon - width/2, epsilon + width/2] per sample."""
    if width < 0:
        raise DomainError(f"Window width must be non-negative, got {width}")
    lo, hi = epsilon - 0.5 * width, epsilon + 0.5 * width
    samples = _checked_levels(ensemble, lo, hi)
    return np.array(
        [np.searchsorted(v, hi, side="right") - np.searchsorted(v, lo, side="left") for v in samples]
    )


def number_variance(ensemble: Sequence[LevelSource], epsilon: float, width: float) -> float:
    """Ensemble variance Sigma(epsilon, E) of the window level count."""
    if width == 0:
        return 0.0
    return float(np.var(window_counts(ensemble, epsilon, width)))


def number_variance_curve(
    ensemble: Sequence[LevelSource], epsilon: float, widths: Sequence[float]
) -> StatCurve:
    """Sigma(epsilon, E) over a grid of widths E."""
    values, errors = [], []
    for width in widths:
        counts = window_counts(ensemble, epsilon, width).astype(float)
        squared = (counts - counts.mean()) ** 2
        values.append(squared.mean())
        errors.append(squared.std(ddof=1) / np.sqrt(counts.size) if counts.size > 1 else 0.0)
    return StatCurve(
        statistic=StatisticKind.NUMBER_VARIANCE,
        abscissa=np.asarray(widths, dtype=float),
        values=np.asarray(values),
        stderr=np.asarray(errors),
        n_samples=len(ensemble),
        meta={"epsilon": epsilon},
    )


def rigidity_single(levels: np.ndarray, lo: float, hi: float) -> float:
    """Least-squares deviation of one staircase from a line over [lo, hi].

    In centred coordinates t the functions 1 and t are orthogonal, so the
    best line is A t + B with A = I1 / (E^3/12) and B = I0 / E, where
    Ik = int N(t) t^k dt; the residual is I2' - A I1 - B I0 with
    I2' = int N^2 dt. Integrals are exact on the steps of N.
    """
    width = hi - lo
    if width <= 0:
        return 0.0
    centre = 0.5 * (lo + hi)
    inside = levels[(levels > lo) & (levels <= hi)] - centre
    breaks = np.concatenate([[-0.5 * width], inside, [0.5 * width]])
    steps = np.arange(inside.size + 1, dtype=float)
    left, right = breaks[:-1], breaks[1:]
    i0 = np.sum(steps * (right - left))
    i1 = np.sum(steps * 0.5 * (right ** 2 - left ** 2))
    i2 = np.sum(steps ** 2 * (right - left))
    slope = i1 / (width ** 3 / 12.0)
    offset = i0 / width
    return float(max(i2 - slope * i1 - offset * i0, 0.0) / width)


def _rigidities(ensemble: Sequence[LevelSource], epsilon: float, width: float) -> np.ndarray:
    lo, hi = epsilon - 0.5 * width, epsilon + 0.5 * width
    return np.array([rigidity_single(v, lo, hi) for v in _checked_levels(ensemble, lo, hi)])


def rigidity(ensemble: Sequence[LevelSource], epsilon: float, width: float) -> float:
    """Ensemble mean of the spectral rigidity Delta3(epsilon, E)."""
    return float(_rigidities(ensemble, epsilon, width).mean())


def rigidity_curve(
    ensemble: Sequence[LevelSource], epsilon: float, widths: Sequence[float]
) -> StatCurve:
    """Delta3(epsilon, E) over a grid of widths E."""
    per_sample = np.array([_rigidities(ensemble, epsilon, w) for w in widths]).T
    return StatCurve(
        statistic=StatisticKind.RIGIDITY,
        abscissa=np.asarray(widths, dtype=float),
        values=per_sample.mean(axis=0),
        stderr=_stderr(per_sample),
        n_samples=len(ensemble),
        meta={"epsilon": epsilon},
    )


def _saturation_per_sample(
    ensemble: Sequence[LevelSource], epsilon: float, points: int
) -> np.ndarray:
    lo, hi = SATURATION_WINDOW
    widths = np.linspace(lo * epsilon, hi * epsilon, points)
    return np.mean([_rigidities(ensemble, epsilon, w) for w in widths], axis=0)


def rigidity_saturation(ensemble: Sequence[LevelSource], epsilon: float, points: int = 16) -> float:
    """Plateau value Delta3_inf: Delta3 averaged over E in [epsilon/8, epsilon/4]."""
    return float(_saturation_per_sample(ensemble, epsilon, points).mean())


def rigidity_saturation_curve(
    ensemble: Sequence[LevelSource], epsilons: Sequence[float], points: int = 16
) -> StatCurve:
    """Delta3_inf over a grid of energies."""
    per_sample = np.array([_saturation_per_sample(ensemble, e, points) for e in epsilons]).T
    return StatCurve(
        statistic=StatisticKind.SATURATED_RIGIDITY,
        abscissa=np.asarray(epsilons, dtype=float),
        values=per_sample.mean(axis=0),
        stderr=_stderr(per_sample),
        n_samples=len(ensemble),
        meta={"window": list(SATURATION_WINDOW), "points": points},
    )


def staircase_counts(ensemble: Sequence[LevelSource], epsilon: float) -> np.ndarray:
    """N(epsilon) per sample."""
    samples = _checked_levels(ensemble, epsilon, epsilon)
    return np.array([np.searchsorted(v, epsilon, side="right") for v in samples])


def global_variance(ensemble: Sequence[LevelSource], epsilon: float) -> float:
    """Ensemble variance Sigma_g(epsilon) of the staircase N(epsilon)."""
    return float(np.var(staircase_counts(ensemble, epsilon)))


def global_variance_curve(ensemble: Sequence[LevelSource], epsilons: Sequence[float]) -> StatCurve:
    """Sigma_g over a grid of energies."""
    values, errors = [], []
    for epsilon in epsilons:
        counts = staircase_counts(ensemble, epsilon).astype(float)
        squared = (counts - counts.mean()) ** 2
        values.append(squared.mean())
        errors.append(squared.std(ddof=1) / np.sqrt(counts.size) if counts.size > 1 else 0.0)
    return StatCurve(
        statistic=StatisticKind.GLOBAL_VARIANCE,
        abscissa=np.asarray(epsilons, dtype=float),
        values=np.asarray(values),
        stderr=np.asarray(errors),
        n_samples=len(ensemble),
    )


def scaling_exponent(curve: StatCurve) -> float:
    """Least-squares slope of log(value) against log(abscissa)."""
    mask = (curve.values > 0) & (curve.abscissa > 0)
    if mask.sum() < 2:
        raise DomainError("scaling_exponent needs two positive points")
    slope, _ = np.polyfit(np.log(curve.abscissa[mask]), np.log(curve.values[mask]), 1)
    return float(slope)


def synchronization(first: StatCurve, second: StatCurve) -> Dict[str, float]:
    """Correlation of the oscillating parts of two curves on one grid.

    Both curves are linearly detrended before the Pearson correlation; the
    offset is |mean(first) - mean(second)| / |mean(second)|; a zero-mean
    second curve is a ContractViolation.
    """
    if first.abscissa.shape != second.abscissa.shape or not np.allclose(first.abscissa, second.abscissa):
        raise ContractViolation("synchronization needs curves on one grid")
    if first.values.size < 3:
        raise DomainError("synchronization needs at least three points")
    reference = second.values.mean()
    if reference == 0:
        raise ContractViolation(
            f"synchronization needs a reference curve with non-zero mean ({second.statistic.value})"
        )
    a = signal.detrend(first.values, type="linear")
    b = signal.detrend(second.values, type="linear")
    correlation = float(np.corrcoef(a, b)[0, 1]) if a.std() > 0 and b.std() > 0 else 0.0
    offset = abs(first.values.mean() - reference) / abs(reference)
    return {"correlation": correlation, "mean_relative_offset": float(offset)}


def oscillation_extrema(curve: StatCurve, count: int = 2) -> np.ndarray:
    """Abscissae of the first ``count`` local extrema (maxima and minima, in order)."""
    maxima, _ = signal.find_peaks(curve.values)
    minima, _ = signal.find_peaks(-curve.values)
    extrema = np.sort(np.concatenate([maxima, minima]))[:count]
    return curve.abscissa[extrema]
