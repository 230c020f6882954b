"""
Semiclassical periodic-orbit sums for the number variance and the global
variance.

Each family j contributes with amplitude A_j = kappa c_j S_j / sqrt(L_j)
and period T_j = L_j / (2 sqrt(epsilon)):

    Sigma(epsilon, E) = sum_j 8 A_j^2 / (hbar^(dof-1) T_j^2) sin^2(E T_j / 2 hbar)
    Sigma_g(epsilon)  = sum_j 2 A_j^2 / (hbar^(dof-1) T_j^2)

Sums run over the shortest orbits of each catalog and are averaged over
catalogs. Averaging sin^2 to 1/2 turns the first sum into twice the second.
"""

import logging
from typing import Sequence

import numpy as np
from scipy import signal

from core.exceptions import ContractViolation, DomainError
from core.models import CONVENTIONS, PeriodicOrbitFamily, StatCurve, StatisticKind

logger = logging.getLogger(__name__)

MAX_ORBITS = 200

Catalog = Sequence[PeriodicOrbitFamily]


def _orbit_arrays(catalog: Catalog, max_orbits: int):
    if not catalog:
        raise ContractViolation("Semiclassical sums need a non-empty orbit catalog")
    shortest = sorted(catalog, key=lambda f: f.length)[:max_orbits]
    lengths = np.array([f.length for f in shortest])
    amplitudes = np.array([f.amplitude for f in shortest])
    return lengths, amplitudes


def _prefactors(catalog: Catalog, epsilon: float, kappa: float, max_orbits: int):
    """Per-orbit 2 A^2 / (hbar^(dof-1) T^2) and periods T."""
    if not epsilon > 0:
        raise DomainError(f"Energy must be positive, got {epsilon}")
    lengths, amplitudes = _orbit_arrays(catalog, max_orbits)
    periods = CONVENTIONS.period(lengths, epsilon)
    hbar_power = CONVENTIONS.hbar ** (CONVENTIONS.dof - 1)
    return 2.0 * (kappa * amplitudes) ** 2 / (hbar_power * periods ** 2), periods


def _per_catalog_sigma(
    catalogs: Sequence[Catalog], epsilon: float, widths: np.ndarray, kappa: float, max_orbits: int
) -> np.ndarray:
    if not catalogs:
        raise ContractViolation("Semiclassical sums need at least one catalog")
    rows = []
    for catalog in catalogs:
        weights, periods = _prefactors(catalog, epsilon, kappa, max_orbits)
        phases = np.outer(widths, periods) / (2.0 * CONVENTIONS.hbar)
        rows.append((4.0 * weights * np.sin(phases) ** 2).sum(axis=1))
    return np.asarray(rows)


def sigma_theory(
    catalogs: Sequence[Catalog],
    epsilon: float,
    width,
    kappa: float = 1.0,
    max_orbits: int = MAX_ORBITS,
):
    """Semiclassical number variance, averaged over catalogs.

    Args:
        catalogs: One orbit catalog per ensemble sample
        epsilon: Window centre energy
        width: Window width E (scalar or array)
        kappa: Global amplitude scale
        max_orbits: Orbits kept per catalog, shortest first

    Returns:
        Value (or array matching ``width``)
    """
    widths = np.atleast_1d(np.asarray(width, dtype=float))
    values = _per_catalog_sigma(catalogs, epsilon, widths, kappa, max_orbits).mean(axis=0)
    return float(values[0]) if np.ndim(width) == 0 else values


def sigma_theory_curve(
    catalogs: Sequence[Catalog],
    epsilon: float,
    widths: Sequence[float],
    kappa: float = 1.0,
    max_orbits: int = MAX_ORBITS,
) -> StatCurve:
    """Semiclassical Sigma(epsilon, E) with the spread over catalogs as error."""
    widths = np.asarray(widths, dtype=float)
    per_catalog = _per_catalog_sigma(catalogs, epsilon, widths, kappa, max_orbits)
    count = per_catalog.shape[0]
    stderr = per_catalog.std(axis=0, ddof=1) / np.sqrt(count) if count > 1 else np.zeros(widths.size)
    return StatCurve(
        statistic=StatisticKind.THEORY_NUMBER_VARIANCE,
        abscissa=widths,
        values=per_catalog.mean(axis=0),
        stderr=stderr,
        n_samples=count,
        meta={"epsilon": epsilon, "kappa": kappa, "max_orbits": max_orbits},
    )


def _per_catalog_global(
    catalogs: Sequence[Catalog], epsilon: float, kappa: float, max_orbits: int
) -> np.ndarray:
    if not catalogs:
        raise ContractViolation("Semiclassical sums need at least one catalog")
    return np.array([_prefactors(c, epsilon, kappa, max_orbits)[0].sum() for c in catalogs])


def global_variance_theory(
    catalogs: Sequence[Catalog],
    epsilon: float,
    kappa: float = 1.0,
    max_orbits: int = MAX_ORBITS,
) -> float:
    """Semiclassical global variance, averaged over catalogs."""
    return float(_per_catalog_global(catalogs, epsilon, kappa, max_orbits).mean())


def global_variance_theory_curve(
    catalogs: Sequence[Catalog],
    epsilons: Sequence[float],
    kappa: float = 1.0,
    max_orbits: int = MAX_ORBITS,
) -> StatCurve:
    """Semiclassical Sigma_g over a grid of energies."""
    per_catalog = np.array(
        [_per_catalog_global(catalogs, e, kappa, max_orbits) for e in epsilons]
    ).T
    count = per_catalog.shape[0]
    stderr = per_catalog.std(axis=0, ddof=1) / np.sqrt(count) if count > 1 else np.zeros(len(epsilons))
    return StatCurve(
        statistic=StatisticKind.THEORY_GLOBAL_VARIANCE,
        abscissa=np.asarray(epsilons, dtype=float),
        values=per_catalog.mean(axis=0),
        stderr=stderr,
        n_samples=count,
        meta={"kappa": kappa, "max_orbits": max_orbits},
    )


def first_maximum(curve: StatCurve) -> int:
    """Index of the first local maximum (the global maximum if none)."""
    peaks, _ = signal.find_peaks(curve.values)
    return int(peaks[0]) if peaks.size else int(np.argmax(curve.values))


def fit_amplitude_scale(
    numeric: StatCurve, catalogs: Sequence[Catalog], epsilon: float, max_orbits: int = MAX_ORBITS
) -> float:
    """Global kappa matching the theory to the numerical Sigma at its first maximum.

    The sums scale with kappa^2, so one point fixes kappa.
    """
    index = first_maximum(numeric)
    width = float(numeric.abscissa[index])
    unscaled = sigma_theory(catalogs, epsilon, width, 1.0, max_orbits)
    if not unscaled > 0 or not numeric.values[index] > 0:
        raise DomainError(f"Cannot fit the amplitude scale at E={width}")
    kappa = float(np.sqrt(numeric.values[index] / unscaled))
    logger.info(f"fit_amplitude_scale: kappa={kappa:.6g} at E={width:.6g}")
    return kappa

