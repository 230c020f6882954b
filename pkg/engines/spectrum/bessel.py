"""
Bessel-function zeros and the quarter-disk spectrum.
"""

import logging
import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy import optimize, special

from core.exceptions import DomainError
from core.models import (
    AngularKind,
    BasisFunction,
    Parity,
    Spectrum,
    SymmetryClass,
    ellipse_from_sigma,
)

logger = logging.getLogger(__name__)

ROOT_TOLERANCE = 1e-12
# Consecutive zeros of J_m are more than 3 apart, so this step never skips a root.
_SCAN_STEP = 0.5
# smallest relative tolerance brentq accepts
_BRENT_RTOL = 4 * np.finfo(float).eps


def _mcmahon(m: int, s: int) -> float:
    """Asymptotic estimate of the s-th zero of J_m."""
    beta = (s + 0.5 * m - 0.25) * math.pi
    mu = 4.0 * m * m
    return beta - (mu - 1.0) / (8.0 * beta)


def _refine(m: int, lo: float, hi: float) -> float:
    root = optimize.brentq(lambda x: special.jv(m, x), lo, hi, xtol=1e-15, rtol=_BRENT_RTOL, maxiter=200)
    if abs(special.jv(m, root)) >= ROOT_TOLERANCE:
        # one Newton step on the residual
        root -= special.jv(m, root) / special.jvp(m, root)
    return root


@lru_cache(maxsize=512)
def _zeros_below(m: int, x_max: float) -> Tuple[float, ...]:
    """All positive zeros of J_m in (0, x_max], ascending."""
    start = max(float(m), 1.0)
    if x_max <= start:
        return ()
    grid = np.arange(start, x_max + _SCAN_STEP, _SCAN_STEP)
    values = special.jv(m, grid)
    roots = []
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]:
        root = _refine(m, grid[i], grid[i + 1])
        if root <= x_max:
            roots.append(root)
    return tuple(roots)


def bessel_zero(m: int, s: int) -> float:
    """s-th positive zero j_{m,s} of the Bessel function J_m.

    The asymptotic estimate sets the scan range; roots are bracketed by
    sign changes and refined with Brent's method to |J_m| < 1e-12.

    Args:
        m: Non-negative order
        s: Positive root index

    Returns:
        The root
    """
    if m < 0 or s < 1:
        raise DomainError(f"bessel_zero needs m >= 0 and s >= 1, got ({m}, {s})")
    x_max = max(_mcmahon(m, s), m) + 2.0 * math.pi + 2.0 * m ** (1.0 / 3.0)
    while True:
        roots = _zeros_below(m, round(x_max, 6))
        if len(roots) >= s:
            return roots[s - 1]
        x_max *= 1.25


def bessel_zeros_below(m: int, k_cut: float) -> List[float]:
    """All zeros j_{m,s} <= k_cut."""
    return list(_zeros_below(m, round(float(k_cut), 9)))


def admissible_orders(symmetry: SymmetryClass, m_max: int) -> Tuple[AngularKind, List[int]]:
    """Angular factor and orders m allowed in a symmetry class.

    sin(m theta) is odd under y -> -y, cos(m theta) even; under x -> -x both
    pick up (-1)^m (with an extra sign for sine).
    """
    if symmetry.y_parity == Parity.ODD:
        kind = AngularKind.SINE
        first = 2 if symmetry.x_parity == Parity.ODD else 1
    else:
        kind = AngularKind.COSINE
        first = 0 if symmetry.x_parity == Parity.EVEN else 1
    return kind, list(range(first, m_max + 1, 2))


def quarter_disk_basis(symmetry: SymmetryClass, k_cut: float) -> List[BasisFunction]:
    """All quarter-disk eigenfunctions of a class with j_{m,s} <= k_cut.

    Ordered by angular index, then radial index.
    """
    kind, orders = admissible_orders(symmetry, int(math.floor(k_cut)))
    basis = []
    for m in orders:
        for s, zero in enumerate(bessel_zeros_below(m, k_cut), start=1):
            basis.append(BasisFunction(m=m, s=s, zero=zero, angular=kind))
    return basis


def cb_spectrum(symmetry: SymmetryClass, count: int) -> Spectrum:
    """Lowest ``count`` Dirichlet levels of the unit quarter disk in one class.

    Levels are squared Bessel zeros j_{m,s}^2 over the orders admitted by
    the class.
    """
    shape = ellipse_from_sigma(1.0)
    if count <= 0:
        return Spectrum(shape, symmetry, np.empty(0), 0, {"solver": "bessel-zeros"})

    # Weyl estimate of the quarter disk: N(k) ~ k^2/16 - k/(2pi)
    k_cut = 4.0 * math.sqrt(count) + 10.0
    while True:
        zeros = [f.zero for f in quarter_disk_basis(symmetry, k_cut)]
        if len(zeros) >= count:
            break
        k_cut *= 1.2

    levels = np.sort(np.square(np.asarray(zeros)))[:count]
    logger.debug(f"cb_spectrum {symmetry}: {count} levels below k={k_cut:.3f}")
    return Spectrum(
        shape=shape,
        symmetry=symmetry,
        eigenvalues=levels,
        converged_count=count,
        meta={"solver": "bessel-zeros", "root_tolerance": ROOT_TOLERANCE},
    )
