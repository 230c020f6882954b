"""
Closed-form Dirichlet spectrum of the rectangle.
"""

import math

import numpy as np

from core.exceptions import DomainError
from core.models import Spectrum, rectangle

FULL = "full"


def rb_spectrum(a: float, b: float, count: int) -> Spectrum:
    """Lowest ``count`` levels pi^2 (p^2/a^2 + q^2/b^2), p, q >= 1.

    Args:
        a: Side along x
        b: Side along y
        count: Number of levels

    Returns:
        Spectrum with every level converged
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"Rectangle sides must be positive, got a={a}, b={b}")
    shape = rectangle(a, b)
    if count <= 0:
        return Spectrum(shape, FULL, np.empty(0), 0, {"solver": "closed-form"})

    # Weyl: N(E) ~ ab E / 4pi; grow the cutoff until enough levels lie below it.
    e_cut = 4.0 * math.pi * count / (a * b) * 1.5 + 2.0 * math.pi ** 2 * (1 / a ** 2 + 1 / b ** 2)
    while True:
        p = np.arange(1, int(math.sqrt(e_cut) * a / math.pi) + 2)
        q = np.arange(1, int(math.sqrt(e_cut) * b / math.pi) + 2)
        levels = math.pi ** 2 * (
            (p[:, None] / a) ** 2 + (q[None, :] / b) ** 2
        ).ravel()
        levels = levels[levels <= e_cut]
        if levels.size >= count:
            break
        e_cut *= 1.5

    levels = np.sort(levels)[:count]
    return Spectrum(
        shape=shape,
        symmetry=FULL,
        eigenvalues=levels,
        converged_count=count,
        meta={"solver": "closed-form"},
    )
