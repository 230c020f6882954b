"""
Periodic-orbit catalogs of the rectangle, circle and ellipse billiards.
"""

import logging
import math
from typing import Any, Dict, List, Optional

from core.exceptions import FamilyNotFoundError
from core.models import BilliardShape, FamilyKind, PeriodicOrbitFamily, rectangle
from engines.orbits.families import axis_orbits, find_family

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 60


def _by_length(
    families: List[PeriodicOrbitFamily], max_families: Optional[int]
) -> List[PeriodicOrbitFamily]:
    families = sorted(families, key=lambda f: (f.length, f.label))
    return families[:max_families] if max_families else families


def _with_repetitions(
    primitives: List[PeriodicOrbitFamily], l_max: float
) -> List[PeriodicOrbitFamily]:
    families = []
    for family in primitives:
        times = 2
        while times * family.length <= l_max * (1.0 + 1e-12):
            families.append(family.repeated(times))
            times += 1
    return families


def cb_catalog(
    n_max: int,
    radius: float = 1.0,
    repetitions: bool = False,
    l_max: Optional[float] = None,
    max_families: Optional[int] = None,
) -> List[PeriodicOrbitFamily]:
    """Circle families (n, m): L = 2 n r sin(m pi/n), S = pi r^2 sin^2(m pi/n).

    Args:
        n_max: Largest bounce count of a primitive family
        radius: Circle radius
        repetitions: Add r-fold repetitions (up to ``l_max`` if given, else
            those with r*n <= n_max)
        l_max: Optional length cutoff
        max_families: Keep only the shortest families

    Returns:
        Families sorted by length
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    families = []
    for n in range(2, n_max + 1):
        for m in range(1, n // 2 + 1):
            if math.gcd(n, m) != 1:
                continue
            angle = m * math.pi / n
            family = PeriodicOrbitFamily(
                kind=FamilyKind.ROTATIONAL,
                n=n,
                m=m,
                length=2.0 * n * radius * math.sin(angle),
                area=math.pi * radius * radius * math.sin(angle) ** 2,
                c=0.5 if (n, m) == (2, 1) else 1.0,
                vertices=[
                    (radius * math.cos(2 * k * angle), radius * math.sin(2 * k * angle))
                    for k in range(n)
                ],
            )
            families.append(family)
            if repetitions:
                times = 2
                while (l_max is None and times * n <= n_max) or (
                    l_max is not None and times * family.length <= l_max
                ):
                    families.append(family.repeated(times))
                    times += 1
    if l_max is not None:
        families = [f for f in families if f.length <= l_max]
    return _by_length(families, max_families)


def rb_catalog(
    a: float, b: float, l_max: float, max_families: Optional[int] = None
) -> List[PeriodicOrbitFamily]:
    """Rectangle families (p, q): L = 2 sqrt(p^2 a^2 + q^2 b^2), S = a b.

    Every lattice pair counts, so (2, 0) appears as the repetition of (1, 0).
    Families parallel to a side carry c = 1/2.
    """
    if not l_max > 0:
        raise ValueError(f"l_max must be positive, got {l_max}")
    shape = rectangle(a, b)
    families = []
    for p in range(int(l_max / (2.0 * a)) + 1):
        for q in range(int(l_max / (2.0 * b)) + 1):
            if p == q == 0:
                continue
            length = 2.0 * math.hypot(p * a, q * b)
            if length > l_max:
                continue
            families.append(
                PeriodicOrbitFamily(
                    kind=FamilyKind.ROTATIONAL,
                    n=p,
                    m=q,
                    length=length,
                    area=shape.a * shape.b,
                    c=0.5 if p == 0 or q == 0 else 1.0,
                    repetition=math.gcd(p, q),
                    label=f"({p},{q})",
                )
            )
    return _by_length(families, max_families)


def _skip(label: str, error: FamilyNotFoundError, skipped: List[Dict[str, Any]]) -> None:
    if error.out_of_range:
        logger.debug(f"eb_catalog: {label} has no caustic")
        return
    logger.warning(f"eb_catalog: skipped {label} ({error})")
    skipped.append({"label": label, "reason": str(error)})


def _rotational(
    shape: BilliardShape, l_max: float, n_max: int, config, skipped: List[Dict[str, Any]]
) -> List[PeriodicOrbitFamily]:
    families = []
    m = 1
    while 2 * m + 1 <= n_max or (shape.is_circle and m == 1):
        found_any = False
        first = 2 if (shape.is_circle and m == 1) else 2 * m + 1
        for n in range(first, n_max + 1):
            if math.gcd(n, m) != 1:
                continue
            try:
                family = find_family(shape, n, m, FamilyKind.ROTATIONAL, config)
            except FamilyNotFoundError as exc:
                _skip(f"R{n},{m}", exc, skipped)
                continue
            # lengths grow with n at fixed m
            if family.length > l_max:
                break
            found_any = True
            families.append(family)
        if not found_any:
            break
        m += 1
    return families


def _librational(
    shape: BilliardShape, l_max: float, n_max: int, config, skipped: List[Dict[str, Any]]
) -> List[PeriodicOrbitFamily]:
    if shape.is_circle:
        return []
    families = []
    # every chord crosses the focal segment, so it is at least 2 b^2 / a long
    shortest_chord = 2.0 * shape.b ** 2 / shape.a
    for n in range(4, n_max + 1, 2):
        if n * shortest_chord > l_max:
            break
        for m in range(1, n // 2):
            g = math.gcd(n, m)
            q = n // g
            if n != (q if q % 2 == 0 else 2 * q):
                continue
            try:
                family = find_family(shape, n, m, FamilyKind.LIBRATIONAL, config)
            except FamilyNotFoundError as exc:
                _skip(f"O{n},{m}", exc, skipped)
                continue
            if family.length <= l_max:
                families.append(family)
    return families


def eb_catalog(
    shape: BilliardShape,
    l_max: float,
    n_max: int = DEFAULT_N_MAX,
    repetitions: bool = True,
    max_families: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None,
    skipped: Optional[List[Dict[str, Any]]] = None,
) -> List[PeriodicOrbitFamily]:
    """Ellipse families with L <= l_max, sorted by length.

    Rotational families are swept by winding m and bounce count n,
    librational families by even n; the two axis orbits are added for
    sigma < 1. Families whose orbit fails to close are skipped and recorded
    in ``skipped``.

    Args:
        shape: Ellipse billiard
        l_max: Length cutoff
        n_max: Largest bounce count searched
        repetitions: Add repetitions of every primitive family
        max_families: Keep only the shortest families
        config: Family-search tolerances
        skipped: Receives one record per skipped family

    Returns:
        Families sorted by length
    """
    skipped = skipped if skipped is not None else []
    primitives = _rotational(shape, l_max, n_max, config, skipped)
    primitives += _librational(shape, l_max, n_max, config, skipped)
    if not shape.is_circle:
        primitives += [orbit for orbit in axis_orbits(shape) if orbit.length <= l_max]

    families = list(primitives)
    if repetitions:
        families += _with_repetitions(primitives, l_max)
    logger.info(
        f"eb_catalog sigma={shape.sigma:.6g}: {len(primitives)} primitive families, "
        f"{len(families)} with repetitions, {len(skipped)} skipped"
    )
    return _by_length(families, max_families)
