"""
Periodic-orbit families of the ellipse billiard.

Families are located by solving rotation_number_exact(lam) = m/n for the
caustic parameter and closing the orbit with the exact bounce map. Members
of a family are the chords tangent to its caustic; they are generated from
the normal angle alpha of the tangent line, whose offset from the centre is
h(alpha) = sqrt((f^2 + lam) cos^2 alpha + lam sin^2 alpha).
"""

import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from core.exceptions import (
    ContractViolation,
    DegenerateOrbitError,
    DomainError,
    FamilyNotFoundError,
)
from core.models import (
    BilliardShape,
    BounceState,
    ConfocalConic,
    ConicKind,
    FamilyKind,
    PeriodicOrbitFamily,
    area,
    confocal_conic,
)
from engines.orbits.billiard_map import (
    boundary_hits,
    rotation_number_exact,
    trajectory,
)

logger = logging.getLogger(__name__)

DEFAULT_FAMILY_CONFIG: Dict[str, Any] = {
    "bisection_tol": 1e-14,
    "closure_tol": 1e-9,
    "edge_margin": 1e-15,
}

STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal"


def _check_indices(n: int, m: int, kind: FamilyKind) -> None:
    if kind == FamilyKind.ROTATIONAL:
        if not (n >= 2 and 1 <= m <= n / 2) or math.gcd(n, m) != 1:
            raise ContractViolation(
                f"Rotational family needs reduced (n, m) with 1 <= m <= n/2, got ({n}, {m})"
            )
    elif kind == FamilyKind.LIBRATIONAL:
        if n < 2 or n % 2 or m < 1 or 2 * m >= n:
            raise ContractViolation(
                f"Librational family needs even n and 1 <= m < n/2, got ({n}, {m})"
            )
        q = n // math.gcd(n, m)
        if n != (q if q % 2 == 0 else 2 * q):
            raise ContractViolation(f"O-family ({n}, {m}) is a repetition of a shorter family")
    else:
        raise ContractViolation(f"find_family cannot locate {kind.value} orbits")


def circle_diameter_family(shape: BilliardShape) -> PeriodicOrbitFamily:
    """The diameter family of a circle: caustic shrunk to the centre."""
    radius = shape.a
    caustic = ConfocalConic(lam=0.0, kind=ConicKind.ELLIPSE, semi_x=0.0, semi_y=0.0)
    return PeriodicOrbitFamily(
        kind=FamilyKind.ROTATIONAL,
        n=2,
        m=1,
        length=4.0 * radius,
        area=area(shape),
        c=0.5,
        caustic=caustic,
        vertices=[(-radius, 0.0), (radius, 0.0)],
    )


def _lambda_bracket(shape: BilliardShape, kind: FamilyKind, margin: float) -> Tuple[float, float]:
    if kind == FamilyKind.ROTATIONAL:
        b2 = shape.b ** 2
        return b2 * margin, b2 * (1.0 - 1e-12)
    f2 = shape.focal_distance ** 2
    return -f2 * (1.0 - 1e-12), -f2 * margin


def solve_caustic(
    shape: BilliardShape, n: int, m: int, kind: FamilyKind, config: Optional[Dict[str, Any]] = None
) -> float:
    """Caustic parameter with rotation number m/n.

    Raises:
        FamilyNotFoundError: m/n lies outside the rotation numbers of the range
    """
    cfg = {**DEFAULT_FAMILY_CONFIG, **(config or {})}
    target = m / n
    if kind == FamilyKind.LIBRATIONAL and shape.is_circle:
        raise FamilyNotFoundError("The circle has no librational families", out_of_range=True)
    lo, hi = _lambda_bracket(shape, kind, cfg["edge_margin"])
    f_lo = rotation_number_exact(shape, lo) - target
    f_hi = rotation_number_exact(shape, hi) - target
    if f_lo * f_hi > 0:
        raise FamilyNotFoundError(
            f"{kind.value}({n},{m}): rotation number {target:.6f} outside "
            f"[{min(f_lo, f_hi) + target:.6f}, {max(f_lo, f_hi) + target:.6f}]",
            out_of_range=True,
        )
    return optimize.brentq(
        lambda lam: rotation_number_exact(shape, lam) - target,
        lo,
        hi,
        xtol=cfg["bisection_tol"],
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
    )


def tangent_line_angles(caustic: ConfocalConic, count: int, margin: float = 0.05) -> np.ndarray:
    """Normal angles of ``count`` tangent lines spread over the caustic.

    Hyperbolic caustics only admit |tan alpha| < sqrt(P/|lam|); the sample
    keeps a relative ``margin`` away from the asymptotes and covers both branches.
    """
    if caustic.kind == ConicKind.ELLIPSE:
        return 2.0 * math.pi * (np.arange(count) + 0.5) / count
    alpha_max = math.atan(caustic.semi_x / caustic.semi_y)
    half = (count + 1) // 2
    right = alpha_max * np.linspace(-1.0 + margin, 1.0 - margin, half)
    return np.concatenate([right, math.pi + right])[:count]


def tangent_offsets(caustic: ConfocalConic, alphas: np.ndarray) -> np.ndarray:
    support = caustic.semi_x ** 2 * np.cos(alphas) ** 2 + caustic.lam * np.sin(alphas) ** 2
    return np.sqrt(np.clip(support, 0.0, None))


def member_state(shape: BilliardShape, caustic: ConfocalConic, alpha: float) -> BounceState:
    """Boundary state starting the chord tangent to the caustic with normal angle alpha."""
    nx, ny = math.cos(alpha), math.sin(alpha)
    h = float(tangent_offsets(caustic, np.array([alpha]))[0])
    point, direction = (h * nx, h * ny), (-ny, nx)
    t_back, _ = boundary_hits(shape, point, direction)
    start = (point[0] + t_back * direction[0], point[1] + t_back * direction[1])
    return BounceState(point=start, direction=direction)


def _closure_error(start: BounceState, end: BounceState) -> float:
    return max(
        abs(start.point[0] - end.point[0]),
        abs(start.point[1] - end.point[1]),
        abs(start.direction[0] - end.direction[0]),
        abs(start.direction[1] - end.direction[1]),
    )


def family_area(shape: BilliardShape, family: PeriodicOrbitFamily) -> float:
    """Area of the billiard swept by the chords of a family.

    Rotational families cover the billiard minus the caustic ellipse;
    librational families cover the strip between the hyperbola branches.
    """
    if family.kind == FamilyKind.ISOLATED or family.caustic is None:
        return 0.0
    caustic = family.caustic
    if caustic.kind == ConicKind.ELLIPSE:
        return math.pi * (shape.a * shape.b - caustic.semi_x * caustic.semi_y)

    a, b = shape.a, shape.b
    sx, sy = caustic.semi_x, caustic.semi_y
    y_meet = math.sqrt((a * a - sx * sx) / (sx * sx / (sy * sy) + a * a / (b * b)))
    inner, _ = integrate.quad(
        lambda y: sx * math.sqrt(1.0 + (y / sy) ** 2), 0.0, y_meet, epsabs=1e-12, epsrel=1e-12
    )
    outer, _ = integrate.quad(
        lambda y: a * math.sqrt(max(0.0, 1.0 - (y / b) ** 2)), y_meet, b, epsabs=1e-12, epsrel=1e-12
    )
    return 4.0 * (inner + outer)


def family_area_monte_carlo(
    shape: BilliardShape,
    family: PeriodicOrbitFamily,
    rng: np.random.Generator,
    members: int = 2000,
    points: int = 20000,
    chunk: int = 1000,
) -> float:
    """Monte Carlo estimate of the covered area from sampled family chords.

    A random point is covered when the signed distance to the tangent lines
    changes sign between consecutive members, i.e. some member chord in
    between passes through it.
    """
    if family.kind == FamilyKind.ISOLATED or family.caustic is None:
        return 0.0
    caustic = family.caustic
    margin = 0.0 if caustic.kind == ConicKind.ELLIPSE else 1e-6
    alphas = tangent_line_angles(caustic, members, margin=margin)
    offsets = tangent_offsets(caustic, alphas)
    normals = np.stack([np.cos(alphas), np.sin(alphas)])
    if caustic.kind == ConicKind.ELLIPSE:
        pairs = [np.arange(members)]
        closed = True
    else:
        half = (members + 1) // 2
        pairs = [np.arange(half), np.arange(half, members)]
        closed = False

    radius = np.sqrt(rng.uniform(size=points))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=points)
    xy = np.stack([shape.a * radius * np.cos(theta), shape.b * radius * np.sin(theta)], axis=1)

    covered = 0
    for start in range(0, points, chunk):
        block = xy[start:start + chunk]
        signs = np.sign(block @ normals - offsets)
        hit = np.zeros(block.shape[0], dtype=bool)
        for index in pairs:
            s = signs[:, index]
            hit |= np.any(s[:, 1:] != s[:, :-1], axis=1)
            if closed:
                hit |= s[:, 0] != s[:, -1]
        covered += int(hit.sum())
    return area(shape) * covered / points


def find_family(
    shape: BilliardShape,
    n: int,
    m: int,
    kind: FamilyKind = FamilyKind.ROTATIONAL,
    config: Optional[Dict[str, Any]] = None,
) -> PeriodicOrbitFamily:
    """Locate and close the periodic-orbit family (n, m).

    Args:
        shape: Ellipse billiard
        n: Bounces per period
        m: Revolutions (rotational) or libration cycles (librational)
        kind: ROTATIONAL or LIBRATIONAL
        config: Overrides of DEFAULT_FAMILY_CONFIG

    Returns:
        Family with caustic, length, covered area and c = 1

    Raises:
        ContractViolation: (n, m) not reduced or inconsistent with kind
        FamilyNotFoundError: No caustic with this rotation number, or the
            orbit does not close
    """
    cfg = {**DEFAULT_FAMILY_CONFIG, **(config or {})}
    _check_indices(n, m, kind)
    if shape.is_circle and kind == FamilyKind.ROTATIONAL and (n, m) == (2, 1):
        return circle_diameter_family(shape)

    lam = solve_caustic(shape, n, m, kind, cfg)
    try:
        caustic = confocal_conic(shape, lam)
        start = member_state(shape, caustic, 0.5 * math.pi if kind == FamilyKind.ROTATIONAL else 0.0)
        states = trajectory(shape, start, n)
    except (DomainError, DegenerateOrbitError) as exc:
        raise FamilyNotFoundError(f"{kind.value}({n},{m}) at lam={lam!r}: {exc}") from exc

    error = _closure_error(states[0], states[-1])
    if error >= cfg["closure_tol"]:
        raise FamilyNotFoundError(
            f"{kind.value}({n},{m}) at lam={lam!r} does not close: error {error:.2e}"
        )

    family = PeriodicOrbitFamily(
        kind=kind,
        n=n,
        m=m,
        length=float(sum(s.chord for s in states[1:])),
        area=0.0,
        c=1.0,
        caustic=caustic,
        vertices=[s.point for s in states[:-1]],
    )
    family.area = family_area(shape, family)
    logger.debug(f"find_family {family.label}: lam={lam:.12g}, L={family.length:.10f}")
    return family


def member_lengths(shape: BilliardShape, family: PeriodicOrbitFamily, starts: int = 100) -> np.ndarray:
    """Lengths of ``starts`` family members launched from distinct tangent chords."""
    if family.caustic is None:
        return np.array([family.length / family.repetition])
    lengths = []
    for alpha in tangent_line_angles(family.caustic, starts):
        states = trajectory(shape, member_state(shape, family.caustic, float(alpha)), family.n)
        lengths.append(sum(s.chord for s in states[1:]))
    return np.asarray(lengths)


def family_length_constancy(
    shape: BilliardShape, family: PeriodicOrbitFamily, starts: int = 100
) -> float:
    """Relative spread (max L - min L) / mean L over family members."""
    if family.kind == FamilyKind.ISOLATED:
        return 0.0
    lengths = member_lengths(shape, family, starts)
    return float((lengths.max() - lengths.min()) / lengths.mean())


def monodromy_trace(distance: float, radius: float) -> float:
    """Trace of the round-trip matrix of a two-bounce orbit between mirrors.

    One leg is free flight over ``distance`` followed by reflection off a
    boundary with curvature radius ``radius``.
    """
    flight = np.array([[1.0, distance], [0.0, 1.0]])
    mirror = np.array([[1.0, 0.0], [-2.0 / radius, 1.0]])
    leg = mirror @ flight
    return float(np.trace(leg @ leg))


def stability_label(trace: float, tol: float = 1e-12) -> str:
    if abs(abs(trace) - 2.0) <= tol:
        return MARGINAL
    return STABLE if abs(trace) < 2.0 else UNSTABLE


def axis_orbits(
    shape: BilliardShape, allow_degenerate: bool = False
) -> Tuple[PeriodicOrbitFamily, PeriodicOrbitFamily]:
    """The two isolated bouncing-ball orbits along the ellipse axes.

    Returns:
        (minor-axis orbit, major-axis orbit), each with S = 0 and c = 1/2

    Raises:
        DegenerateOrbitError: circle, where both join the diameter family
    """
    if shape.is_circle and not allow_degenerate:
        raise DegenerateOrbitError("Axis orbits merge into the diameter family of the circle")
    if shape.b > shape.a:
        raise DomainError(f"Ellipse must have b <= a, got sigma={shape.sigma}")
    a, b = shape.a, shape.b
    minor = PeriodicOrbitFamily(
        kind=FamilyKind.ISOLATED,
        n=2,
        m=1,
        length=4.0 * b,
        area=0.0,
        c=0.5,
        vertices=[(0.0, -b), (0.0, b)],
        stability_trace=monodromy_trace(2.0 * b, a * a / b),
        label="I-minor",
    )
    major = PeriodicOrbitFamily(
        kind=FamilyKind.ISOLATED,
        n=2,
        m=1,
        length=4.0 * a,
        area=0.0,
        c=0.5,
        vertices=[(-a, 0.0), (a, 0.0)],
        stability_trace=monodromy_trace(2.0 * a, b * b / a),
        label="I-major",
    )
    for orbit in (minor, major):
        logger.debug(
            f"axis orbit {orbit.label}: L={orbit.length:.6f}, trace={orbit.stability_trace:.6f} "
            f"({stability_label(orbit.stability_trace)})"
        )
    return minor, major
