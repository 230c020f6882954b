"""
Exact bounce map of the ellipse billiard and its conserved caustic parameter.

A chord of an ellipse trajectory stays tangent to one conic of the confocal
family x^2/(f^2 + lam) + y^2/lam = 1. Elliptic caustics (lam > 0) give
rotational motion, hyperbolic ones (lam < 0) libration through the focal
segment.
"""

import logging
import math
from fractions import Fraction
from typing import List, NamedTuple, Tuple

import numpy as np
from scipy import integrate

from core.exceptions import DegenerateOrbitError, DomainError
from core.models import BilliardShape, BounceState, ShapeKind

logger = logging.getLogger(__name__)

TANGENT_DISCRIMINANT = 1e-14
DEGENERATE_LAMBDA = 1e-14


class RotationNumber(NamedTuple):
    """Rotation number estimate from a finite trajectory."""

    value: float
    error: float

    def as_fraction(self) -> Fraction:
        """Closest fraction with denominator resolvable by the error bar."""
        return Fraction(self.value).limit_denominator(max(1, int(1.0 / max(self.error, 1e-12)) // 2))


def _require_ellipse(shape: BilliardShape) -> None:
    if shape.kind != ShapeKind.ELLIPSE:
        raise DomainError("The bounce map is implemented for ellipse billiards only")
    if shape.b > shape.a:
        raise DomainError(f"Ellipse must have b <= a, got sigma={shape.sigma}")


def boundary_hits(shape: BilliardShape, point, direction) -> Tuple[float, float]:
    """Both line parameters t where point + t*direction meets the boundary."""
    px, py = point
    dx, dy = direction
    a2, b2 = shape.a ** 2, shape.b ** 2
    qa = dx * dx / a2 + dy * dy / b2
    qb = 2.0 * (px * dx / a2 + py * dy / b2)
    qc = px * px / a2 + py * py / b2 - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < TANGENT_DISCRIMINANT:
        raise DegenerateOrbitError(f"Ray from {point} along {direction} is tangent to the boundary")
    root = math.sqrt(disc)
    # stable pair: q has no cancellation, the other root is c/q
    q = -0.5 * (qb + math.copysign(root, qb))
    t1, t2 = q / qa, qc / q
    return (t1, t2) if t1 <= t2 else (t2, t1)


def _on_boundary(shape: BilliardShape, x: float, y: float) -> Tuple[float, float]:
    scale = math.sqrt(x * x / shape.a ** 2 + y * y / shape.b ** 2)
    return x / scale, y / scale


def _normalized(x: float, y: float) -> Tuple[float, float]:
    norm = math.hypot(x, y)
    return x / norm, y / norm


def outward_normal(shape: BilliardShape, point) -> Tuple[float, float]:
    return _normalized(point[0] / shape.a ** 2, point[1] / shape.b ** 2)


def billiard_map(shape: BilliardShape, state: BounceState) -> BounceState:
    """Next bounce: exact chord intersection followed by specular reflection.

    Args:
        shape: Ellipse billiard
        state: Boundary point with inward unit velocity

    Returns:
        State at the next boundary point; ``chord`` is the travelled length
    """
    _require_ellipse(shape)
    (px, py), (dx, dy) = state.point, state.direction
    a2, b2 = shape.a ** 2, shape.b ** 2
    qa = dx * dx / a2 + dy * dy / b2
    qb = 2.0 * (px * dx / a2 + py * dy / b2)
    qc = px * px / a2 + py * py / b2 - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < TANGENT_DISCRIMINANT:
        raise DegenerateOrbitError(f"Chord from {state.point} is tangent to the boundary")
    t = 0.5 * (-qb + math.sqrt(disc)) / qa
    if not t > 0:
        raise DegenerateOrbitError(f"Direction {state.direction} does not point inward")

    x, y = _on_boundary(shape, px + t * dx, py + t * dy)
    nx, ny = outward_normal(shape, (x, y))
    dot = dx * nx + dy * ny
    rx, ry = _normalized(dx - 2.0 * dot * nx, dy - 2.0 * dot * ny)
    return BounceState(point=(x, y), direction=(rx, ry), chord=math.hypot(x - px, y - py))


def trajectory(shape: BilliardShape, state: BounceState, bounces: int) -> List[BounceState]:
    """States after each of ``bounces`` bounces, the start included first."""
    states = [state]
    for _ in range(bounces):
        states.append(billiard_map(shape, states[-1]))
    return states


def caustic_invariant(
    shape: BilliardShape, state: BounceState, allow_degenerate: bool = False
) -> float:
    """Confocal parameter lam of the conic tangent to the outgoing chord.

    The line n.p = h with unit normal n touches x^2/P + y^2/Q = 1 iff
    h^2 = P nx^2 + Q ny^2; with P = f^2 + lam and Q = lam this is linear in lam.
    """
    _require_ellipse(shape)
    (px, py), (dx, dy) = state.point, state.direction
    f2 = shape.focal_distance ** 2
    lam = (px * dy - py * dx) ** 2 - f2 * dy * dy
    if not allow_degenerate and abs(lam) <= DEGENERATE_LAMBDA * max(1.0, f2):
        raise DegenerateOrbitError(f"Chord from {state.point} passes through a focus")
    return lam


def tangency_distance(shape: BilliardShape, state: BounceState, lam: float) -> float:
    """Distance between the chord line and the parallel tangent of the caustic."""
    (px, py), (dx, dy) = state.point, state.direction
    nx, ny = -dy, dx
    offset = abs(nx * px + ny * py)
    support = shape.focal_distance ** 2 * nx * nx + lam
    return abs(offset - math.sqrt(max(support, 0.0)))


def launch_state(shape: BilliardShape, lam: float) -> BounceState:
    """Boundary state whose chord is tangent to the caustic of parameter lam.

    Elliptic caustics: horizontal chord y = -sqrt(lam) from the left.
    Hyperbolic caustics: vertical chord x = sqrt(f^2 + lam) from below.
    """
    _require_ellipse(shape)
    f2 = shape.focal_distance ** 2
    if 0.0 < lam < shape.b ** 2:
        y = -math.sqrt(lam)
        x = -shape.a * math.sqrt(1.0 - lam / shape.b ** 2)
        return BounceState(point=(x, y), direction=(1.0, 0.0))
    if -f2 < lam < 0.0:
        x = math.sqrt(f2 + lam)
        y = -shape.b * math.sqrt(1.0 - x * x / shape.a ** 2)
        return BounceState(point=(x, y), direction=(0.0, 1.0))
    if lam == 0.0:
        raise DegenerateOrbitError("lam = 0 is the separatrix through the foci")
    raise DomainError(f"Caustic parameter {lam} outside ({-f2}, 0) and (0, {shape.b ** 2})")


def rotation_number(shape: BilliardShape, lam: float, iterations: int = 2000) -> RotationNumber:
    """Rotation number measured along a trajectory tangent to the caustic.

    Rotational motion: winding of the polar angle per bounce over 2 pi.
    Librational motion: half the number of sign changes of x per bounce,
    i.e. libration cycles per bounce.

    Args:
        shape: Ellipse billiard
        lam: Caustic parameter
        iterations: Bounces to follow

    Returns:
        RotationNumber(value, error) with error ~ 1/iterations
    """
    if iterations < 1:
        raise DomainError(f"iterations must be positive, got {iterations}")
    states = trajectory(shape, launch_state(shape, lam), iterations)
    points = np.array([s.point for s in states])
    if lam > 0:
        angles = np.unwrap(np.arctan2(points[:, 1], points[:, 0]))
        value = abs(angles[-1] - angles[0]) / (2.0 * math.pi * iterations)
        return RotationNumber(value, 1.0 / iterations)
    crossings = np.count_nonzero(np.diff(np.sign(points[:, 0])) != 0)
    return RotationNumber(crossings / (2.0 * iterations), 1.0 / iterations)


def _singular_integral(func, slope: float, lo: float, hi: float) -> float:
    """Integral of 1/sqrt(func) over [lo, hi] where func(lo) = 0, func'(lo) = slope."""

    def regular(x):
        value = func(x)
        if x - lo <= 0.0 or value <= 0.0:
            return 1.0 / math.sqrt(slope)
        return math.sqrt((x - lo) / value)

    result, _ = integrate.quad(
        regular, lo, hi, weight="alg", wvar=(-0.5, 0.0), epsabs=1e-14, epsrel=1e-12, limit=200
    )
    return result


def _regular_integral(func, lo: float, hi: float) -> float:
    result, _ = integrate.quad(
        lambda x: 1.0 / math.sqrt(func(x)), lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200
    )
    return result


def rotation_number_exact(shape: BilliardShape, lam: float) -> float:
    """Rotation number from the action integrals in elliptic coordinates.

    With p_mu^2 = f^2 sinh^2 mu - lam and p_nu^2 = f^2 sin^2 nu + lam, the
    rotation number is the ratio of the mu-period per bounce to the
    nu-period per revolution (rotational) or per libration (librational).
    """
    _require_ellipse(shape)
    if shape.is_circle:
        if not 0.0 < lam < shape.b ** 2:
            raise DomainError(f"Circle caustic parameter must lie in (0, {shape.b ** 2}), got {lam}")
        return math.acos(math.sqrt(lam) / shape.a) / math.pi

    f = shape.focal_distance
    f2 = f * f
    mu0 = math.atanh(shape.b / shape.a)

    def p_mu(mu):
        return f2 * math.sinh(mu) ** 2 - lam

    def p_nu(nu):
        return f2 * math.sin(nu) ** 2 + lam

    if 0.0 < lam < shape.b ** 2:
        mu_c = math.asinh(math.sqrt(lam) / f)
        i_mu = 2.0 * _singular_integral(p_mu, f2 * math.sinh(2.0 * mu_c), mu_c, mu0)
        i_nu = 4.0 * _regular_integral(p_nu, 0.0, 0.5 * math.pi)
    elif -f2 < lam < 0.0:
        nu_c = math.asin(math.sqrt(-lam) / f)
        i_mu = 2.0 * _regular_integral(p_mu, 0.0, mu0)
        i_nu = 4.0 * _singular_integral(p_nu, f2 * math.sin(2.0 * nu_c), nu_c, 0.5 * math.pi)
    elif lam == 0.0:
        raise DegenerateOrbitError("Rotation number is singular on the separatrix lam = 0")
    else:
        raise DomainError(f"Caustic parameter {lam} outside ({-f2}, 0) and (0, {shape.b ** 2})")
    return i_mu / i_nu
