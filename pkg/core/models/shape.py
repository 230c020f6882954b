"""
Billiard geometry model.

Represents the billiard tables under study (rectangle, circle, ellipse), the
four reflection-symmetry classes of their eigenfunctions, the confocal conics
that act as caustics of ellipse trajectories, and the unit conventions that
tie energy, momentum and orbit period together.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple

from scipy import integrate

from core.exceptions import DomainError


class ShapeKind(Enum):
    """Enumeration of billiard table kinds."""

    RECTANGLE = "rectangle"
    ELLIPSE = "ellipse"


class Parity(Enum):
    """Parity of an eigenfunction under one axis reflection."""

    EVEN = "even"
    ODD = "odd"


class ConicKind(Enum):
    """Kind of a confocal conic."""

    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"


@dataclass(frozen=True)
class BilliardShape:
    """
    Geometry of a rectangle or an ellipse.

    Attributes:
        kind: Table kind
        a: Side length (rectangle) or semi-axis (ellipse) along x
        b: Side length (rectangle) or semi-axis (ellipse) along y
    """

    kind: ShapeKind
    a: float
    b: float

    def __post_init__(self):
        """Validate shape after initialization."""
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"Billiard sides must be positive, got a={self.a}, b={self.b}")

    @property
    def sigma(self) -> float:
        """Aspect ratio b/a."""
        return self.b / self.a

    @property
    def is_circle(self) -> bool:
        return self.kind == ShapeKind.ELLIPSE and self.a == self.b

    @property
    def focal_distance(self) -> float:
        """Focal half-distance f = sqrt(a^2 - b^2) of an ellipse with sigma <= 1."""
        if self.kind != ShapeKind.ELLIPSE:
            raise DomainError("Focal distance is defined for ellipses only")
        if self.b > self.a:
            raise DomainError(f"Focal distance needs sigma <= 1, got sigma={self.sigma}")
        return math.sqrt(self.a * self.a - self.b * self.b)

    def to_dict(self) -> Dict[str, Any]:
        """Convert shape to dictionary."""
        return {"kind": self.kind.value, "a": self.a, "b": self.b, "sigma": self.sigma}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BilliardShape":
        """Create shape from dictionary."""
        return cls(kind=ShapeKind(data["kind"]), a=float(data["a"]), b=float(data["b"]))

    def __repr__(self) -> str:
        return f"BilliardShape(kind={self.kind.value}, a={self.a!r}, b={self.b!r})"


@dataclass(frozen=True)
class SymmetryClass:
    """
    Reflection parities of an eigenfunction.

    ``x_parity`` is the parity under x -> -x, ``y_parity`` under y -> -y. The
    odd-odd class is the quarter billiard with Dirichlet edges on both axes.
    """

    x_parity: Parity
    y_parity: Parity

    @property
    def label(self) -> str:
        return f"{self.x_parity.value}-{self.y_parity.value}"

    @classmethod
    def parse(cls, label: str) -> "SymmetryClass":
        """Parse labels such as ``odd-odd`` or ``even-odd``."""
        try:
            x, y = label.strip().lower().split("-")
            return cls(Parity(x), Parity(y))
        except ValueError as exc:
            raise DomainError(f"Unknown symmetry class '{label}'") from exc

    @classmethod
    def all(cls) -> Tuple["SymmetryClass", ...]:
        """The four symmetry classes, odd-odd first."""
        return tuple(
            cls(x, y)
            for x, y in (
                (Parity.ODD, Parity.ODD),
                (Parity.ODD, Parity.EVEN),
                (Parity.EVEN, Parity.ODD),
                (Parity.EVEN, Parity.EVEN),
            )
        )

    def __str__(self) -> str:
        return self.label


ODD_ODD = SymmetryClass(Parity.ODD, Parity.ODD)


@dataclass(frozen=True)
class Conventions:
    """
    Unit conventions: hbar = 1, two degrees of freedom, energy = k^2.

    Every conversion between energy, momentum, orbit length and orbit
    period goes through this object.
    """

    hbar: float = 1.0
    dof: int = 2

    def momentum(self, energy):
        """Eigen-momentum k = sqrt(energy)."""
        return energy ** 0.5

    def energy(self, momentum):
        """Energy = k^2."""
        return momentum * momentum

    def period(self, length, energy):
        """Orbit period T = L / (2k) for the dispersion energy = k^2."""
        return length / (2.0 * self.momentum(energy))

    def length(self, period, energy):
        """Inverse of ``period``."""
        return 2.0 * period * self.momentum(energy)


CONVENTIONS = Conventions()


@dataclass(frozen=True)
class ConfocalConic:
    """
    Member of the confocal family x^2/(f^2 + lam) + y^2/lam = 1.

    Attributes:
        lam: Caustic parameter (positive for ellipses, negative for hyperbolas)
        kind: Conic kind
        semi_x: Semi-axis along x
        semi_y: Semi-axis along y
    """

    lam: float
    kind: ConicKind
    semi_x: float
    semi_y: float

    @property
    def focal_distance(self) -> float:
        if self.kind == ConicKind.ELLIPSE:
            return math.sqrt(self.semi_x ** 2 - self.semi_y ** 2)
        return math.sqrt(self.semi_x ** 2 + self.semi_y ** 2)

    def to_dict(self) -> Dict[str, Any]:
        """Convert conic to dictionary."""
        return {
            "lambda": self.lam,
            "kind": self.kind.value,
            "semi_x": self.semi_x,
            "semi_y": self.semi_y,
        }


def ellipse_from_sigma(sigma: float) -> BilliardShape:
    """Build the ellipse with aspect ratio sigma and a*b = 1.

    Args:
        sigma: Aspect ratio b/a

    Returns:
        Ellipse with a = 1/sqrt(sigma), b = sqrt(sigma)
    """
    if not sigma > 0:
        raise DomainError(f"Aspect ratio must be positive, got {sigma}")
    root = math.sqrt(sigma)
    return BilliardShape(ShapeKind.ELLIPSE, 1.0 / root, root)


def rectangle(a: float, b: float) -> BilliardShape:
    """Build a rectangle with sides a and b."""
    return BilliardShape(ShapeKind.RECTANGLE, float(a), float(b))


def perimeter(shape: BilliardShape, rel_tol: float = 1e-12) -> float:
    """Perimeter of the billiard.

    Ellipses use adaptive quadrature of the arc-length integrand over a quarter
    turn, which keeps the relative error well below 1e-10.
    """
    if shape.kind == ShapeKind.RECTANGLE:
        return 2.0 * (shape.a + shape.b)
    if shape.is_circle:
        return 2.0 * math.pi * shape.a

    a2, b2 = shape.a ** 2, shape.b ** 2
    quarter, _ = integrate.quad(
        lambda t: math.sqrt(a2 * math.sin(t) ** 2 + b2 * math.cos(t) ** 2),
        0.0,
        0.5 * math.pi,
        epsabs=0.0,
        epsrel=rel_tol,
        limit=200,
    )
    return 4.0 * quarter


def area(shape: BilliardShape) -> float:
    """Area of the billiard."""
    if shape.kind == ShapeKind.RECTANGLE:
        return shape.a * shape.b
    return math.pi * shape.a * shape.b


def confocal_conic(shape: BilliardShape, lam: float) -> ConfocalConic:
    """Conic of the confocal family of an ellipse billiard.

    Args:
        shape: Ellipse billiard
        lam: Caustic parameter, 0 < lam < b^2 (ellipse) or -f^2 < lam < 0 (hyperbola)

    Returns:
        ConfocalConic sharing the billiard foci
    """
    if shape.kind != ShapeKind.ELLIPSE:
        raise DomainError("Confocal conics are defined for ellipse billiards only")

    f2 = shape.focal_distance ** 2
    if 0.0 < lam < shape.b ** 2:
        kind = ConicKind.ELLIPSE
    elif -f2 < lam < 0.0:
        kind = ConicKind.HYPERBOLA
    else:
        raise DomainError(
            f"Caustic parameter {lam} outside (0, {shape.b ** 2}) and ({-f2}, 0)"
        )
    return ConfocalConic(lam=lam, kind=kind, semi_x=math.sqrt(f2 + lam), semi_y=math.sqrt(abs(lam)))
