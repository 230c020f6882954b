"""
Periodic orbit model.

Represents billiard bounce states and periodic-orbit families with the
geometric data that enters the semiclassical amplitude c*S/sqrt(L).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from core.models.shape import ConfocalConic


Vector = Tuple[float, float]


class FamilyKind(Enum):
    """Enumeration of orbit family kinds."""

    ROTATIONAL = "R"
    LIBRATIONAL = "O"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class BounceState:
    """
    Point on the boundary with an inward unit velocity.

    Attributes:
        point: Boundary position
        direction: Unit velocity pointing into the billiard
        chord: Length of the chord that arrived at ``point`` (0 at launch)
    """

    point: Vector
    direction: Vector
    chord: float = 0.0


@dataclass
class PeriodicOrbitFamily:
    """
    One periodic-orbit family (or an isolated orbit).

    For ellipse type-R families ``n`` counts bounces and ``m`` revolutions;
    for type-O families ``m`` counts librations between the hyperbola
    branches. Rectangle families store the winding pair (p, q) in (n, m).

    Attributes:
        kind: Family kind
        n: Bounces per period
        m: Winding number
        length: Orbit length L per period
        area: Position-space area S covered by the family
        c: Momentum-space factor (1/2 or 1)
        caustic: Caustic conic (None for isolated orbits and non-ellipse tables)
        repetition: Number of traversals of the primitive orbit
        vertices: Bounce points of one representative orbit
        stability_trace: Monodromy trace (isolated orbits only)
        label: Display label such as "R3,1", "2O4" or "(1,0)"
    """

    kind: FamilyKind
    n: int
    m: int
    length: float
    area: float
    c: float
    caustic: Optional[ConfocalConic] = None
    repetition: int = 1
    vertices: List[Vector] = field(default_factory=list)
    stability_trace: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        """Validate family after initialization."""
        if not self.length > 0:
            raise ValueError(f"Orbit length must be positive, got {self.length}")
        if self.area < 0:
            raise ValueError(f"Covered area must be non-negative, got {self.area}")
        if self.kind == FamilyKind.ISOLATED and self.area != 0:
            raise ValueError("Isolated orbits cover no area")
        if not self.label:
            self.label = self.default_label()

    @property
    def primitive(self) -> bool:
        return self.repetition == 1

    @property
    def amplitude(self) -> float:
        """Semiclassical weight c*S/sqrt(L)."""
        return self.c * self.area / self.length ** 0.5

    @property
    def lam(self) -> Optional[float]:
        return self.caustic.lam if self.caustic else None

    def default_label(self) -> str:
        prefix = f"{self.repetition}" if self.repetition > 1 else ""
        if self.kind == FamilyKind.ROTATIONAL:
            return f"{prefix}R{self.n},{self.m}"
        if self.kind == FamilyKind.LIBRATIONAL:
            return f"{prefix}O{self.n}" + (f",{self.m}" if self.m != 1 else "")
        return f"{prefix}I{self.n},{self.m}"

    def repeated(self, times: int) -> "PeriodicOrbitFamily":
        """The family traversed ``times`` times: same caustic, length scaled."""
        base_label = self.label[len(str(self.repetition)):] if self.repetition > 1 else self.label
        return PeriodicOrbitFamily(
            kind=self.kind,
            n=self.n,
            m=self.m,
            length=self.length * times,
            area=self.area,
            c=self.c,
            caustic=self.caustic,
            repetition=self.repetition * times,
            vertices=list(self.vertices),
            stability_trace=self.stability_trace,
            label=f"{self.repetition * times}{base_label}",
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert family to the orbit-catalog JSON record."""
        return {
            "label": self.label,
            "kind": self.kind.value,
            "n": self.n,
            "m": self.m,
            "repetition": self.repetition,
            "L": self.length,
            "S": self.area,
            "c": self.c,
            "lambda": self.lam,
            "stability_trace": self.stability_trace,
            "vertices": [list(v) for v in self.vertices],
        }

    def __repr__(self) -> str:
        return f"PeriodicOrbitFamily({self.label}, L={self.length:.6f}, S={self.area:.6f}, c={self.c})"
