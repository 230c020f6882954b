"""
Spectrum model.

Represents an ordered list of quantum eigenvalues together with their
provenance and the number of levels certified as converged.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from core.exceptions import ContractViolation
from core.models.shape import CONVENTIONS, BilliardShape, SymmetryClass


MERGED = "merged"


class AngularKind(Enum):
    """Angular factor of a quarter-disk basis function."""

    SINE = "sine"
    COSINE = "cosine"


@dataclass(frozen=True)
class BasisFunction:
    """
    Dirichlet eigenfunction of the unit quarter disk.

    phi(r, theta) = N J_m(zero * r) * {sin|cos}(m theta)

    Attributes:
        m: Angular index
        s: Radial index (1-based)
        zero: s-th positive zero of J_m
        angular: Angular factor kind
    """

    m: int
    s: int
    zero: float
    angular: AngularKind


@dataclass
class Spectrum:
    """
    Ascending eigenvalues (energies) of a billiard.

    Attributes:
        shape: Billiard the levels belong to (None for synthetic spectra)
        symmetry: Symmetry class, or the string "merged"
        eigenvalues: Ascending energies, k_i = sqrt(eigenvalue)
        converged_count: Leading levels certified converged
        meta: Solver identifier, basis size, tolerances
    """

    shape: Optional[BilliardShape]
    symmetry: Any
    eigenvalues: np.ndarray
    converged_count: int
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        """Validate spectrum after initialization."""
        self.eigenvalues = np.asarray(self.eigenvalues, dtype=float)
        if self.eigenvalues.ndim != 1:
            raise ContractViolation("Eigenvalues must be a one-dimensional array")
        if self.eigenvalues.size and np.any(np.diff(self.eigenvalues) < 0):
            raise ContractViolation("Eigenvalues must be non-decreasing")
        if self.eigenvalues.size and self.eigenvalues[0] <= 0:
            raise ContractViolation("Eigenvalues must be positive")
        if not 0 <= self.converged_count <= self.eigenvalues.size:
            raise ContractViolation(
                f"converged_count {self.converged_count} exceeds {self.eigenvalues.size} levels"
            )

    @property
    def converged(self) -> np.ndarray:
        """Levels certified converged; only these feed statistics."""
        return self.eigenvalues[: self.converged_count]

    @property
    def momenta(self) -> np.ndarray:
        """Eigen-momenta of the converged levels."""
        return CONVENTIONS.momentum(self.converged)

    @property
    def symmetry_label(self) -> str:
        if isinstance(self.symmetry, SymmetryClass):
            return self.symmetry.label
        return str(self.symmetry)

    @property
    def is_complete(self) -> bool:
        """True when every stored level is converged."""
        return self.converged_count == self.eigenvalues.size

    @property
    def is_partial(self) -> bool:
        """True when the solver stopped short of the requested level count."""
        return bool(self.meta.get("partial", False))

    def staircase(self, energy) -> np.ndarray:
        """Spectral staircase N(energy) over converged levels."""
        return np.searchsorted(self.converged, energy, side="right")

    def to_dict(self) -> Dict[str, Any]:
        """Convert spectrum header fields to dictionary."""
        return {
            "shape": self.shape.to_dict() if self.shape else None,
            "symmetry": self.symmetry_label,
            "count": int(self.eigenvalues.size),
            "converged_count": int(self.converged_count),
            "meta": self.meta,
        }

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    def __repr__(self) -> str:
        return (
            f"Spectrum(symmetry={self.symmetry_label}, levels={len(self)}, "
            f"converged={self.converged_count})"
        )
