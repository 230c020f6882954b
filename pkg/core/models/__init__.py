"""
Core models for the billiard toolkit.
"""

from .shape import (
    CONVENTIONS,
    ODD_ODD,
    BilliardShape,
    ConfocalConic,
    ConicKind,
    Conventions,
    Parity,
    ShapeKind,
    SymmetryClass,
    area,
    confocal_conic,
    ellipse_from_sigma,
    perimeter,
    rectangle,
)
from .spectrum import MERGED, AngularKind, BasisFunction, Spectrum
from .orbit import BounceState, FamilyKind, PeriodicOrbitFamily
from .statistics import EnsembleSpec, StatCurve, StatisticKind, UnfoldedSpectrum, smooth_staircase
from .length import LengthSpectrum, MatchRow, Peak, TheoryPeak, nominal_half_width

__all__ = [
    # shape exports
    "CONVENTIONS",
    "ODD_ODD",
    "BilliardShape",
    "ConfocalConic",
    "ConicKind",
    "Conventions",
    "Parity",
    "ShapeKind",
    "SymmetryClass",
    "area",
    "confocal_conic",
    "ellipse_from_sigma",
    "perimeter",
    "rectangle",
    # spectrum exports
    "MERGED",
    "AngularKind",
    "BasisFunction",
    "Spectrum",
    # orbit exports
    "BounceState",
    "FamilyKind",
    "PeriodicOrbitFamily",
    # statistics exports
    "EnsembleSpec",
    "StatCurve",
    "StatisticKind",
    "UnfoldedSpectrum",
    "smooth_staircase",
    # length-spectrum exports
    "LengthSpectrum",
    "MatchRow",
    "Peak",
    "TheoryPeak",
    "nominal_half_width",
]
