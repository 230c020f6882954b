"""
Length Engine - length spectra compared with periodic-orbit theory.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from core.exceptions import BilliardError, ContractViolation
from core.models import (
    BilliardShape,
    LengthSpectrum,
    MatchRow,
    Peak,
    PeriodicOrbitFamily,
    ShapeKind,
    Spectrum,
    TheoryPeak,
)
from engines.base_engine import BaseEngine
from engines.length.fourier import detect_peaks, half_width_dispersion, length_spectrum
from engines.length.matching import match_report, theory_peaks


@dataclass
class LengthAnalysis:
    """
    Result of one numeric-versus-theory length-spectrum comparison.

    Attributes:
        spectrum: Length spectrum of the levels
        peaks: Detected peaks
        theory: Theory peaks of the catalog
        rows: Match report
        dispersion: max/min half width of the prominent peaks
        reference: Label of the normalizing family
    """

    spectrum: LengthSpectrum
    peaks: List[Peak]
    theory: List[TheoryPeak]
    rows: List[MatchRow]
    dispersion: float
    reference: str
    meta: Dict[str, Any] = field(default_factory=dict)


def default_reference(shape: BilliardShape, catalog: Sequence[PeriodicOrbitFamily]) -> str:
    """Normalizing family: shortest rectangle orbit, circle diameter, ellipse R3,1."""
    if not catalog:
        raise ContractViolation("Cannot pick a reference family from an empty catalog")
    if shape.kind == ShapeKind.RECTANGLE:
        return min(catalog, key=lambda f: f.length).label
    return "R2,1" if shape.is_circle else "R3,1"


class LengthEngine(BaseEngine):
    """Fourier length spectra, peak detection and orbit matching."""

    DEFAULT_CONFIG = {
        "l_max": 12.0,
        "l_min": 1.0,
        "dl": None,
        "min_height": 0.05,
        "taper": False,
        "min_levels": 200,
        "dispersion_fraction": 0.25,
    }

    def __init__(self):
        """Initialize Length Engine."""
        super().__init__("LengthEngine", version="1.0.0")

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate grid and detection settings."""
        try:
            return (
                float(config["l_max"]) > float(config["l_min"]) >= 0
                and (config["dl"] is None or float(config["dl"]) > 0)
                and 0 < float(config["min_height"]) < 1
                and int(config["min_levels"]) >= 1
                and 0 < float(config["dispersion_fraction"]) <= 1
            )
        except (KeyError, TypeError, ValueError):
            return False

    def analyze(
        self,
        spectrum: Spectrum,
        catalog: Sequence[PeriodicOrbitFamily],
        reference: Optional[Union[str, PeriodicOrbitFamily]] = None,
        window: Optional[Tuple[float, float]] = None,
    ) -> LengthAnalysis:
        """Length spectrum of ``spectrum`` matched against ``catalog``.

        Args:
            spectrum: Converged levels (merged classes for ellipses)
            catalog: Orbit families up to at least ``l_max``
            reference: Normalizing family (default per billiard kind)
            window: Momentum window (default: all converged levels)

        Returns:
            LengthAnalysis
        """
        cfg = self.config
        operation = f"analyze {spectrum.symmetry_label} x{spectrum.converged_count}"
        self._start(operation)
        try:
            if reference is None:
                if spectrum.shape is None:
                    raise ContractViolation("A reference family is required for shapeless spectra")
                reference = default_reference(spectrum.shape, catalog)
            ls = length_spectrum(
                spectrum,
                window=window,
                l_max=float(cfg["l_max"]),
                dl=cfg["dl"],
                taper=bool(cfg["taper"]),
                min_levels=int(cfg["min_levels"]),
            )
            peaks = detect_peaks(ls, float(cfg["min_height"]), float(cfg["l_min"]))
            in_range = [f for f in catalog if cfg["l_min"] <= f.length <= cfg["l_max"]]
            theory = theory_peaks(in_range, reference)
            rows = match_report(peaks, theory)
        except BilliardError as exc:
            self._fail(operation, exc)
            raise
        dispersion = half_width_dispersion(peaks, float(cfg["dispersion_fraction"]))
        label = reference if isinstance(reference, str) else reference.label
        self.logger.info(
            f"[{self.name}] {operation}: {len(peaks)} peaks, half-width dispersion {dispersion:.3f}"
        )
        return LengthAnalysis(
            spectrum=ls,
            peaks=peaks,
            theory=theory,
            rows=rows,
            dispersion=dispersion,
            reference=label,
            meta={"nominal_half_width": ls.nominal_half_width, "window": list(ls.window)},
        )
