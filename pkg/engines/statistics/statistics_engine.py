"""
Statistics Engine - ensemble construction and level statistics.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from core.exceptions import BilliardError, DomainError, InsufficientLevelsError
from core.models import (
    ODD_ODD,
    BilliardShape,
    EnsembleSpec,
    PeriodicOrbitFamily,
    Spectrum,
    StatCurve,
    SymmetryClass,
    UnfoldedSpectrum,
    ellipse_from_sigma,
    rectangle,
)
from engines.base_engine import BaseEngine
from engines.orbits.orbit_engine import OrbitEngine
from engines.spectrum.spectrum_engine import SpectrumEngine
from engines.statistics import measures, theory
from engines.statistics.ensemble import Ensemble, sample_ensemble, unfold

BILLIARDS = ("ellipse", "rectangle")


def sample_shape(billiard: str, sigma: float) -> BilliardShape:
    """Unit-area billiard with aspect ratio sigma."""
    if billiard == "ellipse":
        return ellipse_from_sigma(sigma)
    if billiard == "rectangle":
        return rectangle(1.0 / math.sqrt(sigma), math.sqrt(sigma))
    raise DomainError(f"Unknown ensemble billiard '{billiard}', expected one of {BILLIARDS}")


def _build_sample(task: Tuple[str, float, Optional[str], int, Dict[str, Any]]) -> Spectrum:
    billiard, sigma, symmetry, count, config = task
    engine = SpectrumEngine()
    engine.configure(config)
    return engine.build(
        sample_shape(billiard, sigma),
        SymmetryClass.parse(symmetry) if symmetry else None,
        count,
    )


class StatisticsEngine(BaseEngine):
    """Level statistics of billiard ensembles and their orbit-sum theory."""

    DEFAULT_CONFIG = {
        "bins": 50,
        "s_max": 5.0,
        "saturation_points": 16,
        "min_levels": 100,
        "workers": 1,
        "max_orbits": theory.MAX_ORBITS,
        "theory_samples": 10,
        "theory_l_max": 40.0,
    }

    def __init__(
        self,
        spectrum_engine: Optional[SpectrumEngine] = None,
        orbit_engine: Optional[OrbitEngine] = None,
    ):
        """Initialize Statistics Engine.

        Args:
            spectrum_engine: Engine building the sample spectra
            orbit_engine: Engine building the per-sample orbit catalogs
        """
        super().__init__("StatisticsEngine", version="1.0.0")
        self.spectrum_engine = spectrum_engine or SpectrumEngine()
        self.orbit_engine = orbit_engine or OrbitEngine()

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate histogram, window and parallelism settings."""
        try:
            return (
                int(config["bins"]) >= 1
                and float(config["s_max"]) > 0
                and int(config["saturation_points"]) >= 2
                and int(config["min_levels"]) >= 1
                and int(config["workers"]) >= 1
                and int(config["max_orbits"]) >= 1
                and int(config["theory_samples"]) >= 1
                and float(config["theory_l_max"]) > 0
            )
        except (KeyError, TypeError, ValueError):
            return False

    def build_ensemble(
        self,
        spec: EnsembleSpec,
        billiard: str = "ellipse",
        symmetry: Optional[SymmetryClass] = ODD_ODD,
    ) -> Ensemble:
        """Spectra for every sampled aspect ratio, in sample order.

        Args:
            spec: Ensemble specification
            billiard: "ellipse" (circle for centre 1) or "rectangle"
            symmetry: Symmetry class of ellipse levels (rectangles ignore it)

        Returns:
            Ensemble
        """
        operation = f"build_ensemble {billiard} center={spec.center} x{spec.samples}"
        self._start(operation)
        sigmas = sample_ensemble(spec)
        label = symmetry.label if (symmetry is not None and billiard == "ellipse") else None
        workers = int(self.config["workers"])
        try:
            if workers > 1:
                solver = dict(self.spectrum_engine.config)
                tasks = [(billiard, float(s), label, spec.levels_per_sample, solver) for s in sigmas]
                with ProcessPoolExecutor(max_workers=workers) as pool:
                    spectra = list(pool.map(_build_sample, tasks))
            else:
                spectra = [
                    self.spectrum_engine.build(
                        sample_shape(billiard, float(s)),
                        symmetry if label else None,
                        spec.levels_per_sample,
                    )
                    for s in sigmas
                ]
        except BilliardError as exc:
            self._fail(operation, exc)
            raise
        partial = sum(1 for s in spectra if s.is_partial)
        if partial:
            self.logger.warning(f"[{self.name}] {operation}: {partial} samples partially converged")
        return Ensemble(spec=spec, billiard=billiard, sigmas=sigmas, spectra=spectra)

    def unfold_ensemble(self, spectra: Sequence[Spectrum]) -> List[UnfoldedSpectrum]:
        """Unfold every sample; errors name the offending sample."""
        unfolded = []
        for sample_id, spectrum in enumerate(spectra):
            try:
                unfolded.append(unfold(spectrum, int(self.config["min_levels"])))
            except InsufficientLevelsError as exc:
                raise InsufficientLevelsError(f"sample {sample_id}: {exc}", sample_id=sample_id) from exc
        return unfolded

    def spacing(self, spectra: Sequence[Spectrum]) -> StatCurve:
        """P(s) of the unfolded ensemble."""
        self._start("spacing")
        return measures.spacing_distribution(
            self.unfold_ensemble(spectra), int(self.config["bins"]), float(self.config["s_max"])
        )

    def number_variance(
        self, spectra: Sequence[Spectrum], epsilon: float, widths: Sequence[float]
    ) -> StatCurve:
        self._start(f"number_variance epsilon={epsilon}")
        return measures.number_variance_curve(spectra, epsilon, widths)

    def rigidity(
        self, spectra: Sequence[Spectrum], epsilon: float, widths: Sequence[float]
    ) -> StatCurve:
        self._start(f"rigidity epsilon={epsilon}")
        return measures.rigidity_curve(spectra, epsilon, widths)

    def saturation(self, spectra: Sequence[Spectrum], epsilons: Sequence[float]) -> StatCurve:
        self._start("saturation")
        points = int(self.config["saturation_points"])
        return measures.rigidity_saturation_curve(spectra, epsilons, points)

    def global_variance(self, spectra: Sequence[Spectrum], epsilons: Sequence[float]) -> StatCurve:
        self._start("global_variance")
        return measures.global_variance_curve(spectra, epsilons)

    def catalogs(self, ensemble: Ensemble) -> List[List[PeriodicOrbitFamily]]:
        """Orbit catalogs of the first ``theory_samples`` samples, shortest orbits first."""
        catalogs = []
        for sigma in ensemble.sigmas[: int(self.config["theory_samples"])]:
            shape = sample_shape(ensemble.billiard, float(sigma))
            families = self.orbit_engine.catalog(shape, float(self.config["theory_l_max"]))
            catalogs.append(families[: int(self.config["max_orbits"])])
        return catalogs

    def sigma_theory(
        self,
        catalogs: Sequence[Sequence[PeriodicOrbitFamily]],
        epsilon: float,
        widths: Sequence[float],
        numeric: Optional[StatCurve] = None,
    ) -> Tuple[StatCurve, float]:
        """Orbit-sum Sigma(epsilon, E); kappa is fitted to ``numeric`` when given."""
        max_orbits = int(self.config["max_orbits"])
        kappa = 1.0
        if numeric is not None:
            kappa = theory.fit_amplitude_scale(numeric, catalogs, epsilon, max_orbits)
        return theory.sigma_theory_curve(catalogs, epsilon, widths, kappa, max_orbits), kappa

    def global_variance_theory(
        self,
        catalogs: Sequence[Sequence[PeriodicOrbitFamily]],
        epsilons: Sequence[float],
        kappa: float = 1.0,
    ) -> StatCurve:
        max_orbits = int(self.config["max_orbits"])
        return theory.global_variance_theory_curve(catalogs, epsilons, kappa, max_orbits)
