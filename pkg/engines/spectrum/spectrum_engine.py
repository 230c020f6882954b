"""
Spectrum Engine - build, cache and merge billiard spectra.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from core.exceptions import BilliardError
from core.models import BilliardShape, ShapeKind, Spectrum, SymmetryClass, ellipse_from_sigma
from engines.base_engine import BaseEngine
from engines.spectrum.bessel import cb_spectrum
from engines.spectrum.cache import SpectrumCache
from engines.spectrum.ellipse import DEFAULT_SOLVER_CONFIG, eb_spectrum, initial_cutoff
from engines.spectrum.merge import merge_classes
from engines.spectrum.rectangle import rb_spectrum


class SpectrumEngine(BaseEngine):
    """Quantum spectra of rectangle, circle and ellipse billiards."""

    DEFAULT_CONFIG = {
        **DEFAULT_SOLVER_CONFIG,
        "degeneracy_tol": 1e-8,
        "cache_dir": None,
    }

    def __init__(self, cache_dir: Optional[Union[str, Path]] = None):
        """Initialize Spectrum Engine.

        Args:
            cache_dir: Spectrum cache directory (no caching when None)
        """
        super().__init__("SpectrumEngine", version="1.0.0")
        if cache_dir is not None:
            self.config["cache_dir"] = str(cache_dir)

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate solver tolerances and quadrature sizes."""
        try:
            return (
                int(config["radial_nodes"]) >= 64
                and int(config["angular_nodes"]) >= 256
                and float(config["oversampling"]) >= 1.0
                and float(config["growth"]) > 1.0
                and 0 < float(config["convergence_tol"]) < 1
                and int(config["max_rounds"]) >= 1
                and float(config["degeneracy_tol"]) >= 0
            )
        except (KeyError, TypeError, ValueError):
            return False

    @property
    def cache(self) -> Optional[SpectrumCache]:
        directory = self.config.get("cache_dir")
        if not directory:
            return None
        if getattr(self, "_cache", None) is None or self._cache.directory != Path(directory):
            self._cache = SpectrumCache(directory)
        return self._cache

    @property
    def solver_config(self) -> Dict[str, Any]:
        return {key: self.config[key] for key in DEFAULT_SOLVER_CONFIG}

    def _cached(self, params: Dict[str, Any], build) -> Spectrum:
        if self.cache is None:
            return build()
        return self.cache.get_or_build(params, build)

    def build(
        self, shape: BilliardShape, symmetry: Optional[SymmetryClass], count: int
    ) -> Spectrum:
        """Spectrum of a shape in one symmetry class.

        Args:
            shape: Billiard (rectangles ignore ``symmetry``)
            symmetry: Symmetry class of ellipse/circle levels
            count: Converged levels wanted

        Returns:
            Spectrum (cached when a cache directory is configured)
        """
        operation = f"build {shape.kind.value} {symmetry or ''} x{count}"
        self._start(operation)
        try:
            if shape.kind == ShapeKind.RECTANGLE:
                params = {"kind": "rectangle", "a": shape.a, "b": shape.b, "count": count}
                return self._cached(params, lambda: rb_spectrum(shape.a, shape.b, count))
            if shape.is_circle:
                params = {"kind": "circle", "symmetry": symmetry.label, "count": count}
                return self._cached(params, lambda: cb_spectrum(symmetry, count))
            return self.ellipse(shape.sigma, symmetry, count)
        except BilliardError as exc:
            self._fail(operation, exc)
            raise

    def ellipse(self, sigma: float, symmetry: SymmetryClass, count: int) -> Spectrum:
        """Rayleigh-Ritz spectrum of the quarter ellipse (cached)."""
        solver = self.solver_config
        k_cut = initial_cutoff(symmetry, count, solver["oversampling"])
        params = {
            "kind": "ellipse",
            "sigma": sigma,
            "symmetry": symmetry.label,
            "count": count,
            "k_cut": k_cut,
            "solver": solver,
        }
        return self._cached(
            params, lambda: eb_spectrum(sigma, symmetry, count, {**solver, "k_cut": k_cut})
        )

    def circle(self, symmetry: SymmetryClass, count: int) -> Spectrum:
        return self.build(ellipse_from_sigma(1.0), symmetry, count)

    def merged(
        self,
        shape: BilliardShape,
        count_per_class: int,
        classes: Optional[Sequence[SymmetryClass]] = None,
    ) -> Spectrum:
        """All four classes merged, near-degenerate partners removed."""
        spectra: List[Spectrum] = [
            self.build(shape, symmetry, count_per_class)
            for symmetry in (classes or SymmetryClass.all())
        ]
        return merge_classes(spectra, self.config["degeneracy_tol"])
