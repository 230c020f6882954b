"""
Orbit Engine - periodic-orbit catalogs and classical invariant checks.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

from core.exceptions import BilliardError, InvariantFailure
from core.models import BilliardShape, ConicKind, FamilyKind, PeriodicOrbitFamily, ShapeKind
from engines.base_engine import BaseEngine
from engines.orbits.billiard_map import caustic_invariant, tangency_distance, trajectory
from engines.orbits.catalogs import DEFAULT_N_MAX, eb_catalog, rb_catalog
from engines.orbits.families import family_length_constancy, find_family, member_state


@dataclass
class InvariantReport:
    """
    Worst-case deviations of the classical invariants over a catalog.

    Attributes:
        families: Number of continuous families checked
        confocality: Max |caustic foci - billiard foci|
        tangency: Max chord-to-caustic distance along representatives
        length_spread: Max relative length spread within a family
        lambda_drift: Max caustic-parameter drift along long trajectories
        speed_drift: Max | |direction| - 1 | after a reflection
        thresholds: Limits each deviation is compared against
        failures: Names of the checks that exceeded their limit
    """

    families: int = 0
    confocality: float = 0.0
    tangency: float = 0.0
    length_spread: float = 0.0
    lambda_drift: float = 0.0
    speed_drift: float = 0.0
    thresholds: Dict[str, float] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


class OrbitEngine(BaseEngine):
    """Classical periodic orbits of rectangle, circle and ellipse billiards."""

    DEFAULT_CONFIG = {
        "bisection_tol": 1e-14,
        "closure_tol": 1e-9,
        "n_max": DEFAULT_N_MAX,
        "repetitions": True,
        "max_families": None,
        "length_starts": 100,
        "trajectory_bounces": 1000,
        "confocality_tol": 1e-8,
        "tangency_tol": 1e-9,
        "length_spread_tol": 1e-8,
        "lambda_drift_tol": 1e-9,
        "speed_tol": 1e-14,
    }

    def __init__(self):
        """Initialize Orbit Engine."""
        super().__init__("OrbitEngine", version="1.0.0")
        self.skipped: List[Dict[str, Any]] = []

    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate search tolerances and invariant limits."""
        try:
            tolerances = (
                "bisection_tol",
                "closure_tol",
                "confocality_tol",
                "tangency_tol",
                "length_spread_tol",
                "lambda_drift_tol",
                "speed_tol",
            )
            return (
                all(float(config[key]) > 0 for key in tolerances)
                and int(config["n_max"]) >= 2
                and int(config["length_starts"]) >= 2
                and int(config["trajectory_bounces"]) >= 1
            )
        except (KeyError, TypeError, ValueError):
            return False

    @property
    def family_config(self) -> Dict[str, float]:
        return {"bisection_tol": self.config["bisection_tol"], "closure_tol": self.config["closure_tol"]}

    def family(self, shape: BilliardShape, n: int, m: int, kind: FamilyKind) -> PeriodicOrbitFamily:
        """Locate one family (see ``find_family``)."""
        return find_family(shape, n, m, kind, self.family_config)

    def catalog(self, shape: BilliardShape, l_max: float) -> List[PeriodicOrbitFamily]:
        """Families with L <= l_max, sorted by length.

        Args:
            shape: Rectangle or ellipse (the circle is the ellipse with sigma = 1)
            l_max: Length cutoff

        Returns:
            Catalog; ellipse families that fail to close end up in ``self.skipped``
        """
        operation = f"catalog {shape.kind.value} sigma={shape.sigma:.6g} l_max={l_max}"
        self._start(operation)
        self.skipped = []
        try:
            if shape.kind == ShapeKind.RECTANGLE:
                families = rb_catalog(shape.a, shape.b, l_max, self.config["max_families"])
            else:
                families = eb_catalog(
                    shape,
                    l_max,
                    n_max=int(self.config["n_max"]),
                    repetitions=bool(self.config["repetitions"]),
                    max_families=self.config["max_families"],
                    config=self.family_config,
                    skipped=self.skipped,
                )
        except BilliardError as exc:
            self._fail(operation, exc)
            raise
        self.logger.info(f"[{self.name}] {operation}: {len(families)} families")
        return families

    def invariant_report(
        self, shape: BilliardShape, families: List[PeriodicOrbitFamily], raise_on_failure: bool = False
    ) -> InvariantReport:
        """Check confocality, tangency, length constancy and caustic conservation.

        Args:
            shape: Ellipse billiard the families belong to
            families: Catalog entries (isolated orbits and repetitions are skipped)
            raise_on_failure: Raise InvariantFailure instead of returning a failed report

        Returns:
            InvariantReport with the worst deviation of each check
        """
        cfg = self.config
        report = InvariantReport(
            thresholds={
                "confocality": cfg["confocality_tol"],
                "tangency": cfg["tangency_tol"],
                "length_spread": cfg["length_spread_tol"],
                "lambda_drift": cfg["lambda_drift_tol"],
                "speed_drift": cfg["speed_tol"],
            }
        )
        focal = shape.focal_distance
        for family in families:
            if family.kind == FamilyKind.ISOLATED or not family.primitive or family.caustic is None:
                continue
            report.families += 1
            caustic = family.caustic
            if caustic.semi_x > 0:
                report.confocality = max(report.confocality, abs(caustic.focal_distance - focal))

            alpha = 0.5 * math.pi if caustic.kind == ConicKind.ELLIPSE else 0.0
            start = member_state(shape, caustic, alpha)
            states = trajectory(shape, start, int(cfg["trajectory_bounces"]))
            for state in states[: family.n + 1]:
                report.tangency = max(report.tangency, tangency_distance(shape, state, caustic.lam))
            lams = [caustic_invariant(shape, s, allow_degenerate=True) for s in states]
            report.lambda_drift = max(report.lambda_drift, max(abs(v - lams[0]) for v in lams))
            report.speed_drift = max(
                report.speed_drift, max(abs(math.hypot(*s.direction) - 1.0) for s in states)
            )
            report.length_spread = max(
                report.length_spread, family_length_constancy(shape, family, int(cfg["length_starts"]))
            )

        report.failures = [
            name for name, limit in report.thresholds.items() if getattr(report, name) >= limit
        ]
        status = "passed" if report.passed else f"failed {report.failures}"
        self.logger.info(f"[{self.name}] invariant_report ({report.families} families): {status}")
        if raise_on_failure and not report.passed:
            raise InvariantFailure(f"Orbit invariants violated: {report.failures}")
        return report
