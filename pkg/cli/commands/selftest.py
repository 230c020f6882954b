"""Selftest command: fast oracle checks over every engine."""

import logging
import math
from typing import List, NamedTuple

import numpy as np
from scipy import special

from cli.output import OutputWriter
from core.exceptions import InvariantFailure
from core.models import ODD_ODD, FamilyKind, ellipse_from_sigma, rectangle
from engines.length.matching import UNMATCHED
from engines.orbits.families import axis_orbits
from engines.spectrum.bessel import cb_spectrum
from engines.spectrum.rectangle import rb_spectrum
from engines.statistics import measures
from engines.statistics.ensemble import poisson_ensemble, unfold

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ["check", "value", "expected", "tolerance", "passed"]

R31_LENGTH = 6.0322
R31_SEMI_AXES = (1.228268, 0.09297)
O4_SEMI_AXES = (1.1547, 0.408248)


class Check(NamedTuple):
    name: str
    value: float
    expected: float
    tolerance: float
    relative: bool = False

    @property
    def deviation(self) -> float:
        error = abs(self.value - self.expected)
        return error / abs(self.expected) if self.relative else error

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.deviation <= self.tolerance


def add_command(subparsers):
    """Register the selftest command."""
    parser = subparsers.add_parser(
        "selftest",
        help="Run the built-in oracle checks",
        description=(
            "Check orbit geometry, classical invariants, circle levels, the Poisson "
            "baseline and the rectangle length spectrum against closed forms"
        ),
    )

    parser.add_argument(
        "--poisson-samples",
        type=int,
        default=None,
        help="Samples of the Poisson baseline (default: statistics.poisson_samples)",
    )

    parser.set_defaults(func=handle_selftest, overrides=selftest_overrides)


def selftest_overrides(args):
    return {"statistics": {"poisson_samples": args.poisson_samples}}


def geometry_checks(manager) -> List[Check]:
    shape = ellipse_from_sigma(0.5)
    engine = manager.orbits
    r31 = engine.family(shape, 3, 1, FamilyKind.ROTATIONAL)
    o4 = engine.family(shape, 4, 1, FamilyKind.LIBRATIONAL)
    minor, major = axis_orbits(shape)
    foci = math.sqrt(1.5)
    return [
        Check("R3,1 length", r31.length, R31_LENGTH, 1e-3),
        Check("R3,1 caustic semi_x", r31.caustic.semi_x, R31_SEMI_AXES[0], 1e-4),
        Check("R3,1 caustic semi_y", r31.caustic.semi_y, R31_SEMI_AXES[1], 1e-4),
        Check("R3,1 caustic foci", r31.caustic.focal_distance, foci, 1e-6),
        Check("O4 caustic semi_x", o4.caustic.semi_x, O4_SEMI_AXES[0], 1e-4),
        Check("O4 caustic semi_y", o4.caustic.semi_y, O4_SEMI_AXES[1], 1e-4),
        Check("O4 caustic foci", o4.caustic.focal_distance, foci, 1e-6),
        Check("minor-axis orbit length", minor.length, 4.0 * shape.b, 1e-10),
        Check("major-axis orbit length", major.length, 4.0 * shape.a, 1e-10),
    ]


def invariant_checks(manager, l_max: float = 10.0) -> List[Check]:
    shape = ellipse_from_sigma(0.5)
    engine = manager.orbits
    report = engine.invariant_report(shape, engine.catalog(shape, l_max))
    return [
        Check(f"{name} (L <= {l_max:g})", getattr(report, name), 0.0, limit)
        for name, limit in report.thresholds.items()
    ]


def circle_checks(count: int = 50) -> List[Check]:
    levels = cb_spectrum(ODD_ODD, count).eigenvalues[:count]
    orders = range(2, 2 * count + 2, 2)
    zeros = np.sort(np.concatenate([special.jn_zeros(m, count) for m in orders]))
    expected = zeros[:count] ** 2
    worst = int(np.argmax(np.abs(levels - expected) / expected))
    return [
        Check(
            "circle levels vs squared Bessel zeros",
            float(levels[worst]),
            float(expected[worst]),
            1e-10,
            True,
        )
    ]


def poisson_checks(samples: int, seed: int, count: int = 300) -> List[Check]:
    spectra = poisson_ensemble(samples, count, 1.0, seed)
    spacing = measures.spacing_distribution([unfold(s) for s in spectra], bins=20, s_max=4.0)
    width = spacing.meta["bin_width"]
    s = spacing.abscissa
    expected = (np.exp(-(s - 0.5 * width)) - np.exp(-(s + 0.5 * width))) / width
    z = np.abs(spacing.values - expected) / np.where(spacing.stderr > 0, spacing.stderr, np.inf)

    epsilon = 0.5 * count
    sigma = measures.number_variance(spectra, epsilon, 20.0)
    delta3 = measures.rigidity(spectra, epsilon, 5.0)
    return [
        Check("Poisson P(s) worst z-score", float(z.max()), 0.0, 3.0),
        Check("Poisson Sigma at count 20", sigma, 20.0, 0.1, True),
        Check("Poisson Delta3 at E = 5", delta3, 5.0 / 15.0, 0.1, True),
    ]


def rectangle_checks(manager, levels: int = 2000) -> List[Check]:
    shape = rectangle(1.0, (math.sqrt(5.0) + 1.0) / 2.0)
    engine = manager.length
    engine.configure({"l_max": 12.0, "min_levels": 200})
    catalog = manager.orbits.catalog(shape, 12.0)
    analysis = engine.analyze(rb_spectrum(shape.a, shape.b, levels), catalog)
    reference = next(t for t in analysis.theory if t.is_reference)
    unmatched = sum(1 for row in analysis.rows if UNMATCHED in row.flags)
    return [
        Check("rectangle reference length", reference.length, 2.0, 1e-12),
        Check("rectangle unmatched theory peaks", float(unmatched), 0.0, 0.0),
    ]


def engine_summary(manager) -> List[str]:
    """One line per engine with its run and error counts."""
    statuses = manager.get_engine_status()
    lines = []
    for name in manager.list_engines():
        status = statuses[name]
        lines.append(
            f"{name:<10} {status['status']:<8} runs {status['run_count']:>4}  "
            f"errors {status['error_count']:>3}"
        )
    return lines


def handle_selftest(args, config, manager):
    """Handle selftest command execution."""
    checks: List[Check] = []
    checks += geometry_checks(manager)
    checks += invariant_checks(manager)
    checks += circle_checks()
    checks += poisson_checks(config.statistics.poisson_samples, config.seed)
    checks += rectangle_checks(manager)

    writer = OutputWriter(config, "selftest")
    rows = [(c.name, c.value, c.expected, c.tolerance, int(c.passed)) for c in checks]
    writer.csv("selftest.csv", CHECK_COLUMNS, rows)

    failed = [c.name for c in checks if not c.passed]
    for check in checks:
        status = "ok  " if check.passed else "FAIL"
        print(
            f"{status} {check.name:<42} {check.value:.10g} "
            f"(expected {check.expected:.10g} +- {check.tolerance:g})"
        )
    print("\n".join(engine_summary(manager)))
    if failed:
        raise InvariantFailure(f"{len(failed)} selftest checks failed: {failed}")
    print(f"all {len(checks)} checks passed")
    return 0
