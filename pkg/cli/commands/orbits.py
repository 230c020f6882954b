"""Orbits command: periodic-orbit catalog plus the classical invariant report."""

import logging

from cli.commands.spectrum import add_billiard_arguments, billiard_overrides
from cli.output import OutputWriter, input_hash, shape_tag
from core.exceptions import ConfigError, InvariantFailure
from core.models import ShapeKind
from core.schema.schema_registry import validate_schema
from core.utils import format_table
from engines.orbits.families import stability_label

logger = logging.getLogger(__name__)

CATALOG_COLUMNS = ["family", "L", "S", "c", "lambda", "stability"]


def add_command(subparsers):
    """Register the orbits command."""
    parser = subparsers.add_parser(
        "orbits",
        help="Enumerate periodic-orbit families",
        description=(
            "Enumerate periodic-orbit families up to a length cutoff, check confocality, "
            "tangency, length constancy and caustic conservation, and write the catalog as JSON"
        ),
    )

    add_billiard_arguments(parser)

    parser.add_argument(
        "--l-max",
        type=float,
        default=None,
        help="Largest orbit length in the catalog",
    )

    parser.add_argument(
        "--max-families",
        type=int,
        default=None,
        help="Keep only the shortest families",
    )

    parser.set_defaults(func=handle_orbits, overrides=orbits_overrides)


def orbits_overrides(args):
    return {
        "billiard": billiard_overrides(args),
        "orbits": {"l_max": args.l_max, "max_families": args.max_families},
    }


def configure_orbit_engine(config, manager):
    engine = manager.orbits
    settings = {
        "n_max": config.orbits.n_max,
        "repetitions": config.orbits.repetitions,
        "max_families": config.orbits.max_families,
    }
    if not engine.configure(settings):
        raise ConfigError(f"Invalid orbit settings: {settings}")
    return engine


def family_record(family):
    record = family.to_dict()
    if family.stability_trace is not None:
        record["stability"] = stability_label(family.stability_trace)
    valid, errors = validate_schema(record, "orbit_family")
    if not valid:
        raise InvariantFailure(f"Catalog record {family.label} violates its schema: {errors}")
    return record


def handle_orbits(args, config, manager):
    """Handle orbits command execution."""
    shape = config.billiard.shape()
    engine = configure_orbit_engine(config, manager)
    families = engine.catalog(shape, config.orbits.l_max)
    skipped = list(engine.skipped)

    report = None
    if shape.kind == ShapeKind.ELLIPSE:
        report = engine.invariant_report(shape, families)

    writer = OutputWriter(config, "orbits")
    tag = shape_tag(shape)
    inputs = input_hash(shape=[shape.a, shape.b], l_max=config.orbits.l_max)
    writer.json(
        f"orbits_{tag}.json",
        {
            "shape": shape.to_dict(),
            "l_max": config.orbits.l_max,
            "families": [family_record(f) for f in families],
            "skipped": skipped,
            "invariants": report.to_dict() if report else None,
        },
        inputs,
    )

    rows = [
        (
            f.label,
            f.length,
            f.area,
            f.c,
            f.lam,
            stability_label(f.stability_trace) if f.stability_trace is not None else "",
        )
        for f in families
    ]
    lines = [format_table(CATALOG_COLUMNS, rows).rstrip("\n")]
    if report is not None:
        lines.append("")
        verdict = "PASS" if report.passed else "FAIL"
        lines.append(f"invariants over {report.families} families: {verdict}")
        for name, limit in report.thresholds.items():
            value = getattr(report, name)
            mark = "FAIL" if name in report.failures else "ok"
            lines.append(f"  {name:<14} {value:.3e}  (limit {limit:.1e})  {mark}")
    if skipped:
        lines.append(f"skipped families: {len(skipped)}")
    body = "\n".join(lines)
    writer.text(f"orbits_{tag}_report.txt", body, inputs)
    print(body)

    if report is not None and not report.passed:
        raise InvariantFailure(f"Orbit invariants violated: {report.failures}")
    return 0
