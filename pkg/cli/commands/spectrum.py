"""Spectrum command: build or load cached quantum spectra and write them as CSV."""

import logging

from cli.output import OutputWriter, input_hash, shape_tag
from core.exceptions import ConvergenceError
from core.models import ShapeKind

logger = logging.getLogger(__name__)

SPECTRUM_COLUMNS = ["index", "energy", "momentum", "converged"]


def add_billiard_arguments(parser):
    """Flags selecting the billiard (shared with orbits and fourier)."""
    parser.add_argument(
        "--billiard",
        choices=["ellipse", "circle", "rectangle"],
        default=None,
        help="Billiard kind",
    )
    parser.add_argument(
        "--sigma",
        type=float,
        default=None,
        help="Ellipse aspect ratio b/a with a*b = 1",
    )
    parser.add_argument(
        "--sides",
        type=float,
        nargs=2,
        default=None,
        metavar=("A", "B"),
        help="Rectangle side lengths",
    )


def billiard_overrides(args):
    return {
        "kind": args.billiard,
        "sigma": args.sigma,
        "sides": list(args.sides) if args.sides else None,
    }


def add_command(subparsers):
    """Register the spectrum command."""
    parser = subparsers.add_parser(
        "spectrum",
        help="Compute eigenvalue spectra",
        description="Build (or load from cache) the spectrum of one billiard and write it as CSV",
    )

    add_billiard_arguments(parser)

    parser.add_argument(
        "--class",
        dest="classes",
        action="append",
        default=None,
        metavar="CLASS",
        help="Symmetry class such as odd-odd (repeatable)",
    )

    parser.add_argument(
        "--levels",
        type=int,
        default=None,
        help="Converged levels per class",
    )

    parser.add_argument(
        "--merged",
        action="store_true",
        default=None,
        help="Merge all four symmetry classes, dropping near-degenerate partners",
    )

    parser.set_defaults(func=handle_spectrum, overrides=spectrum_overrides)


def spectrum_overrides(args):
    billiard = billiard_overrides(args)
    billiard.update({"classes": args.classes, "levels": args.levels, "merged": args.merged})
    return {"billiard": billiard}


def build_spectra(config, manager):
    """Spectra selected by the billiard section (one per class, or one merged)."""
    selection = config.billiard
    shape = selection.shape()
    engine = manager.spectrum
    if shape.kind == ShapeKind.RECTANGLE:
        return [engine.build(shape, None, selection.levels)]
    if selection.merged:
        return [engine.merged(shape, selection.levels)]
    return [engine.build(shape, symmetry, selection.levels) for symmetry in selection.symmetry_classes()]


def handle_spectrum(args, config, manager):
    """Handle spectrum command execution."""
    writer = OutputWriter(config, "spectrum")
    tag = shape_tag(config.billiard.shape())
    partial = []
    for spectrum in build_spectra(config, manager):
        label = "full" if spectrum.shape.kind == ShapeKind.RECTANGLE else spectrum.symmetry_label
        rows = (
            (i, float(e), float(e) ** 0.5, int(i < spectrum.converged_count))
            for i, e in enumerate(spectrum.eigenvalues)
        )
        path = writer.csv(
            f"spectrum_{tag}_{label}.csv",
            SPECTRUM_COLUMNS,
            rows,
            input_hash(eigenvalues=spectrum.eigenvalues),
        )
        if spectrum.is_partial:
            logger.warning("%s %s: basis growth stopped with %d converged levels", tag, label, spectrum.converged_count)
            partial.append(f"{label} ({spectrum.converged_count}/{config.billiard.levels})")
        print(f"{tag} {label}: {spectrum.converged_count} converged levels -> {path}")
    if partial:
        raise ConvergenceError(f"{tag}: partially converged spectra: {', '.join(partial)}")
    return 0
