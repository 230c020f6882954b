"""Fourier command: length spectrum, detected peaks and the orbit match report."""

import logging
import math

import numpy as np

from cli.commands.orbits import configure_orbit_engine
from cli.commands.spectrum import add_billiard_arguments, billiard_overrides
from cli.output import OutputWriter, input_hash, shape_tag
from core.exceptions import ConfigError
from core.models import ShapeKind
from engines.length.matching import MATCH_COLUMNS, format_match_table, match_table_rows

logger = logging.getLogger(__name__)

LENGTH_COLUMNS = ["l", "magnitude", "real", "imag"]
PEAK_COLUMNS = ["position", "height", "half_width", "family"]


def add_command(subparsers):
    """Register the fourier command."""
    parser = subparsers.add_parser(
        "fourier",
        help="Length spectrum and periodic-orbit peak matching",
        description=(
            "Fourier-transform the eigen-momenta over orbit length, detect peaks and "
            "compare them with the periodic-orbit catalog"
        ),
    )

    add_billiard_arguments(parser)

    parser.add_argument(
        "--class",
        dest="classes",
        action="append",
        default=None,
        metavar="CLASS",
        help="Symmetry class (repeatable; several classes are merged)",
    )

    parser.add_argument(
        "--merged",
        action="store_true",
        default=None,
        help="Use all four symmetry classes merged",
    )

    parser.add_argument("--levels", type=int, default=None, help="Converged levels per class")
    parser.add_argument("--k-min", type=float, default=None, help="Lower end of the momentum window")
    parser.add_argument("--k-max", type=float, default=None, help="Upper end of the momentum window")
    parser.add_argument("--l-max", type=float, default=None, help="Largest orbit length")
    parser.add_argument("--dl", type=float, default=None, help="Length grid spacing")
    parser.add_argument(
        "--taper",
        action="store_true",
        default=None,
        help="Gaussian taper over the momentum window",
    )
    parser.add_argument("--reference", type=str, default=None, help="Normalizing family label")

    parser.set_defaults(func=handle_fourier, overrides=fourier_overrides)


def fourier_overrides(args):
    billiard = billiard_overrides(args)
    billiard.update({"classes": args.classes, "merged": args.merged})
    return {
        "billiard": billiard,
        "fourier": {
            "levels": args.levels,
            "k_min": args.k_min,
            "k_max": args.k_max,
            "l_max": args.l_max,
            "dl": args.dl,
            "taper": args.taper,
            "reference": args.reference,
        },
    }


def fourier_spectrum(config, manager):
    """Levels feeding the length spectrum; all four classes are merged."""
    shape = config.billiard.shape()
    engine = manager.spectrum
    levels = config.fourier.levels
    if shape.kind == ShapeKind.RECTANGLE:
        return engine.build(shape, None, levels)
    classes = config.billiard.symmetry_classes()
    if len(classes) == 1:
        return engine.build(shape, classes[0], levels)
    if len(set(classes)) != 4:
        labels = [c.label for c in classes]
        raise ConfigError(f"fourier takes one symmetry class or all four, got {labels}")
    return engine.merged(shape, levels, classes)


def theory_sticks(analysis):
    """Theory peaks as vertical segments scaled to the reference peak height."""
    matched = [
        p.height
        for p in analysis.peaks
        if p.matched_family is not None and p.matched_family.label == analysis.reference
    ]
    scale = matched[0] if matched else 1.0
    x, y = [], []
    for peak in analysis.theory:
        x += [peak.length, peak.length, math.nan]
        y += [0.0, peak.relative_amplitude * scale, math.nan]
    return x, y


def handle_fourier(args, config, manager):
    """Handle fourier command execution."""
    shape = config.billiard.shape()
    spectrum = fourier_spectrum(config, manager)

    length_engine = manager.length
    settings = {
        "l_max": config.fourier.l_max,
        "dl": config.fourier.dl,
        "taper": config.fourier.taper,
        "min_height": config.fourier.min_height,
    }
    if not length_engine.configure(settings):
        raise ConfigError(f"Invalid length-spectrum settings: {settings}")

    catalog = configure_orbit_engine(config, manager).catalog(shape, config.fourier.l_max)
    momenta = spectrum.momenta
    window = config.fourier.window(float(momenta[0]), float(momenta[-1])) if momenta.size else None
    analysis = length_engine.analyze(spectrum, catalog, config.fourier.reference, window)

    writer = OutputWriter(config, "fourier")
    tag = shape_tag(shape)
    inputs = input_hash(momenta=momenta, window=list(analysis.spectrum.window))
    ls = analysis.spectrum
    writer.csv(
        f"length_{tag}.csv",
        LENGTH_COLUMNS,
        zip(
            ls.l_grid.tolist(),
            ls.magnitude.tolist(),
            ls.amplitude.real.tolist(),
            ls.amplitude.imag.tolist(),
        ),
        inputs,
    )
    writer.csv(
        f"peaks_{tag}.csv",
        PEAK_COLUMNS,
        (
            (p.position, p.height, p.half_width, p.matched_family.label if p.matched_family else "")
            for p in analysis.peaks
        ),
        inputs,
    )
    writer.csv(f"match_{tag}.csv", MATCH_COLUMNS, match_table_rows(analysis.rows), inputs)

    reference = next(t for t in analysis.theory if t.is_reference)
    header = [
        f"reference: {analysis.reference} at L = {reference.length:.6f} normalized to 1",
        f"momentum window: [{ls.window[0]:.6g}, {ls.window[1]:.6g}] with {ls.level_count} levels",
        f"nominal half width: {ls.nominal_half_width:.6g}",
        f"half-width dispersion: {analysis.dispersion:.4f}",
        "",
    ]
    body = "\n".join(header) + format_match_table(analysis.rows)
    writer.text(f"match_{tag}.txt", body, inputs)

    sticks_x, sticks_y = theory_sticks(analysis)
    writer.svg(
        f"length_{tag}.svg",
        [
            ("|A(l)|", ls.l_grid, ls.magnitude, None),
            ("orbit theory", np.asarray(sticks_x), np.asarray(sticks_y), None),
        ],
        xlabel="orbit length l",
        ylabel="|A(l)|",
        title=f"Length spectrum, {tag}",
        inputs=inputs,
    )
    print(body)
    return 0
