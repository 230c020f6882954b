"""Stats command: ensemble level statistics with orbit-sum theory overlays."""

import logging
import math

import numpy as np

from cli.output import OutputWriter, curve_series, input_hash
from core.exceptions import ConfigError, InsufficientLevelsError
from core.models import SymmetryClass
from engines.statistics.ensemble import poisson_ensemble
from engines.statistics.measures import (
    SATURATION_WINDOW,
    oscillation_extrema,
    scaling_exponent,
    synchronization,
)

logger = logging.getLogger(__name__)


def add_command(subparsers):
    """Register the stats command."""
    parser = subparsers.add_parser(
        "stats",
        help="Level statistics of an aspect-ratio ensemble",
        description=(
            "Build an ensemble of billiards, unfold their spectra and write P(s), "
            "Sigma(eps,E), Delta3(eps,E), Delta3_inf(eps) and Sigma_g(eps) with theory overlays"
        ),
    )

    parser.add_argument(
        "--billiard",
        choices=["ellipse", "rectangle"],
        default=None,
        help="Ensemble billiard",
    )
    parser.add_argument("--center", type=float, default=None, help="Mean aspect ratio")
    parser.add_argument("--spread", type=float, default=None, help="Aspect-ratio standard deviation")
    parser.add_argument("--samples", type=int, default=None, help="Ensemble size")
    parser.add_argument("--levels", type=int, default=None, help="Converged levels per sample")
    parser.add_argument("--epsilon", type=float, default=None, help="Energy of the Sigma/Delta3 curves")
    parser.add_argument("--workers", type=int, default=None, help="Parallel spectrum builds")
    parser.add_argument(
        "--poisson",
        action="store_true",
        default=None,
        help="Run the synthetic Poisson baseline instead of a billiard ensemble",
    )

    parser.set_defaults(func=handle_stats, overrides=stats_overrides)


def stats_overrides(args):
    overrides = {
        "ensemble": {
            "billiard": args.billiard,
            "center": args.center,
            "spread": args.spread,
            "samples": args.samples,
            "levels_per_sample": args.levels,
        },
        "statistics": {"epsilon": args.epsilon, "poisson": args.poisson},
    }
    if args.workers is not None:
        overrides["engines"] = {"statistics": {"workers": args.workers}}
    return overrides


def energy_grids(config, top: float):
    """Sigma/Delta3 energy, window widths and the saturation energy grid below ``top``."""
    stats = config.statistics
    epsilon = stats.epsilon if stats.epsilon is not None else stats.epsilon_fraction * top
    if epsilon >= top:
        raise InsufficientLevelsError(f"epsilon {epsilon:.6g} lies beyond the converged range {top:.6g}")
    width_max = min(stats.width_max or epsilon / 4.0, 2.0 * (top - epsilon))
    widths = np.linspace(width_max / stats.width_points, width_max, stats.width_points)

    # saturation windows reach epsilon * (1 + hi/2)
    ceiling = top / (1.0 + 0.5 * SATURATION_WINDOW[1])
    lo, hi = stats.epsilon_range
    epsilons = np.linspace(lo * ceiling, hi * ceiling, stats.epsilon_points)
    return epsilon, widths, epsilons


def sqrt_fit(curve):
    """Least-squares amplitude of a * sqrt(eps)."""
    root = np.sqrt(curve.abscissa)
    return float(np.dot(curve.values, root) / np.dot(root, root))


def poisson_checks(spacing, sigma, rigidity):
    """Deviations of the baseline from the Poisson closed forms (unit density)."""
    s = spacing.abscissa
    width = spacing.meta.get("bin_width", s[1] - s[0] if s.size > 1 else 1.0)
    expected = (np.exp(-(s - 0.5 * width)) - np.exp(-(s + 0.5 * width))) / width
    stderr = np.where(spacing.stderr > 0, spacing.stderr, np.inf)
    near = int(np.argmin(np.abs(sigma.abscissa - 20.0)))
    small = max(1, sigma.abscissa.size // 10)
    delta3_poisson = rigidity.abscissa[:small] / 15.0
    return {
        "spacing_max_z": float(np.max(np.abs(spacing.values - expected) / stderr)),
        "sigma_at_20_relative": float(
            abs(sigma.values[near] - sigma.abscissa[near]) / sigma.abscissa[near]
        ),
        "delta3_small_relative": float(
            np.max(np.abs(rigidity.values[:small] - delta3_poisson) / delta3_poisson)
        ),
    }


def handle_stats(args, config, manager):
    """Handle stats command execution."""
    engine = manager.statistics
    settings = {"bins": config.statistics.bins, "s_max": config.statistics.s_max}
    if not engine.configure(settings):
        raise ConfigError(f"Invalid statistics settings: {settings}")

    ensemble = None
    if config.statistics.poisson:
        tag = "poisson"
        spectra = poisson_ensemble(
            config.statistics.poisson_samples, config.ensemble.levels_per_sample, 1.0, config.seed
        )
    else:
        spec = config.ensemble.spec(config.seed)
        tag = f"{config.ensemble.billiard}_c{spec.center:.6g}"
        ensemble = engine.build_ensemble(
            spec, config.ensemble.billiard, SymmetryClass.parse(config.ensemble.symmetry)
        )
        spectra = ensemble.spectra

    for sample_id, spectrum in enumerate(spectra):
        if spectrum.converged_count < 2:
            raise InsufficientLevelsError(
                f"sample {sample_id} has no converged levels", sample_id=sample_id
            )
    top = min(float(s.converged[-1]) for s in spectra)
    epsilon, widths, epsilons = energy_grids(config, top)

    writer = OutputWriter(config, "stats")
    inputs = input_hash(levels=np.concatenate([s.converged for s in spectra]))
    summary = {"billiard": tag, "samples": len(spectra), "epsilon": epsilon, "top": top}

    spacing = engine.spacing(spectra)
    writer.curve(f"spacing_{tag}.csv", spacing, inputs)
    s_grid = np.linspace(0.0, config.statistics.s_max, 200)
    writer.svg(
        f"spacing_{tag}.svg",
        [curve_series(spacing, "P(s)"), ("exp(-s)", s_grid, np.exp(-s_grid), None)],
        xlabel="s",
        ylabel="P(s)",
        title=f"Spacing distribution, {tag}",
        inputs=inputs,
    )

    sigma = engine.number_variance(spectra, epsilon, widths)
    rigidity = engine.rigidity(spectra, epsilon, widths)
    saturation = engine.saturation(spectra, epsilons)
    global_variance = engine.global_variance(spectra, epsilons)
    writer.curve(f"sigma_{tag}.csv", sigma, inputs)
    writer.curve(f"delta3_{tag}.csv", rigidity, inputs)
    writer.curve(f"delta3_inf_{tag}.csv", saturation, inputs)
    writer.curve(f"sigma_g_{tag}.csv", global_variance, inputs)

    sigma_plot = [curve_series(sigma, "Sigma")]
    global_plot = [curve_series(global_variance, "Sigma_g"), curve_series(saturation, "Delta3_inf")]
    summary["sigma_extrema"] = oscillation_extrema(sigma).tolist()

    if ensemble is not None:
        catalogs = engine.catalogs(ensemble)
        theory_sigma, kappa = engine.sigma_theory(catalogs, epsilon, widths, numeric=sigma)
        theory_global = engine.global_variance_theory(catalogs, epsilons, kappa)
        writer.curve(f"sigma_theory_{tag}.csv", theory_sigma, inputs)
        writer.curve(f"sigma_g_theory_{tag}.csv", theory_global, inputs)
        sigma_plot.append(curve_series(theory_sigma, f"orbit theory (kappa={kappa:.3g})"))
        global_plot.append(curve_series(theory_global, "Sigma_g orbit theory"))
        summary["kappa"] = kappa
        summary["sigma_theory_extrema"] = oscillation_extrema(theory_sigma).tolist()
        summary["synchronization"] = synchronization(global_variance, saturation)

    amplitude = sqrt_fit(saturation)
    summary["delta3_inf_exponent"] = scaling_exponent(saturation)
    summary["delta3_inf_sqrt_amplitude"] = amplitude

    writer.svg(
        f"sigma_{tag}.svg",
        sigma_plot,
        "E",
        "Sigma(eps, E)",
        f"Number variance at eps={epsilon:.6g}",
        inputs,
    )
    writer.svg(
        f"delta3_{tag}.svg",
        [curve_series(rigidity, "Delta3")],
        "E",
        "Delta3(eps, E)",
        f"Spectral rigidity at eps={epsilon:.6g}",
        inputs,
    )
    writer.svg(
        f"delta3_inf_{tag}.svg",
        [
            curve_series(saturation, "Delta3_inf"),
            ("a sqrt(eps)", saturation.abscissa, amplitude * np.sqrt(saturation.abscissa), None),
        ],
        "eps",
        "Delta3_inf(eps)",
        "Saturated rigidity",
        inputs,
    )
    writer.svg(f"sigma_g_{tag}.svg", global_plot, "eps", "Sigma_g(eps)", "Global variance", inputs)

    if config.statistics.poisson:
        summary["poisson"] = poisson_checks(spacing, sigma, rigidity)

    writer.json(f"stats_{tag}.json", summary, inputs)
    print(f"{tag}: {len(spectra)} samples, levels up to {top:.6g}")
    print(f"Delta3_inf log-log exponent: {summary['delta3_inf_exponent']:.4f}")
    if "synchronization" in summary:
        sync = summary["synchronization"]
        print(
            f"Sigma_g vs Delta3_inf: correlation {sync['correlation']:.4f}, "
            f"mean relative offset {sync['mean_relative_offset']:.4f}"
        )
    if "poisson" in summary:
        for key, value in summary["poisson"].items():
            print(f"{key}: {value:.4f}")
    if not math.isfinite(summary["delta3_inf_exponent"]):
        logger.warning("Delta3_inf exponent is not finite; check the energy grid")
    return 0
