"""
Statistics engine - spectral statistics of billiard ensembles.
"""

from engines.statistics.ensemble import (
    Ensemble,
    poisson_ensemble,
    poisson_spectrum,
    sample_ensemble,
    unfold,
    weyl_count,
    weyl_slope_ratio,
)
from engines.statistics.measures import (
    global_variance,
    global_variance_curve,
    number_variance,
    number_variance_curve,
    rigidity,
    rigidity_curve,
    rigidity_saturation,
    rigidity_saturation_curve,
    scaling_exponent,
    spacing_distribution,
    synchronization,
)
from engines.statistics.theory import (
    fit_amplitude_scale,
    global_variance_theory,
    global_variance_theory_curve,
    sigma_theory,
    sigma_theory_curve,
)
from engines.statistics.statistics_engine import StatisticsEngine, sample_shape

__all__ = [
    "Ensemble",
    "StatisticsEngine",
    "fit_amplitude_scale",
    "global_variance",
    "global_variance_curve",
    "global_variance_theory",
    "global_variance_theory_curve",
    "number_variance",
    "number_variance_curve",
    "poisson_ensemble",
    "poisson_spectrum",
    "rigidity",
    "rigidity_curve",
    "rigidity_saturation",
    "rigidity_saturation_curve",
    "sample_ensemble",
    "sample_shape",
    "scaling_exponent",
    "sigma_theory",
    "sigma_theory_curve",
    "spacing_distribution",
    "synchronization",
    "unfold",
    "weyl_count",
    "weyl_slope_ratio",
]
