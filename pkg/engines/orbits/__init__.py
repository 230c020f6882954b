"""
Orbit engine - classical dynamics of integrable billiards.
"""

from engines.orbits.billiard_map import (
    RotationNumber,
    billiard_map,
    caustic_invariant,
    launch_state,
    rotation_number,
    rotation_number_exact,
    tangency_distance,
    trajectory,
)
from engines.orbits.catalogs import cb_catalog, eb_catalog, rb_catalog
from engines.orbits.families import (
    axis_orbits,
    family_area,
    family_area_monte_carlo,
    family_length_constancy,
    find_family,
    monodromy_trace,
    stability_label,
)
from engines.orbits.orbit_engine import InvariantReport, OrbitEngine

__all__ = [
    "InvariantReport",
    "OrbitEngine",
    "RotationNumber",
    "axis_orbits",
    "billiard_map",
    "caustic_invariant",
    "cb_catalog",
    "eb_catalog",
    "family_area",
    "family_area_monte_carlo",
    "family_length_constancy",
    "find_family",
    "launch_state",
    "monodromy_trace",
    "rb_catalog",
    "rotation_number",
    "rotation_number_exact",
    "stability_label",
    "tangency_distance",
    "trajectory",
]
