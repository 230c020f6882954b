"""
Merging of symmetry-class spectra with near-degeneracy removal.
"""

import logging
from typing import Sequence

import numpy as np

from core.exceptions import ContractViolation
from core.models import MERGED, Spectrum

logger = logging.getLogger(__name__)


def merge_classes(spectra: Sequence[Spectrum], degeneracy_tol: float = 1e-8) -> Spectrum:
    """Union of class spectra with almost-degenerate partners dropped.

    Only converged levels are merged, and the union is cut at the lowest of
    the classes' highest converged levels so every merged level is complete.
    A level whose relative distance to the last kept level is below
    ``degeneracy_tol`` is dropped.

    Args:
        spectra: Four spectra of one shape, one per symmetry class
        degeneracy_tol: Relative tolerance (0 disables the filter)

    Returns:
        Merged spectrum; ``meta["removed"]`` counts dropped levels
    """
    if len(spectra) != 4:
        raise ContractViolation(f"merge_classes expects four spectra, got {len(spectra)}")
    shapes = {s.shape for s in spectra}
    if len(shapes) != 1:
        raise ContractViolation("merge_classes needs spectra of one shape")

    ceiling = min(float(s.converged[-1]) for s in spectra if s.converged_count) if all(
        s.converged_count for s in spectra
    ) else 0.0
    union = np.sort(np.concatenate([s.converged[s.converged <= ceiling] for s in spectra]))

    kept = []
    removed = 0
    for value in union:
        if kept and (value - kept[-1]) < degeneracy_tol * kept[-1]:
            removed += 1
            continue
        kept.append(value)

    logger.info(f"merge_classes: {len(kept)} levels kept, {removed} near-degenerate removed")
    return Spectrum(
        shape=spectra[0].shape,
        symmetry=MERGED,
        eigenvalues=np.asarray(kept),
        converged_count=len(kept),
        meta={
            "solver": "merge",
            "degeneracy_tol": degeneracy_tol,
            "removed": removed,
            "classes": [s.symmetry_label for s in spectra],
            "partial": any(s.is_partial for s in spectra),
        },
    )
