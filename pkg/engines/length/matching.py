"""
Theory peaks from orbit catalogs and their comparison with detected peaks.
"""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np

from core.exceptions import ContractViolation
from core.models import FamilyKind, MatchRow, Peak, PeriodicOrbitFamily, TheoryPeak

logger = logging.getLogger(__name__)

REFERENCE = "reference"
ISOLATED = "isolated"
INTERFERENCE = "interference"
UNMATCHED = "unmatched"
REFERENCE_UNMATCHED = "reference-unmatched"

MATCH_COLUMNS = [
    "family",
    "L_theory",
    "L_detected",
    "delta_L",
    "height_numeric",
    "height_theory",
    "ratio",
    "flags",
]


def _find_reference(
    catalog: Sequence[PeriodicOrbitFamily], reference: Union[str, PeriodicOrbitFamily]
) -> PeriodicOrbitFamily:
    label = reference if isinstance(reference, str) else reference.label
    for family in catalog:
        if family.label == label:
            return family
    raise ContractViolation(f"Reference family {label} is not in the catalog")


def theory_peaks(
    catalog: Sequence[PeriodicOrbitFamily], reference: Union[str, PeriodicOrbitFamily]
) -> List[TheoryPeak]:
    """Amplitudes c S / sqrt(L) relative to the reference family, sorted by length."""
    ref = _find_reference(catalog, reference)
    scale = ref.amplitude
    peaks = []
    for family in sorted(catalog, key=lambda f: (f.length, f.label)):
        peaks.append(
            TheoryPeak(
                length=family.length,
                relative_amplitude=1.0 if family is ref else family.amplitude / scale,
                family=family,
                is_reference=family is ref,
            )
        )
    return peaks


def interference_groups(theory: Sequence[TheoryPeak], half_width: float) -> List[List[TheoryPeak]]:
    """Chains of theory peaks whose neighbours lie closer than one half width."""
    ordered = sorted(theory, key=lambda p: p.length)
    groups: List[List[TheoryPeak]] = []
    for peak in ordered:
        if groups and peak.length - groups[-1][-1].length < half_width:
            groups[-1].append(peak)
        else:
            groups.append([peak])
    return [group for group in groups if len(group) > 1]


def _nearest(peaks: Sequence[Peak], length: float, radius: float) -> Optional[Peak]:
    if not peaks:
        return None
    best = min(peaks, key=lambda p: abs(p.position - length))
    return best if abs(best.position - length) <= radius else None


def match_report(
    peaks: Sequence[Peak], theory: Sequence[TheoryPeak], half_width: Optional[float] = None
) -> List[MatchRow]:
    """Compare every theory peak with the nearest detected peak.

    Numeric heights are normalized by the peak matched to the reference
    family, so the reference row reads 1 in both columns.

    Args:
        peaks: Detected peaks
        theory: Theory peaks (one is the reference)
        half_width: Matching radius; defaults to the median detected half width

    Returns:
        Rows sorted by theory length
    """
    if half_width is None:
        half_width = float(np.median([p.half_width for p in peaks])) if peaks else 0.0
    grouped = {id(p) for group in interference_groups(theory, half_width) for p in group}

    matches = {id(t): _nearest(peaks, t.length, half_width) for t in theory}
    reference = next((t for t in theory if t.is_reference), None)
    ref_peak = matches.get(id(reference)) if reference is not None else None
    scale = 1.0 / ref_peak.height if ref_peak is not None else 1.0

    rows = []
    for t in sorted(theory, key=lambda p: p.length):
        peak = matches[id(t)]
        flags = []
        if t.is_reference:
            flags.append(REFERENCE if ref_peak is not None else REFERENCE_UNMATCHED)
        if t.family.kind == FamilyKind.ISOLATED:
            flags.append(ISOLATED)
        if id(t) in grouped:
            flags.append(INTERFERENCE)
        if peak is None:
            flags.append(UNMATCHED)
        else:
            peak.matched_family = t.family
        rows.append(
            MatchRow(
                family=t.family.label,
                l_theory=t.length,
                l_detected=peak.position if peak else None,
                height_numeric=peak.height * scale if peak else None,
                height_theory=t.relative_amplitude,
                flags=tuple(flags),
            )
        )
    matched = sum(1 for r in rows if r.matched)
    logger.info(f"match_report: {matched}/{len(rows)} theory peaks matched within {half_width:.4g}")
    return rows


def match_table_rows(rows: Sequence[MatchRow]):
    """CSV rows in MATCH_COLUMNS order; missing values are empty."""

    def cell(value):
        return "" if value is None else value

    for row in rows:
        yield (
            row.family,
            row.l_theory,
            cell(row.l_detected),
            cell(row.delta_l),
            cell(row.height_numeric),
            row.height_theory,
            cell(row.ratio),
            "|".join(row.flags),
        )


def format_match_table(rows: Sequence[MatchRow]) -> str:
    """Human-readable, fixed-width match table."""

    def number(value, digits=6):
        return "-" if value is None else f"{value:.{digits}f}"

    header = (
        f"{'family':<10} {'L_theory':>10} {'L_detected':>10} {'dL':>10} "
        f"{'h_num':>9} {'h_theory':>9} {'ratio':>7}  flags"
    )
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.family:<10} {number(row.l_theory, 5):>10} {number(row.l_detected, 5):>10} "
            f"{number(row.delta_l, 5):>10} {number(row.height_numeric, 4):>9} "
            f"{number(row.height_theory, 4):>9} {number(row.ratio, 3):>7}  {','.join(row.flags)}"
        )
    return "\n".join(lines)
