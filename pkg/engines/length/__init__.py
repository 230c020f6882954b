"""
Length engine - Fourier length spectra and periodic-orbit matching.
"""

from engines.length.fourier import (
    detect_peaks,
    half_width_dispersion,
    length_spectrum,
    length_spectrum_from_momenta,
)
from engines.length.length_engine import LengthAnalysis, LengthEngine, default_reference
from engines.length.matching import (
    MATCH_COLUMNS,
    format_match_table,
    interference_groups,
    match_report,
    match_table_rows,
    theory_peaks,
)

__all__ = [
    "MATCH_COLUMNS",
    "LengthAnalysis",
    "LengthEngine",
    "default_reference",
    "detect_peaks",
    "format_match_table",
    "half_width_dispersion",
    "interference_groups",
    "length_spectrum",
    "length_spectrum_from_momenta",
    "match_report",
    "match_table_rows",
    "theory_peaks",
]
