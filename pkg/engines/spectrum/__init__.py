"""
Spectrum engine - quantum spectra of integrable billiards.
"""

from engines.spectrum.bessel import bessel_zero, cb_spectrum, quarter_disk_basis
from engines.spectrum.cache import SpectrumCache, cache_key
from engines.spectrum.ellipse import anisotropy_matrix, eb_hamiltonian, eb_spectrum
from engines.spectrum.merge import merge_classes
from engines.spectrum.rectangle import rb_spectrum
from engines.spectrum.spectrum_engine import SpectrumEngine

__all__ = [
    "SpectrumCache",
    "SpectrumEngine",
    "anisotropy_matrix",
    "bessel_zero",
    "cache_key",
    "cb_spectrum",
    "eb_hamiltonian",
    "eb_spectrum",
    "merge_classes",
    "quarter_disk_basis",
    "rb_spectrum",
]
