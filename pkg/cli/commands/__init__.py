"""
Commands package for the billiards CLI.
"""

from . import fourier, orbits, selftest, spectrum, stats

__all__ = ["fourier", "orbits", "selftest", "spectrum", "stats"]
