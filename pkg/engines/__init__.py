"""
Engines package - numerical engines for billiard spectra, orbits and statistics.
"""

from engines.base_engine import BaseEngine, EngineStatus
from engines.engine_manager import EngineManager
from engines.length.length_engine import LengthEngine
from engines.orbits.orbit_engine import OrbitEngine
from engines.spectrum.spectrum_engine import SpectrumEngine
from engines.statistics.statistics_engine import StatisticsEngine

__all__ = [
    "BaseEngine",
    "EngineManager",
    "EngineStatus",
    "LengthEngine",
    "OrbitEngine",
    "SpectrumEngine",
    "StatisticsEngine",
]
