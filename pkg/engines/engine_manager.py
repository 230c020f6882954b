"""
Engine Manager - build and wire the numerical engines from configuration.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from core.exceptions import ConfigError
from engines.base_engine import BaseEngine
from engines.length.length_engine import LengthEngine
from engines.orbits.orbit_engine import OrbitEngine
from engines.spectrum.spectrum_engine import SpectrumEngine
from engines.statistics.statistics_engine import StatisticsEngine

logger = logging.getLogger(__name__)

ENGINE_NAMES = ("spectrum", "orbits", "statistics", "length")


class EngineManager:
    """Own one instance of every engine and apply per-engine settings.

    The statistics engine shares the spectrum and orbit engines so that one
    cache directory and one set of solver tolerances serve every command.
    """

    def __init__(
        self,
        config_path: Optional[Union[str, Path]] = "configs/engines.yml",
        overrides: Optional[Dict[str, Dict[str, Any]]] = None,
    ):
        """Initialize Engine Manager.

        Args:
            config_path: Path to engines configuration file (None for defaults)
            overrides: Per-engine settings applied on top of the file
        """
        self.config_path = config_path
        self.config: Dict[str, Any] = {}
        self.overrides = overrides or {}
        self.engines: Dict[str, BaseEngine] = {}
        self._load_config()
        self._initialize_engines()

    def _load_config(self):
        """Load configuration from YAML file."""
        if self.config_path is None:
            self.config = {"engines": {}}
            return
        try:
            with open(self.config_path, "r") as f:
                self.config = yaml.safe_load(f) or {}
        except FileNotFoundError:
            logger.warning(f"Engine config not found at {self.config_path}, using defaults")
            self.config = {"engines": {}}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Cannot parse {self.config_path}: {exc}") from exc

    def _settings(self, name: str) -> Dict[str, Any]:
        section = dict(self.config.get("engines", {}).get(name) or {})
        settings = dict(section.get("settings") or {})
        settings.update(self.overrides.get(name) or {})
        return settings

    def _configure(self, name: str, engine: BaseEngine) -> BaseEngine:
        section = self.config.get("engines", {}).get(name) or {}
        settings = self._settings(name)
        if settings and not engine.configure(settings):
            raise ConfigError(f"Invalid settings for engine '{name}': {sorted(settings)}")
        if not section.get("enabled", True):
            engine.disable()
        return engine

    def _initialize_engines(self):
        """Initialize all configured engines."""
        spectrum = self._configure("spectrum", SpectrumEngine())
        orbits = self._configure("orbits", OrbitEngine())
        statistics = self._configure(
            "statistics", StatisticsEngine(spectrum_engine=spectrum, orbit_engine=orbits)
        )
        length = self._configure("length", LengthEngine())
        self.engines = {
            "spectrum": spectrum,
            "orbits": orbits,
            "statistics": statistics,
            "length": length,
        }
        logger.debug(f"Engines ready: {', '.join(self.engines)}")

    def get(self, engine_name: str) -> BaseEngine:
        """Engine by name; disabled engines are refused."""
        if engine_name not in self.engines:
            raise ConfigError(f"Unknown engine '{engine_name}', expected one of {ENGINE_NAMES}")
        engine = self.engines[engine_name]
        if not engine.enabled:
            raise ConfigError(f"Engine '{engine_name}' is disabled")
        return engine

    @property
    def spectrum(self) -> SpectrumEngine:
        return self.get("spectrum")

    @property
    def orbits(self) -> OrbitEngine:
        return self.get("orbits")

    @property
    def statistics(self) -> StatisticsEngine:
        return self.get("statistics")

    @property
    def length(self) -> LengthEngine:
        return self.get("length")

    def get_engine_status(self, engine_name: Optional[str] = None) -> Dict[str, Any]:
        """Get status of engine(s).

        Args:
            engine_name: Specific engine, or None for all

        Returns:
            Status dictionary
        """
        if engine_name:
            if engine_name in self.engines:
                return self.engines[engine_name].get_status()
            return {}

        return {name: engine.get_status() for name, engine in self.engines.items()}

    def list_engines(self) -> List[str]:
        """List all available engines."""
        return list(self.engines.keys())
