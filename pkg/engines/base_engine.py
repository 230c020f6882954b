"""
Base engine class for the numerical engines.
"""

import logging
from abc import ABC, abstractmethod
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional


class EngineStatus(Enum):
    """Engine operational status."""

    ACTIVE = "active"
    INACTIVE = "inactive"
    ERROR = "error"


class BaseEngine(ABC):
    """Abstract base class for numerical engines.

    Subclasses declare ``DEFAULT_CONFIG``; ``configure`` merges validated
    overrides into it.
    """

    DEFAULT_CONFIG: Dict[str, Any] = {}

    def __init__(self, name: str, version: str = "1.0.0", enabled: bool = True):
        """Initialize engine.

        Args:
            name: Engine name
            version: Engine version
            enabled: Whether engine is enabled
        """
        self.name = name
        self.version = version
        self.enabled = enabled
        self.status = EngineStatus.ACTIVE
        self.last_run: Optional[datetime] = None
        self.run_count = 0
        self.error_count = 0
        self.config: Dict[str, Any] = dict(self.DEFAULT_CONFIG)
        self.logger = logging.getLogger(f"engines.{name}")

    @abstractmethod
    def validate_config(self, config: Dict[str, Any]) -> bool:
        """Validate engine configuration.

        Args:
            config: Configuration to validate

        Returns:
            True if valid, False otherwise
        """

    def configure(self, config: Dict[str, Any]) -> bool:
        """Merge configuration overrides into the defaults.

        Args:
            config: Configuration dictionary

        Returns:
            True if configuration successful
        """
        merged = {**self.config, **config}
        if self.validate_config(merged):
            self.config = merged
            return True
        self.logger.warning(f"[{self.name}] configure: rejected {sorted(config)}")
        return False

    def _start(self, operation: str) -> None:
        self.run_count += 1
        self.last_run = datetime.utcnow()
        self.logger.info(f"[{self.name}] {operation}: started")

    def _fail(self, operation: str, error: Exception) -> None:
        self.error_count += 1
        self.status = EngineStatus.ERROR
        self.logger.error(f"[{self.name}] {operation}: failed ({error})")

    def disable(self):
        """Disable engine."""
        self.enabled = False
        self.status = EngineStatus.INACTIVE

    def get_status(self) -> Dict[str, Any]:
        """Get engine status."""
        return {
            "name": self.name,
            "version": self.version,
            "status": self.status.value,
            "enabled": self.enabled,
            "last_run": self.last_run.isoformat() if self.last_run else None,
            "run_count": self.run_count,
            "error_count": self.error_count,
        }
