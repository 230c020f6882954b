"""
Schema versioning and validation for exported records.

Orbit catalogs are written as JSON; every family record is checked against
the registered schema before it leaves the process.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple


SCHEMA_DIR = Path(__file__).parent

_TYPE_CHECKS = {
    "string": lambda v: isinstance(v, str),
    "integer": lambda v: isinstance(v, int) and not isinstance(v, bool),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "array": lambda v: isinstance(v, list),
    "object": lambda v: isinstance(v, dict),
    "null": lambda v: v is None,
}


@dataclass
class SchemaVersion:
    """Represents a schema version."""

    version: str
    name: str
    description: str = ""
    schema: Dict[str, Any] = field(default_factory=dict)


class SchemaRegistry:
    """
    Registry for managing schema versions.
    """

    def __init__(self):
        """Initialize schema registry."""
        self.schemas: Dict[str, SchemaVersion] = {}
        self._current_version = "1.0.0"
        self._register_default_schemas()

    def _register_default_schemas(self):
        """Register the schemas shipped next to this module."""
        with open(SCHEMA_DIR / "orbit_catalog.schema.json", "r") as f:
            catalog_schema = json.load(f)
        self.register_schema(
            "orbit_family",
            SchemaVersion(
                version="1.0.0",
                name="orbit_family",
                description="One periodic-orbit family record of an orbit catalog",
                schema=catalog_schema,
            ),
        )

    def register_schema(self, schema_name: str, schema_version: SchemaVersion) -> None:
        """Register a schema version."""
        key = f"{schema_name}:{schema_version.version}"
        self.schemas[key] = schema_version

    def get_schema(self, schema_name: str, version: Optional[str] = None) -> Optional[SchemaVersion]:
        """Get a schema version (current version by default)."""
        key = f"{schema_name}:{version or self._current_version}"
        return self.schemas.get(key)

    def list_schema_versions(self, schema_name: str) -> List[str]:
        """List versions registered for a schema."""
        versions = [
            key.split(":", 1)[1] for key in self.schemas if key.split(":", 1)[0] == schema_name
        ]
        return sorted(versions)

    def validate(
        self, data: Dict[str, Any], schema_name: str, version: Optional[str] = None
    ) -> Tuple[bool, List[str]]:
        """Validate a record against a schema.

        Returns:
            Tuple of (is_valid, errors)
        """
        schema_version = self.get_schema(schema_name, version)
        if schema_version is None:
            return False, [f"Schema '{schema_name}' not found"]

        errors = []
        schema = schema_version.schema
        for name in schema.get("required", []):
            if name not in data:
                errors.append(f"Required field '{name}' missing")

        for name, field_schema in schema.get("properties", {}).items():
            if name in data and not self._validate_field_type(data[name], field_schema):
                errors.append(
                    f"Field '{name}' has invalid type. Expected {field_schema.get('type')}"
                )

        return len(errors) == 0, errors

    @staticmethod
    def _validate_field_type(value: Any, field_schema: Dict[str, Any]) -> bool:
        expected = field_schema.get("type")
        if expected is None:
            return True
        types = expected if isinstance(expected, list) else [expected]
        return any(_TYPE_CHECKS[t](value) for t in types)


# Global schema registry instance
_registry = SchemaRegistry()


def get_registry() -> SchemaRegistry:
    """Get the global schema registry."""
    return _registry


def validate_schema(
    data: Dict[str, Any], schema_name: str, version: Optional[str] = None
) -> Tuple[bool, List[str]]:
    """Validate data against schema."""
    return _registry.validate(data, schema_name, version)


def get_schema(schema_name: str, version: Optional[str] = None) -> Optional[Dict[str, Any]]:
    """Get schema definition."""
    schema_version = _registry.get_schema(schema_name, version)
    return schema_version.schema if schema_version else None
