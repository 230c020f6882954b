"""
Unit tests for schema versioning and validation.
"""

import pytest

from core.models import FamilyKind, PeriodicOrbitFamily
from core.schema import SchemaRegistry, SchemaVersion, get_registry, get_schema, validate_schema


@pytest.fixture
def record():
    return PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 3, 1, 6.0322, 1.5, 1.0).to_dict()


class TestSchemaVersion:
    """Tests for SchemaVersion."""

    def test_schema_version_creation(self):
        version = SchemaVersion(version="1.0.0", name="orbit_family", schema={"type": "object"})

        assert version.version == "1.0.0"
        assert version.name == "orbit_family"


class TestSchemaRegistry:
    """Tests for SchemaRegistry."""

    def test_default_schema_registered(self):
        registry = SchemaRegistry()

        assert registry.list_schema_versions("orbit_family") == ["1.0.0"]
        assert "L" in registry.get_schema("orbit_family").schema["required"]

    def test_register_schema(self):
        registry = SchemaRegistry()
        registry.register_schema(
            "orbit_family", SchemaVersion(version="2.0.0", name="orbit_family", schema={})
        )

        assert registry.list_schema_versions("orbit_family") == ["1.0.0", "2.0.0"]

    def test_unknown_schema(self):
        valid, errors = SchemaRegistry().validate({}, "missing")

        assert not valid
        assert "not found" in errors[0]

    def test_global_registry(self):
        assert get_registry() is get_registry()
        assert get_schema("orbit_family")["title"] == "orbit_family"


class TestOrbitFamilyValidation:
    """Tests for orbit catalog records."""

    def test_family_record_is_valid(self, record):
        valid, errors = validate_schema(record, "orbit_family")

        assert valid, errors

    def test_missing_field(self, record):
        del record["L"]

        valid, errors = validate_schema(record, "orbit_family")

        assert not valid
        assert any("'L'" in e for e in errors)

    def test_wrong_type(self, record):
        record["n"] = "three"

        valid, errors = validate_schema(record, "orbit_family")

        assert not valid
        assert any("'n'" in e for e in errors)

    def test_nullable_lambda(self, record):
        record["lambda"] = 0.0086

        assert validate_schema(record, "orbit_family")[0]
