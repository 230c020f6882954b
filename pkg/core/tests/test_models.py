"""
Unit tests for core models.
"""

import math

import numpy as np
import pytest

from core.exceptions import ContractViolation, DomainError
from core.models import (
    CONVENTIONS,
    ODD_ODD,
    BilliardShape,
    ConicKind,
    EnsembleSpec,
    FamilyKind,
    MatchRow,
    Parity,
    Peak,
    PeriodicOrbitFamily,
    ShapeKind,
    Spectrum,
    StatCurve,
    StatisticKind,
    SymmetryClass,
    UnfoldedSpectrum,
    area,
    confocal_conic,
    ellipse_from_sigma,
    nominal_half_width,
    perimeter,
    rectangle,
)


class TestBilliardShape:
    """Tests for BilliardShape."""

    def test_ellipse_from_sigma_has_unit_area(self):
        shape = ellipse_from_sigma(0.5)

        assert shape.kind == ShapeKind.ELLIPSE
        assert shape.a * shape.b == pytest.approx(1.0)
        assert shape.sigma == pytest.approx(0.5)
        assert area(shape) == pytest.approx(math.pi)

    def test_focal_distance(self):
        """sigma = 1/2 puts the foci at sqrt(3/2)."""
        assert ellipse_from_sigma(0.5).focal_distance == pytest.approx(math.sqrt(1.5), abs=1e-12)

    def test_circle(self):
        shape = ellipse_from_sigma(1.0)

        assert shape.is_circle
        assert shape.focal_distance == 0.0
        assert perimeter(shape) == pytest.approx(2 * math.pi)

    def test_invalid_sides(self):
        with pytest.raises(DomainError):
            BilliardShape(ShapeKind.ELLIPSE, 0.0, 1.0)
        with pytest.raises(DomainError):
            ellipse_from_sigma(0.0)

    def test_ellipse_perimeter(self):
        """sigma = 1/2 ellipse perimeter is about 6.85 (Ramanujan: 6.85077)."""
        assert perimeter(ellipse_from_sigma(0.5)) == pytest.approx(6.85077, abs=1e-4)

    def test_rectangle_perimeter_and_area(self):
        shape = rectangle(1.0, 2.0)

        assert perimeter(shape) == 6.0
        assert area(shape) == 2.0

    def test_shape_round_trip(self):
        shape = ellipse_from_sigma(0.3)

        assert BilliardShape.from_dict(shape.to_dict()) == shape


class TestSymmetryClass:
    """Tests for SymmetryClass."""

    def test_parse_and_label(self):
        symmetry = SymmetryClass.parse("Odd-Even")

        assert symmetry.x_parity == Parity.ODD
        assert symmetry.y_parity == Parity.EVEN
        assert symmetry.label == "odd-even"

    def test_parse_rejects_unknown_label(self):
        with pytest.raises(DomainError):
            SymmetryClass.parse("odd")

    def test_all_classes_start_with_odd_odd(self):
        classes = SymmetryClass.all()

        assert len(classes) == 4
        assert classes[0] == ODD_ODD
        assert len(set(classes)) == 4


class TestConfocalConic:
    """Tests for confocal conics."""

    def test_elliptic_caustic(self):
        shape = ellipse_from_sigma(0.5)
        conic = confocal_conic(shape, 0.09297 ** 2)

        assert conic.kind == ConicKind.ELLIPSE
        assert conic.semi_x == pytest.approx(1.228268, abs=1e-5)
        assert conic.focal_distance == pytest.approx(shape.focal_distance)

    def test_hyperbolic_caustic(self):
        shape = ellipse_from_sigma(0.5)
        conic = confocal_conic(shape, -(0.408248 ** 2))

        assert conic.kind == ConicKind.HYPERBOLA
        assert conic.semi_x == pytest.approx(1.1547, abs=1e-4)
        assert conic.focal_distance == pytest.approx(shape.focal_distance)

    def test_lambda_out_of_range(self):
        shape = ellipse_from_sigma(0.5)

        with pytest.raises(DomainError):
            confocal_conic(shape, shape.b ** 2)
        with pytest.raises(DomainError):
            confocal_conic(rectangle(1, 2), 0.1)


class TestConventions:
    """Tests for unit conventions."""

    def test_period_length_inverse(self):
        period = CONVENTIONS.period(6.0, 400.0)

        assert period == pytest.approx(6.0 / 40.0)
        assert CONVENTIONS.length(period, 400.0) == pytest.approx(6.0)
        assert CONVENTIONS.energy(CONVENTIONS.momentum(9.0)) == pytest.approx(9.0)


class TestSpectrum:
    """Tests for Spectrum."""

    def test_converged_prefix(self):
        spectrum = Spectrum(None, ODD_ODD, [1.0, 4.0, 9.0], converged_count=2)

        assert list(spectrum.converged) == [1.0, 4.0]
        assert list(spectrum.momenta) == [1.0, 2.0]
        assert not spectrum.is_complete
        assert spectrum.symmetry_label == "odd-odd"

    def test_staircase(self):
        spectrum = Spectrum(None, ODD_ODD, [1.0, 2.0, 3.0], converged_count=3)

        assert list(spectrum.staircase([0.5, 2.0, 10.0])) == [0, 2, 3]

    def test_rejects_descending_levels(self):
        with pytest.raises(ContractViolation):
            Spectrum(None, ODD_ODD, [2.0, 1.0], converged_count=2)

    def test_rejects_non_positive_levels(self):
        with pytest.raises(ContractViolation):
            Spectrum(None, ODD_ODD, [0.0, 1.0], converged_count=2)

    def test_rejects_converged_count_overflow(self):
        with pytest.raises(ContractViolation):
            Spectrum(None, ODD_ODD, [1.0], converged_count=2)


class TestPeriodicOrbitFamily:
    """Tests for PeriodicOrbitFamily."""

    def test_default_labels(self):
        r31 = PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 3, 1, 6.0, 1.0, 1.0)
        o4 = PeriodicOrbitFamily(FamilyKind.LIBRATIONAL, 4, 1, 5.0, 1.0, 1.0)

        assert r31.label == "R3,1"
        assert o4.label == "O4"

    def test_amplitude(self):
        family = PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 3, 1, 4.0, 2.0, 0.5)

        assert family.amplitude == pytest.approx(0.5 * 2.0 / 2.0)

    def test_repeated(self):
        family = PeriodicOrbitFamily(FamilyKind.LIBRATIONAL, 4, 1, 5.0, 1.0, 1.0)
        twice = family.repeated(2)

        assert twice.label == "2O4"
        assert twice.length == 10.0
        assert twice.repetition == 2
        assert not twice.primitive
        assert twice.repeated(2).label == "4O4"

    def test_isolated_orbits_cover_no_area(self):
        with pytest.raises(ValueError):
            PeriodicOrbitFamily(FamilyKind.ISOLATED, 2, 1, 4.0, 1.0, 0.5)

    def test_to_dict_record(self):
        record = PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 3, 1, 6.0, 1.0, 1.0).to_dict()

        assert record["kind"] == "R"
        assert record["L"] == 6.0
        assert record["lambda"] is None


class TestStatistics:
    """Tests for ensemble and curve models."""

    def test_ensemble_default_spread(self):
        spec = EnsembleSpec(center=0.5)

        assert spec.width == pytest.approx(0.005)
        assert spec.samples == 50

    def test_ensemble_validation(self):
        with pytest.raises(DomainError):
            EnsembleSpec(center=1.5)
        with pytest.raises(DomainError):
            EnsembleSpec(center=0.5, samples=0)

    def test_stat_curve_shapes(self):
        with pytest.raises(ValueError):
            StatCurve(StatisticKind.SPACING, [0, 1], [1], [0, 0], 1)

    def test_stat_curve_rows(self):
        curve = StatCurve(StatisticKind.RIGIDITY, [1.0], [2.0], [0.1], 5)

        assert list(curve.rows()) == [(1.0, 2.0, 0.1, 5)]

    def test_unfolded_spacings(self):
        unfolded = UnfoldedSpectrum.from_levels([0.0, 1.0, 3.0])

        assert list(unfolded.spacings) == [1.0, 2.0]


class TestLengthModels:
    """Tests for length-spectrum models."""

    def test_nominal_half_width(self):
        assert nominal_half_width((10.0, 20.0)) == pytest.approx(0.3790988534)

    def test_peak_validation(self):
        with pytest.raises(ValueError):
            Peak(position=1.0, height=0.0, half_width=0.1)

    def test_match_row_ratio(self):
        row = MatchRow("R3,1", 6.03, 6.04, 0.9, 1.0)

        assert row.matched
        assert row.delta_l == pytest.approx(0.01)
        assert row.ratio == pytest.approx(0.9)

    def test_unmatched_row(self):
        row = MatchRow("R5,2", 6.3, None, None, 0.4)

        assert not row.matched
        assert row.delta_l is None
        assert row.ratio is None
        assert np.isfinite(row.height_theory)
