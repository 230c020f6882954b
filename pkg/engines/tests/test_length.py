"""
Tests for the Length Engine: Fourier length spectra, peaks and matching.
"""

import math

import numpy as np
import pytest

from core.exceptions import ContractViolation, DomainError, InsufficientLevelsError
from core.models import (
    FamilyKind,
    Peak,
    PeriodicOrbitFamily,
    Spectrum,
    ellipse_from_sigma,
    rectangle,
)
from engines.length import (
    LengthEngine,
    default_reference,
    detect_peaks,
    format_match_table,
    half_width_dispersion,
    interference_groups,
    length_spectrum_from_momenta,
    match_report,
    match_table_rows,
    theory_peaks,
)
from engines.length.matching import (
    INTERFERENCE,
    ISOLATED,
    REFERENCE,
    REFERENCE_UNMATCHED,
    UNMATCHED,
)
from engines.orbits import cb_catalog, eb_catalog, rb_catalog
from engines.spectrum import SpectrumEngine
from engines.spectrum.rectangle import rb_spectrum

COUNT = 400
STEP = 2.0 * math.pi / 5.0


@pytest.fixture
def comb():
    """Equally spaced momenta: |A(l)| peaks at multiples of 5."""
    return np.arange(1, COUNT + 1) * STEP


@pytest.fixture
def catalog():
    return [
        PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 3, 1, 5.0, 1.0, 1.0),
        PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 5, 2, 7.0, 1.0, 1.0),
        PeriodicOrbitFamily(FamilyKind.ISOLATED, 2, 1, 10.0, 0.0, 0.5, label="I-minor"),
    ]


class TestLengthSpectrum:
    """Tests for the Fourier transform over eigen-momenta."""

    def test_value_at_zero(self, comb):
        ls = length_spectrum_from_momenta(comb, l_max=2.0)

        assert ls.magnitude[0] == pytest.approx(COUNT / (2.0 * math.pi))
        assert ls.level_count == COUNT

    def test_default_grid(self, comb):
        ls = length_spectrum_from_momenta(comb, l_max=2.0)

        assert ls.spacing == pytest.approx(ls.nominal_half_width / 10.0)
        assert ls.l_grid[0] == 0.0
        assert ls.l_grid[-1] <= 2.0 + ls.spacing

    def test_window_selects_momenta(self, comb):
        window = (0.0, 100.0 * STEP + 1e-9)
        ls = length_spectrum_from_momenta(comb, window=window, l_max=1.0, min_levels=50)

        assert ls.level_count == 100

    def test_taper_lowers_weight(self, comb):
        plain = length_spectrum_from_momenta(comb, l_max=1.0)
        tapered = length_spectrum_from_momenta(comb, l_max=1.0, taper=True)

        assert tapered.taper
        assert tapered.magnitude[0] < plain.magnitude[0]

    def test_too_few_levels(self, comb):
        with pytest.raises(InsufficientLevelsError):
            length_spectrum_from_momenta(comb[:50])
        with pytest.raises(InsufficientLevelsError):
            length_spectrum_from_momenta([])

    def test_invalid_window(self, comb):
        with pytest.raises(DomainError):
            length_spectrum_from_momenta(comb, window=(10.0, 5.0))


class TestPeaks:
    """Tests for peak detection."""

    def test_comb_peaks(self, comb):
        ls = length_spectrum_from_momenta(comb, l_max=12.0)

        peaks = detect_peaks(ls, min_height=0.5)

        assert [p.position for p in peaks] == pytest.approx([5.0, 10.0], abs=ls.spacing)
        assert peaks[0].height == pytest.approx(COUNT / (2.0 * math.pi), rel=0.01)
        assert peaks[0].half_width == pytest.approx(ls.nominal_half_width, rel=0.05)

    def test_nothing_beyond_the_grid(self, comb):
        ls = length_spectrum_from_momenta(comb, l_max=4.0)

        assert detect_peaks(ls, min_height=0.5, l_min=20.0) == []

    def test_dispersion(self):
        peaks = [Peak(1.0, 1.0, 0.1), Peak(2.0, 0.9, 0.2), Peak(3.0, 0.01, 5.0)]

        assert half_width_dispersion(peaks) == pytest.approx(2.0)
        assert math.isnan(half_width_dispersion([]))


class TestMatching:
    """Tests for theory peaks and the match report."""

    def test_theory_peaks_are_relative(self, catalog):
        theory = theory_peaks(catalog, "R3,1")

        assert [t.length for t in theory] == [5.0, 7.0, 10.0]
        assert theory[0].is_reference
        assert theory[0].relative_amplitude == 1.0
        assert theory[1].relative_amplitude == pytest.approx(math.sqrt(5.0 / 7.0))
        assert theory[2].relative_amplitude == 0.0

    def test_missing_reference(self, catalog):
        with pytest.raises(ContractViolation):
            theory_peaks(catalog, "R9,4")

    def test_interference_groups(self, catalog):
        close = PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 7, 3, 7.05, 1.0, 1.0)
        theory = theory_peaks(catalog + [close], "R3,1")

        groups = interference_groups(theory, 0.1)

        assert len(groups) == 1
        assert [p.family.label for p in groups[0]] == ["R5,2", "R7,3"]

    def test_match_report(self, catalog):
        peaks = [Peak(5.01, 4.0, 0.05), Peak(9.98, 2.0, 0.05)]

        rows = match_report(peaks, theory_peaks(catalog, "R3,1"))

        reference, unmatched, isolated = rows
        assert reference.flags == (REFERENCE,)
        assert reference.height_numeric == pytest.approx(1.0)
        assert unmatched.flags == (UNMATCHED,)
        assert unmatched.delta_l is None
        assert ISOLATED in isolated.flags
        assert isolated.height_numeric == pytest.approx(0.5)
        assert isolated.delta_l == pytest.approx(-0.02)
        assert peaks[0].matched_family.label == "R3,1"

    def test_reference_unmatched(self, catalog):
        rows = match_report([Peak(10.0, 1.0, 0.05)], theory_peaks(catalog, "R3,1"))

        assert REFERENCE_UNMATCHED in rows[0].flags
        assert UNMATCHED in rows[0].flags

    def test_interference_flag(self, catalog):
        close = PeriodicOrbitFamily(FamilyKind.ROTATIONAL, 7, 3, 7.02, 1.0, 1.0)
        peaks = [Peak(5.0, 1.0, 0.05), Peak(7.01, 1.0, 0.05)]

        rows = match_report(peaks, theory_peaks(catalog + [close], "R3,1"))

        assert INTERFERENCE in rows[1].flags
        assert INTERFERENCE in rows[2].flags

    def test_tables(self, catalog):
        rows = match_report([Peak(5.0, 1.0, 0.05)], theory_peaks(catalog, "R3,1"))

        csv_rows = list(match_table_rows(rows))
        text = format_match_table(rows)

        assert csv_rows[0][0] == "R3,1"
        assert csv_rows[1][2] == ""
        assert csv_rows[2][-1] == "isolated|unmatched"
        assert text.splitlines()[0].startswith("family")
        assert " - " in text


class TestLengthEngine:
    """Tests for LengthEngine."""

    @pytest.fixture
    def engine(self):
        return LengthEngine()

    def test_configure(self, engine):
        assert engine.configure({"l_max": 20.0})
        assert not engine.configure({"l_min": 30.0})
        assert not engine.configure({"min_height": 1.5})

    def test_default_reference(self):
        shape = rectangle(1.0, 2.0)

        assert default_reference(shape, rb_catalog(1.0, 2.0, 6.0)) == "(1,0)"
        with pytest.raises(ContractViolation):
            default_reference(shape, [])

    def test_shapeless_spectrum_needs_reference(self, engine, comb, catalog):
        spectrum = Spectrum(None, "comb", comb ** 2, COUNT)

        with pytest.raises(ContractViolation):
            engine.analyze(spectrum, catalog)
        assert engine.error_count == 1

    def test_comb_analysis(self, engine, comb, catalog):
        engine.configure({"min_height": 0.5})
        spectrum = Spectrum(None, "comb", comb ** 2, COUNT)

        analysis = engine.analyze(spectrum, catalog, reference="R3,1")

        assert analysis.reference == "R3,1"
        assert [r.family for r in analysis.rows] == ["R3,1", "R5,2", "I-minor"]
        assert analysis.rows[0].matched
        assert not analysis.rows[1].matched
        assert analysis.dispersion == pytest.approx(1.0, abs=0.05)
        assert analysis.meta["window"] == [pytest.approx(STEP), pytest.approx(COUNT * STEP)]

    def test_rectangle_analysis(self, engine):
        shape = rectangle(1.0, (1 + math.sqrt(5)) / 2)
        catalog = rb_catalog(shape.a, shape.b, 12.0)

        analysis = engine.analyze(rb_spectrum(shape.a, shape.b, 2000), catalog)
        reference = analysis.rows[0]

        assert analysis.reference == "(1,0)"
        assert reference.l_theory == pytest.approx(2.0)
        assert reference.matched
        assert abs(reference.delta_l) < 2 * analysis.spectrum.nominal_half_width
        assert sum(r.matched for r in analysis.rows) >= 0.8 * len(analysis.rows)
        clean = [r for r in analysis.rows if r.matched and r.ratio and INTERFERENCE not in r.flags]
        within = [r for r in clean if abs(r.ratio - 1.0) < 0.2]
        assert len(within) >= 0.8 * len(clean)

    def test_circle_analysis(self, engine):
        spectrum = SpectrumEngine().merged(ellipse_from_sigma(1.0), 300)
        catalog = cb_catalog(60, repetitions=True, l_max=12.0)
        families = {f.label: f for f in catalog}

        analysis = engine.analyze(spectrum, catalog)

        assert analysis.reference == "R2,1"
        rows = [
            r
            for r in analysis.rows
            if families[r.family].n <= 7
            and families[r.family].repetition == 1
            and INTERFERENCE not in r.flags
        ]
        assert {r.family for r in rows} >= {"R2,1", "R3,1", "R4,1"}
        for row in rows:
            assert row.matched
            assert row.ratio == pytest.approx(1.0, abs=0.2)

    @pytest.mark.slow
    def test_ellipse_analysis(self, engine):
        shape = ellipse_from_sigma(0.5)
        engine.configure({"l_max": 20.0})
        spectrum = SpectrumEngine().merged(shape, 250)

        analysis = engine.analyze(spectrum, eb_catalog(shape, 20.0))
        positions = np.array([p.position for p in analysis.peaks])
        rows = {r.family: r for r in analysis.rows}

        assert spectrum.converged_count >= 800
        for length in (4.0 * shape.b, 4.0 * shape.a, 6.0322, rows["O4"].l_theory):
            assert np.min(np.abs(positions - length)) < analysis.spectrum.nominal_half_width
        assert all(
            r.height_numeric < 0.25 for r in analysis.rows if ISOLATED in r.flags and r.matched
        )
        assert np.any((positions >= 6.5) & (positions <= 6.9))
        o4 = rows["O4"].height_numeric
        for times in (2, 3):
            repeated = rows[f"{times}O4"].height_numeric
            assert repeated / o4 == pytest.approx(1.0 / math.sqrt(times), rel=0.2)
