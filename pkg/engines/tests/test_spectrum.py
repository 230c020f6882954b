"""
Tests for the Spectrum Engine and its solvers.
"""

import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy import linalg, sparse, special
from scipy.sparse.linalg import eigsh

from core.exceptions import ContractViolation, DomainError
from core.models import (
    MERGED,
    ODD_ODD,
    ShapeKind,
    Spectrum,
    SymmetryClass,
    ellipse_from_sigma,
    rectangle,
)
from engines.spectrum import SpectrumEngine
from engines.spectrum.bessel import admissible_orders, bessel_zero, cb_spectrum, quarter_disk_basis
from engines.spectrum.cache import SpectrumCache, cache_key
from engines.spectrum.ellipse import _converged_prefix, eb_hamiltonian, eb_spectrum, initial_cutoff
from engines.spectrum.merge import merge_classes
from engines.spectrum.rectangle import FULL, rb_spectrum

EVEN_EVEN = SymmetryClass.parse("even-even")
ODD_EVEN = SymmetryClass.parse("odd-even")


def _elliptic_grid_eigenvalues(a, b, count, points):
    """Five-point odd-odd levels of the quarter ellipse on an elliptic-coordinate grid.

    With x = f cosh(mu) cos(nu), y = f sinh(mu) sin(nu) the quarter is the
    rectangle [0, mu0] x [0, pi/2], Dirichlet on every side, and
    -(u_mumu + u_nunu) = E f^2 (sinh^2 mu + sin^2 nu) u.
    """
    focal = math.sqrt(a * a - b * b)
    mu0 = math.atanh(b / a)

    def second_difference(length):
        h = length / points
        nodes = h * np.arange(1, points)
        ones = np.ones(points - 1)
        return sparse.diags([-ones[1:], 2.0 * ones, -ones[1:]], [-1, 0, 1]) / h ** 2, nodes

    d_mu, mu = second_difference(mu0)
    d_nu, nu = second_difference(0.5 * math.pi)
    identity = sparse.identity(points - 1)
    stiffness = (sparse.kron(d_mu, identity) + sparse.kron(identity, d_nu)).tocsc()
    weight = focal ** 2 * (np.sinh(mu)[:, None] ** 2 + np.sin(nu)[None, :] ** 2)
    values = eigsh(stiffness, k=count, M=sparse.diags(weight.ravel()).tocsc(), sigma=0.0)[0]
    return np.sort(values)


def elliptic_grid_levels(a, b, count, points=120):
    """Richardson extrapolation of two grids; the five-point error is O(h^2)."""
    coarse = _elliptic_grid_eigenvalues(a, b, count, points)
    fine = _elliptic_grid_eigenvalues(a, b, count, 2 * points)
    return (4.0 * fine - coarse) / 3.0


class TestRectangle:
    """Tests for the closed-form rectangle spectrum."""

    def test_ground_state(self):
        spectrum = rb_spectrum(1.0, 2.0, 10)

        assert spectrum.eigenvalues[0] == pytest.approx(math.pi ** 2 * (1.0 + 0.25))
        assert spectrum.symmetry == FULL
        assert spectrum.is_complete

    def test_count_and_order(self):
        spectrum = rb_spectrum(1.0, (1 + math.sqrt(5)) / 2, 500)

        assert spectrum.eigenvalues.size == 500
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)

    def test_square_degeneracy(self):
        levels = rb_spectrum(1.0, 1.0, 3).eigenvalues

        assert levels[1] == pytest.approx(levels[2])

    def test_invalid_sides(self):
        with pytest.raises(DomainError):
            rb_spectrum(0.0, 1.0, 5)

    def test_empty(self):
        assert rb_spectrum(1.0, 1.0, 0).eigenvalues.size == 0


class TestBessel:
    """Tests for Bessel zeros and the circle spectrum."""

    @pytest.mark.parametrize("m", [0, 1, 2, 7, 20])
    def test_zeros_match_scipy(self, m):
        reference = special.jn_zeros(m, 5)

        for s in range(1, 6):
            assert bessel_zero(m, s) == pytest.approx(reference[s - 1], rel=1e-12)

    def test_admissible_orders(self):
        assert admissible_orders(ODD_ODD, 6)[1] == [2, 4, 6]
        assert admissible_orders(EVEN_EVEN, 4)[1] == [0, 2, 4]
        assert admissible_orders(ODD_EVEN, 5)[1] == [1, 3, 5]

    def test_quarter_disk_basis_below_cutoff(self):
        basis = quarter_disk_basis(ODD_ODD, 12.0)

        assert basis
        assert all(f.zero <= 12.0 for f in basis)
        assert all(f.m % 2 == 0 and f.m >= 2 for f in basis)

    def test_cb_spectrum_odd_odd(self):
        spectrum = cb_spectrum(ODD_ODD, 20)
        zeros = sorted(
            z for m in range(2, 40, 2) for z in special.jn_zeros(m, 10)
        )[:20]

        assert spectrum.eigenvalues == pytest.approx(np.square(zeros), rel=1e-10)
        assert spectrum.shape.is_circle


class TestEllipse:
    """Tests for the quarter-ellipse Rayleigh-Ritz solver."""

    def test_circle_limit_is_exact(self):
        spectrum = eb_spectrum(1.0, ODD_ODD, 10)

        assert spectrum.converged_count >= 10
        assert spectrum.converged[:10] == pytest.approx(
            cb_spectrum(ODD_ODD, 10).eigenvalues, rel=1e-12
        )

    def test_sigma_out_of_range(self):
        with pytest.raises(DomainError):
            eb_spectrum(1.5, ODD_ODD, 5)
        with pytest.raises(DomainError):
            eb_spectrum(0.0, ODD_ODD, 5)

    def test_hamiltonian_is_symmetric(self):
        basis = quarter_disk_basis(ODD_ODD, 15.0)

        matrix = eb_hamiltonian(0.5, ODD_ODD, basis)

        assert np.allclose(matrix, matrix.T)

    def test_basis_of_wrong_class(self):
        basis = quarter_disk_basis(EVEN_EVEN, 10.0)

        with pytest.raises(ContractViolation):
            eb_hamiltonian(0.5, ODD_ODD, basis)

    def test_levels_decrease_under_enlargement(self):
        """Ritz values of a nested basis never increase."""
        basis = quarter_disk_basis(ODD_ODD, 18.0)
        inner = np.array([f.zero <= 15.0 for f in basis])
        matrix = eb_hamiltonian(0.5, ODD_ODD, basis)

        large = linalg.eigh(matrix, eigvals_only=True)
        small = linalg.eigh(matrix[np.ix_(inner, inner)], eigvals_only=True)

        assert np.all(large[: small.size] <= small + 1e-9)

    def test_converged_prefix_and_meta(self):
        spectrum = eb_spectrum(0.5, ODD_ODD, 15)

        assert spectrum.converged_count >= 15
        assert not spectrum.meta["partial"]
        assert spectrum.meta["basis_size"] > 15
        assert spectrum.meta["mean_spacing"] == pytest.approx(16.0)
        assert np.all(np.diff(spectrum.converged) > 0)

    def test_change_is_measured_in_spacings(self):
        small = np.array([10.0, 20.0, 30.0])
        large = np.array([10.0, 19.99, 29.0])

        assert _converged_prefix(small, large, 16.0, 1e-2) == 2
        assert _converged_prefix(small, large, 16.0, 1e-4) == 1

    def test_enlarged_basis_uses_doubled_quadrature(self):
        with patch("engines.spectrum.ellipse.eb_hamiltonian", wraps=eb_hamiltonian) as hamiltonian:
            eb_spectrum(0.5, ODD_ODD, 10, {"max_rounds": 1})

        nodes = [c.args[3:5] for c in hamiltonian.call_args_list]
        assert nodes == [(64, 256), (128, 512)]

    def test_partial_when_rounds_run_out(self):
        spectrum = eb_spectrum(
            0.3, ODD_ODD, 40, {"max_rounds": 1, "oversampling": 1.0, "convergence_tol": 1e-12}
        )

        assert spectrum.converged_count < 40
        assert spectrum.meta["partial"]
        assert spectrum.is_partial

    @pytest.mark.parametrize("label", ["odd-odd", "even-even"])
    def test_near_circle_is_close_to_circle(self, label):
        symmetry = SymmetryClass.parse(label)
        ellipse = eb_spectrum(0.999, symmetry, 50).converged[:50]
        circle = cb_spectrum(symmetry, 50).eigenvalues

        assert np.max(np.abs(ellipse - circle) / circle) < 1e-4

    @pytest.mark.parametrize("label", ["odd-even", "even-odd"])
    def test_near_circle_first_order_shift(self, label):
        """m = 1 levels move at first order in 1 - sigma, bounded by |sigma - 1/sigma|/2."""
        sigma = 0.999
        symmetry = SymmetryClass.parse(label)
        ellipse = eb_spectrum(sigma, symmetry, 50).converged[:50]
        circle = cb_spectrum(symmetry, 50).eigenvalues

        deviation = np.abs(ellipse - circle) / circle
        assert deviation.max() < 0.5 * abs(sigma - 1.0 / sigma)
        assert deviation.max() > 1e-4

    def test_matches_finite_differences(self):
        shape = ellipse_from_sigma(0.5)

        reference = elliptic_grid_levels(shape.a, shape.b, 20)
        levels = eb_spectrum(0.5, ODD_ODD, 20).converged[:20]

        assert levels == pytest.approx(reference, rel=5e-3)

    @pytest.mark.slow
    def test_three_hundred_levels(self):
        spectrum = eb_spectrum(0.5, ODD_ODD, 300)

        assert spectrum.converged_count >= 300


class TestMerge:
    """Tests for merging symmetry classes."""

    def test_requires_four_classes(self):
        spectra = [cb_spectrum(c, 5) for c in SymmetryClass.all()[:2]]

        with pytest.raises(ContractViolation):
            merge_classes(spectra)

    def test_requires_one_shape(self):
        spectra = [cb_spectrum(c, 5) for c in SymmetryClass.all()]
        spectra[0] = Spectrum(ellipse_from_sigma(0.5), ODD_ODD, [1.0, 2.0], 2)

        with pytest.raises(ContractViolation):
            merge_classes(spectra)

    def test_circle_degeneracies_removed(self):
        """Odd-even and even-odd circle levels coincide for odd m."""
        spectra = [cb_spectrum(c, 30) for c in SymmetryClass.all()]

        merged = merge_classes(spectra)

        assert merged.symmetry == MERGED
        assert merged.meta["removed"] > 0
        assert np.all(np.diff(merged.eigenvalues) > 0)
        assert merged.eigenvalues[-1] <= min(s.converged[-1] for s in spectra)

    def test_zero_tolerance_keeps_everything(self):
        spectra = [cb_spectrum(c, 10) for c in SymmetryClass.all()]

        merged = merge_classes(spectra, degeneracy_tol=0.0)

        assert merged.meta["removed"] == 0

    def test_partial_class_marks_the_merge(self):
        spectra = [cb_spectrum(c, 10) for c in SymmetryClass.all()]
        spectra[2].meta["partial"] = True

        assert merge_classes(spectra).is_partial
        assert not merge_classes([cb_spectrum(c, 10) for c in SymmetryClass.all()]).is_partial

    @pytest.mark.slow
    def test_ellipse_doublets_removed(self):
        """Rotational doublets of the sigma = 1/2 ellipse pair classes across parity."""
        k_cut = initial_cutoff(EVEN_EVEN, 200)
        solver = {"k_cut": k_cut, "max_rounds": 1}
        spectra = [eb_spectrum(0.5, c, 200, solver) for c in SymmetryClass.all()]

        merged = merge_classes(spectra, degeneracy_tol=1e-8)

        assert merged.meta["removed"] > 0


class TestSpectrumCache:
    """Tests for the on-disk spectrum cache."""

    @pytest.fixture
    def cache(self, tmp_path):
        return SpectrumCache(tmp_path / "cache")

    def test_miss_then_hit(self, cache):
        params = {"kind": "rectangle", "a": 1.0, "b": 2.0, "count": 20}
        calls = []

        def build():
            calls.append(1)
            return rb_spectrum(1.0, 2.0, 20)

        first = cache.get_or_build(params, build)
        second = cache.get_or_build(params, build)

        assert len(calls) == 1
        assert (cache.hits, cache.misses) == (1, 1)
        assert np.array_equal(first.eigenvalues, second.eigenvalues)
        assert second.shape.kind == ShapeKind.RECTANGLE

    def test_symmetry_restored(self, cache):
        key = cache_key({"kind": "circle", "symmetry": "odd-odd", "count": 5})
        cache.store(key, cb_spectrum(ODD_ODD, 5))

        assert cache.load(key).symmetry == ODD_ODD

    def test_corrupt_file_is_rebuilt(self, cache):
        params = {"kind": "rectangle", "a": 1.0, "b": 1.0, "count": 5}
        cache.get_or_build(params, lambda: rb_spectrum(1.0, 1.0, 5))
        cache.path_for(cache_key(params)).write_text("garbage\n")

        assert cache.load(cache_key(params)) is None
        rebuilt = cache.get_or_build(params, lambda: rb_spectrum(1.0, 1.0, 5))

        assert rebuilt.eigenvalues.size == 5
        assert cache.misses == 2

    def test_key_depends_on_parameters(self):
        assert cache_key({"count": 5}) != cache_key({"count": 6})


class TestSpectrumEngine:
    """Tests for SpectrumEngine."""

    @pytest.fixture
    def engine(self):
        return SpectrumEngine()

    def test_engine_initialization(self, engine):
        assert engine.name == "SpectrumEngine"
        assert engine.enabled
        assert engine.cache is None

    def test_configure_rejects_small_quadrature(self, engine):
        assert not engine.configure({"radial_nodes": 8})
        assert engine.configure({"convergence_tol": 1e-7})
        assert engine.config["convergence_tol"] == 1e-7

    def test_rectangle_dispatch(self, engine):
        spectrum = engine.build(rectangle(1.0, 2.0), None, 10)

        assert spectrum.symmetry == FULL
        assert engine.run_count == 1

    def test_circle_dispatch(self, engine):
        spectrum = engine.circle(ODD_ODD, 10)

        assert spectrum.meta["solver"] == "bessel-zeros"

    def test_cached_build(self, tmp_path):
        engine = SpectrumEngine(cache_dir=tmp_path)

        engine.build(rectangle(1.0, 2.0), None, 10)
        engine.build(rectangle(1.0, 2.0), None, 10)

        assert engine.cache.hits == 1
        assert list(tmp_path.glob("spectrum-*.csv"))

    def test_merged_circle(self, engine):
        merged = engine.merged(ellipse_from_sigma(1.0), 20)

        assert merged.symmetry == MERGED
        assert len(merged.meta["classes"]) == 4
