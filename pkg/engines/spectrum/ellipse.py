"""
Rayleigh-Ritz spectrum of the quarter ellipse.

The ellipse x = a u, y = b v (a b = 1) maps onto the unit disk, where the
Helmholtz operator becomes H = -sigma d_uu - d_vv / sigma. H is split into
an isotropic part, diagonal in the quarter-disk Bessel basis, and the
anisotropic part (sigma - 1/sigma)/2 * (-d_uu + d_vv) whose weak form is
assembled by tensor quadrature.
"""

import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import linalg, special

from core.exceptions import ContractViolation, DomainError
from core.models import (
    AngularKind,
    BasisFunction,
    BilliardShape,
    Spectrum,
    SymmetryClass,
    area,
    ellipse_from_sigma,
)
from engines.spectrum.bessel import admissible_orders, quarter_disk_basis

logger = logging.getLogger(__name__)

DEFAULT_SOLVER_CONFIG: Dict[str, Any] = {
    "radial_nodes": 64,
    "angular_nodes": 256,
    "oversampling": 3.0,
    "growth": 1.2,
    "convergence_tol": 1e-2,
    "max_rounds": 6,
}


def _radial_rule(nodes: int):
    x, w = leggauss(nodes)
    return 0.5 * (x + 1.0), 0.5 * w


def _angular_rule(nodes: int):
    theta = np.linspace(0.0, 0.5 * math.pi, nodes + 1)
    w = np.full(nodes + 1, 0.5 * math.pi / nodes)
    w[[0, -1]] *= 0.5
    return theta, w


def _angular(kind: AngularKind, m: int, theta: np.ndarray):
    """Angular factor and its theta derivative."""
    if kind == AngularKind.SINE:
        return np.sin(m * theta), m * np.cos(m * theta)
    return np.cos(m * theta), -m * np.sin(m * theta)


def _normalization(kind: AngularKind, m: int, zeros: np.ndarray) -> np.ndarray:
    angular_norm = 0.5 * math.pi if (kind == AngularKind.COSINE and m == 0) else 0.25 * math.pi
    radial_norm = 0.5 * special.jv(m + 1, zeros) ** 2
    return 1.0 / np.sqrt(radial_norm * angular_norm)


def _check_basis(basis: List[BasisFunction]) -> AngularKind:
    kinds = {f.angular for f in basis}
    parities = {f.m % 2 for f in basis}
    if len(kinds) != 1 or len(parities) != 1:
        raise ContractViolation("Basis mixes symmetry classes")
    return kinds.pop()


def anisotropy_matrix(
    basis: List[BasisFunction], radial_nodes: int = 64, angular_nodes: int = 256
) -> np.ndarray:
    """Weak-form matrix D_ij = <d_u phi_i, d_u phi_j> - <d_v phi_i, d_v phi_j>.

    Entries violating the selection rule |m_i - m_j| in {0, 2} are exactly zero.
    """
    kind = _check_basis(basis)
    k_max = max(f.zero for f in basis)
    m_max = max(f.m for f in basis)
    r, wr = _radial_rule(max(radial_nodes, int(1.5 * k_max) + 40))
    theta, wt = _angular_rule(max(angular_nodes, m_max + 8))
    cos2, sin2 = np.cos(2 * theta), np.sin(2 * theta)

    groups: Dict[int, np.ndarray] = {}
    for index, f in enumerate(basis):
        groups.setdefault(f.m, []).append(index)
    radial = {}
    for m, idx in groups.items():
        idx = np.asarray(idx)
        groups[m] = idx
        zeros = np.array([basis[i].zero for i in idx])
        arg = zeros[:, None] * r[None, :]
        norm = _normalization(kind, m, zeros)[:, None]
        radial[m] = (
            norm * special.jv(m, arg),
            norm * special.jvp(m, arg) * zeros[:, None],
            _angular(kind, m, theta),
        )

    size = len(basis)
    d = np.zeros((size, size))
    for mi in sorted(groups):
        for mj in (mi, mi + 2):
            if mj not in groups:
                continue
            ji, jpi, (ai, dai) = radial[mi]
            jj, jpj, (aj, daj) = radial[mj]
            rr = (jpi * (wr * r)) @ jpj.T
            tt = (ji * (wr / r)) @ jj.T
            rt = (jpi * wr) @ jj.T
            tr = (ji * wr) @ jpj.T
            i_rr = np.sum(wt * cos2 * ai * aj)
            i_tt = np.sum(wt * cos2 * dai * daj)
            i_rt = np.sum(wt * sin2 * ai * daj)
            i_tr = np.sum(wt * sin2 * dai * aj)
            block = rr * i_rr - tt * i_tt - rt * i_rt - tr * i_tr
            rows, cols = groups[mi], groups[mj]
            if mi == mj:
                block = 0.5 * (block + block.T)
            d[np.ix_(rows, cols)] = block
            d[np.ix_(cols, rows)] = block.T
    return d


def eb_hamiltonian(
    sigma: float,
    symmetry: SymmetryClass,
    basis: List[BasisFunction],
    radial_nodes: int = 64,
    angular_nodes: int = 256,
) -> np.ndarray:
    """Hamiltonian of the quarter ellipse in the scaled quarter-disk basis.

    M_ij = (sigma + 1/sigma)/2 * j_i^2 delta_ij + (sigma - 1/sigma)/2 * D_ij

    Args:
        sigma: Aspect ratio (a b = 1)
        symmetry: Symmetry class the basis must belong to
        basis: Quarter-disk basis functions

    Returns:
        Symmetric matrix
    """
    if not sigma > 0:
        raise DomainError(f"Aspect ratio must be positive, got {sigma}")
    kind, orders = admissible_orders(symmetry, max(f.m for f in basis))
    if any(f.angular != kind or f.m not in orders for f in basis):
        raise ContractViolation(f"Basis does not belong to symmetry class {symmetry}")

    zeros = np.array([f.zero for f in basis])
    c_plus = 0.5 * (sigma + 1.0 / sigma)
    c_minus = 0.5 * (sigma - 1.0 / sigma)
    matrix = np.diag(c_plus * zeros ** 2)
    if c_minus != 0.0:
        matrix += c_minus * anisotropy_matrix(basis, radial_nodes, angular_nodes)
    return matrix


def _initial_cutoff(symmetry: SymmetryClass, size: int) -> float:
    # quarter-disk Weyl law N(k) ~ k^2/16
    k_cut = 4.0 * math.sqrt(size) + 4.0
    while len(quarter_disk_basis(symmetry, k_cut)) <= size:
        k_cut *= 1.1
    return k_cut


def initial_cutoff(symmetry: SymmetryClass, target_count: int, oversampling: float = 3.0) -> float:
    """Smallest scanned k_cut whose basis exceeds ``oversampling`` x target."""
    return _initial_cutoff(symmetry, int(math.ceil(oversampling * target_count)))


def mean_spacing(shape: BilliardShape) -> float:
    """Mean level spacing 4 pi / A of one desymmetrized quarter."""
    return 16.0 * math.pi / area(shape)


def _converged_prefix(small: np.ndarray, large: np.ndarray, spacing: float, tol: float) -> int:
    n = min(small.size, large.size)
    change = np.abs(small[:n] - large[:n]) / spacing
    failed = np.nonzero(change >= tol)[0]
    return int(failed[0]) if failed.size else n


def eb_spectrum(
    sigma: float,
    symmetry: SymmetryClass,
    target_count: int,
    config: Optional[Dict[str, Any]] = None,
) -> Spectrum:
    """Quarter-ellipse levels certified by a 20% basis enlargement.

    Each round solves the basis j <= k_cut at the configured quadrature and
    the enlarged basis j <= growth * k_cut at doubled quadrature. A level is
    converged when the two values differ by less than ``convergence_tol``
    mean level spacings.

    Args:
        sigma: Aspect ratio in (0, 1]
        symmetry: Symmetry class
        target_count: Converged levels wanted
        config: Solver overrides (see DEFAULT_SOLVER_CONFIG)

    Returns:
        Spectrum of the enlarged basis; ``converged_count < target_count``
        and ``meta["partial"]`` flag a convergence shortfall
    """
    if not 0 < sigma <= 1:
        raise DomainError(f"eb_spectrum needs sigma in (0, 1], got {sigma}")
    cfg = {**DEFAULT_SOLVER_CONFIG, **(config or {})}
    shape = ellipse_from_sigma(sigma)
    spacing = mean_spacing(shape)
    radial, angular = int(cfg["radial_nodes"]), int(cfg["angular_nodes"])
    k_cut = cfg.get("k_cut") or initial_cutoff(symmetry, target_count, cfg["oversampling"])

    for round_index in range(int(cfg["max_rounds"])):
        basis = quarter_disk_basis(symmetry, cfg["growth"] * k_cut)
        inner = np.array([f.zero <= k_cut for f in basis])
        small_basis = [f for f, keep in zip(basis, inner) if keep]
        small = linalg.eigh(
            eb_hamiltonian(sigma, symmetry, small_basis, radial, angular), eigvals_only=True
        )
        large = linalg.eigh(
            eb_hamiltonian(sigma, symmetry, basis, 2 * radial, 2 * angular), eigvals_only=True
        )
        converged = _converged_prefix(small, large, spacing, cfg["convergence_tol"])
        logger.debug(
            f"eb_spectrum sigma={sigma} {symmetry}: round {round_index}, basis "
            f"{inner.sum()}/{len(basis)}, converged {converged}"
        )
        if converged >= target_count:
            break
        k_cut *= cfg["growth"]

    partial = converged < target_count
    if partial:
        logger.warning(
            f"eb_spectrum sigma={sigma} {symmetry}: only {converged} of {target_count} "
            f"levels converged"
        )
    return Spectrum(
        shape=shape,
        symmetry=symmetry,
        eigenvalues=large,
        converged_count=converged,
        meta={
            "solver": "rayleigh-ritz-quarter-disk",
            "basis_size": len(basis),
            "k_cut": k_cut,
            "growth": cfg["growth"],
            "convergence_tol": cfg["convergence_tol"],
            "mean_spacing": spacing,
            "radial_nodes": radial,
            "angular_nodes": angular,
            "partial": partial,
        },
    )
