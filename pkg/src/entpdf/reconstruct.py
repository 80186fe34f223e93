"""Rebuild a density matrix, up to local unitaries, from its marker set.

The rank-2 subspace is placed in canonical form ``span{(1,0,0,0), (0,x,y,z)}``
with ``x >= y`` (the qubit-mirror solution has identical markers).  The top
eigenvector is fixed inside it by ``(theta, phi)`` and the bottom
eigenvector inside the complement by ``(theta_perp, phi_perp)``; the two
remaining eigenvectors are their orthogonal partners.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .canonical import (
    SubspaceCanonicalForm,
    canonical_subspace,
    canonicalize,
    complement_basis,
    state_from_angles,
)
from .compose import ABSENT_TOL, MarkerSet, eigenvalues_from_mu, extract_markers
from .core import as_density_matrix, eig_hermitian
from .errors import InfeasibleMarkers, MissingAngles
from .haar import invert_pi2

__all__ = [
    "ReconstructionInput",
    "build_state",
    "invert_pi2",
    "lo_equivalent",
    "markers_close",
]


@dataclass(frozen=True)
class ReconstructionInput:
    markers: MarkerSet

    def __post_init__(self):
        m = self.markers
        if m.pi2 is not None:
            if not (-1e-12 <= m.pi2.e_cusp <= m.pi2.e_max + 1e-12 <= 1.0 + 2e-12):
                raise InfeasibleMarkers(
                    f"need 0 <= e_cusp <= e_max <= 1, got e_cusp={m.pi2.e_cusp}, e_max={m.pi2.e_max}"
                )
            if m.e1 is not None and m.e1 > m.pi2.e_max + 1e-9:
                raise InfeasibleMarkers("e1 exceeds e_max", m.e1 - m.pi2.e_max)
        mu = np.asarray(m.mu.mu)
        if np.any(mu < -1e-12) or abs(mu.sum() - 1.0) > 1e-9:
            raise InfeasibleMarkers("weights must be non-negative and sum to 1", abs(mu.sum() - 1.0))


def _require(value, name):
    if value is None:
        raise MissingAngles(f"marker field {name!r} is required but absent")
    return value


def _product_pair(e: float):
    """A state of entanglement ``e`` in span{|uu>, |dd>}."""
    a = 0.5 * np.arcsin(np.clip(e, 0.0, 1.0))
    return np.array([np.cos(a), 0, 0, np.sin(a)], dtype=complex)


def _other_in_span(psi, basis):
    """Unit vector of ``span(basis)`` orthogonal to ``psi``."""
    c1, c2 = (np.vdot(b, psi) for b in basis)
    return -np.conj(c2) * basis[0] + np.conj(c1) * basis[1]


def _frame(markers: MarkerSet) -> SubspaceCanonicalForm:
    x, y, _ = invert_pi2(markers.pi2.e_max, markers.pi2.e_cusp)
    return canonicalize(canonical_subspace(x, y))


def _eigenvectors(markers: MarkerSet) -> np.ndarray:
    present = [markers.mu.mu[i] > ABSENT_TOL for i in range(4)]
    ang = markers.angles

    if present[1]:
        frame = _frame(markers)
        pi2 = (frame.chi1, frame.chi2)
        comp = complement_basis(frame, frame="original", fallback=True)
        if present[0]:
            theta = _require(ang.theta, "theta")
            phi = _require(ang.phi, "phi")
            psi1 = state_from_angles(theta, phi, pi2)
        else:
            psi1 = pi2[0]
        psi2 = _other_in_span(psi1, pi2)
        if present[2]:
            theta_p = _require(ang.theta_perp, "theta_perp")
            phi_p = _require(ang.phi_perp, "phi_perp")
            psi4 = state_from_angles(theta_p, phi_p, comp)
        else:
            psi4 = comp[0]
        psi3 = _other_in_span(psi4, comp)
        return np.column_stack([psi1, psi2, psi3, psi4])

    # No rank-2 frame: only the entanglement of the top and bottom
    # eigenvectors is specified, and they need only be orthogonal.
    e1 = markers.e1 if present[0] else 0.0
    e_perp = markers.e_perp if present[2] else 0.0
    if present[0]:
        _require(markers.e1, "e1")
    if present[2]:
        _require(markers.e_perp, "e_perp")
    psi1 = _product_pair(e1)
    psi2 = _other_in_span(psi1, (np.eye(4)[0], np.eye(4)[3]))
    a = 0.5 * np.arcsin(np.clip(e_perp, 0.0, 1.0))
    psi4 = np.array([0, np.cos(a), np.sin(a), 0], dtype=complex)
    psi3 = np.array([0, -np.sin(a), np.cos(a), 0], dtype=complex)
    return np.column_stack([psi1, psi2, psi3, psi4])


def build_state(inp) -> np.ndarray:
    """Density matrix whose marker set equals the input's.

    ``inp`` is a :class:`ReconstructionInput` or a bare :class:`MarkerSet`.
    """
    if isinstance(inp, MarkerSet):
        inp = ReconstructionInput(inp)
    m = inp.markers
    lam = eigenvalues_from_mu(m.mu.mu)
    v = _eigenvectors(m)
    rho = (v * lam) @ v.conj().T
    return as_density_matrix(0.5 * (rho + rho.conj().T))


def _angle_diff(a: float, b: float) -> float:
    d = (a - b) % (2 * np.pi)
    return min(d, 2 * np.pi - d)


def markers_close(a: MarkerSet, b: MarkerSet, tol: float = 1e-6) -> bool:
    """Field-wise comparison; a field present in one set must be present in both."""
    sa, sb = a.scalars(), b.scalars()
    if sa.keys() != sb.keys():
        return False
    if any(abs(sa[k] - sb[k]) > tol for k in sa):
        return False
    da, db = a.angles.as_dict(), b.angles.as_dict()
    if da.keys() != db.keys():
        return False
    for k in da:
        if k.startswith("phi"):
            if _angle_diff(da[k], db[k]) > tol:
                return False
        elif abs(da[k] - db[k]) > tol:
            return False
    return True


def lo_equivalent(rho_a, rho_b, tol: float = 1e-6) -> bool:
    """Marker-level local-unitary equivalence: equal spectra and marker sets.

    This is not a certified orbit test; two states with identical markers
    are reported equivalent.
    """
    la = eig_hermitian(rho_a).eigenvalues
    lb = eig_hermitian(rho_b).eigenvalues
    if np.max(np.abs(la - lb)) > tol:
        return False
    return markers_close(extract_markers(rho_a), extract_markers(rho_b), tol)
