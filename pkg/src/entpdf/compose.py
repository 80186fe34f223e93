"""Nested-projection decomposition of a state and its entanglement density.

A state with descending eigenvalues ``l1 >= l2 >= l3 >= l4`` is written as
``sum_i (l_i - l_{i+1}) P_i`` where ``P_i`` projects onto the top ``i``
eigenvectors.  Rescaled by ``l1`` the weights ``mu_i`` sum to one and the
state's entanglement density is ``sum_i mu_i p_i(E)`` with ``p_i`` the Haar
density of the rank-``i`` projection.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from . import haar
from .canonical import Subspace2, bloch_angles, canonicalize, complement_basis
from .core import SpectralDecomposition, eig_hermitian, pure_entanglement
from .errors import DegenerateSubspace, ZeroState
from .haar import Atom, Histogram, Pi2Markers

# Weights at or below this are treated as absent subspaces.
ABSENT_TOL = 1e-10


@dataclass(frozen=True)
class WeightVector:
    lambda_diffs: tuple
    mu: tuple

    def present(self, i: int) -> bool:
        """Whether the rank-``i`` projection (1-based) carries weight."""
        return self.mu[i - 1] > ABSENT_TOL


def weights_from_eigenvalues(lam) -> WeightVector:
    lam = np.asarray(lam, dtype=float)
    if lam[0] < 1e-12:
        raise ZeroState("largest eigenvalue vanishes", lam[0])
    nxt = np.append(lam[1:], 0.0)
    diffs = np.clip(lam - nxt, 0.0, None)
    mu = diffs / lam[0]
    return WeightVector(tuple(float(d) for d in diffs), tuple(float(m) for m in mu))


def weights(spec: SpectralDecomposition) -> WeightVector:
    return weights_from_eigenvalues(spec.eigenvalues)


def eigenvalues_from_mu(mu) -> np.ndarray:
    """Spectrum with the given relative weights and unit trace."""
    mu = np.asarray(mu, dtype=float)
    tail = np.cumsum(mu[::-1])[::-1]
    lam1 = 1.0 / float(np.dot(np.arange(1, 5), mu))
    return lam1 * tail


@dataclass(frozen=True)
class Angles:
    """Bloch angles of the top eigenvector in the rank-2 canonical basis and of
    the bottom eigenvector in the canonical basis of its complement."""

    theta: float | None = None
    phi: float | None = None
    theta_perp: float | None = None
    phi_perp: float | None = None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}


@dataclass(frozen=True)
class MarkerSet:
    """Parameters characterizing a state's entanglement density.

    Fields whose subspace carries no weight are ``None``: the corresponding
    eigenvectors are not unique, so nothing meaningful can be reported.
    """

    mu: WeightVector
    e1: float | None = None
    pi2: Pi2Markers | None = None
    e_perp: float | None = None
    angles: Angles = field(default_factory=Angles)

    def scalars(self) -> dict:
        """Flat mapping of every present scalar field."""
        out = {f"mu{i + 1}": m for i, m in enumerate(self.mu.mu)}
        if self.e1 is not None:
            out["e1"] = self.e1
        if self.pi2 is not None:
            out["e_cusp"] = self.pi2.e_cusp
            out["e_max"] = self.pi2.e_max
        if self.e_perp is not None:
            out["e_perp"] = self.e_perp
        return out


def _pi2_frame(spec: SpectralDecomposition):
    return canonicalize(Subspace2(spec.vector(0), spec.vector(1)))


def extract_markers(rho) -> MarkerSet:
    """Marker set of a density matrix.

    ``e1`` is present when ``mu1 > 0``, the rank-2 markers when ``mu2 > 0`` and
    ``e_perp`` when ``mu3 > 0``.  ``theta, phi`` need both ``e1`` and the rank-2
    frame; ``theta_perp, phi_perp`` need ``e_perp`` and the rank-2 frame.
    """
    spec = eig_hermitian(rho)
    w = weights(spec)
    e1 = pure_entanglement(spec.vector(0)) if w.present(1) else None
    e_perp = pure_entanglement(spec.vector(3)) if w.present(3) else None
    pi2 = None
    angles = Angles()
    if w.present(2):
        frame = _pi2_frame(spec)
        try:
            pi2 = haar.pi2_markers(frame.x, frame.y)
        except DegenerateSubspace:
            pi2 = Pi2Markers(0.0, 0.0, np.inf, 0.0)
        theta = phi = theta_p = phi_p = None
        if e1 is not None:
            theta, phi = bloch_angles(spec.vector(0), frame)
        if e_perp is not None:
            comp = complement_basis(frame, frame="original", fallback=True)
            theta_p, phi_p = bloch_angles(spec.vector(3), comp)
        angles = Angles(theta, phi, theta_p, phi_p)
    return MarkerSet(w, e1, pi2, e_perp, angles)


# -- composite density -------------------------------------------------------


@dataclass(frozen=True)
class Pi2Part:
    x: float
    y: float


@dataclass(frozen=True)
class Pi3Part:
    e_perp: float


@dataclass(frozen=True)
class Pi4Part:
    pass


@dataclass(frozen=True)
class EntanglementPDF:
    """Weighted atoms plus weighted continuous components, stored symbolically."""

    atoms: tuple = ()
    continuous: tuple = ()

    def total_weight(self) -> float:
        return sum(a.weight for a in self.atoms) + sum(w for w, _ in self.continuous)


def compose_pdf(markers: MarkerSet) -> EntanglementPDF:
    mu = markers.mu.mu
    atoms = []
    cont = []
    if markers.mu.present(1):
        atoms.append(Atom(mu[0], markers.e1))
    if markers.mu.present(2):
        if markers.pi2.e_max < 1e-12:
            # Every state of the subspace is a product state.
            atoms.append(Atom(mu[1], 0.0))
        else:
            x, y, _ = haar.invert_pi2(markers.pi2.e_max, markers.pi2.e_cusp)
            cont.append((mu[1], Pi2Part(x, y)))
    if markers.mu.present(3):
        cont.append((mu[2], Pi3Part(markers.e_perp)))
    if markers.mu.present(4):
        cont.append((mu[3], Pi4Part()))
    return EntanglementPDF(tuple(atoms), tuple(cont))


def render_component(part, bins: int, samples: int, seed) -> np.ndarray:
    """Per-bin mean density of one continuous component.

    Rank 2 and rank 4 are Haar-sampled; rank 3 is integrated exactly per bin.
    """
    if isinstance(part, Pi2Part):
        return haar.sample_pi2(part.x, part.y, samples, seed, bins=bins).densities
    if isinstance(part, Pi3Part):
        return haar.pi3_bin_densities(part.e_perp, bins)
    if isinstance(part, Pi4Part):
        return haar.sample_pi4(samples, seed, bins=bins).densities
    raise TypeError(f"unknown component {part!r}")


def evaluate_pdf(pdf: EntanglementPDF, bins: int = haar.DEFAULT_BINS, *, samples: int = 10**6, seed=42):
    """Render a composite density on a uniform grid.

    Returns the histogram of the continuous part (its mass equals the total
    continuous weight) and the list of atoms, which are never binned.
    Component seeds are spawned from ``seed`` by position, so rendering is
    deterministic.
    """
    edges = haar.bin_edges(bins)
    dens = np.zeros(bins)
    seeds = np.random.SeedSequence(seed).spawn(len(pdf.continuous))
    for (w, part), s in zip(pdf.continuous, seeds):
        dens += w * render_component(part, bins, samples, s)
    hist = Histogram(edges, dens, samples, seed)
    return hist, list(pdf.atoms)
