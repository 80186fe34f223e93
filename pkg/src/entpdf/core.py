"""Linear algebra and entanglement measures on the two-qubit Hilbert space.

States are plain numpy arrays: a density matrix is a ``(4, 4)`` complex
array and a pure state a length-4 complex vector in the product basis
``|uu>, |ud>, |du>, |dd>``.  The ``as_*`` helpers validate and return
fresh copies; every other function is pure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidRank,
    NotHermitian,
    NotNormalized,
    NotPositive,
    TraceNotOne,
)

HERM_TOL = 1e-9
TRACE_TOL = 1e-9
POS_TOL = 1e-9
NORM_TOL = 1e-12
TIE_TOL = 1e-10

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y)

# Bilinear form with psi^T J psi = 2 (a_uu a_dd - a_ud a_du).
SPIN_FLIP_FORM = np.array(
    [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=float
)


def as_density_matrix(rho, *, atol: float = HERM_TOL) -> np.ndarray:
    """Validate ``rho`` and return it as a Hermitian ``(4, 4)`` complex array.

    Raises
    ------
    NotHermitian, TraceNotOne, NotPositive
        With the measured residual of the violated invariant.
    """
    m = np.array(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("density matrix has non-finite entries")
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > atol:
        raise NotHermitian("density matrix is not Hermitian", herm)
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne("density matrix trace differs from 1", abs(tr - 1.0))
    lmin = float(np.linalg.eigvalsh(m)[0])
    if lmin < -POS_TOL:
        raise NotPositive("density matrix has a negative eigenvalue", -lmin)
    return m


def as_pure_state(psi, *, atol: float = NORM_TOL) -> np.ndarray:
    v = np.array(psi, dtype=complex).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"pure state must have 4 amplitudes, got {v.shape}")
    dev = abs(float(np.linalg.norm(v)) - 1.0)
    if dev > atol:
        raise NotNormalized("state vector is not normalized", dev)
    return v


def projector(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex)
    return np.outer(v, v.conj())


def _orient(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest component is real positive."""
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    return v * (abs(v[k]) / v[k])


def _leading_index(v: np.ndarray) -> int:
    mags = np.abs(v)
    return int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])


def _canonical_block(vecs: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis for the span of the columns of ``vecs``.

    Standard basis vectors are projected into the span and Gram-Schmidt
    orthonormalized in index order, so the result depends only on the
    subspace, not on the basis LAPACK happened to return.
    """
    k = vecs.shape[1]
    proj = vecs @ vecs.conj().T
    out = []
    for i in range(4):
        v = proj[:, i].copy()
        for u in out:
            v -= np.vdot(u, v) * u
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            out.append(v / nrm)
        if len(out) == k:
            break
    out = [_orient(u) for u in out]
    out.sort(key=_leading_index)
    return np.column_stack(out)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in non-increasing order and matching eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i].copy()

    def projection(self, k: int) -> np.ndarray:
        """Projector onto the span of the top ``k`` eigenvectors."""
        v = self.eigenvectors[:, :k]
        return v @ v.conj().T

    def reassemble(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(rho) -> SpectralDecomposition:
    """Spectral decomposition of a density matrix, eigenvalues descending.

    Eigenvalues closer than ``TIE_TOL`` are treated as one degenerate block
    whose basis is fixed by :func:`_canonical_block`; every eigenvector is
    phase-oriented so its largest-magnitude component is real positive.
    """
    m = as_density_matrix(rho)
    w, v = np.linalg.eigh(m)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    i = 0
    while i < 4:
        j = i + 1
        while j < 4 and abs(w[j - 1] - w[j]) < TIE_TOL:
            j += 1
        if j - i > 1:
            v[:, i:j] = _canonical_block(v[:, i:j])
        else:
            v[:, i] = _orient(v[:, i])
        i = j
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def pure_entanglement(psi) -> float:
    """Pure-state concurrence ``2 |a_uu a_dd - a_ud a_du|``."""
    a = as_pure_state(psi)
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))


def entanglement_of_amplitudes(amps: np.ndarray) -> np.ndarray:
    """Vectorized pure-state concurrence for an ``(n, 4)`` array of states.

    No normalization check; used on the hot path of the samplers.
    """
    return 2.0 * np.abs(amps[:, 0] * amps[:, 3] - amps[:, 1] * amps[:, 2])


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def wootters_concurrence(rho) -> float:
    """Wootters concurrence ``max(0, s1 - s2 - s3 - s4)``.

    The ``s_i`` are the square roots of the eigenvalues of
    ``rho (Y x Y) rho* (Y x Y)``, obtained here as the singular values of
    ``sqrt(rho) (Y x Y) sqrt(rho)*``, which avoids a non-Hermitian eigensolve.
    """
    m = as_density_matrix(rho)
    r = _psd_sqrt(m)
    s = np.linalg.svd(r @ YY @ r.conj(), compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def partial_transpose(rho, subsystem: str = "second") -> np.ndarray:
    """Transpose the indices of one tensor factor of a two-qubit operator.

    Any 4 x 4 operator is accepted; the result of an entangled state is not
    positive, and transposing twice must give the input back.
    """
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4 x 4 operator, got shape {m.shape}")
    m = m.reshape(2, 2, 2, 2)
    if subsystem == "second":
        t = m.transpose(0, 3, 2, 1)
    elif subsystem == "first":
        t = m.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
    return t.reshape(4, 4).copy()


def negativity(rho) -> float:
    """``-2 * (sum of negative eigenvalues of the partial transpose)``.

    Normalized so a Bell state has negativity 1, the same scale as the
    concurrence.
    """
    ev = np.linalg.eigvalsh(partial_transpose(as_density_matrix(rho), "second"))
    neg = ev[ev < 0].sum()
    return float(max(0.0, -2.0 * neg))


def concurrence_many(rhos: np.ndarray) -> np.ndarray:
    """:func:`wootters_concurrence` over a stack ``(n, 4, 4)``, unvalidated."""
    w, v = np.linalg.eigh(rhos)
    r = (v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))
    s = np.linalg.svd(r @ YY @ r.conj(), compute_uv=False)
    return np.maximum(0.0, s[:, 0] - s[:, 1] - s[:, 2] - s[:, 3])


def negativity_many(rhos: np.ndarray) -> np.ndarray:
    """:func:`negativity` over a stack ``(n, 4, 4)``, unvalidated."""
    pt = rhos.reshape(-1, 2, 2, 2, 2).transpose(0, 1, 4, 3, 2).reshape(-1, 4, 4)
    ev = np.linalg.eigvalsh(pt)
    return np.maximum(0.0, -2.0 * np.where(ev < 0, ev, 0.0).sum(axis=1))


def random_density_matrices(ranks, rng: np.random.Generator) -> np.ndarray:
    """One Ginibre state per entry of ``ranks``, stacked as ``(n, 4, 4)``."""
    ranks = np.asarray(ranks)
    g = rng.standard_normal((len(ranks), 4, 4)) + 1j * rng.standard_normal((len(ranks), 4, 4))
    g *= (np.arange(4) < ranks[:, None])[:, None, :]
    m = g @ np.conj(np.swapaxes(g, 1, 2))
    m /= np.trace(m, axis1=1, axis2=2).real[:, None, None]
    return 0.5 * (m + np.conj(np.swapaxes(m, 1, 2)))


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_density_matrix(rank: int, seed=None) -> np.ndarray:
    """Random state ``G G^dag / tr(G G^dag)`` with ``G`` a 4 x rank Ginibre matrix."""
    if rank not in (1, 2, 3, 4):
        raise InvalidRank(f"rank must be 1..4, got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return 0.5 * (m + m.conj().T)


def random_pure_state(seed=None) -> np.ndarray:
    """Haar-random pure state: a normalized isotropic complex Gaussian vector."""
    rng = _rng(seed)
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return v / np.linalg.norm(v)


def random_pure_states(n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random pure states as rows of an ``(n, 4)`` array."""
    v = rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase correction."""
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_local_unitary(seed=None) -> np.ndarray:
    """``U1 (x) U2`` with independent Haar-random single-qubit unitaries."""
    rng = _rng(seed)
    return np.kron(random_unitary(2, rng), random_unitary(2, rng))


BELL_PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
