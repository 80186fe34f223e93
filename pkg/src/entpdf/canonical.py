"""Canonical form of a two-dimensional subspace under local unitaries.

Any 2-D subspace contains a product state.  Rotating that product state to
``|uu>`` with ``U1 (x) U2`` and fixing three phases brings the subspace to
``span{(1,0,0,0), (0,x,y,z)}`` with ``x, y, z >= 0``.  Those three numbers
are the local-unitary invariants that determine the subspace's
entanglement distribution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SPIN_FLIP_FORM, as_pure_state
from .errors import DegenerateComplement, NotInSubspace, NotOrthonormal

ORTHO_TOL = 1e-9
ALL_SEPARABLE = "ALL"

E_UU = np.array([1, 0, 0, 0], dtype=complex)


def _q(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(u @ SPIN_FLIP_FORM @ v)


@dataclass(frozen=True)
class Subspace2:
    """Orthonormal pair spanning a two-dimensional subspace."""

    b1: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        b1 = as_pure_state(self.b1, atol=ORTHO_TOL)
        b2 = as_pure_state(self.b2, atol=ORTHO_TOL)
        overlap = abs(np.vdot(b1, b2))
        if overlap > ORTHO_TOL:
            raise NotOrthonormal("subspace basis vectors are not orthogonal", overlap)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b2", b2)

    @classmethod
    def from_vectors(cls, v1, v2) -> "Subspace2":
        """Orthonormalize two linearly independent vectors (in order)."""
        a = np.asarray(v1, dtype=complex)
        a = a / np.linalg.norm(a)
        b = np.asarray(v2, dtype=complex)
        b = b - np.vdot(a, b) * a
        return cls(a, b / np.linalg.norm(b))

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.b1, self.b1.conj()) + np.outer(self.b2, self.b2.conj())


@dataclass(frozen=True)
class SubspaceCanonicalForm:
    """Invariants ``(x, y, z)`` plus the local operation that realizes them.

    ``local_ops`` is the pair ``(U1, U2)`` (with the phase fix already folded
    in) such that ``U1 (x) U2`` maps ``chi1`` to ``(1,0,0,0)`` and ``chi2`` to
    ``(0,x,y,z)``.  ``chi1`` and ``chi2`` are the canonical basis expressed
    in the original frame.
    """

    x: float
    y: float
    z: float
    local_ops: tuple
    phase_fix: tuple
    chi1: np.ndarray
    chi2: np.ndarray

    @property
    def local_unitary(self) -> np.ndarray:
        return np.kron(*self.local_ops)

    @property
    def canonical_chi2(self) -> np.ndarray:
        return np.array([0, self.x, self.y, self.z], dtype=complex)

    def to_original(self, v) -> np.ndarray:
        """Map a vector from the canonical frame back to the original frame."""
        return self.local_unitary.conj().T @ np.asarray(v, dtype=complex)


def find_separable_states(s: Subspace2):
    """Product states inside ``s``.

    Returns a list of one or two normalized states, or :data:`ALL_SEPARABLE`
    when every state in the subspace is a product state.  The states solve
    ``c1^2 Q11 + 2 c1 c2 Q12 + c2^2 Q22 = 0`` for the spin-flip bilinear form.
    """
    q11, q12, q22 = _q(s.b1, s.b1), _q(s.b1, s.b2), _q(s.b2, s.b2)
    scale = max(abs(q11), abs(q12), abs(q22))
    if scale < 1e-10:
        return ALL_SEPARABLE
    if max(abs(q11), abs(q22)) < 1e-12 * scale:
        # Both basis vectors are product states; the quadratic degenerates.
        return [s.b1, s.b2]
    # Solve for the ratio whose leading coefficient is the larger one.
    if abs(q22) >= abs(q11):
        roots = np.roots([q22, 2 * q12, q11])
        cands = [s.b1 + t * s.b2 for t in roots]
    else:
        roots = np.roots([q11, 2 * q12, q22])
        cands = [t * s.b1 + s.b2 for t in roots]
    out = []
    for c in cands:
        c = c / np.linalg.norm(c)
        if all(abs(abs(np.vdot(o, c)) - 1.0) > 1e-8 for o in out):
            out.append(c)
    return out


def _choose_separable(s: Subspace2) -> np.ndarray:
    seps = find_separable_states(s)
    if isinstance(seps, str):
        return s.b1
    # Largest overlap with b1 is invariant under local unitaries acting on
    # the whole subspace; the argument of the b2 coefficient breaks ties.
    def key(c):
        return (-round(abs(np.vdot(s.b1, c)), 12), float(np.angle(np.vdot(s.b2, c) * np.conj(np.vdot(s.b1, c)))))

    return min(seps, key=key)


def _product_factors(sep: np.ndarray):
    u, _, vh = np.linalg.svd(sep.reshape(2, 2))
    return u[:, 0], vh[0]


def _to_up(a: np.ndarray) -> np.ndarray:
    """Single-qubit unitary with ``U a = (1, 0)``."""
    a_perp = np.array([-np.conj(a[1]), np.conj(a[0])])
    return np.array([a.conj(), a_perp.conj()])


def canonicalize(s: Subspace2) -> SubspaceCanonicalForm:
    """Bring ``s`` to ``span{(1,0,0,0), (0,x,y,z)}`` by local unitaries.

    The separable ``chi1`` is the product state in ``s`` with the largest
    overlap with ``s.b1``.  When every state of ``s`` is separable ``chi1``
    is ``s.b1`` and the result is ``(1, 0, 0)`` or ``(0, 1, 0)`` depending on
    which qubit carries the shared factor.
    """
    sep = _choose_separable(s)
    a, b = _product_factors(sep)
    u1, u2 = _to_up(a), _to_up(b)
    v = np.kron(u1, u2)

    # Unit vector of s orthogonal to the separable one.
    cands = [bk - np.vdot(sep, bk) * sep for bk in (s.b1, s.b2)]
    w = max(cands, key=np.linalg.norm)
    w = w / np.linalg.norm(w)
    p, q, r = (v @ w)[1:]

    def arg(c):
        return float(np.angle(c)) if abs(c) > 1e-14 else 0.0

    # diag(1, e^{iB}) (x) diag(1, e^{iD}) together with a phase on w makes
    # p, q, r real and non-negative while leaving |uu> fixed.
    kappa = arg(p) + arg(q) - arg(r)
    phase_b = arg(p) - arg(r)
    phase_d = arg(q) - arg(r)
    u1 = np.diag([1.0, np.exp(1j * phase_b)]) @ u1
    u2 = np.diag([1.0, np.exp(1j * phase_d)]) @ u2
    x, y, z = abs(p), abs(q), abs(r)
    nrm = np.sqrt(x * x + y * y + z * z)
    x, y, z = x / nrm, y / nrm, z / nrm

    vfull = np.kron(u1, u2)
    chi1 = vfull.conj().T @ E_UU
    chi2 = vfull.conj().T @ np.array([0, x, y, z], dtype=complex)
    return SubspaceCanonicalForm(
        x=float(x),
        y=float(y),
        z=float(z),
        local_ops=(u1, u2),
        phase_fix=(kappa, phase_b, phase_d),
        chi1=chi1,
        chi2=chi2,
    )


def canonical_subspace(x: float, y: float) -> Subspace2:
    """The canonical pair ``((1,0,0,0), (0,x,y,z))`` with ``z >= 0``."""
    z = np.sqrt(max(0.0, 1.0 - x * x - y * y))
    return Subspace2(E_UU.copy(), np.array([0, x, y, z], dtype=complex))


def complement_basis(c: SubspaceCanonicalForm, *, frame: str = "canonical", fallback: bool = False):
    """Canonical basis of the orthogonal complement of the subspace.

    ``chi1_c = (0, 0, z, -y)/n`` and ``chi2_c = (0, n, -xy/n, -xz/n)`` with
    ``n = sqrt(y^2 + z^2)``.  ``chi1_c`` is itself a product state.

    Parameters
    ----------
    frame : {"canonical", "original"}
        Return the vectors in the canonical frame or pulled back to the frame
        of the subspace that was canonicalized.
    fallback : bool
        When ``y^2 + z^2`` vanishes, return a Gram-Schmidt basis instead of
        raising :class:`DegenerateComplement`.
    """
    x, y, z = c.x, c.y, c.z
    n2 = y * y + z * z
    if n2 < 1e-12:
        if not fallback:
            raise DegenerateComplement("complement basis undefined for y = z = 0", n2)
        k1, k2 = _gram_schmidt_complement(E_UU, c.canonical_chi2)
    else:
        n = np.sqrt(n2)
        k1 = np.array([0, 0, z / n, -y / n], dtype=complex)
        k2 = np.array([0, n, -x * y / n, -x * z / n], dtype=complex)
    if frame == "original":
        return c.to_original(k1), c.to_original(k2)
    if frame != "canonical":
        raise ValueError(f"frame must be 'canonical' or 'original', got {frame!r}")
    return k1, k2


def _gram_schmidt_complement(v1: np.ndarray, v2: np.ndarray):
    basis = [v1 / np.linalg.norm(v1)]
    w = v2 - np.vdot(basis[0], v2) * basis[0]
    basis.append(w / np.linalg.norm(w))
    out = []
    for e in np.eye(4, dtype=complex):
        w = e.copy()
        for u in basis + out:
            w -= np.vdot(u, w) * u
        if np.linalg.norm(w) > 1e-6:
            out.append(w / np.linalg.norm(w))
        if len(out) == 2:
            break
    return out[0], out[1]


def _basis_pair(basis):
    if isinstance(basis, SubspaceCanonicalForm):
        return basis.chi1, basis.chi2
    chi1, chi2 = basis
    return np.asarray(chi1, dtype=complex), np.asarray(chi2, dtype=complex)


def bloch_angles(psi, basis) -> tuple[float, float]:
    """Angles ``(theta, phi)`` of ``psi`` in a two-vector basis.

    Uses ``psi = chi1 cos(theta/2) e^{i phi/2} + chi2 sin(theta/2) e^{-i phi/2}``
    up to a global phase.  ``basis`` is a :class:`SubspaceCanonicalForm`
    (its original-frame ``chi1, chi2``) or any orthonormal pair.  ``phi`` is
    reported as 0 at the poles where it is undefined.
    """
    psi = np.asarray(psi, dtype=complex)
    chi1, chi2 = _basis_pair(basis)
    c1, c2 = np.vdot(chi1, psi), np.vdot(chi2, psi)
    resid = float(np.linalg.norm(psi - c1 * chi1 - c2 * chi2))
    if resid > ORTHO_TOL:
        raise NotInSubspace("state is not in the spanned subspace", resid)
    theta = 2.0 * float(np.arctan2(abs(c2), abs(c1)))
    if abs(c1) < 1e-12 or abs(c2) < 1e-12:
        return theta, 0.0
    phi = float(np.angle(c1 * np.conj(c2))) % (2 * np.pi)
    # A tiny negative angle can round up to exactly 2 pi.
    return theta, (0.0 if phi >= 2 * np.pi else phi)


def state_from_angles(theta: float, phi: float, basis) -> np.ndarray:
    """Inverse of :func:`bloch_angles`."""
    chi1, chi2 = _basis_pair(basis)
    return (
        chi1 * np.cos(theta / 2) * np.exp(0.5j * phi)
        + chi2 * np.sin(theta / 2) * np.exp(-0.5j * phi)
    )
