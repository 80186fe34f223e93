"""Entanglement densities of uniformly random states in a subspace.

For a projection of rank 1..4 the density of the pure-state concurrence
under the Haar measure of the subspace is:

* rank 1: an atom at the entanglement of the state;
* rank 2: no closed form over the whole curve, but its support end
  ``e_max``, cusp ``e_cusp`` and edge height are exact functions of the
  canonical parameters ``(x, y)``;
* rank 3: ``2E / sqrt(1 - Ep^2) * arccosh(1 / max(E, Ep))`` where ``Ep`` is
  the entanglement of the state orthogonal to the subspace;
* rank 4: universal, ``3 E sqrt(1 - E^2)``.

All samplers return a :class:`Histogram` and are deterministic per seed.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import as_pure_state, entanglement_of_amplitudes, pure_entanglement, random_pure_states
from .errors import DegenerateSubspace, DivergentDual, InfeasibleMarkers

DEFAULT_BINS = 100
CHUNK = 1 << 16
TINY = 1e-150


@dataclass(frozen=True)
class Histogram:
    """Uniform-bin density estimate on ``[0, 1]``."""

    bin_edges: np.ndarray
    densities: np.ndarray
    sample_count: int
    seed: object = None

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def nbins(self) -> int:
        return len(self.densities)

    def mass(self) -> float:
        return float(np.sum(self.densities) * self.bin_width)

    def l1(self, other) -> float:
        """L1 distance to another histogram or to per-bin mean densities."""
        ref = other.densities if isinstance(other, Histogram) else np.asarray(other)
        return float(np.sum(np.abs(self.densities - ref)) * self.bin_width)

    @classmethod
    def from_counts(cls, counts, edges, sample_count, seed=None) -> "Histogram":
        width = edges[1] - edges[0]
        dens = np.asarray(counts, dtype=float) / (sample_count * width)
        return cls(np.asarray(edges, dtype=float), dens, int(sample_count), seed)


def bin_edges(bins: int = DEFAULT_BINS) -> np.ndarray:
    return np.linspace(0.0, 1.0, bins + 1)


def _histogram_counts(values: np.ndarray, bins: int) -> np.ndarray:
    idx = np.floor(np.clip(values, 0.0, 1.0) * bins).astype(np.int64)
    np.minimum(idx, bins - 1, out=idx)
    return np.bincount(idx, minlength=bins)


def sample_entanglement(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    n: int,
    seed=None,
    *,
    bins: int = DEFAULT_BINS,
    substreams: int = 1,
    workers: int = 1,
) -> Histogram:
    """Histogram ``n`` entanglement values produced by ``draw(rng, m)``.

    The samples are split over ``substreams`` independent generators spawned
    from ``seed``.  Counts are integers merged by summation, so the result
    is identical for any ``workers`` given the same ``(seed, n, substreams)``.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = ss.spawn(substreams)
    share = [n // substreams + (1 if i < n % substreams else 0) for i in range(substreams)]

    def run(i):
        rng = np.random.default_rng(children[i])
        counts = np.zeros(bins, dtype=np.int64)
        left = share[i]
        while left > 0:
            m = min(CHUNK, left)
            counts += _histogram_counts(draw(rng, m), bins)
            left -= m
        return counts

    if workers > 1 and substreams > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(substreams)))
    else:
        parts = [run(i) for i in range(substreams)]
    total = np.sum(parts, axis=0)
    return Histogram.from_counts(total, bin_edges(bins), n, seed)


# -- rank 1 -----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    weight: float
    location: float


def pi1_atom(psi) -> Atom:
    return Atom(1.0, pure_entanglement(psi))


# -- rank 2 -----------------------------------------------------------------


@dataclass(frozen=True)
class Pi2Markers:
    """Exact landmarks of the rank-2 density.

    ``p_at_emax`` is the density just below ``e_max``; it is infinite when the
    cusp sits on the support end (``mu_angle == 0``).
    """

    e_max: float
    e_cusp: float
    p_at_emax: float
    mu_angle: float


def _z_of(x: float, y: float) -> float:
    return float(np.sqrt(max(0.0, 1.0 - x * x - y * y)))


def pi2_markers(x: float, y: float) -> Pi2Markers:
    if x < 0 or y < 0 or x * x + y * y > 1.0 + 1e-12:
        raise ValueError(f"need x, y >= 0 and x^2 + y^2 <= 1, got ({x}, {y})")
    z = _z_of(x, y)
    xy = x * y
    e_max = xy + np.sqrt(z * z + xy * xy)
    if e_max < 1e-12:
        raise DegenerateSubspace("every state in the subspace is separable", e_max)
    e_cusp = z * z / e_max
    sin_mu = 2.0 * np.sqrt(xy * (xy * e_max + z * z)) / e_max**1.5
    cos_mu = e_cusp / e_max
    mu = float(np.arctan2(sin_mu, cos_mu))
    p = np.inf if sin_mu == 0 else 1.0 / (e_max * np.sin(mu))
    return Pi2Markers(float(e_max), float(e_cusp), float(p), mu)


def invert_pi2(e_max: float, e_cusp: float, *, tol: float = 1e-12) -> tuple[float, float, float]:
    """Canonical ``(x, y, z)`` with the given ``e_max`` and ``e_cusp``.

    ``z^2 = e_cusp e_max``, ``xy = (e_max - e_cusp)/2`` and
    ``x^2 + y^2 = 1 - z^2``; of the two mirror solutions ``x >= y`` is
    returned.
    """
    if not (-tol <= e_cusp <= e_max + tol and e_max <= 1.0 + tol):
        raise InfeasibleMarkers(
            f"need 0 <= e_cusp <= e_max <= 1, got e_cusp={e_cusp}, e_max={e_max}"
        )
    e_max = min(max(e_max, 0.0), 1.0)
    e_cusp = min(max(e_cusp, 0.0), e_max)
    z2 = e_cusp * e_max
    xy = 0.5 * (e_max - e_cusp)
    s = 1.0 - z2
    disc = s * s - 4.0 * xy * xy
    if disc < -tol:
        raise InfeasibleMarkers("no real (x, y) for these markers", -disc)
    x2 = 0.5 * (s + np.sqrt(max(disc, 0.0)))
    x = np.sqrt(x2)
    y = xy / x if x > 0 else 0.0
    return float(x), float(y), float(np.sqrt(z2))


def pi2_entanglement_at(x, y, theta, phi):
    """Concurrence of ``cos(t/2) e^{ip/2} |uu> + sin(t/2) e^{-ip/2} (0,x,y,z)``.

    Equals ``|z sin(t) - xy (1 - cos t) e^{-ip}|``; vectorized over the angles.
    """
    z = _z_of(x, y)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    val = np.abs(z * np.sin(theta) - x * y * (1 - np.cos(theta)) * np.exp(-1j * phi))
    return val if val.ndim else float(val)


def sample_pi2(x: float, y: float, n: int, seed=None, **kw) -> Histogram:
    """Haar-sample the rank-2 subspace with canonical parameters ``(x, y)``.

    ``cos(theta)`` is uniform on ``[-1, 1]`` and ``phi`` uniform on
    ``[0, 2 pi)``, i.e. the ``sin(theta) dtheta dphi`` measure.
    """

    def draw(rng, m):
        cos_t = rng.uniform(-1.0, 1.0, m)
        phi = rng.uniform(0.0, 2 * np.pi, m)
        sin_t = np.sqrt(1.0 - cos_t * cos_t)
        z = _z_of(x, y)
        return np.abs(z * sin_t - x * y * (1 - cos_t) * np.exp(-1j * phi))

    return sample_entanglement(draw, n, seed, **kw)


def sample_subspace(basis, n: int, seed=None, **kw) -> Histogram:
    """Haar-sample the span of an orthonormal set of 4-vectors directly.

    Independent of any parametrization: normalized complex Gaussian
    coefficients in the given basis.
    """
    b = np.array([np.asarray(v, dtype=complex) for v in basis])
    k = b.shape[0]

    def draw(rng, m):
        c = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
        c /= np.linalg.norm(c, axis=1, keepdims=True)
        return entanglement_of_amplitudes(c @ b)

    return sample_entanglement(draw, n, seed, **kw)


# -- rank 3 -----------------------------------------------------------------


def _arccosh_inv(e):
    """``arccosh(1/e)`` written to stay accurate as ``e -> 1``."""
    return np.log((1.0 + np.sqrt((1.0 - e) * (1.0 + e))) / e)


def _check_eperp(e_perp: float):
    if e_perp >= 1.0 - 1e-12:
        raise DivergentDual("rank-3 density diverges for e_perp -> 1", 1.0 - e_perp)
    if e_perp < 0:
        raise ValueError(f"e_perp must be >= 0, got {e_perp}")


def pi3_density(e, e_perp: float):
    """``2E / sqrt(1 - Ep^2) * arccosh(1 / max(E, Ep))`` on ``[0, 1]``."""
    _check_eperp(e_perp)
    e = np.asarray(e, dtype=float)
    big = np.maximum(e, e_perp)
    # Below TINY the density equals its limit 0 and 1/E would overflow.
    ok = big > TINY
    val = np.where(ok, 2 * e * _arccosh_inv(np.where(ok, big, 1.0)), 0.0)
    val = val / np.sqrt(1 - e_perp * e_perp)
    return val if val.ndim else float(val)


def _f_antideriv(e):
    """Antiderivative of ``2E arccosh(1/E)``."""
    e = np.asarray(e, dtype=float)
    ok = e > TINY
    safe = np.where(ok, e, 1.0)
    return np.where(ok, e * e * _arccosh_inv(safe), 0.0) - np.sqrt((1.0 - e) * (1.0 + e))


def pi3_cdf(e, e_perp: float):
    """Exact cumulative distribution of :func:`pi3_density`."""
    _check_eperp(e_perp)
    e = np.clip(np.asarray(e, dtype=float), 0.0, 1.0)
    norm = np.sqrt(1 - e_perp * e_perp)
    if e_perp > TINY:
        lin = np.minimum(e, e_perp) ** 2 * _arccosh_inv(e_perp)
    else:
        lin = np.zeros_like(e)
    tail = np.where(e > e_perp, _f_antideriv(e) - _f_antideriv(e_perp), 0.0)
    val = (lin + tail) / norm
    return val if val.ndim else float(val)


def pi3_bin_densities(e_perp: float, bins: int = DEFAULT_BINS) -> np.ndarray:
    """Mean of :func:`pi3_density` over each bin of a uniform grid."""
    edges = bin_edges(bins)
    return np.diff(pi3_cdf(edges, e_perp)) / (edges[1] - edges[0])


def _schmidt(psi: np.ndarray):
    u, s, vh = np.linalg.svd(psi.reshape(2, 2))
    return s, u, vh


def pi3_frame(e_perp_state) -> np.ndarray:
    """Orthonormal basis ``(chi1, chi2, chi3)`` of the complement of a state.

    With Schmidt form ``xi = s1 |a1 b1> + s2 |a2 b2>`` the product states
    ``|a1 b2>`` and ``|a2 b1>`` are orthogonal to ``xi`` and to each other;
    ``chi3`` completes the basis.
    """
    xi = as_pure_state(e_perp_state, atol=1e-9)
    s, u, vh = _schmidt(xi)
    a1, a2 = u[:, 0], u[:, 1]
    b1, b2 = vh[0], vh[1]
    chi1 = np.kron(a1, b2)
    chi2 = np.kron(a2, b1)
    # xi = s1 a1b1 + s2 a2b2, so chi3 = s2 a1b1 - s1 a2b2 completes the frame.
    chi3 = s[1] * np.kron(a1, b1) - s[0] * np.kron(a2, b2)
    return np.array([chi1, chi2, chi3])


def sample_pi3(e_perp_state, n: int, seed=None, **kw) -> Histogram:
    """Haar-sample the three-dimensional complement of ``e_perp_state``.

    States are ``cos(t) chi1 + e^{i(a+g)} sin(t) cos(b) chi2
    - e^{i(a-g)} sin(t) sin(b) chi3`` with ``chi1, chi2`` product states.
    ``t`` has density ``sin(2t) sin(t)^2`` and ``b`` density ``sin(2b)``,
    both drawn by inverse CDF; ``a`` and ``g`` are uniform on ``[0, 2 pi)``
    so the two relative phases are independent and uniform.
    """
    frame = pi3_frame(e_perp_state)

    def draw(rng, m):
        u = rng.random(m)
        # cos^2 t ~ Beta(1, 2): CDF 1 - (1 - c)^2.
        cos2_t = 1.0 - np.sqrt(1.0 - u)
        cos_t = np.sqrt(cos2_t)
        sin_t = np.sqrt(1.0 - cos2_t)
        cos2_b = rng.random(m)
        cos_b = np.sqrt(cos2_b)
        sin_b = np.sqrt(1.0 - cos2_b)
        alpha = rng.uniform(0.0, 2 * np.pi, m)
        gamma = rng.uniform(0.0, 2 * np.pi, m)
        c = np.empty((m, 3), dtype=complex)
        c[:, 0] = cos_t
        c[:, 1] = np.exp(1j * (alpha + gamma)) * sin_t * cos_b
        c[:, 2] = -np.exp(1j * (alpha - gamma)) * sin_t * sin_b
        return entanglement_of_amplitudes(c @ frame)

    return sample_entanglement(draw, n, seed, **kw)


# -- rank 4 -----------------------------------------------------------------


def pi4_density(e):
    """Universal full-space density ``3 E sqrt(1 - E^2)``."""
    e = np.asarray(e, dtype=float)
    val = 3 * e * np.sqrt(np.clip(1 - e * e, 0.0, None))
    return val if val.ndim else float(val)


def pi4_cdf(e):
    e = np.clip(np.asarray(e, dtype=float), 0.0, 1.0)
    return 1.0 - (1.0 - e * e) ** 1.5


def pi4_bin_densities(bins: int = DEFAULT_BINS) -> np.ndarray:
    edges = bin_edges(bins)
    return np.diff(pi4_cdf(edges)) / (edges[1] - edges[0])


def sample_pi4(n: int, seed=None, **kw) -> Histogram:
    """Concurrence histogram of Haar-random pure states of two qubits."""

    def draw(rng, m):
        return entanglement_of_amplitudes(random_pure_states(m, rng))

    return sample_entanglement(draw, n, seed, **kw)
