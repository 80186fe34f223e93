"""Locate singular points of a binned entanglement density.

Three kinds of landmark survive the weighted superposition of subspace
densities:

* a cusp, where the rank-2 density diverges logarithmically;
* a support edge, where the rank-2 density drops by a finite amount;
* a kink, where the rank-3 density's derivative jumps down.

Atoms are passed separately and reported as-is.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientResolution
from .haar import Histogram


@dataclass(frozen=True)
class FeatureConfig:
    min_counts_per_bin: float = 100.0
    cusp_sigma: float = 5.0
    edge_ratio: float = 5.0
    edge_isolation: float = 2.5
    empty_count: float = 5.0
    kink_window: int = 15
    kink_degree: int = 2
    kink_sigma: float = 6.0
    kink_min_jump: float = 0.2
    guard_bins: int = 3


@dataclass(frozen=True)
class Features:
    """Detected landmark locations; ``None`` means not detected."""

    e1: float | None = None
    e_cusp: float | None = None
    e_max: float | None = None
    e_perp: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _noise(h: Histogram) -> np.ndarray:
    # Poisson error for a single-component histogram; an upper bound for a
    # weighted mixture of independently sampled components.
    return np.sqrt(np.maximum(h.densities, 1.0 / h.sample_count) / (h.sample_count * h.bin_width))


def find_cusp(h: Histogram, cfg: FeatureConfig = FeatureConfig()) -> int | None:
    """Index of the most prominent interior local maximum, if significant."""
    d = h.densities
    sig = _noise(h)
    best, best_score = None, 0.0
    for i in range(2, len(d) - 2):
        if d[i] < d[i - 1] or d[i] < d[i + 1] or d[i] < d[i - 2] or d[i] < d[i + 2]:
            continue
        prom = d[i] - 0.5 * (d[i - 2] + d[i + 2])
        score = prom / (sig[i] * np.sqrt(1.5))
        if score > cfg.cusp_sigma and score > best_score:
            best, best_score = i, score
    return best


def find_edge(h: Histogram, after: int | None = None, cfg: FeatureConfig = FeatureConfig()) -> float | None:
    """Location of a finite drop in the density.

    If the density vanishes before ``E = 1`` the edge is the right end of the
    last occupied bin; otherwise it is the isolated largest downward step to
    the right of ``after``.
    """
    d = h.densities
    counts = d * h.sample_count * h.bin_width
    occupied = np.flatnonzero(counts > cfg.empty_count)
    if len(occupied) and occupied[-1] < len(d) - 1:
        return float(h.bin_edges[occupied[-1] + 1])
    steps = np.diff(d)
    med = np.median(np.abs(steps))
    start = 0 if after is None else after + 1
    best, best_drop = None, 0.0
    for i in range(start, len(steps)):
        drop = -steps[i]
        if drop <= cfg.edge_ratio * med:
            continue
        nbrs = [abs(steps[j]) for j in (i - 1, i + 1) if 0 <= j < len(steps)]
        if nbrs and drop < cfg.edge_isolation * max(nbrs):
            continue
        if drop > best_drop:
            best, best_drop = i, drop
    return None if best is None else float(h.bin_edges[best + 1])


def hinge_statistics(h: Histogram, cfg: FeatureConfig = FeatureConfig()):
    """Slope jump and its t-statistic at every admissible bin edge.

    Around each edge ``b`` a polynomial of degree ``kink_degree`` plus
    ``max(E - b, 0)**2`` and the hinge ``max(E - b, 0)`` is least-squares
    fitted to ``kink_window`` bins on either side.  The hinge coefficient is
    the slope jump at ``b``; the squared term lets the curvature differ on
    the two sides, which otherwise biases the location by about a bin.
    """
    d = h.densities
    n, w = len(d), cfg.kink_window
    c = h.centers
    jump = np.full(n + 1, np.nan)
    tstat = np.full(n + 1, np.nan)
    for k in range(w, n - w + 1):
        x = c[k - w:k + w] - h.bin_edges[k]
        y = d[k - w:k + w]
        right = np.maximum(x, 0.0)
        a = np.column_stack([x**p for p in range(cfg.kink_degree + 1)] + [right**2, right])
        coef, *_ = np.linalg.lstsq(a, y, rcond=None)
        r = y - a @ coef
        s2 = float(r @ r) / (len(y) - a.shape[1])
        var = s2 * np.linalg.inv(a.T @ a)[-1, -1]
        jump[k] = coef[-1]
        tstat[k] = coef[-1] / np.sqrt(var) if var > 0 else np.copysign(np.inf, coef[-1])
    return jump, tstat


def find_kink(h: Histogram, exclude=(), cfg: FeatureConfig = FeatureConfig()) -> float | None:
    """Bin edge with the most significant downward slope jump."""
    jump, tstat = hinge_statistics(h, cfg)
    ok = np.isfinite(tstat) | np.isinf(tstat)
    for j in exclude:
        lo, hi = max(0, j - cfg.guard_bins), min(len(ok), j + cfg.guard_bins + 2)
        ok[lo:hi] = False
    cand = ok & (tstat < -cfg.kink_sigma) & (jump < -cfg.kink_min_jump)
    if not cand.any():
        return None
    k = int(np.flatnonzero(cand)[np.argmin(tstat[cand])])
    return float(h.bin_edges[k])


def detect_features(h: Histogram, atoms=(), cfg: FeatureConfig = FeatureConfig()) -> Features:
    """Cusp, support edge and kink of a rendered density, plus atom locations.

    Raises
    ------
    InsufficientResolution
        When fewer than ``cfg.min_counts_per_bin`` samples per bin back the
        histogram.
    """
    per_bin = h.sample_count / h.nbins
    if per_bin < cfg.min_counts_per_bin:
        raise InsufficientResolution(
            f"{per_bin:.1f} expected counts per bin, need {cfg.min_counts_per_bin:g}"
        )
    e1 = None
    if atoms:
        e1 = float(max(atoms, key=lambda a: a.weight).location)
    cusp_i = find_cusp(h, cfg)
    e_cusp = None if cusp_i is None else float(h.centers[cusp_i])
    e_max = find_edge(h, cusp_i, cfg)
    exclude = []
    if cusp_i is not None:
        exclude.append(cusp_i)
    if e_max is not None:
        exclude.append(int(round(e_max / h.bin_width)) - 1)
    e_perp = find_kink(h, exclude, cfg)
    return Features(e1, e_cusp, e_max, e_perp)
