"""NMR pseudopure states ``(1 - eps)/4 * I + eps |psi><psi|``.

Their entanglement density is an atom of weight ``4 eps / (1 + 3 eps)`` at
the entanglement of ``psi`` on top of the universal full-space density,
whereas concurrence and negativity vanish for every ``eps <= 1/3``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BELL_PHI_PLUS, as_pure_state, negativity, projector, pure_entanglement, wootters_concurrence


@dataclass(frozen=True)
class PseudoPureSpec:
    epsilon: float
    psi: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        object.__setattr__(self, "psi", as_pure_state(self.psi, atol=1e-9))


def build_pps(spec: PseudoPureSpec) -> np.ndarray:
    eps = spec.epsilon
    return (1 - eps) / 4 * np.eye(4, dtype=complex) + eps * projector(spec.psi)


def pps_pdf_weights(epsilon: float) -> tuple[float, float]:
    """``(mu1, mu4)``; the rank-2 and rank-3 weights are identically zero."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    d = 1 + 3 * epsilon
    return 4 * epsilon / d, (1 - epsilon) / d


@dataclass(frozen=True)
class PPSReport:
    epsilon: float
    mu1: float
    mu4: float
    atom_location: float
    concurrence: float
    negativity: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def analyze_pps(spec: PseudoPureSpec) -> PPSReport:
    rho = build_pps(spec)
    mu1, mu4 = pps_pdf_weights(spec.epsilon)
    return PPSReport(
        spec.epsilon,
        mu1,
        mu4,
        pure_entanglement(spec.psi),
        wootters_concurrence(rho),
        negativity(rho),
    )


def concurrence_threshold_scan(epsilons, psi=BELL_PHI_PLUS) -> list[PPSReport]:
    return [analyze_pps(PseudoPureSpec(float(e), psi)) for e in epsilons]


def concurrence_onset(psi=BELL_PHI_PLUS, *, tol: float = 1e-9, floor: float = 1e-12) -> float:
    """Bisect for the smallest ``eps`` with non-zero concurrence."""
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if wootters_concurrence(build_pps(PseudoPureSpec(mid, psi))) > floor:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
