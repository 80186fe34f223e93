"""Reference states with chosen spectra and landmarks."""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .canonical import canonical_subspace, canonicalize, complement_basis, state_from_angles
from .compose import Angles, MarkerSet, weights_from_eigenvalues
from .core import pure_entanglement
from .haar import invert_pi2, pi2_entanglement_at, pi2_markers

CUSP_EDGE_MARKERS = (0.89, 0.80)
KINK_E_PERP = 0.4
REFERENCE_EIGENVALUES = (0.385, 0.288, 0.231, 0.096)
# Read off the example composite: atom near 0.09, dual-state kink near 0.6.
REFERENCE_E1 = 0.09
REFERENCE_E_PERP = 0.6


def _theta_for(target: float, ent_of_theta, upper: float) -> float:
    return brentq(lambda t: ent_of_theta(t) - target, 1e-12, upper, xtol=1e-15)


def reference_markers() -> MarkerSet:
    """Marker set of a state with the example spectrum and landmarks.

    The rank-2 subspace is the one with ``(e_max, e_cusp) = (0.89, 0.80)``,
    the top eigenvector has entanglement 0.09 and the bottom one 0.6.
    """
    x, y, _ = invert_pi2(*CUSP_EDGE_MARKERS)
    w = weights_from_eigenvalues(REFERENCE_EIGENVALUES)

    phi = np.pi / 2
    theta = _theta_for(REFERENCE_E1, lambda t: pi2_entanglement_at(x, y, t, phi), np.pi / 2)

    frame = canonicalize(canonical_subspace(x, y))
    comp = complement_basis(frame)
    phi_p = 0.0

    def e_comp(t):
        return pure_entanglement(state_from_angles(t, phi_p, comp))

    grid = np.linspace(0, np.pi, 2001)
    top = grid[int(np.argmax([e_comp(t) for t in grid]))]
    theta_p = _theta_for(REFERENCE_E_PERP, e_comp, top)

    return MarkerSet(
        mu=w,
        e1=REFERENCE_E1,
        pi2=pi2_markers(x, y),
        e_perp=REFERENCE_E_PERP,
        angles=Angles(theta, phi, theta_p, phi_p),
    )


def reference_state() -> np.ndarray:
    from .reconstruct import build_state

    return build_state(reference_markers())
