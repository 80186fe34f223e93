"""Entanglement probability densities of two-qubit mixed states.

A density matrix is split into nested eigen-projections; the Haar density of
pure-state concurrence over each projection, weighted by eigenvalue gaps,
gives the state's entanglement density.  A handful of landmark values
(the markers) characterize that density and, up to local unitaries, the
state itself.
"""
from .canonical import (
    Subspace2,
    SubspaceCanonicalForm,
    bloch_angles,
    canonical_subspace,
    canonicalize,
    complement_basis,
    find_separable_states,
    state_from_angles,
)
from .compose import (
    Angles,
    EntanglementPDF,
    MarkerSet,
    WeightVector,
    compose_pdf,
    evaluate_pdf,
    extract_markers,
    weights,
    weights_from_eigenvalues,
)
from .core import (
    as_density_matrix,
    eig_hermitian,
    negativity,
    partial_transpose,
    pure_entanglement,
    random_density_matrix,
    random_local_unitary,
    random_pure_state,
    wootters_concurrence,
)
from .errors import EntanglementError
from .features import FeatureConfig, Features, detect_features
from .haar import (
    Histogram,
    invert_pi2,
    pi2_markers,
    pi3_density,
    pi4_density,
    sample_pi2,
    sample_pi3,
    sample_pi4,
    sample_subspace,
)
from .pps import PseudoPureSpec, analyze_pps, build_pps, concurrence_onset, pps_pdf_weights
from .reconstruct import ReconstructionInput, build_state, lo_equivalent

__version__ = "0.1.0"
