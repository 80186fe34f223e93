import numpy as np
import pytest

from entpdf.compose import Angles, MarkerSet, extract_markers, weights_from_eigenvalues
from entpdf.core import (
    BELL_PHI_PLUS,
    as_density_matrix,
    eig_hermitian,
    projector,
    random_density_matrix,
    random_local_unitary,
    wootters_concurrence,
)
from entpdf.errors import InfeasibleMarkers, MissingAngles
from entpdf.reference import reference_markers
from entpdf.haar import Pi2Markers, pi2_markers
from entpdf.reconstruct import ReconstructionInput, build_state, lo_equivalent, markers_close


def rebuilt(rho):
    return build_state(extract_markers(rho))


class TestBuildState:
    def test_bell_markers(self):
        rho = rebuilt(projector(BELL_PHI_PLUS))
        assert np.linalg.matrix_rank(rho, 1e-9) == 1
        assert wootters_concurrence(rho) == pytest.approx(1.0, abs=1e-9)

    def test_maximally_mixed(self):
        rho = build_state(MarkerSet(weights_from_eigenvalues([0.25] * 4)))
        assert np.allclose(rho, np.eye(4) / 4, atol=1e-15)

    def test_reference_state(self):
        m = reference_markers()
        rho = build_state(m)
        assert eig_hermitian(rho).eigenvalues == pytest.approx([0.385, 0.288, 0.231, 0.096], abs=1e-12)
        assert markers_close(extract_markers(rho), m, 1e-9)

    def test_random_round_trip(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            rho = random_density_matrix(4, rng)
            m = extract_markers(rho)
            rho2 = build_state(m)
            as_density_matrix(rho2)
            assert eig_hermitian(rho2).eigenvalues == pytest.approx(eig_hermitian(rho).eigenvalues, abs=1e-6)
            assert markers_close(extract_markers(rho2), m, 1e-6)

    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_lower_rank_round_trip(self, rank):
        rng = np.random.default_rng(rank)
        for _ in range(50):
            m = extract_markers(random_density_matrix(rank, rng))
            assert markers_close(extract_markers(build_state(m)), m, 1e-6)

    def test_missing_angles(self):
        m = reference_markers()
        bare = MarkerSet(m.mu, m.e1, m.pi2, m.e_perp, Angles(None, None, m.angles.theta_perp, m.angles.phi_perp))
        with pytest.raises(MissingAngles, match="theta"):
            build_state(bare)

    def test_infeasible_cusp_above_max(self):
        m = reference_markers()
        bad = MarkerSet(m.mu, m.e1, Pi2Markers(0.5, 0.6, 1.0, 0.1), m.e_perp, m.angles)
        with pytest.raises(InfeasibleMarkers):
            ReconstructionInput(bad)

    def test_infeasible_e1_above_max(self):
        m = reference_markers()
        bad = MarkerSet(m.mu, 0.95, m.pi2, m.e_perp, m.angles)
        with pytest.raises(InfeasibleMarkers, match="e1"):
            build_state(bad)

    def test_weights_must_sum_to_one(self):
        w = weights_from_eigenvalues([0.25] * 4)
        bad = MarkerSet(type(w)(w.lambda_diffs, (0.1, 0.1, 0.1, 0.1)))
        with pytest.raises(InfeasibleMarkers):
            build_state(bad)

    def test_no_rank_two_frame(self):
        # mu2 = 0: the top eigenvector and the bottom one are set by e1 and e_perp alone.
        w = weights_from_eigenvalues([0.4, 0.3, 0.3, 0.0])
        assert w.mu[1] == pytest.approx(0.0) and w.mu[0] > 0 and w.mu[2] > 0
        m = MarkerSet(w, 0.2, None, 0.3)
        out = extract_markers(build_state(m))
        assert out.e1 == pytest.approx(0.2, abs=1e-9)
        assert out.e_perp == pytest.approx(0.3, abs=1e-9)


class TestLOEquivalence:
    def test_local_rotation(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            rho = random_density_matrix(4, rng)
            u = random_local_unitary(rng)
            assert lo_equivalent(rho, u @ rho @ u.conj().T)

    def test_bell_vs_mixed(self):
        assert not lo_equivalent(projector(BELL_PHI_PLUS), np.eye(4) / 4)

    def test_rebuilt(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            rho = random_density_matrix(4, rng)
            assert lo_equivalent(rho, rebuilt(rho))

    def test_distinguishes_different_states(self):
        a = random_density_matrix(4, 3)
        b = random_density_matrix(4, 4)
        assert not lo_equivalent(a, b)

    def test_markers_close_requires_same_fields(self):
        m = extract_markers(random_density_matrix(4, 5))
        stripped = MarkerSet(m.mu, m.e1, m.pi2, None, m.angles)
        assert not markers_close(m, stripped)


def test_invert_is_reexported():
    from entpdf.reconstruct import invert_pi2

    x, y, z = invert_pi2(0.89, 0.80)
    assert pi2_markers(x, y).e_cusp == pytest.approx(0.80, abs=1e-12)
