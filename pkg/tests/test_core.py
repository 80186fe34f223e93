import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entpdf.core import (
    BELL_PHI_PLUS,
    as_density_matrix,
    as_pure_state,
    concurrence_many,
    eig_hermitian,
    negativity,
    negativity_many,
    partial_transpose,
    projector,
    pure_entanglement,
    random_density_matrices,
    random_density_matrix,
    random_local_unitary,
    random_pure_state,
    random_pure_states,
    random_unitary,
    wootters_concurrence,
)
from entpdf.errors import InvalidRank, NotHermitian, NotNormalized, NotPositive, TraceNotOne

from oracles import concurrence_eig, concurrence_reduced, negativity_loop, partial_transpose_loop

BELL = projector(BELL_PHI_PLUS)
MIXED = np.eye(4) / 4


def werner(eps):
    return (1 - eps) / 4 * np.eye(4) + eps * BELL


class TestValidation:
    def test_not_hermitian(self):
        rho = MIXED.astype(complex)
        rho[0, 1] = 1e-3
        with pytest.raises(NotHermitian) as exc:
            as_density_matrix(rho)
        assert exc.value.residual == pytest.approx(1e-3)
        assert "hermiticity" in NotHermitian.invariant

    def test_trace(self):
        with pytest.raises(TraceNotOne):
            as_density_matrix(np.eye(4) / 2)

    def test_negative_eigenvalue(self):
        with pytest.raises(NotPositive):
            as_density_matrix(np.diag([0.6, 0.5, 0.0, -0.1]))

    def test_tolerates_text_roundoff(self):
        rho = MIXED + 1e-13
        rho = rho / np.trace(rho)
        out = as_density_matrix(rho)
        assert np.allclose(out, out.conj().T, atol=0)

    def test_unnormalized_state(self):
        with pytest.raises(NotNormalized):
            as_pure_state([1, 0, 0, 1])

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            as_density_matrix(np.eye(3) / 3)


class TestEigHermitian:
    def test_maximally_mixed(self):
        spec = eig_hermitian(MIXED)
        assert spec.eigenvalues == pytest.approx([0.25] * 4, abs=1e-12)
        # Tie-break: degenerate block resolves to the standard basis.
        assert np.allclose(spec.eigenvectors, np.eye(4), atol=1e-12)

    def test_bell_projector(self):
        spec = eig_hermitian(BELL)
        assert spec.eigenvalues == pytest.approx([1, 0, 0, 0], abs=1e-12)
        assert abs(np.vdot(spec.vector(0), BELL_PHI_PLUS)) == pytest.approx(1.0, abs=1e-12)

    def test_recovers_spectrum(self):
        lam = np.array([0.385, 0.288, 0.231, 0.096])
        u = random_unitary(4, 7)
        rho = (u * lam) @ u.conj().T
        spec = eig_hermitian(rho)
        assert spec.eigenvalues == pytest.approx(lam, abs=1e-9)

    def test_descending_and_reassembles(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            rho = random_density_matrix(int(rng.integers(1, 5)), rng)
            spec = eig_hermitian(rho)
            assert np.all(np.diff(spec.eigenvalues) <= 1e-15)
            assert np.max(np.abs(spec.reassemble() - rho)) < 1e-8

    def test_projection_is_nested(self):
        spec = eig_hermitian(random_density_matrix(4, 11))
        p2, p3 = spec.projection(2), spec.projection(3)
        assert np.allclose(p3 @ p2, p2, atol=1e-12)
        assert np.trace(p3).real == pytest.approx(3.0)

    def test_deterministic_degenerate_block(self):
        rho = np.diag([0.4, 0.2, 0.2, 0.2]).astype(complex)
        a = eig_hermitian(rho).eigenvectors
        b = eig_hermitian(rho.copy()).eigenvectors
        assert np.array_equal(a, b)


class TestPureEntanglement:
    @pytest.mark.parametrize(
        "psi, expected",
        [
            (BELL_PHI_PLUS, 1.0),
            ([0, 1, 0, 0], 0.0),
            ([np.cos(np.pi / 8), 0, 0, np.sin(np.pi / 8)], np.sin(np.pi / 4)),
        ],
    )
    def test_examples(self, psi, expected):
        assert pure_entanglement(psi) == pytest.approx(expected, abs=1e-12)

    def test_matches_reduced_determinant(self):
        rng = np.random.default_rng(0)
        for _ in range(500):
            psi = random_pure_state(rng)
            assert pure_entanglement(psi) == pytest.approx(concurrence_reduced(psi), abs=1e-9)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            psi = random_pure_state(rng)
            u = random_local_unitary(rng)
            assert pure_entanglement(u @ psi) == pytest.approx(pure_entanglement(psi), abs=1e-12)


class TestConcurrence:
    def test_bell(self):
        assert wootters_concurrence(BELL) == pytest.approx(1.0, abs=1e-9)

    def test_mixed(self):
        assert wootters_concurrence(MIXED) == pytest.approx(0.0, abs=1e-12)

    def test_werner_half(self):
        assert wootters_concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-9)
        assert concurrence_eig(werner(0.5)) == pytest.approx(0.25, abs=1e-9)

    def test_pure_states_agree(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            psi = random_pure_state(rng)
            assert wootters_concurrence(projector(psi)) == pytest.approx(pure_entanglement(psi), abs=1e-9)

    def test_matches_eigenvalue_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            rho = random_density_matrix(int(rng.integers(2, 5)), rng)
            assert wootters_concurrence(rho) == pytest.approx(concurrence_eig(rho), abs=1e-7)

    def test_batched_matches_scalar(self):
        rng = np.random.default_rng(5)
        rhos = random_density_matrices(rng.integers(1, 5, 200), rng)
        c = concurrence_many(rhos)
        n = negativity_many(rhos)
        for k in range(200):
            assert c[k] == pytest.approx(wootters_concurrence(rhos[k]), abs=1e-12)
            assert n[k] == pytest.approx(negativity(rhos[k]), abs=1e-12)


class TestNegativity:
    def test_bell(self):
        ev = np.linalg.eigvalsh(partial_transpose(BELL))
        assert ev == pytest.approx([-0.5, 0.5, 0.5, 0.5], abs=1e-12)
        assert negativity(BELL) == pytest.approx(1.0, abs=1e-12)

    def test_mixed(self):
        assert negativity(MIXED) == 0.0

    def test_werner_half(self):
        assert negativity(werner(0.5)) == pytest.approx(0.25, abs=1e-12)

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(300):
            rho = random_density_matrix(int(rng.integers(1, 5)), rng)
            assert negativity(rho) == pytest.approx(negativity_loop(rho), abs=1e-12)

    def test_concurrence_bounds_negativity(self):
        rng = np.random.default_rng(7)
        rhos = random_density_matrices(rng.integers(1, 5, 10**4), rng)
        c, n = concurrence_many(rhos), negativity_many(rhos)
        assert np.all(c >= 0) and np.all(n >= 0)
        assert np.max(n - c) <= 1e-9


class TestPartialTranspose:
    def test_diagonal_unchanged(self):
        rho = np.diag([0.1, 0.2, 0.3, 0.4]).astype(complex)
        assert np.array_equal(partial_transpose(rho, "first"), rho)
        assert np.array_equal(partial_transpose(rho, "second"), rho)

    def test_involution_and_loop(self):
        rho = random_density_matrix(4, 8)
        for side in ("first", "second"):
            twice = partial_transpose(partial_transpose(rho, side), side)
            assert np.array_equal(twice, rho)
        assert np.allclose(partial_transpose(rho), partial_transpose_loop(rho), atol=0)

    def test_sides_are_transposes(self):
        rho = random_density_matrix(3, 9)
        assert np.allclose(partial_transpose(rho, "first"), partial_transpose(rho, "second").T)

    def test_bad_side(self):
        with pytest.raises(ValueError):
            partial_transpose(MIXED, "third")


class TestRandomStates:
    @pytest.mark.parametrize("rank", [1, 2, 3, 4])
    def test_rank(self, rank):
        rho = random_density_matrix(rank, 12)
        ev = np.linalg.eigvalsh(rho)
        assert np.sum(ev > 1e-10) == rank
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)

    def test_rank_one_is_projector(self):
        rho = random_density_matrix(1, 3)
        assert np.allclose(rho @ rho, rho, atol=1e-12)

    @pytest.mark.parametrize("rank", [0, 5])
    def test_invalid_rank(self, rank):
        with pytest.raises(InvalidRank):
            random_density_matrix(rank, 0)

    def test_deterministic(self):
        assert np.array_equal(random_density_matrix(4, 99), random_density_matrix(4, 99))
        assert np.array_equal(random_pure_state(5), random_pure_state(5))

    def test_spectrum_matches_reference_recipe(self):
        # Same Ginibre recipe written independently; compare mean sorted spectra.
        rng_a, rng_b = np.random.default_rng(10), np.random.default_rng(11)
        a = np.array([np.sort(np.linalg.eigvalsh(random_density_matrix(4, rng_a))) for _ in range(10**4)])
        b = []
        for _ in range(10**4):
            g = rng_b.normal(size=(4, 4)) + 1j * rng_b.normal(size=(4, 4))
            w = np.linalg.eigvalsh(g @ g.conj().T)
            b.append(np.sort(w / w.sum()))
        assert a.mean(axis=0) == pytest.approx(np.mean(b, axis=0), abs=3e-3)

    def test_pure_state_norm_and_symmetry(self):
        s = random_pure_states(10**6, np.random.default_rng(14))
        assert np.max(np.abs(np.linalg.norm(s[:10**5], axis=1) - 1)) < 1e-12
        assert np.mean(np.abs(s[:, 0]) ** 2) == pytest.approx(0.25, abs=0.002)

    def test_unitary_is_unitary(self):
        u = random_unitary(4, 1)
        assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0))
def test_werner_concurrence_formula(eps):
    assert wootters_concurrence(werner(eps)) == pytest.approx(max(0.0, (3 * eps - 1) / 2), abs=1e-9)
