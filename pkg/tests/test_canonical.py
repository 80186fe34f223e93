import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entpdf.canonical import (
    ALL_SEPARABLE,
    Subspace2,
    bloch_angles,
    canonical_subspace,
    canonicalize,
    complement_basis,
    find_separable_states,
    state_from_angles,
)
from entpdf.core import pure_entanglement, random_local_unitary, random_unitary
from entpdf.errors import DegenerateComplement, NotInSubspace, NotOrthonormal

UU, UD, DU, DD = np.eye(4, dtype=complex)
CUSP_EDGE_XYZ = (0.529894477591658, 0.084922568365918, 0.84380092438916)


def random_subspace(rng):
    u = random_unitary(4, rng)
    return Subspace2(u[:, 0], u[:, 1])


def rotate(s: Subspace2, u) -> Subspace2:
    return Subspace2(u @ s.b1, u @ s.b2)


class TestSubspace2:
    def test_rejects_non_orthogonal(self):
        with pytest.raises(NotOrthonormal):
            Subspace2(UU, (UU + DD) / np.sqrt(2))

    def test_from_vectors_orthonormalizes(self):
        s = Subspace2.from_vectors([1, 0, 0, 1], [1, 1, 0, 0])
        assert abs(np.vdot(s.b1, s.b2)) < 1e-12
        assert np.trace(s.projector).real == pytest.approx(2.0)


class TestFindSeparable:
    def test_up_up_down_down(self):
        seps = find_separable_states(Subspace2(UU, DD))
        assert len(seps) == 2
        overlaps = sorted(max(abs(np.vdot(v, s)) for v in (UU, DD)) for s in seps)
        assert overlaps == pytest.approx([1.0, 1.0], abs=1e-12)

    def test_shared_factor_is_all(self):
        assert find_separable_states(Subspace2(UU, UD)) == ALL_SEPARABLE

    def test_generic_roots_are_separable(self):
        s = canonical_subspace(0.6, 0.48)
        seps = find_separable_states(s)
        assert len(seps) == 2
        for v in seps:
            assert pure_entanglement(v) < 1e-9

    def test_root_count_matches_grid_search(self):
        # Near-zeros of the concurrence on the subspace's Bloch sphere form
        # exactly two clusters, one around each root.
        s = canonical_subspace(0.6, 0.48)
        th, ph = np.meshgrid(np.linspace(0, np.pi, 361), np.linspace(0, 2 * np.pi, 720, endpoint=False))
        states = np.cos(th / 2)[..., None] * s.b1 + (np.exp(1j * ph) * np.sin(th / 2))[..., None] * s.b2
        e = 2 * np.abs(states[..., 0] * states[..., 3] - states[..., 1] * states[..., 2])
        mask = e < 0.02
        pts = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], -1)[mask]
        clusters = []
        for p in pts:
            for c in clusters:
                if np.linalg.norm(c - p) < 0.2:
                    break
            else:
                clusters.append(p)
        assert len(clusters) == 2
        for v in find_separable_states(s):
            c1, c2 = np.vdot(s.b1, v), np.vdot(s.b2, v)
            t = 2 * np.arctan2(abs(c2), abs(c1))
            p = np.angle(c2 * np.conj(c1))
            bloch = np.array([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)])
            assert min(np.linalg.norm(bloch - c) for c in clusters) < 0.2


class TestCanonicalize:
    def test_already_canonical(self):
        c = canonicalize(Subspace2(UU, DD))
        assert (c.x, c.y, c.z) == pytest.approx((0, 0, 1), abs=1e-12)

    def test_basis_change_invariance(self):
        c = canonicalize(Subspace2((UU + DD) / np.sqrt(2), (UU - DD) / np.sqrt(2)))
        assert (c.x, c.y, c.z) == pytest.approx((0, 0, 1), abs=1e-12)

    def test_cusp_edge_round_trip(self):
        s = canonical_subspace(*CUSP_EDGE_XYZ[:2])
        for seed in range(20):
            u = random_local_unitary(seed)
            c = canonicalize(rotate(s, u))
            assert (c.x, c.y, c.z) == pytest.approx(CUSP_EDGE_XYZ, abs=1e-6)

    def test_all_separable_convention(self):
        # C^2 (x) |u>: the canonical second vector is |du>, i.e. (x,y,z) = (0,1,0).
        c = canonicalize(Subspace2(UU, DU))
        assert (c.x, c.y, c.z) == pytest.approx((0, 1, 0), abs=1e-12)
        c = canonicalize(Subspace2(UU, UD))
        assert (c.x, c.y, c.z) == pytest.approx((1, 0, 0), abs=1e-12)

    def test_local_ops_realize_form(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            c = canonicalize(random_subspace(rng))
            u = c.local_unitary
            assert np.allclose(u @ c.chi1, UU, atol=1e-9)
            assert np.allclose(u @ c.chi2, c.canonical_chi2, atol=1e-9)
            assert min(c.x, c.y, c.z) >= 0
            assert c.x**2 + c.y**2 + c.z**2 == pytest.approx(1.0, abs=1e-9)

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            c = canonicalize(random_subspace(rng))
            again = canonicalize(canonical_subspace(c.x, c.y))
            assert (again.x, again.y, again.z) == pytest.approx((c.x, c.y, c.z), abs=1e-9)

    def test_entanglement_landscape_preserved(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            s = random_subspace(rng)
            c = canonicalize(s)
            u = c.local_unitary
            coef = rng.standard_normal((100, 2)) + 1j * rng.standard_normal((100, 2))
            coef /= np.linalg.norm(coef, axis=1, keepdims=True)
            for a, b in coef:
                psi = a * s.b1 + b * s.b2
                assert pure_entanglement(u @ psi) == pytest.approx(pure_entanglement(psi), abs=1e-9)

    def test_lo_invariance_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            s = random_subspace(rng)
            c0 = canonicalize(s)
            c1 = canonicalize(rotate(s, random_local_unitary(rng)))
            assert (c1.x, c1.y, c1.z) == pytest.approx((c0.x, c0.y, c0.z), abs=1e-6)


class TestComplement:
    def check(self, x, y, z, k1, k2):
        vecs = [UU, np.array([0, x, y, z], dtype=complex), k1, k2]
        gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
        assert np.max(np.abs(gram - np.eye(4))) < 1e-9

    def test_bell_pair_complement(self):
        k1, k2 = complement_basis(canonicalize(Subspace2(UU, DD)))
        assert np.allclose(k1, DU, atol=1e-12)
        assert np.allclose(k2, UD, atol=1e-12)

    def test_y_one(self):
        c = canonicalize(Subspace2(UU, DU))
        k1, k2 = complement_basis(c)
        assert np.allclose(k1, -DD, atol=1e-12)
        assert np.allclose(k2, UD, atol=1e-12)
        self.check(c.x, c.y, c.z, k1, k2)

    def test_cusp_edge(self):
        c = canonicalize(canonical_subspace(*CUSP_EDGE_XYZ[:2]))
        self.check(c.x, c.y, c.z, *complement_basis(c))

    def test_first_vector_is_product(self):
        c = canonicalize(canonical_subspace(0.3, 0.5))
        assert pure_entanglement(complement_basis(c)[0]) < 1e-12

    def test_degenerate(self):
        c = canonicalize(Subspace2(UU, UD))
        with pytest.raises(DegenerateComplement):
            complement_basis(c)
        k1, k2 = complement_basis(c, fallback=True)
        self.check(1, 0, 0, k1, k2)

    def test_original_frame(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            s = random_subspace(rng)
            k1, k2 = complement_basis(canonicalize(s), frame="original")
            vecs = [s.b1, s.b2, k1, k2]
            gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
            assert np.max(np.abs(gram - np.eye(4))) < 1e-8


class TestBlochAngles:
    basis = (UU, np.array([0, 0.6, 0.48, np.sqrt(1 - 0.36 - 0.2304)], dtype=complex))

    def test_poles(self):
        assert bloch_angles(self.basis[0], self.basis) == (0.0, 0.0)
        theta, phi = bloch_angles(self.basis[1], self.basis)
        assert theta == pytest.approx(np.pi)
        assert phi == 0.0

    def test_equator(self):
        # c1 = 1/sqrt2, c2 = i/sqrt2 so arg(c1 conj(c2)) = -pi/2 = 3pi/2.
        psi = (self.basis[0] + 1j * self.basis[1]) / np.sqrt(2)
        theta, phi = bloch_angles(psi, self.basis)
        assert theta == pytest.approx(np.pi / 2)
        assert phi == pytest.approx(3 * np.pi / 2)

    def test_not_in_subspace(self):
        with pytest.raises(NotInSubspace):
            bloch_angles(UD, (UU, DD))

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.01, np.pi - 0.01), st.floats(0, 2 * np.pi - 1e-9), st.floats(0, 2 * np.pi))
    def test_round_trip_up_to_phase(self, theta, phi, gauge):
        psi = np.exp(1j * gauge) * state_from_angles(theta, phi, self.basis)
        t, p = bloch_angles(psi, self.basis)
        back = state_from_angles(t, p, self.basis)
        assert abs(abs(np.vdot(back, psi)) - 1) < 1e-8
        assert t == pytest.approx(theta, abs=1e-9)
