import numpy as np
import pytest

from cn_duality import sampling
from cn_duality.errors import RegularityViolation, StructureViolation
from cn_duality.matkit import build_c, expm, frob
from cn_duality.phase_space import CouplingParams, RsvdState
from cn_duality.rsvd import (
    grad_f1,
    hamiltonian_r,
    lax_a,
    momentum_residual_r,
    observables_trace,
    reduced_observables,
    solve_flow_r,
    z_values,
)

RT2 = np.sqrt(2.0)
C11 = CouplingParams(1.0, 1.0)
REF = RsvdState([1.0], [0.0])


def random_pair(rng, n):
    c = sampling.random_couplings(rng)
    return sampling.random_rsvd_state(rng, n, couplings=c), c


class TestZValues:
    def test_reference(self):
        z = z_values(REF, C11)
        assert z[0] == pytest.approx(-(1 + 1j), abs=1e-14)
        assert abs(z[0]) == pytest.approx(RT2)

    def test_small_coupling_limit(self):
        z = z_values(REF, CouplingParams(1.0, 1e-8))
        assert z[0] == pytest.approx(-1.0, abs=1e-7)

    def test_dual_paths_agree(self):
        # z_values itself raises if the direct product and the w-function
        # evaluation disagree; sweep random states to exercise that check.
        rng = np.random.default_rng(30)
        for n in (1, 2, 3):
            st, c = random_pair(rng, n)
            z_values(st, c)


class TestLaxA:
    def test_reference_matrix(self):
        bundle = lax_a(REF, C11)
        assert np.allclose(bundle.a, [[RT2, -1j], [1j, RT2]], atol=1e-14)

    def test_reference_spectrum(self):
        bundle = lax_a(REF, C11)
        assert np.real(np.trace(bundle.a)) == pytest.approx(2 * RT2)
        assert np.allclose(np.linalg.eigvalsh(bundle.a), [RT2 - 1, RT2 + 1])

    def test_rest_diagonal_is_abs_z(self):
        rng = np.random.default_rng(31)
        for n in (1, 3):
            c = sampling.random_couplings(rng)
            st = sampling.random_rsvd_state(rng, n, couplings=c)
            rest = RsvdState(st.lam, np.zeros(n))
            bundle = lax_a(rest, c)
            absz = np.abs(bundle.z)
            assert np.allclose(np.diagonal(bundle.a)[:n].real, absz, rtol=1e-12)
            assert np.allclose(np.diagonal(bundle.a)[n:].real, absz, rtol=1e-12)

    def test_bundle_invariants(self):
        rng = np.random.default_rng(32)
        for n in (1, 2, 4):
            st, c = random_pair(rng, n)
            bundle = lax_a(st, c)
            cc = build_c(n)
            assert frob(bundle.a @ cc @ bundle.a - cc) <= 1e-9 * frob(bundle.a) ** 2
            assert np.min(np.linalg.eigvalsh(bundle.a)) > 0
            assert abs(np.real(bundle.v.conj() @ bundle.v) - 2 * n) <= 1e-9
            assert np.linalg.norm(cc @ bundle.v + bundle.v) <= 1e-9
            assert frob(bundle.r @ bundle.r - bundle.a) <= 1e-10 * frob(bundle.a)


class TestHamiltonian:
    def test_reference(self):
        assert hamiltonian_r(REF, C11) == pytest.approx(RT2, abs=1e-12)

    def test_half_trace(self):
        rng = np.random.default_rng(33)
        for n in (1, 2, 3):
            st, c = random_pair(rng, n)
            assert hamiltonian_r(st, c) == pytest.approx(
                np.real(np.trace(lax_a(st, c).a)) / 2.0, rel=1e-10
            )

    def test_free_limit(self):
        # Vanishing g2 and huge separations: every interaction factor -> 1.
        st = RsvdState([3000.0, 2000.0, 1000.0], [0.0, 0.0, 0.0])
        h = hamiltonian_r(st, CouplingParams(1.0, 1e-8))
        assert h == pytest.approx(3.0, abs=1e-5)


class TestObservables:
    def test_even_power_closed_form(self):
        phi, psi = reduced_observables(REF, C11, 2)
        assert phi == pytest.approx(1.0)
        assert psi == pytest.approx(2.0 * RT2)

    def test_odd_power_at_rest(self):
        phi, psi = reduced_observables(REF, C11, 1)
        assert phi == 0.0
        assert psi == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("r", range(1, 7))
    def test_trace_definitions_match(self, r):
        rng = np.random.default_rng(34 + r)
        st, c = random_pair(rng, 2)
        phi_c, psi_c = reduced_observables(st, c, r)
        phi_t, psi_t = observables_trace(st, c, r)
        scale = 1.0 + max(abs(phi_c), abs(psi_c))
        assert abs(phi_c - phi_t) <= 1e-8 * scale
        assert abs(psi_c - psi_t) <= 1e-8 * scale

    def test_order_validated(self):
        with pytest.raises(ValueError):
            reduced_observables(REF, C11, 0)


class TestMomentumResidual:
    def test_reference(self):
        assert momentum_residual_r(REF, C11) <= 1e-12

    def test_random(self):
        rng = np.random.default_rng(35)
        for n in (2, 3):
            st, c = random_pair(rng, n)
            assert momentum_residual_r(st, c) <= 1e-9


class TestGradF1:
    def test_identity_point(self):
        assert np.allclose(grad_f1(np.eye(4, dtype=complex)), 0.0)

    def test_reference_point(self):
        a_half = lax_a(REF, C11).r
        assert np.allclose(grad_f1(a_half), [[0, -1j], [1j, 0]], atol=1e-12)

    def test_matches_directional_derivative(self):
        rng = np.random.default_rng(36)
        st, c = random_pair(rng, 2)
        r = lax_a(st, c).r
        grad = grad_f1(r)
        for _ in range(4):
            w = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            a11 = (w - w.conj().T) / 2
            w2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            a12 = (w2 - w2.conj().T) / 2
            xi = np.block([[a11, a12], [a12, a11]]) + sampling.random_p_element(rng, 2, 0.5)
            cc = build_c(2)
            assert frob(xi.conj().T @ cc + cc @ xi) < 1e-12
            eps = 1e-6

            def f1(y):
                return 0.5 * np.real(np.trace(y @ y.conj().T))

            numeric = (f1(r @ expm(eps * xi)) - f1(r @ expm(-eps * xi))) / (2 * eps)
            analytic = np.real(np.trace(grad @ xi))
            assert numeric == pytest.approx(analytic, abs=1e-6 * (1 + abs(analytic)))

    def test_rejects_non_hermitian(self):
        with pytest.raises(StructureViolation):
            grad_f1(np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestSolveFlow:
    def test_identity_at_zero(self):
        rng = np.random.default_rng(37)
        st0, c = random_pair(rng, 3)
        st = solve_flow_r(st0, c, 0.0)
        assert np.max(np.abs(st.lam - st0.lam)) <= 1e-12
        assert np.max(np.abs(st.theta - st0.theta)) <= 1e-12

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_reference_closed_form(self, t):
        # grad_f1 at the reference point is [[0,-i],[i,0]], so the linear flow
        # is [[1, ti], [-ti, -1]] with eigenvalues +-sqrt(1+t^2).
        st = solve_flow_r(REF, C11, t)
        assert st.lam[0] == pytest.approx(np.sqrt(1 + t * t), abs=1e-12)
        assert hamiltonian_r(st, C11) == pytest.approx(RT2, abs=1e-10)

    def test_energy_and_spectrum_conserved(self):
        rng = np.random.default_rng(38)
        st0, c = random_pair(rng, 2)
        h0 = hamiltonian_r(st0, c)
        ref_actions = np.linalg.eigvalsh(lax_a(st0, c).a)
        for t in (0.5, 1.0, 2.0):
            st = solve_flow_r(st0, c, t)
            assert hamiltonian_r(st, c) == pytest.approx(h0, abs=1e-8 * max(1, h0))
            drift = np.max(np.abs(np.linalg.eigvalsh(lax_a(st, c).a) - ref_actions))
            assert drift <= 1e-8 * max(1.0, np.max(ref_actions))

    def test_group_property(self):
        rng = np.random.default_rng(39)
        st0, c = random_pair(rng, 2)
        ab = solve_flow_r(solve_flow_r(st0, c, 0.8), c, 0.7)
        direct = solve_flow_r(st0, c, 1.5)
        assert np.max(np.abs(ab.lam - direct.lam)) <= 1e-7
        assert np.max(np.abs(ab.theta - direct.theta)) <= 1e-7

    def test_collision_bisects_safe_time(self):
        # A diagonal generator drags lam_1 linearly through zero at t = 1;
        # the solver must refuse and report the largest safe time.
        gen = np.diag([1.0, 0.0, -1.0, 0.0]).astype(complex)
        st0 = RsvdState([1.0, 0.5], [0.0, 0.0])
        with pytest.raises(RegularityViolation, match="largest safe"):
            solve_flow_r(st0, C11, 1.0, gradient=gen)
