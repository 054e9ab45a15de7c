import numpy as np
import pytest

from cn_duality import matkit, sampling
from cn_duality.errors import (
    InvalidDimensionError,
    NotPositiveDefiniteError,
    RegularityViolation,
    SingularInputError,
    StructureViolation,
)
from cn_duality.matkit import (
    KFrame,
    build_c,
    cartan_polar,
    decompose_kp,
    eig_paired_expp,
    eig_paired_p,
    expm,
    frob,
    sqrt_posdef,
)

RT2 = np.sqrt(2.0)


class TestBuildC:
    def test_n1(self):
        assert np.array_equal(build_c(1), np.array([[0, 1], [1, 0]], dtype=complex))

    def test_n2_positions(self):
        c = build_c(2)
        expected = np.zeros((4, 4), dtype=complex)
        for i, j in [(0, 2), (1, 3), (2, 0), (3, 1)]:
            expected[i, j] = 1.0
        assert np.array_equal(c, expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_involution(self, n):
        c = build_c(n)
        assert np.array_equal(c @ c, np.eye(2 * n, dtype=complex))
        assert np.array_equal(c, c.conj().T)

    def test_zero_rejected(self):
        with pytest.raises(InvalidDimensionError):
            build_c(0)


class TestDecomposeKp:
    def test_hermitian_fixed_point(self):
        y = np.array([[2.0, 1 - 1j], [1 + 1j, -3.0]])
        plus, minus = decompose_kp(y)
        assert frob(plus) < 1e-15
        assert np.allclose(minus, y)

    def test_antihermitian_fixed_point(self):
        y = np.array([[1j, 2.0], [-2.0, -3j]])
        plus, minus = decompose_kp(y)
        assert frob(minus) < 1e-15
        assert np.allclose(plus, y)

    def test_worked_example(self):
        y = np.array([[1.0, 1j], [0.0, -1.0]])
        plus, minus = decompose_kp(y)
        assert np.allclose(plus, np.array([[0, 0.5j], [0.5j, 0]]))
        assert np.allclose(minus, np.array([[1, 0.5j], [-0.5j, -1]]))
        assert np.allclose(plus + minus, y)


class TestEigPairedP:
    def test_two_by_two(self):
        x = np.array([[0, 1j], [-1j, 0]])
        spec = eig_paired_p(x)
        assert np.allclose(spec.positive_part, [1.0])
        v = spec.frame.mat[:, 0]
        ref = np.array([1j, 1.0]) / RT2
        assert abs(abs(ref.conj() @ v) - 1.0) < 1e-12  # same direction, any phase

    def test_diagonal_input(self):
        x = np.diag([3.0, 1.0, -3.0, -1.0]).astype(complex)
        spec = eig_paired_p(x)
        assert np.allclose(spec.positive_part, [3.0, 1.0])
        assert np.allclose(spec.frame.mat, np.eye(4))

    def test_lam_diagonal(self):
        lam = np.array([2.5, 1.0, 0.25])
        x = np.diag(np.concatenate([lam, -lam])).astype(complex)
        assert np.allclose(eig_paired_p(x).positive_part, lam)

    @pytest.mark.parametrize("n", [1, 2, 4])
    def test_reconstruction_random(self, n):
        rng = np.random.default_rng(10 + n)
        x = sampling.random_p_element(rng, n)
        spec = eig_paired_p(x)
        eta = spec.frame.mat
        d = np.concatenate([spec.positive_part, -spec.positive_part])
        assert frob((eta * d) @ eta.conj().T - x) <= 1e-9 * max(1.0, frob(x))
        c = build_c(n)
        assert frob(eta @ c - c @ eta) <= 1e-10
        assert frob(eta.conj().T @ eta - np.eye(2 * n)) <= 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(StructureViolation):
            eig_paired_p(np.array([[0, 1.0], [0, 0]]))

    def test_rejects_commuting(self):
        # Hermitian but commutes with C instead of anticommuting.
        with pytest.raises(StructureViolation):
            eig_paired_p(np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex))

    def test_degenerate_rejected(self):
        lam = np.array([1.0, 1.0 + 1e-9])
        x = np.diag(np.concatenate([lam, -lam])).astype(complex)
        with pytest.raises(RegularityViolation):
            eig_paired_p(x)


class TestEigPairedExpp:
    def test_worked_example(self):
        a = np.array([[RT2, -1j], [1j, RT2]])
        spec = eig_paired_expp(a)
        assert np.allclose(spec.positive_part, [0.5 * np.log(1 + RT2)])
        assert abs(spec.positive_part[0] - 0.4406867935097715) < 1e-12

    def test_identity_degenerate(self):
        with pytest.raises(RegularityViolation):
            eig_paired_expp(np.eye(2, dtype=complex))

    def test_diagonal(self):
        a = np.diag([np.exp(2.0), np.exp(-2.0)]).astype(complex)
        spec = eig_paired_expp(a)
        assert np.allclose(spec.positive_part, [1.0])
        assert np.allclose(spec.frame.mat, np.eye(2))

    def test_determinant_one(self):
        rng = np.random.default_rng(4)
        for n in (1, 2, 3):
            q = np.sort(rng.uniform(0.2, 2.0, n))[::-1]
            k = sampling.random_k_element(rng, n)
            a = (k * np.exp(np.concatenate([2 * q, -2 * q]))) @ k.conj().T
            a = (a + a.conj().T) / 2
            spec = eig_paired_expp(a)
            vals = np.linalg.eigvalsh(a)
            assert abs(np.prod(vals) - 1.0) <= 1e-9
            assert np.allclose(spec.positive_part, q)

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefiniteError):
            eig_paired_expp(np.diag([1.0, -1.0]).astype(complex))

    def test_pairing_violation(self):
        with pytest.raises(StructureViolation):
            eig_paired_expp(np.diag([4.0, 2.0]).astype(complex))


class TestSqrtPosdef:
    def test_diagonal(self):
        assert np.allclose(sqrt_posdef(np.diag([4.0, 0.25])), np.diag([2.0, 0.5]))

    def test_identity(self):
        assert np.allclose(sqrt_posdef(np.eye(3)), np.eye(3))

    def test_worked_example(self):
        a = np.array([[RT2, -1j], [1j, RT2]])
        r = sqrt_posdef(a)
        assert frob(r @ r - a) < 1e-12
        assert frob(r - r.conj().T) < 1e-14
        assert np.min(np.linalg.eigvalsh(r)) > 0

    def test_roundtrip_random(self):
        rng = np.random.default_rng(5)
        w = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        a = w @ w.conj().T + 0.5 * np.eye(4)
        r = sqrt_posdef(a)
        assert frob(r @ r - a) <= 1e-10 * frob(a)

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefiniteError):
            sqrt_posdef(np.diag([1.0, -2.0]))


class TestExpm:
    def test_zero(self):
        assert np.allclose(expm(np.zeros((2, 2))), np.eye(2))

    def test_diagonal(self):
        assert np.allclose(expm(np.diag([np.log(2), -np.log(2)])), np.diag([2.0, 0.5]))

    @pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
    def test_spectral_formula(self, t):
        x = np.array([[0, 1j], [-1j, 0]])
        expected = np.cosh(t) * np.eye(2) + np.sinh(t) * x
        assert np.allclose(expm(t * x), expected, atol=1e-13)

    def test_inverse_relation(self):
        rng = np.random.default_rng(6)
        for scale in (0.5, 3.0, 10.0 / np.sqrt(8)):
            x = sampling.random_p_element(rng, 2, scale=scale)
            assert frob(expm(x) @ expm(-x) - np.eye(4)) <= 1e-10 * max(1.0, frob(expm(x)))

    def test_non_hermitian_branch(self):
        x = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert np.allclose(expm(x), np.array([[1.0, 1.0], [0.0, 1.0]]))


class TestCartanPolar:
    def test_k_element(self):
        rng = np.random.default_rng(7)
        k = sampling.random_k_element(rng, 2)
        pos, uni = cartan_polar(k)
        assert frob(pos - np.eye(4)) < 1e-9
        assert frob(uni.mat - k) < 1e-9

    def test_positive_element(self):
        b = np.diag([np.e, 1.0 / np.e]).astype(complex)
        pos, uni = cartan_polar(b)
        assert np.allclose(pos, b)
        assert frob(uni.mat - np.eye(2)) < 1e-12

    def test_roundtrip(self):
        rng = np.random.default_rng(8)
        xp = sampling.random_p_element(rng, 2, scale=0.6)
        k = sampling.random_k_element(rng, 2)
        b = expm(xp) @ k
        pos, uni = cartan_polar(b)
        assert frob(pos - expm(xp)) <= 1e-9 * frob(pos)
        assert frob(pos @ uni.mat - b) <= 1e-9 * frob(b)

    def test_singular_rejected(self):
        with pytest.raises(SingularInputError):
            cartan_polar(np.zeros((2, 2)))

    def test_outside_group_rejected(self):
        with pytest.raises(StructureViolation):
            cartan_polar(2.0 * np.eye(2))


class TestKFrame:
    def test_accepts_k_element(self):
        rng = np.random.default_rng(9)
        KFrame(sampling.random_k_element(rng, 3))

    def test_rejects_plain_unitary(self):
        rng = np.random.default_rng(9)
        u = sampling.random_unitary(rng, 4)  # generically does not commute with C
        with pytest.raises(StructureViolation):
            KFrame(u)

    def test_rejects_non_unitary(self):
        with pytest.raises(StructureViolation):
            KFrame(2.0 * np.eye(2, dtype=complex))

    def test_rejects_nonfinite(self):
        bad = np.eye(2, dtype=complex)
        bad[0, 0] = np.nan
        with pytest.raises(InvalidDimensionError):
            KFrame(bad)
