"""The verification suite: every structural identity as a residual check.

Each check draws its own deterministically seeded random sample, evaluates
one algebraic identity or conservation law, and reports the worst residual
together with the tolerance it is held to.  Checks are independent, so the
suite may run them on a thread pool (capped by ``CN_DUALITY_THREADS``);
records are sorted by name before emission, making the report byte-stable
for a fixed seed.
"""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle, sampling
from .cauchy import (
    CauchyContext,
    cauchy_det,
    cauchy_inverse,
    cauchy_matrix,
    identity_suite,
    partial_fraction_sides,
    w_values,
)
from .duality import dualize_r_to_s, dualize_s_to_r, pullback_coords, pullback_coords_r
from .errors import PoleError
from .matkit import build_c, cartan_polar, eig_paired_expp, eig_paired_p, expm, frob
from .orbit import orbit_vector_e, xi_of
from .phase_space import RsvdState, SutherlandState
from .rsvd import (
    grad_f1,
    hamiltonian_r,
    lax_a,
    momentum_residual_r,
    observables_trace,
    reduced_observables,
    solve_flow_r,
    x_vector,
    z_of,
)
from .sutherland import (
    action_variables,
    hamiltonian_s,
    lax_l,
    lax_structure_residuals,
    momentum_residual_s,
    solve_flow_s,
)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    identity: str
    max_residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "identity": self.identity,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class VerifyReport:
    seed: int
    n_max: int
    draws: int
    checks: tuple[CheckRecord, ...]

    @property
    def overall_pass(self) -> bool:
        return all(rec.passed for rec in self.checks)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_max": self.n_max,
            "draws": self.draws,
            "overall_pass": self.overall_pass,
            "checks": [rec.to_dict() for rec in self.checks],
        }


CheckFn = Callable[[np.random.Generator, int, int], float]


@dataclass(frozen=True)
class CheckSpec:
    name: str
    identity: str
    tolerance: float
    fn: CheckFn


def _rand_n(rng: np.random.Generator, n_max: int, lo: int = 1) -> int:
    return int(rng.integers(lo, max(lo, n_max) + 1))


def _random_generic_x(rng: np.random.Generator, size: int) -> CauchyContext:
    # Well-separated complex vector; redrawn if it happens to sit on a pole.
    for _ in range(100):
        re = np.cumsum(rng.uniform(0.25, 0.9, size=size))
        im = rng.uniform(-0.8, 0.8, size=size)
        try:
            return CauchyContext(re + 1j * im)
        except PoleError:
            continue
    raise RuntimeError("could not draw a pole-free generic vector")


def _random_csym_x(rng: np.random.Generator, n: int) -> CauchyContext:
    half = 1j * np.cumsum(rng.uniform(0.2, 0.8, size=n))[::-1]
    return CauchyContext(np.concatenate([half, -half]), c_symmetric=True)


# ---------------------------------------------------------------------------
# Cauchy-layer checks


def _check_cauchy_det(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        ctx = _random_generic_x(rng, _rand_n(rng, min(8, 2 * n_max), lo=1))
        try:
            closed = cauchy_det(ctx)
        except PoleError:
            continue
        direct = complex(np.linalg.det(cauchy_matrix(ctx)))
        worst = max(worst, abs(closed - direct) / max(1.0, abs(direct)))
    return worst


def _check_cauchy_inverse(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        ctx = _random_generic_x(rng, _rand_n(rng, min(10, 2 * n_max)))
        prod = cauchy_inverse(ctx) @ cauchy_matrix(ctx)
        worst = max(worst, frob(prod - np.eye(ctx.size)))
    return worst


def _check_partial_fraction(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        nn = _rand_n(rng, 6)
        m = int(rng.integers(0, nn + 1))
        alphas = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        for _ in range(100):
            betas = rng.standard_normal(nn) + 1j * rng.standard_normal(nn)
            z = complex(rng.standard_normal() + 1j * rng.standard_normal())
            try:
                lhs, rhs = partial_fraction_sides(alphas, betas, z)
            except PoleError:
                continue
            break
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return worst


def _suite_residual(rng, n_max, draws, keys, csym):
    worst = 0.0
    for _ in range(draws):
        if csym:
            ctx = _random_csym_x(rng, _rand_n(rng, min(5, n_max)))
        else:
            ctx = _random_generic_x(rng, _rand_n(rng, min(10, 2 * n_max)))
        report = identity_suite(ctx)
        worst = max(worst, max(report[k] for k in keys))
    return worst


def _check_w_sum_unity(rng, n_max, draws):
    return _suite_residual(rng, n_max, draws, ["w_sum_unity"], csym=False)


def _check_trace_w(rng, n_max, draws):
    return _suite_residual(rng, n_max, draws, ["trace_w"], csym=False)


def _check_w_half_pole(rng, n_max, draws):
    return _suite_residual(rng, n_max, draws, ["w_half_pole_sum", "w_half_pole_weighted"], csym=True)


def _check_reflection(rng, n_max, draws):
    return _suite_residual(
        rng, n_max, draws, ["reflect_w", "reflect_cauchy", "involution"], csym=True
    )


# ---------------------------------------------------------------------------
# RSvD Lax-matrix checks


def _check_group_relation(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        a = lax_a(st, c).a
        cc = build_c(st.n)
        worst = max(worst, frob(a @ cc @ a - cc) / frob(a) ** 2)
    return worst


def _check_positivity_pairing(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        vals = np.linalg.eigvalsh(lax_a(st, c).a)
        if vals[0] <= 0.0:
            return float("inf")
        worst = max(worst, float(np.max(np.abs(vals * vals[::-1] - 1.0))))
    return worst


def _check_orbit_vector(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        bundle = lax_a(st, c)
        cc = build_c(st.n)
        worst = max(worst, abs(float(np.real(bundle.v.conj() @ bundle.v)) - 2 * st.n))
        worst = max(worst, float(np.linalg.norm(cc @ bundle.v + bundle.v)))
    return worst


def _check_acf_relation(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        bundle = lax_a(st, c)
        cc = build_c(st.n)
        worst = max(worst, float(np.linalg.norm(bundle.a @ cc @ bundle.f + bundle.f)))
    return worst


def _check_z_dual_path(rng, n_max, draws):
    # z_of raises if its two evaluation paths disagree; exercising it across
    # the sample is the check.
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        x = x_vector(st.lam, c)
        w = w_values(CauchyContext(x, c_symmetric=True))
        z = z_of(st.lam, c)
        z_w = -w[: st.n] * (1.0 - c.eps / (1.0 + 2.0 * x[: st.n]))
        worst = max(worst, float(np.max(np.abs(z - z_w))) / (1.0 + float(np.max(np.abs(z)))))
    return worst


# ---------------------------------------------------------------------------
# Hamiltonian / constraint / observable checks


def _check_hamiltonian_lax_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        s = sampling.random_sutherland_state(rng, _rand_n(rng, n_max))
        c = sampling.random_couplings(rng)
        l = lax_l(s, c)
        h = hamiltonian_s(s, c)
        worst = max(worst, abs(float(np.real(np.trace(l @ l))) / 4.0 - h) / max(1.0, abs(h)))
    return worst


def _check_hamiltonian_lax_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        h = hamiltonian_r(st, c)
        half_tr = float(np.real(np.trace(lax_a(st, c).a))) / 2.0
        worst = max(worst, abs(half_tr - h) / max(1.0, abs(h)))
    return worst


def _check_lax_structure_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        s = sampling.random_sutherland_state(rng, _rand_n(rng, n_max))
        c = sampling.random_couplings(rng)
        res = lax_structure_residuals(s, c)
        worst = max(worst, res["hermitian"], res["anticommute"])
    return worst


def _check_momentum_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        s = sampling.random_sutherland_state(rng, _rand_n(rng, n_max))
        c = sampling.random_couplings(rng)
        worst = max(worst, momentum_residual_s(s, c))
    return worst


def _check_momentum_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        worst = max(worst, momentum_residual_r(st, c))
    return worst


def _check_observables(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(1, draws // 4)):
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, _rand_n(rng, n_max), couplings=c)
        for r in range(1, 7):
            phi_c, psi_c = reduced_observables(st, c, r)
            phi_t, psi_t = observables_trace(st, c, r)
            scale = 1.0 + max(abs(phi_c), abs(psi_c))
            worst = max(worst, abs(phi_c - phi_t) / scale, abs(psi_c - psi_t) / scale)
    return worst


# ---------------------------------------------------------------------------
# Duality and bracket checks


def _check_roundtrip(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        n = _rand_n(rng, n_max)
        c = sampling.random_couplings(rng)
        s = sampling.random_sutherland_state(rng, n)
        back = dualize_r_to_s(dualize_s_to_r(s, c), c)
        worst = max(worst, float(np.max(np.abs(back.q - s.q))), float(np.max(np.abs(back.p - s.p))))
        st = sampling.random_rsvd_state(rng, n, couplings=c)
        fwd = dualize_s_to_r(dualize_r_to_s(st, c), c)
        worst = max(
            worst,
            float(np.max(np.abs(fwd.lam - st.lam))),
            float(np.max(np.abs(fwd.theta - st.theta))),
        )
    return worst


def _bracket_defect(k: np.ndarray, n: int, coord_block_first: bool) -> float:
    # {coord_a, mom_b} = delta/2; the sign of each off-diagonal block depends
    # on whether the coordinate-like outputs come first in the mapping.
    target = np.zeros_like(k)
    if coord_block_first:
        target[:n, n:] = 0.5 * np.eye(n)
        target[n:, :n] = -0.5 * np.eye(n)
    else:
        target[n:, :n] = 0.5 * np.eye(n)
        target[:n, n:] = -0.5 * np.eye(n)
    return float(np.max(np.abs(k - target)))


def _check_brackets_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max), lo=min(2, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        s = sampling.random_sutherland_state(rng, n)

        def mapping(qq, pp):
            lam_hat, theta_hat = pullback_coords(SutherlandState(qq, pp), c)
            return np.concatenate([lam_hat, theta_hat])

        k = oracle.fd_bracket_matrix(mapping, s.q, s.p, step=1e-5)
        worst = max(worst, _bracket_defect(k, n, coord_block_first=False))
    return worst


def _check_brackets_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max), lo=min(2, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        st = sampling.random_rsvd_state(rng, n, couplings=c)

        def mapping(th, lm):
            # Coordinate slot is theta, momentum slot is lam on this space.
            q_check, p_check = pullback_coords_r(RsvdState(lm, th), c)
            return np.concatenate([q_check, p_check])

        k = oracle.fd_bracket_matrix(mapping, st.theta, st.lam, step=1e-5)
        worst = max(worst, _bracket_defect(k, n, coord_block_first=True))
    return worst


# ---------------------------------------------------------------------------
# Flow checks


def _check_flow_cross_s(rng, n_max, draws):
    n = _rand_n(rng, min(3, n_max))
    c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
    s0 = sampling.random_sutherland_state(rng, n)
    worst = 0.0
    for t, s_rk in oracle.rk4_sutherland(s0, c, 0.5, dt=1e-3):
        s_sp = solve_flow_s(s0, c, t)
        worst = max(worst, float(np.max(np.abs(s_rk.q - s_sp.q))), float(np.max(np.abs(s_rk.p - s_sp.p))))
    return worst


def _check_flow_cross_r(rng, n_max, draws):
    n = _rand_n(rng, min(3, n_max))
    c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
    st0 = sampling.random_rsvd_state(rng, n, couplings=c)
    worst = 0.0
    for t, st_rk in oracle.rk4_rsvd(st0, c, 0.5, dt=1e-3):
        st_sp = solve_flow_r(st0, c, t)
        worst = max(
            worst,
            float(np.max(np.abs(st_rk.lam - st_sp.lam))),
            float(np.max(np.abs(st_rk.theta - st_sp.theta))),
        )
    return worst


def _check_isospectral_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        s0 = sampling.random_sutherland_state(rng, n)
        ref = action_variables(s0, c)
        for t in (0.5, 1.0, 2.0):
            worst = max(worst, float(np.max(np.abs(action_variables(solve_flow_s(s0, c, t), c) - ref))))
    return worst


def _check_isospectral_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        st0 = sampling.random_rsvd_state(rng, n, couplings=c)
        ref = eig_paired_expp(lax_a(st0, c).a).positive_part
        for t in (0.5, 1.0, 2.0):
            cur = eig_paired_expp(lax_a(solve_flow_r(st0, c, t), c).a).positive_part
            worst = max(worst, float(np.max(np.abs(cur - ref))))
    return worst


def _check_energy_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        s0 = sampling.random_sutherland_state(rng, n)
        h0 = hamiltonian_s(s0, c)
        for t in (0.5, 1.0, 2.0):
            worst = max(worst, abs(hamiltonian_s(solve_flow_s(s0, c, t), c) - h0) / max(1.0, abs(h0)))
    return worst


def _check_energy_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        st0 = sampling.random_rsvd_state(rng, n, couplings=c)
        h0 = hamiltonian_r(st0, c)
        for t in (0.5, 1.0, 2.0):
            worst = max(worst, abs(hamiltonian_r(solve_flow_r(st0, c, t), c) - h0) / max(1.0, abs(h0)))
    return worst


def _check_group_property(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        s0 = sampling.random_sutherland_state(rng, n)
        t1, t2 = float(rng.uniform(0.2, 1.0)), float(rng.uniform(0.2, 1.0))
        two_step = solve_flow_s(solve_flow_s(s0, c, t1), c, t2)
        one_step = solve_flow_s(s0, c, t1 + t2)
        worst = max(
            worst,
            float(np.max(np.abs(two_step.q - one_step.q))),
            float(np.max(np.abs(two_step.p - one_step.p))),
        )
        st0 = sampling.random_rsvd_state(rng, n, couplings=c)
        two_r = solve_flow_r(solve_flow_r(st0, c, t1), c, t2)
        one_r = solve_flow_r(st0, c, t1 + t2)
        worst = max(
            worst,
            float(np.max(np.abs(two_r.lam - one_r.lam))),
            float(np.max(np.abs(two_r.theta - one_r.theta))),
        )
    return worst


def _check_linearization_s(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        s0 = sampling.random_sutherland_state(rng, n)
        lam_hat0, theta_hat0 = pullback_coords(s0, c)
        for t in (0.5, 1.0, 2.0):
            lam_hat, theta_hat = pullback_coords(solve_flow_s(s0, c, t), c)
            worst = max(worst, float(np.max(np.abs(lam_hat - lam_hat0))))
            worst = max(worst, float(np.max(np.abs(theta_hat - theta_hat0 - 0.5 * t * lam_hat0))))
    return worst


def _check_linearization_r(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, min(3, n_max))
        c = sampling.random_couplings(rng, bound=2.0, floor=0.4)
        st0 = sampling.random_rsvd_state(rng, n, couplings=c)
        q_check0, p_check0 = pullback_coords_r(st0, c)
        for t in (0.5, 1.0, 2.0):
            q_check, p_check = pullback_coords_r(solve_flow_r(st0, c, t), c)
            worst = max(worst, float(np.max(np.abs(q_check - q_check0))))
            worst = max(
                worst,
                float(np.max(np.abs(p_check - p_check0 + t * np.sinh(2.0 * q_check0)))),
            )
    return worst


# ---------------------------------------------------------------------------
# Linear-algebra layer checks


def _check_eig_roundtrip(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        n = _rand_n(rng, n_max)
        x = sampling.random_p_element(rng, n)
        try:
            spec = eig_paired_p(x)
        except Exception:
            continue
        eta = spec.frame.mat
        d = np.concatenate([spec.positive_part, -spec.positive_part])
        worst = max(worst, frob((eta * d) @ eta.conj().T - x) / max(1.0, frob(x)))
        cc = build_c(n)
        worst = max(worst, frob(eta @ cc - cc @ eta), frob(eta.conj().T @ eta - np.eye(2 * n)))
    return worst


def _check_polar_roundtrip(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        n = _rand_n(rng, n_max)
        xp = sampling.random_p_element(rng, n, scale=0.6)
        k = sampling.random_k_element(rng, n)
        b = expm(xp) @ k
        pos, uni = cartan_polar(b)
        worst = max(worst, frob(pos - expm(xp)) / max(1.0, frob(pos)))
        worst = max(worst, frob(pos @ uni.mat - b) / max(1.0, frob(b)))
    return worst


def _check_grad_f1_fd(rng, n_max, draws):
    worst = 0.0
    for _ in range(max(2, draws // 8)):
        n = _rand_n(rng, n_max)
        c = sampling.random_couplings(rng)
        st = sampling.random_rsvd_state(rng, n, couplings=c)
        r = lax_a(st, c).r
        grad = grad_f1(r)
        for _ in range(3):
            xi = _random_algebra_element(rng, n)
            eps = 1e-6
            num = (_f1(r @ expm(eps * xi)) - _f1(r @ expm(-eps * xi))) / (2.0 * eps)
            ana = float(np.real(np.trace(grad @ xi)))
            worst = max(worst, abs(num - ana) / max(1.0, abs(ana)))
    return worst


def _f1(y: np.ndarray) -> float:
    return 0.5 * float(np.real(np.trace(y @ y.conj().T)))


def _random_algebra_element(rng: np.random.Generator, n: int) -> np.ndarray:
    # Random element of the Lie algebra: anti-Hermitian-commuting plus
    # Hermitian-anticommuting parts.
    w = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a11 = (w - w.conj().T) / 2.0
    w2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a12 = (w2 - w2.conj().T) / 2.0
    k_part = np.block([[a11, a12], [a12, a11]])
    return k_part + sampling.random_p_element(rng, n, scale=0.5)


def _check_xi_structure(rng, n_max, draws):
    worst = 0.0
    for _ in range(draws):
        n = _rand_n(rng, n_max)
        c = sampling.random_couplings(rng)
        v = sampling.random_orbit_vector(rng, n)
        xi = xi_of(v, c)
        worst = max(worst, frob(xi + xi.conj().T), abs(complex(np.trace(xi))))
        e = orbit_vector_e(n)
        xie = xi_of(e, c)
        worst = max(worst, frob(xie + xie.conj().T), abs(complex(np.trace(xie))))
    return worst


def checks() -> list[CheckSpec]:
    return [
        CheckSpec("brackets_rsvd_pullback", "{q_check,q_check}=0, {p_check,q_check}=delta/2, {p_check,p_check}=0", 1e-4, _check_brackets_r),
        CheckSpec("brackets_sutherland_pullback", "{lam_hat,lam_hat}=0, {theta_hat,lam_hat}=delta/2, {theta_hat,theta_hat}=0", 1e-4, _check_brackets_s),
        CheckSpec("cauchy_det_closed_form", "det Cau(x) = prod 1/(1-(x_k-x_l)^-2)", 1e-9, _check_cauchy_det),
        CheckSpec("cauchy_inverse_closed_form", "Cau(x)^-1 = W(-x) Cau(-x) W(x)", 1e-9, _check_cauchy_inverse),
        CheckSpec("cauchy_partial_fraction", "prod(z-a)/prod(z-b) = delta_MN + residue sum", 1e-9, _check_partial_fraction),
        CheckSpec("cauchy_reflection", "CWC=W(-x), CCauC=Cau(-x), (Cau C W)^2=1", 1e-9, _check_reflection),
        CheckSpec("cauchy_trace_w", "tr W(x) = N", 1e-8, _check_trace_w),
        CheckSpec("cauchy_w_half_pole", "sum w_j/(1+2x_j)=0 and weighted variant", 1e-9, _check_w_half_pole),
        CheckSpec("cauchy_w_sum_unity", "sum_j w_j/(1+x_j-x_k) = 1", 1e-9, _check_w_sum_unity),
        CheckSpec("duality_roundtrip", "S^-1(S(q,p))=(q,p) and S(S^-1(lam,theta))=(lam,theta)", 1e-8, _check_roundtrip),
        CheckSpec("eig_paired_roundtrip", "eta diag(d,-d) eta* = X with eta unitary in K", 1e-9, _check_eig_roundtrip),
        CheckSpec("flow_cross_validation_r", "spectral RSvD flow matches RK4 integration", 1e-5, _check_flow_cross_r),
        CheckSpec("flow_cross_validation_s", "spectral Sutherland flow matches RK4 integration", 1e-5, _check_flow_cross_s),
        CheckSpec("flow_energy_r", "H_R conserved along spectral flow", 1e-8, _check_energy_r),
        CheckSpec("flow_energy_s", "H_S conserved along spectral flow", 1e-8, _check_energy_s),
        CheckSpec("flow_group_property", "flow(t1+t2) = flow(t2) after flow(t1)", 1e-7, _check_group_property),
        CheckSpec("flow_isospectral_r", "dual actions of A constant along flow", 1e-8, _check_isospectral_r),
        CheckSpec("flow_isospectral_s", "positive spectrum of L constant along flow", 1e-8, _check_isospectral_s),
        CheckSpec("flow_linearization_r", "q_check constant, p_check(t) = p_check(0) - t sinh(2 q_check)", 1e-6, _check_linearization_r),
        CheckSpec("flow_linearization_s", "lam_hat constant, theta_hat(t) = theta_hat(0) + t lam_hat / 2", 1e-6, _check_linearization_s),
        CheckSpec("grad_f1_closed_form", "grad of tr(y y*)/2 equals (A - C A C)/2", 1e-6, _check_grad_f1_fd),
        CheckSpec("hamiltonian_lax_r", "tr(A)/2 = H_R", 1e-10, _check_hamiltonian_lax_r),
        CheckSpec("hamiltonian_lax_s", "tr(L^2)/4 = H_S", 1e-10, _check_hamiltonian_lax_s),
        CheckSpec("lax_structure_s", "L Hermitian and L C + C L = 0", 1e-12, _check_lax_structure_s),
        CheckSpec("momentum_constraint_r", "(y Y y^-1)_+ + xi(V) = 0 at (A^1/2, diag(lam,-lam))", 1e-8, _check_momentum_r),
        CheckSpec("momentum_constraint_s", "(y Y y^-1)_+ + xi(E) = 0 at (e^Q, L)", 1e-8, _check_momentum_s),
        CheckSpec("observables_closed_vs_trace", "reduced phi_r, psi_r match trace definitions, r<=6", 1e-8, _check_observables),
        CheckSpec("orbit_vector_constraints", "V*V = N and C V + V = 0", 1e-9, _check_orbit_vector),
        CheckSpec("polar_roundtrip", "B = pos uni with pos = (B B*)^1/2, uni in K", 1e-9, _check_polar_roundtrip),
        CheckSpec("rsvd_acf_relation", "A C F = -F", 1e-9, _check_acf_relation),
        CheckSpec("rsvd_group_relation", "A C A = C (relative to |A|^2)", 1e-9, _check_group_relation),
        CheckSpec("rsvd_positivity_pairing", "A > 0 with reciprocal spectrum pairs", 1e-9, _check_positivity_pairing),
        CheckSpec("rsvd_z_dual_path", "z from direct product equals z from w-functions", 1e-10, _check_z_dual_path),
        CheckSpec("xi_structure", "xi(V) anti-Hermitian and traceless", 1e-10, _check_xi_structure),
    ]


def _seed_for(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def run_verify(
    seed: int = 0,
    n_max: int = 4,
    draws: int = 40,
    tolerances: dict[str, float] | None = None,
    threads: int | None = None,
) -> VerifyReport:
    """Run every check; returns a deterministic, name-sorted report.

    ``tolerances`` overrides individual check tolerances by name.  Thread
    count defaults to the CN_DUALITY_THREADS environment variable (unset
    means sequential).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if draws < 1:
        raise ValueError("draws must be >= 1")
    overrides = tolerances or {}
    specs = sorted(checks(), key=lambda s: s.name)
    unknown = set(overrides) - {s.name for s in specs}
    if unknown:
        raise ValueError(f"unknown check names in tolerance overrides: {sorted(unknown)}")

    if threads is None:
        threads = int(os.environ.get("CN_DUALITY_THREADS", "1") or "1")

    def run_one(spec: CheckSpec) -> CheckRecord:
        tol = float(overrides.get(spec.name, spec.tolerance))
        residual = float(spec.fn(_seed_for(seed, spec.name), n_max, draws))
        return CheckRecord(spec.name, spec.identity, residual, tol, residual <= tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run_one, specs))
    else:
        records = [run_one(spec) for spec in specs]
    records.sort(key=lambda r: r.name)
    return VerifyReport(seed, n_max, draws, tuple(records))
