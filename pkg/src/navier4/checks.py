"""Named invariant suite: every cross-check the package makes about itself.

Each check returns a CheckResult instead of raising; exceptions inside a
check are converted into failures carrying the exception text, so that a
misconfigured run (say, a shift at or above lambda_1) surfaces as a
failed named check rather than a traceback.

Checks that only make sense in some dimensions report themselves as
skipped-and-passed with an explanatory detail: the 1D closed-form kernel
oracle has no analogue on a square, and the comparison constants are
degenerate beyond 1D at practical truncations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .config import ExperimentConfig
from .domain import (
    GridField,
    SubBox,
    forward_transform,
    inverse_transform,
    node_points,
    sample_function,
)
from .errors import ConstantDegenerateError
from .factorization import ParamPair, check_admissible, factor_params
from .fd import fd_eigenvalues, fd_solve
from .greens import build_kernel, closed_form_1d, estimate_constants, verify_kernel_bounds
from .linear import LinearProblem, solve_green_quadrature, solve_single_helmholtz, solve_spectral
from .nonlinear import Nonlinearity, StatePair, SystemParams, apply_T, verify_cone


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _run(name: str, fn: Callable[[], str]) -> CheckResult:
    try:
        detail = fn()
        return CheckResult(name, True, detail or "")
    except AssertionError as exc:
        return CheckResult(name, False, str(exc))
    except Exception as exc:  # surfaced as a failed check by design
        return CheckResult(name, False, f"{type(exc).__name__}: {exc}")


def _smooth_positive_field(domain, resolution, rng) -> GridField:
    # random positive combination of slowly varying bumps
    c = rng.uniform(0.2, 1.0, size=3)

    def fn(pts):
        out = np.full(pts.shape[0], 0.1)
        for i, a in enumerate(domain.lengths):
            t = pts[:, i] / a
            out = out + c[0] * np.sin(np.pi * t) + c[1] * t * (1 - t) + c[2] * np.sin(2 * np.pi * t) ** 2
        return out

    f = sample_function(domain, resolution, fn)
    assert f.values.min() > 0, "forcing draw unexpectedly nonpositive"
    return f


def run_suite(cfg: ExperimentConfig, seed: Optional[int] = None) -> list[CheckResult]:
    """The full cross-check battery for one configuration."""
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    domain = cfg.domain
    dim = domain.dim
    K = cfg.truncation_for()
    n = cfg.grid_for()
    lam1 = domain.lambda1()
    results: list[CheckResult] = []

    def check(name):
        def wrap(fn):
            results.append(_run(name, fn))
            return fn

        return wrap

    @check("transform_roundtrip")
    def _():
        coeffs = rng.standard_normal((min(K, n),) * dim)
        from .domain import SpectralField

        c = SpectralField(domain, (min(K, n),) * dim, coeffs)
        u = inverse_transform(c, n)
        c2 = forward_transform(u, c.order)
        err = float(np.abs(c.coeffs - c2.coeffs).max())
        assert err <= 1e-12, f"roundtrip defect {err:.2e} > 1e-12"
        return f"defect {err:.2e}"

    @check("factorization_vieta")
    def _():
        betas = rng.uniform(-2.0, 2 * lam1 * 0.95, size=200)
        alphas = np.array([rng.uniform(-(b**2) / 4.0, lam1**2) for b in betas])
        worst = 0.0
        for a, b in zip(alphas, betas):
            fac = factor_params(ParamPair(a, b))
            scale = max(1.0, abs(a), abs(b))
            worst = max(
                worst,
                abs(fac.mu1 + fac.mu2 - b) / scale,
                abs(-fac.mu1 * fac.mu2 - a) / scale,
            )
        assert worst <= 1e-12, f"Vieta defect {worst:.2e} > 1e-12"
        return f"worst defect {worst:.2e} over 200 draws"

    @check("admissible_implies_shift_below_lambda1")
    def _():
        count = 0
        for _i in range(200):
            b = rng.uniform(-2.0, 2 * lam1 * 1.2)
            a = rng.uniform(-(b**2) / 4.0, lam1**2)
            p = ParamPair(a, b)
            rep = check_admissible(p, domain, K)
            if rep.admissible:
                fac = factor_params(p)
                assert fac.mu1 < lam1, f"admissible but mu1={fac.mu1} >= lambda1={lam1}"
                count += 1
        return f"{count} admissible draws, zero counterexamples"

    fac1 = factor_params(cfg.p1)
    fac2 = factor_params(cfg.p2)

    @check("kernel_oracle_1d")
    def _():
        if dim != 1:
            return "skipped: closed form exists only on the unit interval"
        if domain.lengths != (1.0,):
            return "skipped: closed form is for the unit interval"
        pts = node_points(domain, 64).reshape(-1)
        tol = 2.0 / (np.pi**2 * K) + 1e-10
        worst = 0.0
        for mu in (-5.0, 0.0, 0.5 * lam1):
            kern = build_kernel(domain, mu, K)
            g = kern.eval_matrix(pts.reshape(-1, 1), pts.reshape(-1, 1))
            ref = closed_form_1d(mu, pts[:, None], pts[None, :])
            band = np.abs(pts[:, None] - pts[None, :]) >= 0.1
            worst = max(worst, float(np.abs(g - ref)[band].max()))
        assert worst <= tol, f"kernel vs closed form {worst:.2e} > {tol:.2e}"
        return f"max defect {worst:.2e} (tol {tol:.2e})"

    @check("kernel_symmetry_positivity")
    def _():
        kern = build_kernel(domain, fac1.mu1, K)
        rep = verify_kernel_bounds(kern, n)
        assert rep.symmetric, f"symmetry defect {rep.symmetry_defect:.2e} > 1e-14"
        if dim == 1:
            assert rep.min_value > -1e-8, f"kernel min {rep.min_value:.2e} <= -1e-8"
            assert rep.inf_ratio > 0, f"lower envelope ratio {rep.inf_ratio:.2e} <= 0"
            assert rep.recheck_ok, "5% slack re-verification failed on the refined grid"
            return (
                f"min {rep.min_value:.2e}, defect {rep.symmetry_defect:.2e}, "
                f"envelopes [{rep.inf_ratio:.3e}, {rep.sup_ratio:.3e}] recheck ok"
            )
        growth = rep.M1_growth or {}
        vals = [growth[k] for k in sorted(growth)]
        assert len(vals) >= 2 and all(
            b > a for a, b in zip(vals, vals[1:])
        ), f"diagonal divergence annotation missing or non-increasing: {growth}"
        return f"min {rep.min_value:.2e} (negative dips expected in {dim}D), M1 growth {growth}"

    @check("constants_positive")
    def _():
        if dim != 1:
            return "skipped: comparison constants degenerate beyond 1D at finite K"
        k1 = build_kernel(domain, fac1.mu1, K)
        k2 = build_kernel(domain, fac1.mu2, K)
        rep = estimate_constants(k1, k2, SubBox.centered(domain, cfg.omega0_frac), n)
        assert rep.sigma > 0, f"sigma {rep.sigma} <= 0"
        return f"sigma {rep.sigma:.3e}, C0 {rep.C0:.6f}, m1 {rep.m1:.6f}"

    @check("helmholtz_cascade_identity")
    def _():
        h = _smooth_positive_field(domain, n, rng)
        hk = forward_transform(h, min(K, n))
        h_band = inverse_transform(hk, n)
        u_direct = solve_spectral(LinearProblem(domain, cfg.p1, h_band), min(K, n))
        v = solve_single_helmholtz(domain, fac1.mu1, h_band, min(K, n))
        u_cascade = solve_single_helmholtz(domain, fac1.mu2, v, min(K, n))
        gap = (u_direct - u_cascade).norm_inf()
        assert gap <= 1e-10, f"cascade vs direct {gap:.2e} > 1e-10"
        return f"max gap {gap:.2e}"

    @check("path_equivalence")
    def _():
        if dim == 1:
            grid, order, tol = 128, 512, 1e-3
        elif dim == 2:
            grid, order, tol = 64, 64, 5e-3
        else:
            return "skipped: quadrature mirror is 1D/2D only"
        h = _smooth_positive_field(domain, grid, rng)
        prob = LinearProblem(domain, cfg.p1, h)
        u_s = solve_spectral(prob, min(order, grid))
        k1 = build_kernel(domain, fac1.mu1, order)
        k2 = build_kernel(domain, fac1.mu2, order)
        u_q = solve_green_quadrature(prob, k1, k2, grid)
        rel = (u_s - u_q).norm_inf() / max(u_s.norm_inf(), 1e-300)
        assert rel <= tol, f"paths disagree by {rel:.2e} > {tol:.0e}"
        return f"relative gap {rel:.2e} at n={grid}, K={order}"

    @check("positivity_preservation")
    def _():
        h = _smooth_positive_field(domain, n, rng)
        u = solve_spectral(LinearProblem(domain, cfg.p1, h), min(K, n))
        assert u.values.min() > -1e-8, f"solution dips to {u.values.min():.2e}"
        pts = node_points(domain, n)
        core = np.ones(pts.shape[0], dtype=bool)
        for i, a in enumerate(domain.lengths):
            core &= (pts[:, i] >= 0.1 * a) & (pts[:, i] <= 0.9 * a)
        core_min = float(u.values.reshape(-1)[core].min())
        assert core_min > 0, f"interior-core minimum {core_min:.2e} <= 0"
        return f"global min {u.values.min():.2e}, core min {core_min:.2e}"

    @check("solution_lower_bound")
    def _():
        if dim != 1:
            return "skipped: needs the comparison constants (1D only)"
        k1 = build_kernel(domain, fac1.mu1, K)
        k2 = build_kernel(domain, fac1.mu2, K)
        rep = estimate_constants(k1, k2, SubBox.centered(domain, cfg.omega0_frac), n)
        pts = node_points(domain, n)
        from .greens import _psi_squared

        psi2 = _psi_squared(domain, pts)
        coeff = (
            rep.delta1 * rep.delta2 * rep.C0
            / (rep.C1 * rep.C2 * domain.measure() * np.sqrt(rep.M1))
        )
        worst = np.inf
        for _i in range(5):
            h = _smooth_positive_field(domain, n, rng)
            u = solve_spectral(LinearProblem(domain, cfg.p1, h), min(K, n))
            lower = coeff * psi2 * u.norm_inf() - 1e-6
            margin = float((u.values.reshape(-1) - lower).min())
            worst = min(worst, margin)
            assert margin >= 0, f"lower bound violated by {margin:.2e}"
        return f"worst margin {worst:.2e} over 5 forcings"

    @check("eigen_fixed_point")
    def _():
        sysp = SystemParams.from_domain(domain, cfg.p1, cfg.p2, K)
        fl1 = Nonlinearity.linear(sysp.L1, 0.0)
        fl2 = Nonlinearity.linear(0.0, sysp.L2)
        worst = 0.0
        for c in (0.1, 1.0, 10.0):
            s = StatePair.eigen(domain, n, c)
            t = apply_T(s, sysp, fl1, fl2, min(K, n))
            worst = max(worst, (s.u1 - t.u1).norm_inf() + (s.u2 - t.u2).norm_inf())
        assert worst <= 1e-6, f"fixed-point defect {worst:.2e} > 1e-6"
        return f"worst defect {worst:.2e}"

    @check("cone_stability")
    def _():
        if dim != 1:
            return "skipped: sigma degenerate beyond 1D at finite K"
        from .nonlinear import cone_sigma

        sysp = SystemParams.from_domain(domain, cfg.p1, cfg.p2, K)
        sigma, omega0 = cone_sigma(sysp, SubBox.centered(domain, cfg.omega0_frac), K, n)
        f1 = cfg.nonlinearity(1)
        f2 = cfg.nonlinearity(2)
        for _i in range(25):
            vals1 = rng.uniform(0.0, 1.0, size=(n,) * dim)
            vals2 = rng.uniform(0.0, 1.0, size=(n,) * dim)
            s = StatePair(GridField(domain, (n,) * dim, vals1), GridField(domain, (n,) * dim, vals2))
            t = apply_T(s, sysp, f1, f2, min(K, n))
            assert verify_cone(t, sigma, omega0), "cone membership failed on a T image"
        return f"25 randomized T images inside the cone (sigma {sigma:.3e})"

    @check("fd_cross_check")
    def _():
        if dim > 2:
            return "skipped: oracle covers 1D and 2D"
        n_fd = cfg.fd_grid_for()
        tol = 1e-3 if dim == 1 else 1e-2
        h = _smooth_positive_field(domain, n_fd, rng)
        u_fd = fd_solve(domain, cfg.p1, h)
        u_sp = solve_spectral(LinearProblem(domain, cfg.p1, h), min(K, n_fd))
        rel = (u_fd - u_sp).norm_inf() / max(u_sp.norm_inf(), 1e-300)
        assert rel <= tol, f"FD vs spectral {rel:.2e} > {tol:.0e} at n={n_fd}"
        return f"relative gap {rel:.2e} at n={n_fd}"

    @check("fd_eigenvalue_agreement")
    def _():
        if dim > 2:
            return "skipped: oracle covers 1D and 2D"
        n_fd = cfg.fd_grid_for()
        ev = fd_eigenvalues(domain, n_fd, 1)[0]
        rel = abs(ev - lam1) / lam1
        assert rel <= 5e-3, f"first FD eigenvalue off by {rel:.2e} > 5e-3"
        return f"lambda_1 relative error {rel:.2e}"

    return results


def suite_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
