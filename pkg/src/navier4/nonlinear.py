"""Coupled semilinear solves and the fixed-point machinery around them.

The system is

    Laplace^2 u_j + beta_j*Laplace u_j - alpha_j*u_j = f_j(x, u1, u2),
    u_j = Laplace u_j = 0 on the boundary,  j = 1, 2,

with continuous nonnegative nonlinearities.  The fixed-point map T sends
(u1, u2) to the pair of linear solves with forcings f_j(., u1, u2); its
fixed points are the solutions.

Two strategies:

* picard_solve: damped successive application of T.  Contractive for
  sublinear/saturating growth, where the nontrivial solution attracts.
* newton_solve: collocation Newton on the strong-form residual.  For
  superlinear growth the zero solution attracts Picard and plain Newton
  from moderate data, so this solver deflates the zero root (step length
  rescaled by the standard deflation factor) and escalates the initial
  amplitude on stalls.  Iterates and residuals are carried in extended
  precision: the fourth-order symbol reaches lambda_max^2 ~ 1e10 at the
  default grid, and double-precision cancellation alone would floor the
  residual near 1e-4, far above the advertised tolerances.

Growth diagnostics estimate the four asymptotic ratio envelopes of
F = (f1+f2)/(L1*u1+L2*u2) at finite radii and classify the system as
superlinear / sublinear / unclassified.  The classification never claims
to certify the true limits; the radii used are always reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .domain import (
    DEFAULT_TRUNCATION,
    Domain,
    GridField,
    SubBox,
    _as_resolution,
    node_points,
    phi_matrix,
)
from .errors import (
    ConfigError,
    ConstantDegenerateError,
    DomainError,
    NearResonanceError,
    NonlinearityContractError,
    NotAdmissibleError,
    SingularJacobianError,
)
from .factorization import ParamPair, check_admissible, factor_params
from .greens import estimate_constants, build_kernel
from .linear import LinearProblem, solve_spectral

_DENSE_CAP = 4096  # max total unknowns for the dense collocation Jacobian
_LD = np.longdouble
_PI_LD = np.arccos(_LD(-1.0))


class GrowthClass(enum.Enum):
    """Asymptotic growth of the combined nonlinearity ratio F."""

    SUPERLINEAR = "superlinear"  # F below 1 near zero, above 1 at infinity
    SUBLINEAR = "sublinear"      # F above 1 near zero, below 1 at infinity
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SystemParams:
    """Admissible parameters of the coupled system plus derived scales."""

    domain: Domain
    p1: ParamPair
    p2: ParamPair
    lambda1: float
    L1: float
    L2: float

    @classmethod
    def from_domain(
        cls, domain: Domain, p1: ParamPair, p2: ParamPair, K: int = 64
    ) -> "SystemParams":
        """Validate both parameter pairs; raises NotAdmissibleError.

        L_j = lambda_1^2 - lambda_1*beta_j - alpha_j > 0 is implied by the
        strict non-resonance of mode 1, so no separate check is needed.
        """
        for name, p in (("equation 1", p1), ("equation 2", p2)):
            rep = check_admissible(p, domain, K)
            if not rep.admissible:
                flags = []
                if not rep.beta_bound_ok:
                    flags.append("beta >= 2*lambda_1")
                if not rep.discriminant_ok:
                    flags.append("beta^2 + 4*alpha < 0")
                if not rep.nonresonant_strict:
                    flags.append(
                        f"resonance at mode {tuple(rep.first_violation.index)}"
                        if rep.first_violation
                        else "resonance"
                    )
                raise NotAdmissibleError(f"{name}: " + "; ".join(flags))
        lam1 = domain.lambda1()
        return cls(
            domain=domain,
            p1=p1,
            p2=p2,
            lambda1=lam1,
            L1=lam1**2 - lam1 * p1.beta - p1.alpha,
            L2=lam1**2 - lam1 * p2.beta - p2.alpha,
        )

    @property
    def pairs(self) -> tuple[ParamPair, ParamPair]:
        return (self.p1, self.p2)

    @property
    def L(self) -> tuple[float, float]:
        return (self.L1, self.L2)


def _field_args(x, u1, u2):
    """Normalize to (points (n,d), u1 (n,), u2 (n,)) without copying dtypes."""
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    n = pts.shape[0]
    for v in (u1, u2):
        if not np.isscalar(v):
            n = max(n, np.asarray(v).reshape(-1).size)
    a1 = np.full(n, float(u1)) if np.isscalar(u1) else np.asarray(u1).reshape(-1)
    a2 = np.full(n, float(u2)) if np.isscalar(u2) else np.asarray(u2).reshape(-1)
    return pts, a1, a2


@dataclass
class Nonlinearity:
    """One equation's right-hand side f(x, u1, u2) >= 0 with partials.

    Kinds
    -----
    power           c*(u1+u2)^p, p >= 1
    linear_resonant c1*u1 + c2*u2 (ratio F constant when c_i = L_i)
    constant        scalar or callable of x alone
    saturating      c*s/(1+s) with s = u1+u2
    tabulated       bilinear interpolation of a (u1, u2) value table

    For power and saturating kinds the sum s = u1+u2 is clamped at zero
    before use: the problem defines f on nonnegative data only, and the
    clamp extends it continuously so Newton transients that dip negative
    stay well-defined.  Partial derivatives are analytic except for the
    tabulated kind, which uses centered differences on the interpolant.
    """

    kind: str
    params: dict
    _eval: Callable = field(repr=False)
    _partial: Callable = field(repr=False)

    def evaluate(self, x, u1, u2) -> np.ndarray:
        pts, a1, a2 = _field_args(x, u1, u2)
        return self._eval(pts, a1, a2)

    def partial(self, i: int, x, u1, u2) -> np.ndarray:
        """d f / d u_i, i in {1, 2}."""
        if i not in (1, 2):
            raise ConfigError(f"partial index must be 1 or 2, got {i}")
        pts, a1, a2 = _field_args(x, u1, u2)
        return self._partial(i, pts, a1, a2)

    def describe(self) -> dict:
        return {"kind": self.kind, **self.params}

    @classmethod
    def power(cls, c: float, p: float = 2.0) -> "Nonlinearity":
        c, p = float(c), float(p)
        if c < 0 or p < 1:
            raise NonlinearityContractError(
                f"power kind needs c >= 0 and p >= 1, got c={c}, p={p}"
            )

        def ev(x, u1, u2):
            s = np.maximum(u1 + u2, 0)
            return c * s**p

        def pa(i, x, u1, u2):
            s = np.maximum(u1 + u2, 0)
            return c * p * s ** (p - 1.0)

        return cls("power", {"c": c, "p": p}, ev, pa)

    @classmethod
    def linear(cls, c1: float, c2: float) -> "Nonlinearity":
        c1, c2 = float(c1), float(c2)
        if c1 < 0 or c2 < 0:
            raise NonlinearityContractError(
                f"linear kind needs c1, c2 >= 0, got ({c1}, {c2})"
            )

        def ev(x, u1, u2):
            return c1 * u1 + c2 * u2

        def pa(i, x, u1, u2):
            return np.full(u1.shape, c1 if i == 1 else c2)

        return cls("linear_resonant", {"c1": c1, "c2": c2}, ev, pa)

    @classmethod
    def constant(cls, value) -> "Nonlinearity":
        if np.isscalar(value):
            v = float(value)
            if v < 0:
                raise NonlinearityContractError(f"constant kind needs value >= 0, got {v}")

            def ev(x, u1, u2):
                return np.full(u1.shape, v)

            params = {"value": v}
        else:
            fn = value

            def ev(x, u1, u2):
                return np.asarray(fn(x), dtype=float).reshape(u1.shape)

            params = {"value": "callable"}

        def pa(i, x, u1, u2):
            return np.zeros(u1.shape)

        return cls("constant", params, ev, pa)

    @classmethod
    def saturating(cls, c: float) -> "Nonlinearity":
        c = float(c)
        if c < 0:
            raise NonlinearityContractError(f"saturating kind needs c >= 0, got {c}")

        def ev(x, u1, u2):
            s = np.maximum(u1 + u2, 0)
            return c * s / (1.0 + s)

        def pa(i, x, u1, u2):
            s = u1 + u2
            out = np.zeros(s.shape, dtype=s.dtype)
            pos = s > 0
            out[pos] = c / (1.0 + s[pos]) ** 2
            return out

        return cls("saturating", {"c": c}, ev, pa)

    @classmethod
    def tabulated(cls, path) -> "Nonlinearity":
        """Load a u1,u2,value CSV table; x-independent by construction.

        Inputs outside the tabulated range are clipped to its boundary.
        """
        from scipy.interpolate import RegularGridInterpolator

        data = np.loadtxt(path, delimiter=",", comments="#", skiprows=_header_rows(path), ndmin=2)
        if data.shape[1] != 3:
            raise ConfigError(f"{path}: expected columns u1,u2,value")
        g1 = np.unique(data[:, 0])
        g2 = np.unique(data[:, 1])
        if len(g1) < 2 or len(g2) < 2 or data.shape[0] != len(g1) * len(g2):
            raise ConfigError(f"{path}: table must cover a full (u1,u2) grid")
        vals = np.full((len(g1), len(g2)), np.nan)
        i1 = np.searchsorted(g1, data[:, 0])
        i2 = np.searchsorted(g2, data[:, 1])
        vals[i1, i2] = data[:, 2]
        if np.any(np.isnan(vals)):
            raise ConfigError(f"{path}: table has holes in the (u1,u2) grid")
        if np.any(vals < 0):
            raise NonlinearityContractError(f"{path}: negative table values")
        interp = RegularGridInterpolator((g1, g2), vals, method="linear")
        h1 = float(np.min(np.diff(g1))) * 0.25
        h2 = float(np.min(np.diff(g2))) * 0.25

        def clip(u1, u2):
            return (
                np.clip(np.asarray(u1, dtype=float), g1[0], g1[-1]),
                np.clip(np.asarray(u2, dtype=float), g2[0], g2[-1]),
            )

        def ev(x, u1, u2):
            b1, b2 = clip(u1, u2)
            return interp(np.stack([b1, b2], axis=-1))

        def pa(i, x, u1, u2):
            b1, b2 = clip(u1, u2)
            if i == 1:
                hi = h1
                lo = np.clip(b1 - hi, g1[0], g1[-1])
                up = np.clip(b1 + hi, g1[0], g1[-1])
                num = interp(np.stack([up, b2], axis=-1)) - interp(np.stack([lo, b2], axis=-1))
            else:
                hi = h2
                lo = np.clip(b2 - hi, g2[0], g2[-1])
                up = np.clip(b2 + hi, g2[0], g2[-1])
                num = interp(np.stack([b1, up], axis=-1)) - interp(np.stack([b1, lo], axis=-1))
            return num / (up - lo)

        return cls("tabulated", {"path": str(path)}, ev, pa)


def _header_rows(path) -> int:
    with open(path) as fh:
        first = fh.readline()
    try:
        float(first.split(",")[0])
        return 0
    except ValueError:
        return 1


@dataclass
class StatePair:
    """A candidate solution pair on a shared grid.

    The pair norm is ||u1||_inf + ||u2||_inf.
    """

    u1: GridField
    u2: GridField

    def __post_init__(self):
        if self.u1.domain != self.u2.domain or self.u1.resolution != self.u2.resolution:
            raise DomainError("state components live on different grids")

    @property
    def domain(self) -> Domain:
        return self.u1.domain

    @property
    def resolution(self) -> tuple[int, ...]:
        return self.u1.resolution

    def norm(self) -> float:
        return self.u1.norm_inf() + self.u2.norm_inf()

    def min_value(self) -> float:
        return float(min(self.u1.values.min(), self.u2.values.min()))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.u1.values.reshape(-1), self.u2.values.reshape(-1)])

    @classmethod
    def from_vector(cls, domain: Domain, resolution, vec: np.ndarray) -> "StatePair":
        res = _as_resolution(domain, resolution)
        n = int(np.prod(res))
        vec = np.asarray(vec, dtype=float)
        return cls(
            GridField(domain, res, vec[:n].reshape(res)),
            GridField(domain, res, vec[n:].reshape(res)),
        )

    @classmethod
    def zeros(cls, domain: Domain, resolution) -> "StatePair":
        return cls(GridField.zeros(domain, resolution), GridField.zeros(domain, resolution))

    @classmethod
    def eigen(cls, domain: Domain, resolution, c: float = 1.0) -> "StatePair":
        """(c*phi_1, c*phi_1), the workhorse initial guess."""
        res = _as_resolution(domain, resolution)
        pts = node_points(domain, res)
        phi1 = phi_matrix(domain, pts, np.ones((1, domain.dim), dtype=int))[:, 0]
        f = GridField(domain, res, (float(c) * phi1).reshape(res))
        return cls(f, GridField(domain, res, f.values.copy()))


@dataclass
class SolveReport:
    """Outcome of one nonlinear solve.

    residual_inf is strategy-scoped: the strong-form residual max-norm
    for Newton, the fixed-point gap ||s - T(s)|| for Picard.  converged
    implies residual_inf <= the requested tolerance.
    """

    solution: StatePair
    iterations: int
    residual_inf: float
    positive: bool
    cone_ok: Optional[bool]
    strategy: str
    converged: bool
    sigma: Optional[float] = None
    restarts: int = 0
    message: str = ""

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_inf": self.residual_inf,
            "positive": self.positive,
            "cone_ok": self.cone_ok,
            "sigma": self.sigma,
            "restarts": self.restarts,
            "message": self.message,
            "norm": self.solution.norm(),
        }


def _forcing(f: Nonlinearity, s: StatePair) -> GridField:
    pts = node_points(s.domain, s.resolution)
    vals = f.evaluate(pts, s.u1.values.reshape(-1), s.u2.values.reshape(-1))
    vals = np.asarray(vals, dtype=float)
    floor = vals.min()
    if floor < -1e-12 * max(1.0, float(np.abs(vals).max())):
        raise NonlinearityContractError(
            f"nonlinearity '{f.kind}' returned {floor} < 0 on nonnegative data"
        )
    return GridField(s.domain, s.resolution, vals.reshape(s.resolution))


def apply_T(
    s: StatePair,
    sys: SystemParams,
    f1: Nonlinearity,
    f2: Nonlinearity,
    K=None,
) -> StatePair:
    """One application of the fixed-point map: linear solves under f_j(s)."""
    h1 = _forcing(f1, s)
    h2 = _forcing(f2, s)
    t1 = solve_spectral(LinearProblem(sys.domain, sys.p1, h1), K)
    t2 = solve_spectral(LinearProblem(sys.domain, sys.p2, h2), K)
    return StatePair(t1, t2)


def verify_cone(s: StatePair, sigma: float, omega0: SubBox) -> bool:
    """u1 + u2 >= sigma*||(u1,u2)|| - 1e-8 at every grid node in omega0."""
    pts = node_points(s.domain, s.resolution)
    mask = omega0.contains(pts)
    if not np.any(mask):
        return True
    total = (s.u1.values + s.u2.values).reshape(-1)[mask]
    return bool(np.all(total >= sigma * s.norm() - 1e-8))


def cone_sigma(
    sys: SystemParams, omega0: Optional[SubBox] = None, K=None, grid=None
) -> tuple[float, SubBox]:
    """sigma = min over equations of the assembled cone constant sigma_j.

    Each sigma_j comes from estimate_constants on the kernel pair of that
    equation's factorization.  Raises ConstantDegenerateError where the
    constants do (dimension >= 2 at practical truncations).
    """
    domain = sys.domain
    if omega0 is None:
        omega0 = SubBox.centered(domain, 0.5)
    if K is None:
        K = DEFAULT_TRUNCATION[domain.dim]
    sigmas = []
    for p in sys.pairs:
        fac = factor_params(p)
        k1 = build_kernel(domain, fac.mu1, K)
        k2 = build_kernel(domain, fac.mu2, K)
        sigmas.append(estimate_constants(k1, k2, omega0, grid).sigma)
    return float(min(sigmas)), omega0


def _cone_verdict(
    solution: StatePair, sys: SystemParams, sigma, omega0, compute_cone: bool
):
    if not compute_cone:
        return None, None
    if omega0 is None:
        omega0 = SubBox.centered(sys.domain, 0.5)
    if sigma is None:
        try:
            sigma, omega0 = cone_sigma(sys, omega0)
        except ConstantDegenerateError:
            return None, None
    return bool(verify_cone(solution, sigma, omega0)), float(sigma)


def picard_solve(
    init: StatePair,
    sys: SystemParams,
    f1: Nonlinearity,
    f2: Nonlinearity,
    damping: float = 0.5,
    tol: float = 1e-6,
    max_iter: int = 200,
    K=None,
    sigma: Optional[float] = None,
    omega0: Optional[SubBox] = None,
    compute_cone: bool = True,
) -> SolveReport:
    """Damped fixed-point iteration s <- (1-damping)s + damping*T(s).

    Convergence is declared when the pre-update gap ||s - T(s)|| falls
    below tol; the reported solution is the T image, which inherits the
    cone membership of the range of T.  Exhausting max_iter returns a
    non-converged report carrying the last iterate, not an exception.
    """
    if not 0.0 < damping <= 1.0:
        raise ConfigError(f"damping must be in (0, 1], got {damping}")
    if tol <= 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    s = init
    t = init
    gap = math.inf
    iterations = 0
    converged = False
    for it in range(1, int(max_iter) + 1):
        t = apply_T(s, sys, f1, f2, K)
        gap = (s.u1 - t.u1).norm_inf() + (s.u2 - t.u2).norm_inf()
        iterations = it
        if gap <= tol:
            converged = True
            break
        s = StatePair(
            (1.0 - damping) * s.u1 + damping * t.u1,
            (1.0 - damping) * s.u2 + damping * t.u2,
        )
    cone_ok, sigma_used = _cone_verdict(t, sys, sigma, omega0, compute_cone)
    return SolveReport(
        solution=t,
        iterations=iterations,
        residual_inf=float(gap),
        positive=bool(t.min_value() > 0),
        cone_ok=cone_ok,
        strategy="picard",
        converged=converged,
        sigma=sigma_used,
        message="" if converged else f"fixed-point gap {gap:.3e} > tol after {iterations} iterations",
    )


# ---------------------------------------------------------------------------
# Newton machinery


def _collocation_basis(domain: Domain, resolution) -> tuple[list, list, np.ndarray]:
    """Per-axis extended-precision sine matrices and the symbol grid.

    Returns (B_ld per axis, B_64 per axis, lambda tensor of shape res).
    """
    res = _as_resolution(domain, resolution)
    b_ld, b_64 = [], []
    lam_axes = []
    for a, n in zip(domain.lengths, res):
        x = _LD(a) * np.arange(1, n + 1, dtype=_LD) / _LD(n + 1)
        k = np.arange(1, n + 1, dtype=_LD)
        mat = np.sqrt(_LD(2.0) / _LD(a)) * np.sin(np.outer(x, k) * (_PI_LD / _LD(a)))
        b_ld.append(mat)
        b_64.append(mat.astype(float))
        lam_axes.append((np.pi * np.arange(1, n + 1, dtype=float) / a) ** 2)
    grids = np.meshgrid(*lam_axes, indexing="ij")
    lam = np.zeros(res)
    for g in grids:
        lam = lam + g
    return b_ld, b_64, lam


def _tensor_apply(mats: list, arr: np.ndarray) -> np.ndarray:
    """Apply mats[i] along axis i of arr (same shape out)."""
    out = arr
    for ax, m in enumerate(mats):
        out = np.tensordot(m, out, axes=(1, ax))
        out = np.moveaxis(out, 0, ax)
    return out


class _CollocationOperator:
    """Dense spectral-collocation operator of one equation's symbol."""

    def __init__(self, domain: Domain, resolution, p: ParamPair):
        self.domain = domain
        self.res = _as_resolution(domain, resolution)
        self.b_ld, self.b_64, lam = _collocation_basis(domain, self.res)
        pk = lam**2 - p.beta * lam - p.alpha
        if np.any(np.abs(pk) < 1e-12 * lam**2):
            raise NearResonanceError(
                f"collocation symbol vanishes for (alpha,beta)=({p.alpha},{p.beta})"
            )
        self.symbol = pk
        self.symbol_ld = pk.astype(_LD)
        self.weight = float(np.prod([a / (n + 1) for a, n in zip(domain.lengths, self.res)]))
        self.weight_ld = _LD(self.weight)

    def apply_ld(self, u: np.ndarray) -> np.ndarray:
        """Extended-precision operator action on a value tensor."""
        c = _tensor_apply([m.T for m in self.b_ld], u.astype(_LD)) * self.weight_ld
        return _tensor_apply(self.b_ld, c * self.symbol_ld)

    def dense(self) -> np.ndarray:
        """Float64 matrix of the operator, nodes x nodes."""
        b = self.b_64[0]
        for m in self.b_64[1:]:
            b = np.kron(b, m)
        return (b * self.symbol.reshape(-1)) @ b.T * self.weight


def _lu_solver(mat: np.ndarray, iteration: int):
    lu, piv = scipy.linalg.lu_factor(mat, check_finite=False)
    d = np.abs(np.diag(lu))
    if d.min() <= 1e-14 * max(d.max(), 1.0):
        raise SingularJacobianError(f"singular Jacobian at iteration {iteration}")

    def solve(rhs: np.ndarray) -> np.ndarray:
        return scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)

    return solve


def _newton_core(
    u0: np.ndarray,
    residual_ld: Callable[[np.ndarray], np.ndarray],
    solver_factory: Callable[[np.ndarray, int], Callable],
    tol: float,
    max_iter: int,
    deflate_zero: bool,
    restarts: int,
):
    """Shared Newton loop: extended-precision iterates, float64 solves.

    Deflation of the zero root multiplies the residual by
    eta(u) = 1 + 1/||u||^2; for a scalar deflation factor the Newton
    direction is unchanged and only the step length is rescaled by
    eta/(eta + grad(eta).step).  Backtracking runs on the deflated merit.
    On a stall or a collapse onto the deflated zero root the iteration
    restarts from the initial guess with doubled amplitude.
    """
    attempts = (int(restarts) if deflate_zero else 0) + 1
    total_iters = 0
    best = None  # (residual_inf, u, message)
    u0 = np.asarray(u0, dtype=_LD)
    init_scale = float(np.abs(u0).max())
    for attempt in range(attempts):
        u = u0 * _LD(2.0**attempt)
        stalled = ""
        for _ in range(int(max_iter)):
            r = residual_ld(u)
            res_inf = float(np.abs(r).max())
            if not math.isfinite(res_inf):
                stalled = "residual not finite"
                break
            if best is None or res_inf < best[0]:
                best = (res_inf, u.copy(), "")
            if res_inf <= tol:
                return u, total_iters, attempt, True, ""
            total_iters += 1
            solve = solver_factory(u.astype(float), total_iters)
            step = np.asarray(solve(r.astype(float)), dtype=float)
            nrm2 = float(u.astype(float) @ u.astype(float))
            if deflate_zero and nrm2 > 1e-280:
                eta = 1.0 + 1.0 / nrm2
                g_dot_step = float(-2.0 * (u.astype(float) @ step) / nrm2**2)
                denom = eta + g_dot_step
                scale = eta / denom if abs(denom) > 1e-12 * eta else 1.0
                scale = float(np.clip(scale, -100.0, 100.0))
            else:
                eta = 1.0
                scale = 1.0
            step_ld = np.asarray(scale * step, dtype=_LD)

            def merit(vec: np.ndarray, rr: Optional[np.ndarray] = None) -> float:
                if rr is None:
                    rr = residual_ld(vec)
                m = float(np.sqrt(np.sum((rr.astype(float)) ** 2)))
                if deflate_zero:
                    n2 = float(vec.astype(float) @ vec.astype(float))
                    m *= 1.0 + (1.0 / n2 if n2 > 1e-280 else 0.0)
                return m

            m0 = merit(u, r)
            lam = 1.0
            accepted = False
            for _bt in range(13):
                trial = u - _LD(lam) * step_ld
                if merit(trial) <= m0 * (1.0 - 1e-4 * lam):
                    u = trial
                    accepted = True
                    break
                lam *= 0.5
            if not accepted:
                stalled = "line search stalled"
                break
            if deflate_zero and float(np.abs(u).max()) < 1e-6 * max(init_scale, 1.0):
                stalled = "collapsed onto the deflated zero root"
                break
        else:
            stalled = "iteration budget exhausted"
        if not deflate_zero:
            found = best[1] if best is not None else u0
            return found, total_iters, 0, False, stalled
        # escalate: restart from a doubled initial amplitude
    return (
        best[1] if best is not None else u0,
        total_iters,
        attempts - 1,
        False,
        f"no convergence after {attempts - 1} restarts ({stalled})",
    )


def newton_solve(
    init: StatePair,
    sys: SystemParams,
    f1: Nonlinearity,
    f2: Nonlinearity,
    tol: float = 1e-8,
    max_iter: int = 50,
    deflate_zero: bool = True,
    restarts: int = 5,
    sigma: Optional[float] = None,
    omega0: Optional[SubBox] = None,
    compute_cone: bool = True,
) -> SolveReport:
    """Collocation Newton on the coupled strong-form residual.

    Converged means the true residual satisfies ||R||_inf <= tol (the
    deflated merit only steers the line search).  deflate_zero targets
    nontrivial solutions in superlinear regimes; disable it to admit the
    zero solution as a legitimate limit.

    Raises
    ------
    SingularJacobianError
        If a Jacobian factorization breaks down, with the iteration index.
    ConfigError
        If the grid exceeds the dense-Jacobian budget.
    """
    if tol <= 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    domain = init.domain
    res = init.resolution
    n = int(np.prod(res))
    if 2 * n > _DENSE_CAP:
        raise ConfigError(
            f"{2 * n} unknowns exceed the dense collocation budget {_DENSE_CAP}; "
            "reduce the grid"
        )
    op1 = _CollocationOperator(domain, res, sys.p1)
    op2 = _CollocationOperator(domain, res, sys.p2)
    a1 = op1.dense()
    a2 = op2.dense()
    pts = node_points(domain, res)

    def residual_ld(u_vec: np.ndarray) -> np.ndarray:
        w1 = u_vec[:n].reshape(res)
        w2 = u_vec[n:].reshape(res)
        g1 = f1.evaluate(pts, w1.reshape(-1), w2.reshape(-1))
        g2 = f2.evaluate(pts, w1.reshape(-1), w2.reshape(-1))
        r1 = op1.apply_ld(w1).reshape(-1) - np.asarray(g1, dtype=_LD)
        r2 = op2.apply_ld(w2).reshape(-1) - np.asarray(g2, dtype=_LD)
        return np.concatenate([r1, r2])

    def solver_factory(u_vec: np.ndarray, iteration: int):
        w1 = u_vec[:n]
        w2 = u_vec[n:]
        j = np.zeros((2 * n, 2 * n))
        j[:n, :n] = a1 - np.diag(np.asarray(f1.partial(1, pts, w1, w2), dtype=float))
        j[:n, n:] = -np.diag(np.asarray(f1.partial(2, pts, w1, w2), dtype=float))
        j[n:, :n] = -np.diag(np.asarray(f2.partial(1, pts, w1, w2), dtype=float))
        j[n:, n:] = a2 - np.diag(np.asarray(f2.partial(2, pts, w1, w2), dtype=float))
        return _lu_solver(j, iteration)

    u_final, iters, used_restarts, converged, message = _newton_core(
        init.vector(), residual_ld, solver_factory, tol, max_iter, deflate_zero, restarts
    )
    solution = StatePair.from_vector(domain, res, u_final.astype(float))
    res_inf = float(np.abs(residual_ld(u_final)).max())
    cone_ok, sigma_used = _cone_verdict(solution, sys, sigma, omega0, compute_cone)
    return SolveReport(
        solution=solution,
        iterations=iters,
        residual_inf=res_inf,
        positive=bool(solution.min_value() > 0),
        cone_ok=cone_ok,
        strategy="newton",
        converged=converged,
        sigma=sigma_used,
        restarts=used_restarts,
        message=message,
    )


# ---------------------------------------------------------------------------
# Growth diagnostics


@dataclass(frozen=True)
class LimitRatioReport:
    """Finite-radius envelopes of F = (f1+f2)/(L1*u1+L2*u2).

    f0_lower/f0_upper are min/max envelopes read at the innermost radius
    of the small band; finf_lower/finf_upper at the outermost radius of
    the large band.  trace holds (radius, min, max) across both bands.
    """

    f0_lower: float
    f0_upper: float
    finf_lower: float
    finf_upper: float
    radii: dict
    trace: tuple

    def as_dict(self) -> dict:
        return {
            "f0_lower": self.f0_lower,
            "f0_upper": self.f0_upper,
            "finf_lower": self.finf_lower,
            "finf_upper": self.finf_upper,
            "radii": self.radii,
        }


def _ratio_envelope(f1, f2, sys, x_pts, r, thetas) -> tuple[float, float]:
    lo, hi = math.inf, -math.inf
    npts = x_pts.shape[0]
    for th in thetas:
        u1 = float(r * math.cos(th) ** 2)
        u2 = float(r * math.sin(th) ** 2)
        num = np.asarray(f1.evaluate(x_pts, u1, u2)) + np.asarray(
            f2.evaluate(x_pts, u1, u2)
        )
        den = sys.L1 * u1 + sys.L2 * u2
        vals = num / den
        lo = min(lo, float(vals.min()))
        hi = max(hi, float(vals.max()))
    return lo, hi


def estimate_limit_ratios(
    f1: Nonlinearity,
    f2: Nonlinearity,
    sys: SystemParams,
    domain: Optional[Domain] = None,
    r_small: float = 1e-3,
    r_large: float = 1e3,
    n_directions: int = 33,
    n_points: int = 33,
) -> LimitRatioReport:
    """Sample F on direction rays u = r*(cos^2 t, sin^2 t), u1+u2 = r.

    The small band spans [r_small/10, r_small] and the zero-limit
    envelopes are read at its inner edge; the large band spans
    [r_large, 10*r_large] with the infinity envelopes at its outer edge.
    Radii are logged; these are surrogates, not certified limits.
    """
    if r_small <= 0 or r_large <= r_small:
        raise ConfigError("need 0 < r_small < r_large")
    domain = domain or sys.domain
    x_pts = node_points(domain, n_points)
    thetas = np.linspace(0.0, math.pi / 2.0, int(n_directions))
    small_band = np.logspace(math.log10(r_small / 10.0), math.log10(r_small), 5)
    large_band = np.logspace(math.log10(r_large), math.log10(r_large * 10.0), 5)
    trace = []
    for r in np.concatenate([small_band, large_band]):
        lo, hi = _ratio_envelope(f1, f2, sys, x_pts, float(r), thetas)
        trace.append((float(r), lo, hi))
    f0_lower, f0_upper = trace[0][1], trace[0][2]
    finf_lower, finf_upper = trace[-1][1], trace[-1][2]
    return LimitRatioReport(
        f0_lower=f0_lower,
        f0_upper=f0_upper,
        finf_lower=finf_lower,
        finf_upper=finf_upper,
        radii={
            "small_band": [float(r) for r in small_band],
            "large_band": [float(r) for r in large_band],
            "f0_read_at": float(small_band[0]),
            "finf_read_at": float(large_band[-1]),
        },
        trace=tuple(trace),
    )


@dataclass(frozen=True)
class ClassificationReport:
    classification: GrowthClass
    ratios: LimitRatioReport
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "classification": self.classification.value,
            "note": self.note,
            **self.ratios.as_dict(),
        }


def classify_growth(
    f1: Nonlinearity,
    f2: Nonlinearity,
    sys: SystemParams,
    domain: Optional[Domain] = None,
    **kwargs,
) -> ClassificationReport:
    """Superlinear iff f0_upper < 1 < finf_lower, sublinear iff the
    reversed strict chain holds; anything else is unclassified."""
    ratios = estimate_limit_ratios(f1, f2, sys, domain, **kwargs)
    superlinear = ratios.f0_upper < 1.0 < ratios.finf_lower
    sublinear = ratios.finf_upper < 1.0 < ratios.f0_lower
    if superlinear and sublinear:
        return ClassificationReport(
            GrowthClass.UNCLASSIFIED,
            ratios,
            "both strict chains satisfied by the finite-radius envelopes; "
            "widen the radius bands instead of guessing",
        )
    if superlinear:
        return ClassificationReport(GrowthClass.SUPERLINEAR, ratios)
    if sublinear:
        return ClassificationReport(GrowthClass.SUBLINEAR, ratios)
    return ClassificationReport(GrowthClass.UNCLASSIFIED, ratios)


def radius_report(sys: SystemParams, sigma: float, eps: float = 0.1, k: float = 1.0) -> dict:
    """Diagnostic localization radii; eps and k are conventions.

    These quantify where the cone argument localizes nontrivial
    solutions; they drive no control flow anywhere in the package.
    """
    c = k * (1.0 + eps) * (sys.L1 + sys.L2)
    return {
        "eps": eps,
        "k": k,
        "C": c,
        "R1": c / (sigma * eps * min(sys.L1, sys.L2)),
        "R2": k / sigma,
        "note": "diagnostic convention, not a computed bound",
    }
