"""Finite-difference oracle for the fourth-order operator, Navier BCs.

Everything here exists to cross-examine the spectral modules with an
independent discretization: A is the standard second-order Dirichlet
Laplacian stencil, and the Navier conditions u = Laplace u = 0 make the
fourth-order operator exactly A@A - beta*A - alpha*I (composing the
Dirichlet solve twice is provably consistent with the Navier trace,
unlike a one-shot 13-point bilaplacian stencil near the boundary).

Desk scale only: grids are capped, solves go through sparse LU, and the
error model is plain O(n^-2).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import splu

from .domain import Domain, GridField, _as_resolution, node_points
from .errors import ConfigError, NearResonanceError, SingularJacobianError
from .factorization import ParamPair
from .nonlinear import Nonlinearity, SolveReport, StatePair, SystemParams, _newton_core, _LD

_CAPS = {1: 512, 2: 64}


def _fd_resolution(domain: Domain, n) -> tuple[int, ...]:
    res = _as_resolution(domain, n)
    cap = _CAPS.get(domain.dim)
    if cap is None:
        raise ConfigError("the finite-difference oracle covers 1D and 2D only")
    if any(v > cap for v in res):
        raise ConfigError(f"oracle grid {res} exceeds the cap {cap} per axis")
    return res


def _laplacian_axis(a: float, n: int) -> sp.csr_matrix:
    h = a / (n + 1)
    main = np.full(n, 2.0 / h**2)
    off = np.full(n - 1, -1.0 / h**2)
    return sp.diags([off, main, off], [-1, 0, 1], format="csr")


def fd_laplacian(domain: Domain, n) -> sp.csr_matrix:
    """Sparse A = -Laplace_h with Dirichlet rows, Kronecker-sum layout."""
    res = _fd_resolution(domain, n)
    mats = [_laplacian_axis(a, m) for a, m in zip(domain.lengths, res)]
    out = None
    for i, m in enumerate(mats):
        eye_pre = sp.identity(int(np.prod(res[:i])), format="csr")
        eye_post = sp.identity(int(np.prod(res[i + 1 :])), format="csr")
        term = sp.kron(sp.kron(eye_pre, m), eye_post, format="csr")
        out = term if out is None else out + term
    return out.tocsr()


def fd_composite(domain: Domain, p: ParamPair, n) -> sp.csc_matrix:
    """A@A - beta*A - alpha*I, the discrete fourth-order operator."""
    a = fd_laplacian(domain, n)
    comp = a @ a - p.beta * a - p.alpha * sp.identity(a.shape[0], format="csr")
    return comp.tocsc()


def _apply_laplacian_ld(u: np.ndarray, domain: Domain) -> np.ndarray:
    """Extended-precision stencil action of A on a value tensor."""
    out = np.zeros(u.shape, dtype=_LD)
    for ax, (a, n) in enumerate(zip(domain.lengths, u.shape)):
        h2 = (_LD(a) / _LD(n + 1)) ** 2
        pad = [(1, 1) if i == ax else (0, 0) for i in range(u.ndim)]
        up = np.pad(u, pad)
        left = up[tuple(slice(0, -2) if i == ax else slice(None) for i in range(u.ndim))]
        right = up[tuple(slice(2, None) if i == ax else slice(None) for i in range(u.ndim))]
        out += (2.0 * u - left - right) / h2
    return out


def _apply_composite_ld(u: np.ndarray, domain: Domain, p: ParamPair) -> np.ndarray:
    au = _apply_laplacian_ld(u, domain)
    return _apply_laplacian_ld(au, domain) - _LD(p.beta) * au - _LD(p.alpha) * u


def fd_solve(domain: Domain, p: ParamPair, h: GridField, n=None) -> GridField:
    """Solve the discrete fourth-order problem by sparse LU.

    Raises
    ------
    NearResonanceError
        If the composite factorization is singular or its pivot ratio
        has collapsed below 1e-12 (parameters on or next to a discrete
        resonance).
    """
    res = _fd_resolution(domain, n if n is not None else h.resolution)
    if h.resolution != res:
        from .linear import _resample

        h = _resample(h, res)
    comp = fd_composite(domain, p, res)
    try:
        lu = splu(comp)
    except RuntimeError as exc:
        raise NearResonanceError(f"singular discrete operator: {exc}") from exc
    d = np.abs(lu.U.diagonal())
    if d.min() < 1e-12 * d.max():
        raise NearResonanceError(
            f"discrete pivot ratio {d.min() / d.max():.3e} signals resonance"
        )
    u = lu.solve(h.values.reshape(-1))
    return GridField(domain, res, u.reshape(res))


def fd_eigenvalues(domain: Domain, n, count: int) -> list[float]:
    """Smallest eigenvalues of the discrete A, ascending.

    Computed per axis by symmetric tridiagonal eigendecomposition and
    combined as Kronecker sums.
    """
    res = _fd_resolution(domain, n)
    if count < 1 or count > int(np.prod(res)):
        raise ConfigError(f"count must be in 1..{int(np.prod(res))}")
    per_axis = []
    for a, m in zip(domain.lengths, res):
        h = a / (m + 1)
        vals = eigh_tridiagonal(
            np.full(m, 2.0 / h**2), np.full(m - 1, -1.0 / h**2), eigvals_only=True
        )
        # only the first `count` per axis can contribute to the smallest sums
        per_axis.append(np.sort(vals)[: min(count, m)])
    grids = np.meshgrid(*per_axis, indexing="ij")
    sums = np.zeros(grids[0].shape)
    for g in grids:
        sums = sums + g
    return [float(v) for v in np.sort(sums.reshape(-1))[:count]]


def fd_min_pivot(domain: Domain, p: ParamPair, n) -> float:
    """Pivot-collapse diagnostic: min|U_ii| / max|U_ii| without pivoting.

    Natural ordering and a zero pivot threshold keep the factorization
    from hiding the collapse; resonant parameters drive this ratio down
    by many orders of magnitude.
    """
    comp = fd_composite(domain, p, n)
    try:
        lu = splu(comp, permc_spec="NATURAL", diag_pivot_thresh=0.0)
    except RuntimeError:
        return 0.0
    d = np.abs(lu.U.diagonal())
    return float(d.min() / d.max())


def fd_newton(
    domain: Domain,
    sys: SystemParams,
    f1: Nonlinearity,
    f2: Nonlinearity,
    init: StatePair,
    n=None,
    tol: float = 1e-6,
    max_iter: int = 50,
    deflate_zero: bool = True,
    restarts: int = 5,
) -> SolveReport:
    """Newton on the FD-discretized coupled residual; oracle twin of
    newton_solve, sharing its deflation and restart policy.

    Raises
    ------
    SingularJacobianError
        On Jacobian factorization breakdown, with the iteration index.
    """
    res = _fd_resolution(domain, n if n is not None else init.resolution)
    if init.resolution != res:
        raise ConfigError(
            f"initial state lives on {init.resolution}, expected the oracle grid {res}"
        )
    if tol <= 0:
        raise ConfigError(f"tol must be positive, got {tol}")
    nn = int(np.prod(res))
    comp1 = fd_composite(domain, sys.p1, res)
    comp2 = fd_composite(domain, sys.p2, res)
    pts = node_points(domain, res)

    def residual_ld(u_vec: np.ndarray) -> np.ndarray:
        w1 = u_vec[:nn].reshape(res)
        w2 = u_vec[nn:].reshape(res)
        g1 = f1.evaluate(pts, w1.reshape(-1), w2.reshape(-1))
        g2 = f2.evaluate(pts, w1.reshape(-1), w2.reshape(-1))
        r1 = _apply_composite_ld(w1, domain, sys.p1).reshape(-1) - np.asarray(g1, dtype=_LD)
        r2 = _apply_composite_ld(w2, domain, sys.p2).reshape(-1) - np.asarray(g2, dtype=_LD)
        return np.concatenate([r1, r2])

    def solver_factory(u_vec: np.ndarray, iteration: int):
        w1 = u_vec[:nn]
        w2 = u_vec[nn:]
        d11 = sp.diags(np.asarray(f1.partial(1, pts, w1, w2), dtype=float))
        d12 = sp.diags(np.asarray(f1.partial(2, pts, w1, w2), dtype=float))
        d21 = sp.diags(np.asarray(f2.partial(1, pts, w1, w2), dtype=float))
        d22 = sp.diags(np.asarray(f2.partial(2, pts, w1, w2), dtype=float))
        j = sp.bmat([[comp1 - d11, -d12], [-d21, comp2 - d22]], format="csc")
        try:
            lu = splu(j)
        except RuntimeError as exc:
            raise SingularJacobianError(
                f"singular Jacobian at iteration {iteration}: {exc}"
            ) from exc
        return lu.solve

    u_final, iters, used_restarts, converged, message = _newton_core(
        init.vector(), residual_ld, solver_factory, tol, max_iter, deflate_zero, restarts
    )
    solution = StatePair.from_vector(domain, res, u_final.astype(float))
    res_inf = float(np.abs(residual_ld(u_final)).max())
    return SolveReport(
        solution=solution,
        iterations=iters,
        residual_inf=res_inf,
        positive=bool(solution.min_value() > 0),
        cone_ok=None,
        strategy="newton",
        converged=converged,
        restarts=used_restarts,
        message=message,
    )
