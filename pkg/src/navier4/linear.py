"""Linear solves of Laplace^2 u + beta*Laplace u - alpha*u = h, Navier BCs.

Two independent paths:

* solve_spectral: divide sine coefficients by the quartic symbol
  P(lambda_k) = lambda_k^2 - beta*lambda_k - alpha.  Production path,
  exact on retained modes.
* solve_green_quadrature: nested interior-node quadrature through the two
  Helmholtz kernels G_1, G_2 of the factorization.  Exists purely as a
  verification mirror; O(n^2) matrices instead of fast transforms.

Single Helmholtz factor solves (solve_single_helmholtz) let tests confirm
that cascading the two factors reproduces the direct quartic division.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import (
    Domain,
    GridField,
    _as_orders,
    _as_resolution,
    forward_transform,
    inverse_transform,
    node_points,
    quadrature_weight,
)
from .errors import ConfigError, DomainError, NearResonanceError, ShiftTooLargeError
from .factorization import ParamPair, factor_params
from .greens import GreenKernel

# |P(lambda_k)| below this multiple of lambda_k^2 counts as resonant;
# relative because the symbol itself grows like lambda_k^2.
_RESONANCE_REL = 1e-12


@dataclass
class LinearProblem:
    """Forcing h on a domain with one equation's (alpha, beta)."""

    domain: Domain
    params: ParamPair
    h: GridField

    def __post_init__(self):
        if self.h.domain != self.domain:
            raise DomainError("forcing field lives on a different domain")


def _cap_orders(domain: Domain, resolution, K):
    # None means "the default, but never beyond what the grid resolves".
    if K is not None:
        return _as_orders(domain, K)
    return tuple(min(d, n) for d, n in zip(_as_orders(domain, None), resolution))


def symbol(p: ParamPair, lam: np.ndarray) -> np.ndarray:
    """P(lambda) = lambda^2 - beta*lambda - alpha."""
    lam = np.asarray(lam, dtype=float)
    return lam**2 - p.beta * lam - p.alpha


def solve_spectral(problem: LinearProblem, K=None) -> GridField:
    """Divide each retained coefficient by the quartic symbol.

    Applying the discrete operator to the result reproduces the retained
    part of h exactly; truncation error lives in the discarded tail.

    Raises
    ------
    NearResonanceError
        If some |P(lambda_k)| < 1e-12 * lambda_k^2.
    """
    c = forward_transform(problem.h, _cap_orders(problem.domain, problem.h.resolution, K))
    idx, flat = c.modes()
    lam = np.pi**2 * np.sum(
        (idx / np.asarray(problem.domain.lengths)) ** 2, axis=1
    )
    pk = symbol(problem.params, lam)
    bad = np.abs(pk) < _RESONANCE_REL * lam**2
    if np.any(bad):
        pos = int(np.argmax(bad))
        raise NearResonanceError(
            f"symbol {pk[pos]:.3e} at mode {tuple(idx[pos])} is resonant "
            f"for (alpha,beta)=({problem.params.alpha},{problem.params.beta})"
        )
    c.coeffs = (flat / pk).reshape(c.order)
    return inverse_transform(c, problem.h.resolution)


def solve_single_helmholtz(domain: Domain, mu: float, h: GridField, K=None) -> GridField:
    """One factor: coefficients h_k / (lambda_k - mu).

    Raises
    ------
    ShiftTooLargeError
        If mu >= lambda_1.
    """
    mu = float(mu)
    if mu >= domain.lambda1():
        raise ShiftTooLargeError(f"shift {mu} >= lambda_1 = {domain.lambda1()}")
    c = forward_transform(h, _cap_orders(domain, h.resolution, K))
    idx, flat = c.modes()
    lam = np.pi**2 * np.sum((idx / np.asarray(domain.lengths)) ** 2, axis=1)
    c.coeffs = (flat / (lam - mu)).reshape(c.order)
    return inverse_transform(c, h.resolution)


def _resample(h: GridField, resolution: tuple[int, ...]) -> GridField:
    if h.resolution == resolution:
        return h
    order = tuple(min(k, n) for k, n in zip(h.resolution, resolution))
    return inverse_transform(forward_transform(h, order), resolution)


def solve_green_quadrature(
    problem: LinearProblem, k1: GreenKernel, k2: GreenKernel, grid=None
) -> GridField:
    """Nested quadrature u(x) = sum_tau sum_s G1(x,tau) G2(tau,s) h(s) w^2.

    Raises
    ------
    ConfigError
        If a kernel lives on another domain or its shift does not match
        the factorization of problem.params.
    """
    domain = problem.domain
    if k1.domain != domain or k2.domain != domain:
        raise ConfigError("kernel domain does not match the problem domain")
    fac = factor_params(problem.params)
    got = sorted((k1.mu, k2.mu))
    want = sorted((fac.mu1, fac.mu2))
    scale = max(1.0, abs(fac.mu1), abs(fac.mu2))
    if any(abs(g - w) > 1e-10 * scale for g, w in zip(got, want)):
        raise ConfigError(
            f"kernel shifts {got} do not factor (alpha,beta)="
            f"({problem.params.alpha},{problem.params.beta}); expected {want}"
        )
    res = _as_resolution(domain, grid if grid is not None else problem.h.resolution)
    h = _resample(problem.h, res)
    pts = node_points(domain, res)
    w = quadrature_weight(domain, res)
    inner = k2.eval_matrix(pts, pts) @ h.values.reshape(-1)
    outer = k1.eval_matrix(pts, pts) @ inner
    return GridField(domain, res, (w * w * outer).reshape(res))
