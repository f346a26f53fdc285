"""Helmholtz-shift factorization of the fourth-order operator.

The operator Laplace^2 + beta*Laplace - alpha acting on a sine mode k has
symbol P(lambda_k) = lambda_k^2 - beta*lambda_k - alpha, so it factors as
(-Laplace - mu1)(-Laplace - mu2) where mu1, mu2 are the roots of
P(mu) = mu^2 - beta*mu - alpha, i.e. beta = mu1 + mu2 and alpha = -mu1*mu2.

This module produces the shifts, validates the parameter conditions that
the rest of the pipeline relies on, and traces resonance curves where the
linear problem loses unique solvability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .domain import Domain, Mode, mode_table
from .errors import ComplexRootsError

# Relative wiggle room when comparing g(lambda_k) against exact resonance.
_RESONANCE_EPS = 1e-12


@dataclass(frozen=True)
class ParamPair:
    """The (alpha, beta) parameters of one equation."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class Factorization:
    """Shift pair (mu1, mu2) with mu1 >= mu2 and the discriminant."""

    mu1: float
    mu2: float
    discriminant: float


def factor_params(p: ParamPair) -> Factorization:
    """Roots of mu^2 - beta*mu - alpha, largest first.

    Raises
    ------
    ComplexRootsError
        If the discriminant beta^2 + 4*alpha is negative; complex shifts
        are outside the supported regime.
    """
    disc = p.beta**2 + 4.0 * p.alpha
    if disc < 0:
        raise ComplexRootsError(
            f"discriminant {disc} < 0 for (alpha,beta)=({p.alpha},{p.beta})"
        )
    sq = math.sqrt(disc)
    return Factorization((p.beta + sq) / 2.0, (p.beta - sq) / 2.0, disc)


def resonance_function(p: ParamPair, lam) -> np.ndarray:
    """g(lambda) = alpha/lambda^2 + beta/lambda; resonance is g = 1."""
    lam = np.asarray(lam, dtype=float)
    return p.alpha / lam**2 + p.beta / lam


def tail_threshold(p: ParamPair) -> float:
    """Eigenvalue level beyond which g(lambda) < 1 holds analytically.

    For lambda > max(2|beta|, sqrt(2|alpha|)) each of the two terms of g is
    below 1/2 in absolute value, so the strict non-resonance inequality is
    certified for every non-enumerated mode above this level.
    """
    return max(2.0 * abs(p.beta), math.sqrt(2.0 * abs(p.alpha)))


@dataclass(frozen=True)
class AdmissibilityReport:
    """Verdicts for the parameter conditions of one equation.

    beta_bound_ok:      beta < 2*lambda_1
    discriminant_ok:    beta^2 >= -4*alpha (real shifts)
    nonresonant_strict: g(lambda_k) < 1 for every mode, tail certified
    first_violation:    smallest-eigenvalue mode with g >= 1, if any
    L:                  lambda_1^2 - lambda_1*beta - alpha
    no_exact_resonance: weaker solvability verdict, g(lambda_k) != 1 for
                        every mode (unique linear solvability only)
    tail_level:         eigenvalue threshold used for the tail argument
    """

    beta_bound_ok: bool
    discriminant_ok: bool
    nonresonant_strict: bool
    first_violation: Optional[Mode]
    L: float
    no_exact_resonance: bool
    tail_level: float

    @property
    def admissible(self) -> bool:
        return self.beta_bound_ok and self.discriminant_ok and self.nonresonant_strict

    def as_dict(self) -> dict:
        return {
            "beta_bound_ok": self.beta_bound_ok,
            "discriminant_ok": self.discriminant_ok,
            "nonresonant_strict": self.nonresonant_strict,
            "first_violation": list(self.first_violation.index)
            if self.first_violation
            else None,
            "L": self.L,
            "no_exact_resonance": self.no_exact_resonance,
            "tail_level": self.tail_level,
            "admissible": self.admissible,
        }


def _effective_orders(domain: Domain, K: int, level: float) -> tuple[int, ...]:
    # Enumerate far enough that every skipped mode has lambda_k > level:
    # a single index k_i with k_i >= a_i*sqrt(level)/pi already clears it.
    orders = []
    for a in domain.lengths:
        need = int(math.ceil(a * math.sqrt(max(level, 0.0)) / math.pi)) + 1
        orders.append(max(int(K), need))
    return tuple(orders)


def check_admissible(p: ParamPair, domain: Domain, K: int = 64) -> AdmissibilityReport:
    """Evaluate every admissibility condition; verdicts, never exceptions.

    Modes are enumerated up to max(K, tail threshold) per dimension so the
    finitely many checks plus the analytic tail bound cover the whole
    spectrum.
    """
    lam1 = domain.lambda1()
    beta_ok = p.beta < 2.0 * lam1
    disc_ok = p.beta**2 + 4.0 * p.alpha >= 0.0
    level = tail_threshold(p)
    idx, lam = mode_table(domain, _effective_orders(domain, K, level))
    g = resonance_function(p, lam)
    strict_bad = g >= 1.0 - _RESONANCE_EPS * np.abs(g)
    first: Optional[Mode] = None
    if np.any(strict_bad):
        pos = int(np.argmax(strict_bad))  # table is lambda-ascending
        first = Mode(tuple(int(v) for v in idx[pos]))
    exact_hit = np.abs(g - 1.0) <= _RESONANCE_EPS * np.maximum(1.0, np.abs(g))
    L = lam1**2 - lam1 * p.beta - p.alpha
    return AdmissibilityReport(
        beta_bound_ok=bool(beta_ok),
        discriminant_ok=bool(disc_ok),
        nonresonant_strict=not bool(np.any(strict_bad)),
        first_violation=first,
        L=float(L),
        no_exact_resonance=not bool(np.any(exact_hit)),
        tail_level=float(level),
    )


def resonance_curve(
    k: Mode | Sequence[int], domain: Domain, beta_samples: Sequence[float]
) -> list[tuple[float, float]]:
    """(beta, alpha) pairs on the resonance curve of mode k.

    For each beta the returned alpha = lambda_k^2 - beta*lambda_k is the
    unique value making g(lambda_k) = 1.
    """
    from .domain import eigenvalue

    lam = eigenvalue(domain, k)
    return [(float(b), float(lam**2 - float(b) * lam)) for b in beta_samples]
