"""Coupled system with f_j = (u1+u2)^2: classification, Newton, cross-check.

The growth classifier brackets f/(L1 u1 + L2 u2) along direction fans at
small and large radius. For a quadratic nonlinearity the small-radius
ratio vanishes and the large-radius ratio blows up, which licenses the
Newton strategy with zero-deflation: the trivial pair (0,0) always
solves the system, and plain Newton started too low drains into it.
"""

import numpy as np

from navier4 import (
    GrowthClass,
    Nonlinearity,
    ParamPair,
    StatePair,
    SystemParams,
    classify_growth,
    estimate_limit_ratios,
    fd_newton,
    newton_solve,
)
from navier4.domain import Domain, forward_transform, node_points

domain = Domain((1.0,))
sysp = SystemParams.from_domain(domain, ParamPair(0.0, 0.0), ParamPair(0.0, 0.0))
f = Nonlinearity.power(c=1.0, p=2.0)

ratios = estimate_limit_ratios(f, f, sysp, r_small=1e-3, r_large=1e3)
print(f"limit ratios: f0 upper {ratios.f0_upper:.3e}, finf lower {ratios.finf_lower:.1f}")
cls = classify_growth(f, f, sysp)
assert cls.classification is GrowthClass.SUPERLINEAR
print(f"classification: {cls.classification.value}")

init = StatePair.eigen(domain, 129, 10.0)
rep = newton_solve(init, sysp, f, f, tol=1e-8)
print(f"\nnewton: converged={rep.converged} in {rep.iterations} iterations "
      f"({rep.restarts} restart), residual {rep.residual_inf:.2e}")
print(f"solution: min {rep.solution.min_value():.4f}, "
      f"center u1 {rep.solution.u1.values[64]:.6f}, cone_ok={rep.cone_ok}")
# the restart is not an accident: the initial amplitude sits just below
# the fold of the solution branch, and the first sweep collapses to zero

n = 256
rep_fd = fd_newton(domain, sysp, f, f, StatePair.eigen(domain, n, 10.0), tol=1e-6)
x_star = node_points(domain, n)[n // 2 - 1]
coeffs = forward_transform(rep.solution.u1, 129)
c_spec = float(coeffs.evaluate(x_star[None, :])[0])
c_fd = float(rep_fd.solution.u1.values[n // 2 - 1])
print(f"\nfd oracle at n={n}: center {c_fd:.6f} vs spectral {c_spec:.6f} "
      f"(rel {abs(c_fd - c_spec) / abs(c_spec):.2e})")

print("\nsymmetry: the two components coincide because the system is symmetric")
gap = np.abs(rep.solution.u1.values - rep.solution.u2.values).max()
print(f"||u1 - u2||_inf = {gap:.2e}")
