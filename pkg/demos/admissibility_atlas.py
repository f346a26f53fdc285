"""ASCII atlas of the admissible (alpha, beta) region on the unit interval.

A parameter pair is admissible when beta < 2*lambda_1, the factorization
roots are real (beta^2 + 4 alpha >= 0), and no mode satisfies
alpha/lambda_k^2 + beta/lambda_k = 1. The resonance curves
alpha = lambda_k^2 - beta*lambda_k slice the plane into sheets; crossing
one collapses the inverse operator.

Legend: '#' admissible, 'x' complex roots, 'R' resonant or tail failure,
'B' beta bound violated.
"""

import numpy as np

from navier4 import ParamPair, check_admissible, resonance_curve
from navier4.domain import Domain, Mode

domain = Domain((1.0,))
lam1 = domain.lambda1()

betas = np.linspace(-2.5 * lam1, 2.5 * lam1, 49)
alphas = np.linspace(2.0 * lam1**2, -1.5 * lam1**2, 25)  # top to bottom

print(f"lambda_1 = pi^2 = {lam1:.4f}, alpha in [{alphas[-1]:.0f}, {alphas[0]:.0f}], "
      f"beta in [{betas[0]:.1f}, {betas[-1]:.1f}]")
print()
for a in alphas:
    row = []
    for b in betas:
        rep = check_admissible(ParamPair(float(a), float(b)), domain)
        if rep.admissible:
            row.append("#")
        elif not rep.beta_bound_ok:
            row.append("B")
        elif not rep.discriminant_ok:
            row.append("x")
        else:
            row.append("R")
    print("".join(row))

print()
print("first two resonance curves, alpha(beta) = lambda_k^2 - beta*lambda_k:")
for k in (1, 2):
    curve = resonance_curve(Mode((k,)), domain, np.linspace(0.0, 2 * lam1, 5))
    pts = ", ".join(f"({b:.1f}, {a:.0f})" for b, a in curve)
    print(f"  k={k}: {pts}")
