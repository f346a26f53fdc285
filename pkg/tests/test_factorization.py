import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navier4.domain import Domain, mode_table
from navier4.errors import ComplexRootsError
from navier4.factorization import (
    ParamPair,
    check_admissible,
    factor_params,
    resonance_curve,
    resonance_function,
    tail_threshold,
)

UNIT = Domain((1.0,))
LAM1 = np.pi**2


def test_factor_roots_vieta():
    p = ParamPair(alpha=3.0, beta=2.0)
    fac = factor_params(p)
    assert fac.mu1 >= fac.mu2
    assert fac.mu1 + fac.mu2 == pytest.approx(p.beta, rel=1e-14)
    assert fac.mu1 * fac.mu2 == pytest.approx(-p.alpha, rel=1e-14)
    # explicit roots of mu^2 - 2mu - 3: 3 and -1
    assert fac.mu1 == pytest.approx(3.0)
    assert fac.mu2 == pytest.approx(-1.0)


def test_complex_roots_rejected():
    with pytest.raises(ComplexRootsError):
        factor_params(ParamPair(alpha=-2.0, beta=1.0))  # beta^2+4alpha = -7


@settings(max_examples=100, deadline=None)
@given(
    beta=st.floats(min_value=-10.0, max_value=10.0),
    t=st.floats(min_value=0.0, max_value=50.0),
)
def test_vieta_hypothesis(beta, t):
    alpha = -(beta**2) / 4.0 + t  # keeps the discriminant nonnegative
    fac = factor_params(ParamPair(alpha, beta))
    assert abs(fac.mu1 + fac.mu2 - beta) <= 1e-12 * max(1.0, abs(beta))
    assert abs(fac.mu1 * fac.mu2 + alpha) <= 1e-12 * max(1.0, abs(alpha))


def test_symbol_factors_through_roots():
    p = ParamPair(alpha=20.0, beta=1.5)
    fac = factor_params(p)
    _, lam = mode_table(UNIT, 64)
    lhs = (lam - fac.mu1) * (lam - fac.mu2)
    rhs = lam**2 - p.beta * lam - p.alpha
    assert np.abs(lhs - rhs).max() <= 1e-10 * np.abs(rhs).max()


def test_resonance_function():
    assert resonance_function(ParamPair(0.0, 0.0), LAM1) == 0.0
    # g = alpha/lam^2 + beta/lam = 1 exactly on the resonance curve
    p = ParamPair(alpha=LAM1**2, beta=0.0)
    assert resonance_function(p, LAM1) == pytest.approx(1.0)


def test_admissible_zero_params():
    rep = check_admissible(ParamPair(0.0, 0.0), UNIT)
    assert rep.admissible
    assert rep.beta_bound_ok and rep.discriminant_ok and rep.nonresonant_strict
    assert rep.first_violation is None
    assert rep.L == pytest.approx(LAM1**2)


def test_inadmissible_cases():
    # exact resonance at mode 1
    rep = check_admissible(ParamPair(LAM1**2, 0.0), UNIT)
    assert not rep.admissible
    assert rep.first_violation is not None
    assert rep.first_violation.index == (1,)
    # beta at the ceiling
    rep2 = check_admissible(ParamPair(0.0, 2 * LAM1), UNIT)
    assert not rep2.beta_bound_ok
    # complex roots reported as a verdict, not an exception
    rep3 = check_admissible(ParamPair(-50.0, 1.0), UNIT)
    assert not rep3.discriminant_ok
    assert not rep3.admissible


def test_admissible_implies_mu1_below_lambda1():
    rng = np.random.default_rng(42)
    count = 0
    for _ in range(500):
        beta = rng.uniform(-2 * LAM1, 2 * LAM1)
        alpha = rng.uniform(-(beta**2) / 4.0, LAM1**2)
        rep = check_admissible(ParamPair(alpha, beta), UNIT)
        if not rep.admissible:
            continue
        count += 1
        fac = factor_params(ParamPair(alpha, beta))
        assert fac.mu1 < LAM1
    assert count > 100  # the admissible region is not thin


def test_tail_threshold_certifies_remainder():
    p = ParamPair(alpha=50.0, beta=-8.0)
    T = tail_threshold(p)
    assert T == max(2 * abs(p.beta), np.sqrt(2 * abs(p.alpha)))
    lam = np.linspace(T * 1.0001, T * 100, 1000)
    assert np.all(np.abs(resonance_function(p, lam)) < 1.0)


def test_resonance_curve_values():
    from navier4.domain import Mode

    mode = Mode((2,))
    pts = resonance_curve(mode, UNIT, np.array([0.0, 1.0, 2.0]))
    for beta, alpha in pts:
        lam = 4 * LAM1
        assert alpha == pytest.approx(lam**2 - beta * lam)
    assert resonance_curve(mode, UNIT, []) == []
