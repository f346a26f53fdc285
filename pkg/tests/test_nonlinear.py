import numpy as np
import pytest

from navier4.domain import Domain, SubBox, node_points, sample_function
from navier4.errors import (
    ConfigError,
    NonlinearityContractError,
    NotAdmissibleError,
)
from navier4.factorization import ParamPair
from navier4.nonlinear import (
    GrowthClass,
    Nonlinearity,
    StatePair,
    SystemParams,
    apply_T,
    classify_growth,
    cone_sigma,
    estimate_limit_ratios,
    newton_solve,
    picard_solve,
    verify_cone,
)

UNIT = Domain((1.0,))
LAM1 = np.pi**2
L = LAM1**2
ZERO = ParamPair(0.0, 0.0)


def _sys(p1=ZERO, p2=ZERO, domain=UNIT):
    return SystemParams.from_domain(domain, p1, p2)


def test_system_params_gate():
    sysp = _sys()
    assert sysp.L1 == pytest.approx(L)
    assert sysp.lambda1 == pytest.approx(LAM1)
    with pytest.raises(NotAdmissibleError):
        SystemParams.from_domain(UNIT, ParamPair(L, 0.0), ZERO)


def test_power_kind():
    f = Nonlinearity.power(c=3.0, p=2.0)
    x = np.array([[0.5]])
    u1 = np.array([2.0])
    u2 = np.array([1.0])
    assert f.evaluate(x, u1, u2) == pytest.approx(27.0)
    assert f.partial(1, x, u1, u2) == pytest.approx(18.0)  # 2c(u1+u2)
    assert f.partial(2, x, u1, u2) == pytest.approx(18.0)
    # clamped on the negative side
    assert f.evaluate(x, np.array([-2.0]), u2) == pytest.approx(0.0)
    with pytest.raises(NonlinearityContractError):
        Nonlinearity.power(c=-1.0, p=2.0)


def test_linear_kind():
    f = Nonlinearity.linear(2.0, 0.5)
    x = np.array([[0.1]])
    assert f.evaluate(x, np.array([3.0]), np.array([4.0])) == pytest.approx(8.0)
    assert f.partial(1, x, np.array([3.0]), np.array([4.0])) == pytest.approx(2.0)
    assert f.partial(2, x, np.array([3.0]), np.array([4.0])) == pytest.approx(0.5)


def test_constant_kind_scalar_and_callable():
    f = Nonlinearity.constant(2.5)
    x = np.array([[0.2], [0.8]])
    u = np.zeros(2)
    assert np.allclose(f.evaluate(x, u, u), 2.5)
    assert np.allclose(f.partial(1, x, u, u), 0.0)
    g = Nonlinearity.constant(lambda pts: pts[:, 0] ** 2)
    assert np.allclose(g.evaluate(x, u, u), [0.04, 0.64])


def test_saturating_kind():
    f = Nonlinearity.saturating(c=4.0)
    x = np.array([[0.5]])
    assert f.evaluate(x, np.array([1.0]), np.array([1.0])) == pytest.approx(4.0 * 2 / 3)
    # derivative c/(1+s)^2
    assert f.partial(1, x, np.array([1.0]), np.array([1.0])) == pytest.approx(4.0 / 9)


def _write_table(path, fn, lo=0.0, hi=4.0, n=81):
    u = np.linspace(lo, hi, n)
    with open(path, "w") as fh:
        fh.write("u1,u2,value\n")
        for a in u:
            for b in u:
                fh.write(f"{float(a)!r},{float(b)!r},{float(fn(a, b))!r}\n")


def test_tabulated_kind_matches_function(tmp_path):
    p = tmp_path / "table.csv"
    _write_table(str(p), lambda a, b: (a + b) ** 2)
    f = Nonlinearity.tabulated(str(p))
    x = np.array([[0.5]])
    got = f.evaluate(x, np.array([1.3]), np.array([0.7]))
    assert got == pytest.approx(4.0, rel=1e-3)
    d = f.partial(1, x, np.array([1.0]), np.array([1.0]))
    assert d == pytest.approx(4.0, rel=5e-2)  # centered FD on the table
    # clipped outside the tabulated range
    far = f.evaluate(x, np.array([100.0]), np.array([100.0]))
    assert far == pytest.approx(64.0, rel=1e-6)
    bad = tmp_path / "neg.csv"
    _write_table(str(bad), lambda a, b: -1.0)
    with pytest.raises(NonlinearityContractError):
        Nonlinearity.tabulated(str(bad))


def test_statepair_vector_roundtrip():
    s = StatePair.eigen(UNIT, 33, 2.0)
    v = s.vector()
    back = StatePair.from_vector(UNIT, 33, v)
    assert np.array_equal(back.u1.values, s.u1.values)
    assert s.norm() == pytest.approx(4.0 * np.sqrt(2), rel=1e-3)  # two peaks of 2*phi_1
    assert s.min_value() > 0


def test_apply_T_beam_center():
    """Constant unit forcing through the double resolvent is the clamped beam."""
    sysp = _sys()
    f = Nonlinearity.constant(1.0)
    s = StatePair.zeros(UNIT, 129)
    out = apply_T(s, sysp, f, f, K=129)
    center = out.u1.values[64]
    assert center == pytest.approx(5.0 / 384.0, abs=1e-6)


def test_cone_sigma_and_verify():
    sysp = _sys()
    sigma, omega0 = cone_sigma(sysp)
    assert sigma == pytest.approx(0.00178608383365678, rel=1e-9)
    f = Nonlinearity.power(1.0, 2.0)
    s = StatePair.eigen(UNIT, 129, 1.0)
    image = apply_T(s, sysp, f, f)
    assert verify_cone(image, sigma, omega0)
    # a flat profile violates the centered-mass requirement at this sigma
    bad = StatePair.eigen(UNIT, 129, 1.0)
    bad.u1.values[:] = np.linspace(0, 1, 129) ** 8
    assert not verify_cone(bad, 0.5, omega0)


def test_forcing_contract_enforced():
    sysp = _sys()
    f = Nonlinearity("custom", {}, lambda x, u1, u2: np.full(u1.shape, -1.0), None)
    s = StatePair.eigen(UNIT, 65, 1.0)
    with pytest.raises(NonlinearityContractError):
        apply_T(s, sysp, f, f)


def test_picard_on_saturating():
    sysp = _sys()
    c = 2 * L
    f = Nonlinearity.saturating(c)
    init = StatePair.eigen(UNIT, 129, 1.0)
    rep = picard_solve(init, sysp, f, f, damping=0.5, tol=1e-6, max_iter=200)
    assert rep.converged
    assert rep.strategy == "picard"
    assert rep.residual_inf <= 1e-6
    assert rep.positive
    assert rep.cone_ok
    assert rep.solution.u1.values[64] == pytest.approx(1.844266693537364, rel=1e-6)


def test_picard_nonconvergence_is_reported_not_raised():
    sysp = _sys()
    f = Nonlinearity.saturating(2 * L)
    init = StatePair.eigen(UNIT, 65, 1.0)
    rep = picard_solve(init, sysp, f, f, damping=0.5, tol=1e-12, max_iter=3)
    assert not rep.converged
    assert rep.iterations == 3
    assert "budget" in rep.message or rep.message


def test_newton_eigen_fixed_point():
    sysp = _sys()
    f1 = Nonlinearity.linear(sysp.L1, 0.0)
    f2 = Nonlinearity.linear(0.0, sysp.L2)
    for c in (0.1, 1.0, 10.0):
        s = StatePair.eigen(UNIT, 129, c)
        image = apply_T(s, sysp, f1, f2)
        gap = (image.u1 - s.u1).norm_inf() + (image.u2 - s.u2).norm_inf()
        assert gap <= 1e-6


def test_newton_superlinear_avoids_zero():
    sysp = _sys()
    f = Nonlinearity.power(1.0, 2.0)
    init = StatePair.eigen(UNIT, 129, 10.0)
    rep = newton_solve(init, sysp, f, f, tol=1e-8)
    assert rep.converged
    assert rep.strategy == "newton"
    assert rep.residual_inf <= 1e-6
    assert rep.solution.min_value() > 0
    assert rep.solution.norm() > 1.0  # did not collapse onto u = 0
    assert rep.restarts >= 1  # starting amplitude sits under the fold
    assert rep.cone_ok


def test_newton_dense_cap():
    big = Domain((1.0, 1.0))
    sysp = SystemParams.from_domain(big, ZERO, ZERO)
    f = Nonlinearity.power(1.0, 2.0)
    init = StatePair.eigen(big, 65, 1.0)  # 2*65^2 = 8450 unknowns > cap
    with pytest.raises(ConfigError):
        newton_solve(init, sysp, f, f)


def test_classify_growth_three_ways():
    sysp = _sys()
    sq = Nonlinearity.power(1.0, 2.0)
    sat = Nonlinearity.saturating(2 * L)
    lin1 = Nonlinearity.linear(sysp.L1, 0.0)
    lin2 = Nonlinearity.linear(0.0, sysp.L2)
    assert classify_growth(sq, sq, sysp).classification is GrowthClass.SUPERLINEAR
    assert classify_growth(sat, sat, sysp).classification is GrowthClass.SUBLINEAR
    rep = classify_growth(lin1, lin2, sysp)
    assert rep.classification is GrowthClass.UNCLASSIFIED


def test_limit_ratio_scale_correctness():
    sysp = _sys()
    sq = Nonlinearity.power(1.0, 2.0)
    r1 = estimate_limit_ratios(sq, sq, sysp, r_large=1e3)
    r2 = estimate_limit_ratios(sq, sq, sysp, r_large=2e3)
    assert r2.finf_lower == pytest.approx(2 * r1.finf_lower, rel=1e-10)


def test_solve_report_as_dict():
    sysp = _sys()
    f = Nonlinearity.saturating(2 * L)
    rep = picard_solve(StatePair.eigen(UNIT, 65, 1.0), sysp, f, f)
    d = rep.as_dict()
    for key in ("converged", "iterations", "residual_inf", "positive", "cone_ok", "strategy", "sigma"):
        assert key in d
