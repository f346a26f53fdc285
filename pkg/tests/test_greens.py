import numpy as np
import pytest

from navier4.domain import Domain, SubBox, node_points
from navier4.errors import ConstantDegenerateError, DomainError, ShiftTooLargeError
from navier4.greens import (
    build_kernel,
    closed_form_1d,
    diagonal_growth,
    estimate_constants,
    verify_kernel_bounds,
)

UNIT = Domain((1.0,))
SQUARE = Domain((1.0, 1.0))
LAM1 = np.pi**2


def _series_reference(x, t, mu, K=200000):
    k = np.arange(1, K + 1)
    lam = (k * np.pi) ** 2
    return float(np.sum(2 * np.sin(k * np.pi * x) * np.sin(k * np.pi * t) / (lam - mu)))


@pytest.mark.parametrize("mu", [-5.0, 0.0, 0.5 * np.pi**2])
def test_closed_form_matches_series(mu):
    for x, t in [(0.3, 0.7), (0.5, 0.5), (0.1, 0.9), (0.25, 0.35)]:
        ref = _series_reference(x, t, mu)
        assert closed_form_1d(mu, x, t) == pytest.approx(ref, abs=5e-6)


def test_closed_form_zero_shift_is_brownian_bridge():
    # G(x,t) = min(x,t)(1 - max(x,t)) for -u'' = f on (0,1)
    assert closed_form_1d(0.0, 0.25, 0.75) == pytest.approx(0.25 * 0.25)
    assert closed_form_1d(0.0, 0.6, 0.2) == pytest.approx(0.2 * 0.4)


def test_closed_form_rejects_resonant_shift():
    with pytest.raises(DomainError):
        closed_form_1d(np.pi**2, 0.3, 0.5)


def test_build_kernel_rejects_large_shift():
    with pytest.raises(ShiftTooLargeError):
        build_kernel(UNIT, LAM1, 64)
    with pytest.raises(ShiftTooLargeError):
        build_kernel(UNIT, LAM1 + 1.0, 64)


def test_kernel_eval_symmetry_exact():
    kern = build_kernel(UNIT, -2.0, 256)
    x = np.array([[0.3], [0.51], [0.77]])
    t = np.array([[0.77], [0.51], [0.3]])
    g_xt = kern.eval(x, t)
    g_tx = kern.eval(t, x)
    assert np.array_equal(g_xt, g_tx)  # summand is swap-invariant, exact
    M = kern.eval_matrix(x, x)
    assert np.abs(M - M.T).max() <= 1e-15


def test_kernel_matches_closed_form():
    kern = build_kernel(UNIT, 0.5 * np.pi**2, 4096)
    pts = np.linspace(0.05, 0.95, 19)
    worst = 0.0
    for x in pts:
        for t in pts:
            if abs(x - t) < 0.1:
                continue
            ref = closed_form_1d(0.5 * np.pi**2, x, t)
            got = kern.eval(np.array([[x]]), np.array([[t]]))
            worst = max(worst, abs(got - ref))
    assert worst <= 2 / (np.pi**2 * 4096) + 1e-10


def test_verify_kernel_bounds_1d():
    kern = build_kernel(UNIT, 0.0, 64)
    rep = verify_kernel_bounds(kern, 129)
    assert rep.symmetric and rep.symmetry_defect <= 1e-14
    assert rep.positive and rep.min_value > -1e-8
    assert rep.inf_ratio > 0.0
    assert np.isfinite(rep.sup_ratio)
    assert rep.recheck_ok
    assert rep.M1_growth is None  # annotation only appears beyond 1D
    d = rep.as_dict()
    assert set(d) >= {"min_value", "symmetry_defect", "sup_ratio", "inf_ratio", "recheck_ok"}


def test_kernel_bounds_2d_divergence_annotation():
    kern = build_kernel(SQUARE, 0.0, 16)
    rep = verify_kernel_bounds(kern, 33)
    assert rep.M1_growth is not None
    vals = [rep.M1_growth[K] for K in (16, 32, 64)]
    assert vals[0] < vals[1] < vals[2]
    growth = diagonal_growth(SQUARE, 0.0, 33)
    assert growth == rep.M1_growth


def test_diagonal_growth_saturates_in_1d():
    g = diagonal_growth(UNIT, 0.0, 65, orders=(16, 32, 64))
    # 1D diagonal converges, tail is O(1/K)
    assert abs(g[64] - g[32]) < abs(g[32] - g[16])
    assert abs(g[64] - g[32]) < 2e-3


def test_estimate_constants_unit_interval():
    k1 = build_kernel(UNIT, 0.0, 64)
    rep = estimate_constants(k1, k1)
    assert rep.m1 == pytest.approx(1.0, abs=1e-12)  # 2 sin^2(pi/4) at the corner
    assert rep.C0 == pytest.approx(0.46213533834949533, rel=1e-9)
    assert rep.M1 == pytest.approx(0.248416985298134, rel=1e-9)
    assert rep.sigma == pytest.approx(0.00178608383365678, rel=1e-9)
    assert rep.delta1 > 0 and rep.delta2 > 0
    assert rep.C == rep.C1 * rep.C2
    d = rep.as_dict()
    assert set(d) == {"C", "delta", "M1", "C0", "m1", "m2", "sigma", "K", "omega0"}


def test_estimate_constants_shifted_pair():
    k1 = build_kernel(UNIT, -3.0, 64)
    k2 = build_kernel(UNIT, 2.0, 64)
    rep = estimate_constants(k1, k2)
    assert rep.sigma > 0


def test_constants_degenerate_on_square():
    k1 = build_kernel(SQUARE, 0.0, 32)
    with pytest.raises(ConstantDegenerateError) as exc:
        estimate_constants(k1, k1)
    assert "delta" in str(exc.value)


def test_omega0_fraction_changes_m1():
    k1 = build_kernel(UNIT, 0.0, 64)
    wide = estimate_constants(k1, k1, SubBox.centered(UNIT, 0.8))
    narrow = estimate_constants(k1, k1, SubBox.centered(UNIT, 0.2))
    # phi_1^2 dips lower near the boundary, so the wider box has smaller m1
    assert wide.m1 < narrow.m1
