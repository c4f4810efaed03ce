import mpmath
import numpy as np
import pytest

from lenslab.carleson import rho_area_profile, rho_profile
from lenslab.errors import BracketError, DomainError, InterpolationError, ParameterError
from lenslab.maps import LensMap
from lenslab.orlicz import (
    LogReal,
    chi_square_composed,
    collinearity_check,
    custom_piecewise,
    d_criterion,
    delta2_diagnostics,
    e_criterion,
    luxemburg_norm,
    make_witness,
    power_p,
    psi_breakpoints,
    psi_studia,
    witness_report,
)


@pytest.fixture(scope="module")
def psi():
    return psi_studia()


# -- LogReal ------------------------------------------------------------------

def test_logreal_arithmetic():
    a, b = LogReal.of(3.0), LogReal.of(5.0)
    assert float(a + b) == pytest.approx(8.0, rel=1e-15)
    assert float(b - a) == pytest.approx(2.0, rel=1e-15)
    assert float(a * b) == pytest.approx(15.0, rel=1e-15)
    assert float(b / a) == pytest.approx(5 / 3, rel=1e-15)
    assert float(a ** 3) == pytest.approx(27.0, rel=1e-15)
    assert float(LogReal.of(16).sqrt()) == pytest.approx(4.0, rel=1e-15)
    assert a < b and LogReal.zero() < a
    assert (a - a).is_zero and float(LogReal.zero() + a) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        a - b
    with pytest.raises(DomainError):
        LogReal.of(-1)


def test_logreal_range_beyond_doubles():
    big = LogReal(mpmath.mpf(10) ** 6)  # e^(1e6)
    assert float(big) == np.inf
    assert float((big * big).log_value) == pytest.approx(2e6)
    assert float((big / big)) == pytest.approx(1.0)
    assert float(1 / big) == 0.0


# -- breakpoints and psi ------------------------------------------------------

def test_first_breakpoints_exact():
    xs = psi_breakpoints(3)
    assert [float(x) for x in xs] == [4.0, 56.0, 175504.0]
    x6 = psi_breakpoints(6)[-1]
    assert 140 < x6.log10 < 142


def test_log_recursion_matches_exact_integers():
    xs = psi_breakpoints(7)
    exact = [4]
    for _ in range(6):
        exact.append(exact[-1] ** 3 - 2 * exact[-1])
    with mpmath.workprec(300):
        for x, e in zip(xs, exact):
            assert abs(x.log_value - mpmath.log(e)) < mpmath.mpf(2) ** -200


def test_psi_values(psi):
    assert float(psi(2)) == 8.0
    assert float(psi(4)) == 16.0
    assert float(psi(8)) == 256.0
    assert float(psi(56)) == 56.0 ** 2
    assert np.array_equal(psi.evaluate(np.array([0.0, 2.0, 4.0, 56.0])), [0, 8, 16, 3136])


def test_psi_inverse_round_trip(psi):
    for x in [1e-3, 1.0, 3.0, 4.0, 30.0, 1e4, 1e20, 1e100, 1e300]:
        assert float(psi.inverse(psi(x))) == pytest.approx(x, rel=1e-12)
    huge = psi_breakpoints(9)[-1] * 7
    assert abs(psi.inverse(psi(huge)).log_value - huge.log_value) < 1e-60
    # the y-side round trip is well conditioned while slope * x / y stays moderate
    for y in [1e-3, 1.0, 7.0, 16.0, 1e3, 1e8, 1e25]:
        assert float(psi(psi.inverse(y))) == pytest.approx(y, rel=1e-12)
    x = np.geomspace(1e-3, 1e140, 60)
    assert psi.inverse_float(np.inf) == np.inf
    assert np.allclose(psi.inverse_float(psi.evaluate(x)), x, rtol=1e-12)
    y = np.geomspace(1e-3, 1e10, 60)
    assert np.allclose(psi.evaluate(psi.inverse_float(y)), y, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_breakpoint_collinearity_linear(n):
    assert collinearity_check(n, "linear") < 1e-12


@pytest.mark.parametrize("n", [5, 8, 10])
def test_breakpoint_collinearity_log(n):
    assert collinearity_check(n, "log") < 1e-12


def test_collinearity_linear_domain_limit():
    with pytest.raises(ParameterError):
        collinearity_check(5, "linear")


def test_psi_sandwich_and_convexity(psi):
    x = np.geomspace(4, 1e100, 400)
    v = psi.evaluate(x)
    assert np.all(v >= x ** 2 * (1 - 1e-12))
    assert np.all(np.log(v) <= 4 * np.log(x) + 1e-12)
    grid = np.linspace(0, 300, 3001)
    vals = psi.evaluate(grid)
    second = np.diff(vals, 2)
    assert np.all(second >= -1e-13 * vals[2:])


@pytest.mark.parametrize("K", [2.0, 10.0, 100.0])
def test_inverse_concavity(psi, K):
    # psi^{-1}(K y) <= K psi^{-1}(y) follows from concavity with psi^{-1}(0) = 0
    y = np.geomspace(1e-4, 1e50, 200)
    assert np.all(psi.inverse_float(K * y) <= K * psi.inverse_float(y) * (1 + 1e-12))


def test_convexity_rejected():
    with pytest.raises(ParameterError):
        custom_piecewise([(1, 2), (2, 3)])
    with pytest.raises(ParameterError):
        power_p(0.5)


# -- chi and Delta_2 ----------------------------------------------------------

def test_chi_identity_at_breakpoints(psi):
    chi = chi_square_composed(psi)
    root2 = LogReal.of(2).sqrt()
    for x in psi_breakpoints(10):
        u = x.sqrt()
        lhs, rhs = chi(u * root2), chi(u) ** 2
        assert abs(lhs.log_value - rhs.log_value) < mpmath.mpf(2) ** -200
        assert abs(rhs.log_value - 4 * x.log_value) < mpmath.mpf(2) ** -200


def test_delta2_ratio_equals_breakpoint(psi):
    xs = psi_breakpoints(10)
    for row in delta2_diagnostics(psi, xs):
        assert abs(row.ratio.log_value - 2 * row.x.log_value) < mpmath.mpf(2) ** -200
        assert row.conjugate_witness is None


def test_chi_doubling_flag(psi):
    chi = chi_square_composed(psi)
    grid = [LogReal.of(v) for v in np.geomspace(0.1, 1e120, 100)]
    rows = delta2_diagnostics(chi, grid)
    assert all(row.conjugate_witness for row in rows)


def test_power_two_ratio_constant():
    rows = delta2_diagnostics(power_p(2), [LogReal.of(v) for v in (0.5, 3.0, 1e30)])
    assert all(abs(float(row.ratio) - 4) < 1e-14 for row in rows)


# -- Luxemburg norm -----------------------------------------------------------

def test_luxemburg_constant_linear():
    w = np.full(10, 0.1)
    assert luxemburg_norm(np.full(10, 2.5), power_p(1), w) == pytest.approx(2.5, rel=1e-14)


@pytest.mark.parametrize("m", [0.1, 0.25, 0.5])
def test_luxemburg_indicator(psi, m):
    # |f| = 1 on a set of mass m gives 1 / psi^{-1}(1/m)
    f = np.array([1.0, 0.0])
    w = np.array([m, 1 - m])
    expected = 1 / float(psi.inverse(1 / m))
    assert luxemburg_norm(f, psi, w) == pytest.approx(expected, rel=1e-13)


def test_luxemburg_lp_closed_form():
    rng = np.random.default_rng(3)
    f = rng.random(50)
    w = rng.dirichlet(np.ones(50))
    for p in (1.5, 2.0, 3.0):
        assert luxemburg_norm(f, power_p(p), w) == pytest.approx((w @ f ** p) ** (1 / p), rel=1e-13)


def test_luxemburg_edge_cases(psi):
    w = np.full(4, 0.25)
    assert luxemburg_norm(np.zeros(4), psi, w) == 0.0
    pairs = np.column_stack([np.arange(4.0), np.full(4, 3.0)])
    assert luxemburg_norm(pairs, power_p(1), w) == pytest.approx(3.0)
    with pytest.raises(ParameterError):
        luxemburg_norm(np.ones(4), psi, np.full(4, 0.3))
    with pytest.raises(ParameterError):
        luxemburg_norm(np.ones(3), psi, w)
    with pytest.raises(BracketError):
        luxemburg_norm(np.array([1.0, np.inf, 0, 0]), psi, w)


# -- witnesses ------------------------------------------------------------------

def test_witness_construction(psi):
    f1 = make_witness("f_n_family", 1, psi)
    assert float(f1.u) == pytest.approx(2.0)
    assert float(f1.one_minus_r) == pytest.approx(1 / float(chi_square_composed(psi)(2.0)))
    assert f1.modulus(0.0 + 0j) == pytest.approx(2.0)
    with pytest.raises(ParameterError):
        make_witness("g_n", 1, psi)


def test_f_witness_rows():
    rows = witness_report("f_n_family", range(1, 5))
    for row in rows:
        assert row["identity_residual"] < 1e-60 and row["x4_residual"] < 1e-60
        assert row["K_n"] >= 0.01
    ratios = [row["window_mass_ratio"] for row in rows]
    assert max(ratios) / min(ratios) < 1.1


def test_q_witness_rows():
    for row in witness_report("q_n_family", range(1, 5)):
        assert row["boundary_sup"] == pytest.approx(1.0, abs=1e-12)
        assert row["scaled_norm"] >= 1
        assert row["integral"] <= row["ratio"]


# -- D and E criteria -----------------------------------------------------------

@pytest.fixture(scope="module")
def profiles():
    xf = [float(x) for x in psi_breakpoints(4)]
    circle = rho_profile(LensMap(0.5), [1 / x ** 2 for x in xf])
    area = rho_area_profile(LensMap(0.5), [1 / x for x in xf], samples=10 ** 5, seed=9)
    return xf, circle, area


def test_d_criterion_bounded_below(psi, profiles):
    xf, circle, _ = profiles
    D = np.array([d_criterion(psi, circle, 1 / x ** 2) for x in xf])
    assert D[0] >= 0.1
    assert np.all(D / D[0] >= 1 / 3)


def test_e_criterion_bounded_below(psi, profiles):
    xf, _, area = profiles
    E = np.array([e_criterion(psi, area, 1 / x) for x in xf])
    assert E[0] > 0 and np.all(E / E[0] >= 1 / 3)


def test_d_criterion_decays_for_power_control(profiles):
    # a Delta_2 control function gives no floor: D(h) -> 0 along the same windows
    xf, circle, _ = profiles
    D = [d_criterion(power_p(2), circle, 1 / x ** 2) for x in xf]
    assert all(b < a for a, b in zip(D[:-1], D[1:]))
    assert D[-1] < 1e-3 * D[0]


def test_d_criterion_outside_profile(psi, profiles):
    _, circle, _ = profiles
    with pytest.raises(InterpolationError):
        d_criterion(psi, circle, 0.9)
