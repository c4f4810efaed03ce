import numpy as np
import pytest

from lenslab.carleson import (
    DyadicWindow,
    PseudoWindow,
    RhoProfile,
    dyadic_measures_lens,
    dyadic_measures_spread,
    lens_modulus_cutoff,
    lens_window_intervals,
    luecking_sum,
    modulus_integral,
    pullback_window_lens,
    rho_area_profile,
    rho_profile,
    spread_window_monte_carlo,
    window_occupation_spread,
)
from lenslab.errors import InterpolationError, ParameterError
from lenslab.maps import LensMap, ReducedLensMap, SpreadLensMap


def brute_force_mass(theta, w, lo, hi, count=2_000_001):
    # oracle: count boundary samples of the closed form falling in the window
    t = np.linspace(lo, hi, count)
    inside = w.contains(LensMap(theta).boundary(t))
    return np.count_nonzero(inside) * (hi - lo) / (count - 1) / (2 * np.pi)


@pytest.mark.parametrize("theta,eta,h", [(0.5, 0.0, 0.1), (0.3, 0.02, 0.05), (0.7, 0.1, 0.2),
                                         (0.5, np.pi, 0.1)])
def test_window_mass_against_sampling(theta, eta, h):
    w = PseudoWindow(eta, h)
    arcs = lens_window_intervals(theta, w)
    lo = max(min(a for a, _ in arcs) - 1e-3, -np.pi)
    hi = min(max(b for _, b in arcs) + 1e-3, np.pi)
    exact = pullback_window_lens(theta, w)
    assert exact == pytest.approx(brute_force_mass(theta, w, lo, hi), rel=2e-3)


def test_window_masses_at_plus_and_minus_one_agree():
    a = pullback_window_lens(0.4, PseudoWindow(0.0, 0.07))
    b = pullback_window_lens(0.4, PseudoWindow(np.pi, 0.07))
    assert a == pytest.approx(b, rel=1e-12)


def test_window_arcs_are_disjoint_and_inside():
    arcs = lens_window_intervals(0.5, PseudoWindow(0.03, 0.08))
    for (a, b), (c, _) in zip(arcs[:-1], arcs[1:]):
        assert b < c
    for a, b in arcs:
        mid = LensMap(0.5).boundary(np.linspace(a, b, 7)[1:-1])
        assert np.all(np.abs(mid - np.exp(0.03j)) <= 0.08 + 1e-12)


def test_large_window_covers_circle():
    assert pullback_window_lens(0.5, PseudoWindow(0.0, 2.5)) == pytest.approx(1.0)


def test_modulus_cutoff_inverts_modulus():
    theta, d = 0.4, 1e-5
    s = lens_modulus_cutoff(theta, d)
    q = LensMap(theta).one_minus_modulus_sq(s)
    assert 1 - np.sqrt(1 - q) == pytest.approx(d, rel=1e-9)


@pytest.mark.parametrize("theta", [0.3, 0.6])
def test_lens_dyadic_masses_add_up(theta):
    n = 7
    mu = dyadic_measures_lens(theta, n)
    annulus = 4 * lens_modulus_cutoff(theta, 2.0 ** -n) / (2 * np.pi)
    assert mu.sum() == pytest.approx(annulus, rel=1e-12)
    assert np.all(mu >= 0)


def test_spread_dyadic_masses_add_up_and_level_out():
    theta, n = 0.5, 7
    mu = dyadic_measures_spread(theta, n)
    annulus = 4 * lens_modulus_cutoff(theta, 2.0 ** -n) / (2 * np.pi)
    assert mu.sum() == pytest.approx(annulus, rel=1e-10)
    scaled = mu * 2.0 ** (3 * n)
    assert scaled.max() / scaled.min() < 1.1


def test_window_occupation_consistent():
    occ = window_occupation_spread(0.5, DyadicWindow(6, 3))
    explicit = np.sum(np.diff(occ.intervals, axis=1)) / (2 * np.pi)
    assert occ.measure == pytest.approx(explicit + occ.tail_measure, rel=1e-10)
    assert occ.measure == pytest.approx(dyadic_measures_spread(0.5, 6)[3], rel=1e-12)


def test_spread_window_against_monte_carlo():
    windows = [DyadicWindow(5, j) for j in (0, 7, 20)]
    mc, se = spread_window_monte_carlo(0.5, windows, samples=2 * 10 ** 6, seed=3)
    exact = np.array([window_occupation_spread(0.5, w).measure for w in windows])
    assert np.all(np.abs(mc - exact) < 5 * se)


@pytest.mark.parametrize("theta", [0.3, 0.5, 0.7])
def test_lens_profile_slope(theta):
    prof = rho_profile(LensMap(theta))
    assert prof.slope() == pytest.approx(1 / theta, abs=0.1)
    assert np.all(prof.info["scan_ratio"] < 2)


def test_profile_interpolation_and_ranges():
    prof = rho_profile(LensMap(0.5), [2.0 ** -6, 2.0 ** -4, 4.0])
    assert prof.at(2.0 ** -5) > 0
    assert prof.rho[-1] == 1.0
    with pytest.raises(InterpolationError):
        prof.at(1e-6)
    with pytest.raises(ParameterError):
        rho_profile(ReducedLensMap(0.5))
    with pytest.raises(ParameterError):
        rho_profile(SpreadLensMap(0.5), [0.3])


def test_spread_profile_slope():
    prof = rho_profile(SpreadLensMap(0.5), 2.0 ** -np.arange(4, 13))
    assert prof.slope() == pytest.approx(3.0, abs=0.15)


def test_area_profile_slope_and_reproducibility():
    h = 2.0 ** -np.arange(4, 11)
    a = rho_area_profile(LensMap(0.5), h, seed=4)
    b = rho_area_profile(LensMap(0.5), h, seed=4)
    assert np.array_equal(a.rho, b.rho)
    assert a.slope() == pytest.approx(4.0, abs=0.2)
    assert np.all(a.halfwidth < 0.1 * a.rho)
    assert rho_area_profile(LensMap(0.5), [2.0]).rho[0] == 1.0


def test_luecking_sums():
    s_conv = luecking_sum(LensMap(0.5), 2.0, 12)
    assert np.all(np.diff(s_conv) > 0)
    inc = np.diff(s_conv)
    assert inc[-1] / inc[-2] < 1
    s_div = luecking_sum(SpreadLensMap(0.5), 0.8, 10)
    assert s_div[-1] / s_div[-2] > 1.1
    with pytest.raises(ParameterError):
        luecking_sum(LensMap(0.5), -1.0, 5)


def test_modulus_integral_finite_below_threshold():
    # int dt / (1 - |phi*|) converges when theta < 1 at power 1
    value = modulus_integral(LensMap(0.5), power=1.0)
    assert np.isfinite(value) and value > 1


def test_rho_profile_dataclass():
    prof = RhoProfile(h=np.array([0.1, 0.01]), rho=np.array([1e-2, 1e-4]), method="x", map_id="y")
    assert prof.slope() == pytest.approx(2.0)
    assert prof.samples == [(0.1, 0.01), (0.01, 0.0001)]


@pytest.mark.parametrize("p", [0.8, 1.0])
def test_spread_luecking_terms_grow_like_power_of_two(p):
    # below the cut p = 1 the level terms behave like 2^{n(1 - p)}, so the
    # partial-sum ratio tends to 2^{1-p} rather than staying far above it
    S = luecking_sum(SpreadLensMap(0.5), p, 14)
    terms = np.diff(np.concatenate([[0.0], S]))
    growth = terms[-1] / terms[-2]
    assert growth == pytest.approx(2.0 ** (1 - p), rel=0.02)


def test_profiles_total_mass():
    # |z - xi| < 2 contains the whole disk; smaller windows carry at most mass 1
    circle = rho_profile(LensMap(0.5), [2.0, 1.0, 0.25])
    area = rho_area_profile(LensMap(0.5), [2.0, 1.0], samples=10 ** 5)
    assert circle.rho[-1] == pytest.approx(1.0, abs=1e-12)
    assert area.rho[-1] == pytest.approx(1.0, abs=1e-12)
    assert np.all(circle.rho <= 1 + 1e-12) and np.all(np.diff(circle.rho) > 0)
