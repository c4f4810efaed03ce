import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lenslab.errors import (
    DomainError,
    EssentialSingularityError,
    ParameterError,
    PoleError,
    UndefinedBoundaryValueError,
)
from lenslab.maps import (
    ConstantMap,
    LensMap,
    ReducedLensMap,
    ScaledIdentity,
    SpreadLensMap,
    cayley,
    cayley_inv,
    lens_boundary,
    lens_eval,
    lens_via_cayley,
    power_map,
    semigroup_compose_check,
    singular_inner_eval,
    spread_boundary,
    wrap_angle,
)

disk_points = st.builds(
    lambda r, a: r * np.exp(1j * a),
    st.floats(0.0, 0.999), st.floats(-np.pi, np.pi))
thetas = st.floats(0.05, 0.95)


def grid(count=500, seed=1):
    rng = np.random.default_rng(seed)
    return np.sqrt(rng.random(count)) * 0.999 * np.exp(1j * rng.uniform(-np.pi, np.pi, count))


def test_cayley_examples():
    assert cayley(0) == 1
    assert cayley_inv(1) == 0
    assert abs(cayley(1j) - (-1j)) < 1e-15
    with pytest.raises(PoleError):
        cayley(-1)
    with pytest.raises(DomainError):
        cayley_inv(-0.5)


def test_power_map_zero_and_domain():
    assert power_map(0.5, 0) == 0
    assert abs(power_map(0.5, 4) - 2) < 1e-15
    with pytest.raises(DomainError):
        power_map(0.5, -1 + 0j)


def test_lens_fixed_points_and_symmetry():
    assert lens_eval(0.5, 0) == 0
    z = grid()
    v = lens_eval(0.3, z)
    assert np.max(np.abs(lens_eval(0.3, np.conj(z)) - np.conj(v))) < 1e-14
    assert np.max(np.abs(lens_eval(0.3, -z) + v)) < 1e-14
    assert np.all(np.abs(v) < 1)


@given(disk_points, thetas)
@settings(max_examples=200, deadline=None)
def test_lens_two_routes_agree(z, theta):
    assert abs(lens_eval(theta, z) - lens_via_cayley(theta, z)) < 1e-12


def test_lens_rejects_boundary_and_bad_theta():
    with pytest.raises(DomainError):
        lens_eval(0.5, 1.0)
    with pytest.raises(ParameterError):
        LensMap(1.0)
    with pytest.raises(ParameterError):
        lens_eval(0.0, 0.2)


@pytest.mark.parametrize("t1,t2", [(0.5, 0.5), (0.3, 0.7), (0.9, 0.2)])
def test_semigroup_identity(t1, t2):
    assert semigroup_compose_check(t1, t2, grid(1000)) < 1e-12


def test_singular_inner():
    assert abs(singular_inner_eval(0) - np.exp(-1)) < 1e-15
    assert abs(abs(singular_inner_eval(np.exp(0.3j))) - 1) < 1e-14
    with pytest.raises(EssentialSingularityError):
        singular_inner_eval(1.0)


def test_wrap_angle_keeps_tiny_angles():
    assert wrap_angle(1e-30) == 1e-30
    assert wrap_angle(-1e-300) == -1e-300
    assert abs(wrap_angle(3 * np.pi) - np.pi) < 1e-15
    assert abs(wrap_angle(-np.pi) - np.pi) < 1e-15


@pytest.mark.parametrize("theta", [0.3, 0.5, 0.8])
def test_boundary_matches_radial_limit(theta):
    # oracle: interior evaluation at radius 1 - 1e-9
    t = np.linspace(-3.1, 3.1, 41)
    t = t[np.abs(t) > 1e-3]
    inner = lens_eval(theta, (1 - 1e-9) * np.exp(1j * t))
    dec = lens_boundary(theta, t)
    assert np.max(np.abs(dec.value - inner)) < 1e-6
    assert np.max(np.abs(LensMap(theta).boundary(t) - dec.value)) < 1e-12


def test_boundary_symmetries_and_contact():
    theta = 0.4
    t = np.linspace(0.01, 3.0, 50)
    g = LensMap(theta).boundary(t)
    assert np.max(np.abs(LensMap(theta).boundary(-t) - np.conj(g))) < 1e-13
    assert np.max(np.abs(LensMap(theta).boundary(np.pi - t) + np.conj(g))) < 1e-13
    assert abs(LensMap(theta).boundary(0.0) - 1) < 1e-15


def test_one_minus_modulus_is_cancellation_free():
    theta, t = 0.5, 1e-40
    q = LensMap(theta).one_minus_modulus_sq(t)
    tau = np.tan(t / 2) ** theta
    assert q == pytest.approx(4 * np.cos(theta * np.pi / 2) * tau, rel=1e-12)
    assert q > 0


def test_reduced_lens_map():
    phi = ReducedLensMap(0.5)
    z = grid(200)
    assert np.max(np.abs(phi(z) - lens_eval(0.5, (1 + z) / 2))) < 1e-13
    t = np.linspace(-3, 3, 31)
    q = phi.one_minus_modulus_sq(t)
    assert np.max(np.abs(q - (1 - np.abs(phi.boundary(t)) ** 2))) < 1e-12
    assert phi.singular_angles == (0.0,)


def test_spread_map_boundary():
    theta = 0.5
    t = np.array([-1.0, -0.2, 0.3, 2.0])
    z = (1 - 1e-10) * np.exp(1j * t)
    inner = SpreadLensMap(theta)(z)
    dec = spread_boundary(theta, t)
    assert np.max(np.abs(dec.value - inner)) < 1e-5
    assert np.max(np.abs(np.abs(dec.value) - np.abs(LensMap(theta).boundary(t)))) < 1e-14
    with pytest.raises(UndefinedBoundaryValueError):
        spread_boundary(theta, 0.0)


def test_spread_branch_and_delta():
    phi = SpreadLensMap(0.5)
    assert phi.delta == pytest.approx(np.pi / 2)
    s = np.geomspace(1e-6, 1.5, 40)
    beta = phi.branch_argument(s)
    assert np.all(np.diff(beta) < 0)
    assert np.max(np.abs(phi.branch_inverse(beta) - s) / s) < 1e-10
    # derivative against a centred difference
    h = 1e-6
    fd = (phi.branch_argument(0.7 + h) - phi.branch_argument(0.7 - h)) / (2 * h)
    assert phi.branch_derivative(0.7) == pytest.approx(fd, rel=1e-6)


def test_test_symbols():
    assert ScaledIdentity(0.5)(0.4) == pytest.approx(0.2)
    assert ConstantMap(0.3)(0.9) == pytest.approx(0.3)
    with pytest.raises(ParameterError):
        ConstantMap(1.0)
    with pytest.raises(ParameterError):
        ScaledIdentity(2.0)
