"""Symbols of composition operators: lens maps and their relatives.

The lens map of parameter ``theta`` is the conjugate of ``w -> w**theta`` under
the Cayley transform ``T(z) = (1 - z)/(1 + z)``.  Besides interior evaluation,
each symbol here knows its boundary values in a form that stays accurate near
the contact points with the unit circle, which is what every other module
needs.

All functions accept scalars or numpy arrays.  Symbol classes are frozen
dataclasses and hence safe to share between threads.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ConstructionDomainError,
    DomainError,
    EssentialSingularityError,
    ParameterError,
    PoleError,
    UndefinedBoundaryValueError,
)

__all__ = [
    "BoundaryDecomposition",
    "ConstantMap",
    "LensMap",
    "ReducedLensMap",
    "ScaledIdentity",
    "SchurMap",
    "SpreadLensMap",
    "cayley",
    "cayley_inv",
    "lens_boundary",
    "lens_eval",
    "lens_via_cayley",
    "power_map",
    "semigroup_compose_check",
    "singular_inner_eval",
    "spread_boundary",
    "wrap_angle",
]


def check_theta(theta):
    """Return ``theta`` as a float, raising :class:`ParameterError` unless 0 < theta < 1."""
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ParameterError(f"theta must lie in (0, 1), got {theta!r}")
    return theta


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _unwrap(value):
    """Turn 0-d arrays back into Python scalars."""
    if isinstance(value, np.ndarray) and value.ndim == 0:
        return value.item()
    return value


def wrap_angle(t):
    """Reduce angles to the interval (-pi, pi]."""
    t = np.asarray(t, dtype=float)
    inside = (t > -np.pi) & (t <= np.pi)  # left untouched so tiny angles keep their digits
    return _unwrap(np.where(inside, t, np.pi - np.mod(np.pi - t, 2 * np.pi)))


def _check_interior(z):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("points must lie in the open unit disk")


# ----------------------------------------------------------------------------
# Elementary maps


def cayley(z):
    """Cayley transform ``T(z) = (1 - z)/(1 + z)``, mapping the disk onto Re w > 0."""
    z = _as_complex(z)
    if np.any(z == -1):
        raise PoleError("the Cayley transform has a pole at z = -1")
    return _unwrap((1 - z) / (1 + z))


def cayley_inv(w):
    """Inverse Cayley transform.  ``T`` is an involution, so this is ``T`` again."""
    w = _as_complex(w)
    if np.any(w.real < 0):
        raise DomainError("inverse Cayley transform expects Re w >= 0")
    if np.any(w == -1):
        raise PoleError("the Cayley transform has a pole at w = -1")
    return _unwrap((1 - w) / (1 + w))


def power_map(theta, w):
    """Principal power ``w**theta`` on the closed right half-plane (0 maps to 0)."""
    theta = check_theta(theta)
    w = _as_complex(w)
    if np.any(w.real < 0):
        raise DomainError("power_map expects Re w >= 0")
    out = np.zeros_like(w)
    nz = w != 0
    out[nz] = np.exp(theta * np.log(w[nz]))
    return _unwrap(out)


def lens_eval(theta, z):
    """Evaluate the lens map at interior points.

    Uses the defining quotient of principal powers of ``1 + z`` and ``1 - z``;
    both bases have positive real part inside the disk, so the branch cut of
    the logarithm is never crossed.
    """
    theta = check_theta(theta)
    z = _as_complex(z)
    _check_interior(z)
    p = np.power(1 + z, theta)
    m = np.power(1 - z, theta)
    return _unwrap((p - m) / (p + m))


def lens_via_cayley(theta, z):
    """Evaluate the lens map as ``T^{-1}(T(z)**theta)``; an independent route."""
    z = _as_complex(z)
    _check_interior(z)
    return cayley_inv(power_map(theta, cayley(z)))


def semigroup_compose_check(theta1, theta2, grid):
    """Max deviation of ``phi_theta1(phi_theta2(z))`` from ``phi_{theta1*theta2}(z)``."""
    z = _as_complex(grid).ravel()
    if z.size == 0:
        raise ParameterError("grid must be nonempty")
    lhs = np.asarray(lens_eval(theta1, lens_eval(theta2, z)))
    rhs = np.asarray(lens_eval(check_theta(theta1) * check_theta(theta2), z))
    return float(np.max(np.abs(lhs - rhs)))


def singular_inner_eval(z):
    """Singular inner function ``M(z) = exp(-(1 + z)/(1 - z))`` on the closed disk minus 1."""
    z = _as_complex(z)
    if np.any(z == 1):
        raise EssentialSingularityError("M has an essential singularity at z = 1")
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise DomainError("M is evaluated on the closed unit disk only")
    return _unwrap(np.exp(-(1 + z) / (1 - z)))


# ----------------------------------------------------------------------------
# Boundary values


@dataclass(frozen=True)
class BoundaryDecomposition:
    """Polar boundary data ``phi(e^{it}) = modulus * exp(i * argument)``.

    ``one_minus_modulus`` is computed without cancellation and should be used
    instead of ``1 - modulus`` whenever the modulus is close to 1.  For the
    spread map ``argument`` is the continuous (unwrapped) argument.
    """

    t: np.ndarray
    modulus: np.ndarray
    argument: np.ndarray
    one_minus_modulus: np.ndarray

    @property
    def value(self):
        return _unwrap(self.modulus * np.exp(1j * np.asarray(self.argument)))

    @property
    def reduced_argument(self):
        """Argument reduced to (-pi, pi]."""
        return wrap_angle(self.argument)


def _lens_quarter(theta, s):
    """Closed-form boundary data of the lens map for ``s`` in [0, pi/2].

    Returns ``tau, 1 - |gamma|^2, 1 - |gamma|, A`` where ``gamma(s) =
    (1 - c tau)/(1 + c tau)``, ``c = exp(-i theta pi/2)`` and
    ``tau = tan(s/2)**theta``.
    """
    a = np.cos(theta * np.pi / 2)
    sn = np.sin(theta * np.pi / 2)
    tau = np.tan(s / 2) ** theta
    den = 1 + 2 * a * tau + tau * tau
    q = 4 * a * tau / den
    one_minus = q / (1 + np.sqrt(1 - q))
    arg = np.arctan2(2 * sn * tau, 1 - tau * tau)
    return tau, q, one_minus, arg


def _lens_polar(theta, t):
    t = np.asarray(wrap_angle(t), dtype=float)
    sign = np.where(t < 0, -1.0, 1.0)
    s = np.abs(t)
    flip = s > np.pi / 2
    s = np.where(flip, np.pi - s, s)
    _, _, one_minus, arg = _lens_quarter(theta, s)
    arg = np.where(flip, np.pi - arg, arg) * sign
    return t, one_minus, arg


def lens_boundary(theta, t):
    """Boundary decomposition of the lens map at angles ``t``.

    The closed form on [0, pi/2] is extended with ``gamma(-t) = conj(gamma(t))``
    and ``gamma(t + pi) = -gamma(t)``.
    """
    theta = check_theta(theta)
    t, one_minus, arg = _lens_polar(theta, t)
    return BoundaryDecomposition(
        t=_unwrap(t), modulus=_unwrap(1 - one_minus), argument=_unwrap(arg),
        one_minus_modulus=_unwrap(one_minus),
    )


def spread_boundary(theta, t, reduce=False):
    """Boundary decomposition of the spread map ``phi_theta(z) M(z^2)``.

    On the circle ``M(e^{2it}) = exp(-i cot t)``, so the modulus is the lens
    modulus and the argument is ``A(t) - cot(t)``.  With ``reduce=True`` the
    argument is reduced to (-pi, pi].
    """
    theta = check_theta(theta)
    t, one_minus, arg = _lens_polar(theta, t)
    if np.any((t == 0) | (t == np.pi)):
        raise UndefinedBoundaryValueError(
            "the spread map has no boundary value at t = 0 or t = pi")
    arg = arg - 1 / np.tan(t)
    if reduce:
        arg = np.asarray(wrap_angle(arg))
    return BoundaryDecomposition(
        t=_unwrap(t), modulus=_unwrap(1 - one_minus), argument=_unwrap(arg),
        one_minus_modulus=_unwrap(one_minus),
    )


# ----------------------------------------------------------------------------
# Symbol classes


class SchurMap:
    """Common interface of the analytic self-maps used as symbols.

    Subclasses provide ``__call__`` (interior values), ``boundary`` (boundary
    values at angles ``t``) and ``one_minus_modulus_sq`` (``1 - |phi*(e^{it})|^2``
    computed stably).  ``singular_angles`` lists the angles where the boundary
    touches the circle.
    """

    singular_angles = ()

    @property
    def map_id(self):
        raise NotImplementedError

    def __call__(self, z):
        raise NotImplementedError

    def boundary(self, t):
        raise NotImplementedError

    def one_minus_modulus_sq(self, t):
        return 1 - np.abs(np.asarray(self.boundary(t))) ** 2


@dataclass(frozen=True)
class LensMap(SchurMap):
    """Lens map ``phi_theta``."""

    theta: float

    singular_angles = (0.0, np.pi)

    def __post_init__(self):
        check_theta(self.theta)

    @property
    def map_id(self):
        return f"lens(theta={self.theta!r})"

    def __call__(self, z):
        return lens_eval(self.theta, z)

    def decompose(self, t):
        return lens_boundary(self.theta, t)

    def boundary(self, t):
        return self.decompose(t).value

    def cayley_boundary(self, t):
        """``T(gamma(t)) = |tan(t/2)|**theta * exp(-i theta pi/2 sign t)``."""
        t = np.asarray(t, dtype=float)
        return np.abs(np.tan(t / 2)) ** self.theta * np.exp(
            -1j * np.sign(t) * self.theta * np.pi / 2)

    def one_minus_modulus_sq(self, t):
        t, one_minus, _ = _lens_polar(self.theta, t)
        return one_minus * (2 - one_minus)


@dataclass(frozen=True)
class ReducedLensMap(SchurMap):
    """Reduced lens map ``z -> phi_theta((1 + z)/2)``; touches the circle only at 1."""

    theta: float

    singular_angles = (0.0,)

    def __post_init__(self):
        check_theta(self.theta)

    @property
    def map_id(self):
        return f"reduced_lens(theta={self.theta!r})"

    def __call__(self, z):
        z = _as_complex(z)
        _check_interior(z)
        return lens_eval(self.theta, (1 + z) / 2)

    def cayley_boundary(self, t):
        """``T(phi(e^{it}))``, computed from ``1 - e^{it} = -2i sin(t/2) e^{it/2}``."""
        t = np.asarray(t, dtype=float)
        e = np.exp(1j * t)
        inner = -2j * np.sin(t / 2) * np.exp(0.5j * t) / (3 + e)
        return np.power(inner, self.theta)

    def boundary(self, t):
        w = self.cayley_boundary(t)
        return _unwrap((1 - w) / (1 + w))

    def one_minus_modulus_sq(self, t):
        w = self.cayley_boundary(t)
        return 4 * w.real / np.abs(1 + w) ** 2


@dataclass(frozen=True)
class SpreadLensMap(SchurMap):
    """Spread lens map ``phi_theta(z) M(z^2)``.

    Same boundary modulus as the lens map, but the boundary argument winds
    infinitely often around the circle as ``t -> 0`` or ``t -> pi``.  Near
    ``t = 0^-`` it is convenient to write ``t = -s`` with ``s`` in (0, pi/2];
    the argument is then ``beta(s) = cot(s) - A(s)``, a decreasing function
    of ``s`` exposed through :meth:`branch_argument` and inverted by
    :meth:`branch_inverse`.
    """

    theta: float

    singular_angles = (0.0, np.pi)

    def __post_init__(self):
        check_theta(self.theta)

    @property
    def map_id(self):
        return f"spread_lens(theta={self.theta!r})"

    def __call__(self, z):
        z = _as_complex(z)
        _check_interior(z)
        return _unwrap(np.asarray(lens_eval(self.theta, z)) * singular_inner_eval(z * z))

    def decompose(self, t, reduce=False):
        return spread_boundary(self.theta, t, reduce=reduce)

    def boundary(self, t):
        return self.decompose(t).value

    def one_minus_modulus_sq(self, t):
        return LensMap(self.theta).one_minus_modulus_sq(t)

    # -- the branch t = -s, s in (0, pi/2] -------------------------------------

    def lens_argument(self, s):
        """Lens argument ``A(s)`` for ``s`` in [0, pi/2]."""
        return _lens_quarter(self.theta, np.asarray(s, dtype=float))[3]

    def lens_argument_derivative(self, s):
        s = np.asarray(s, dtype=float)
        th = self.theta
        sn = np.sin(th * np.pi / 2)
        tau = np.tan(s / 2) ** th
        num = 2 * sn * th * tau * (1 + tau * tau)
        den = np.sin(s) * ((1 - tau * tau) ** 2 + 4 * sn * sn * tau * tau)
        return num / den

    def branch_argument(self, s):
        """``beta(s) = B(-s) = cot(s) - A(s)``; decreasing on the branch."""
        s = np.asarray(s, dtype=float)
        return 1 / np.tan(s) - self.lens_argument(s)

    def branch_derivative(self, s):
        s = np.asarray(s, dtype=float)
        return -1 / np.sin(s) ** 2 - self.lens_argument_derivative(s)

    @cached_property
    def delta(self):
        """Half-length of the interval [-delta, 0) on which B is increasing.

        Found by scanning the sign of ``B'`` on a dyadic mesh refined by a
        uniform one; ``pi/2`` means the whole quarter qualifies.
        """
        mesh = np.concatenate([
            (np.pi / 2) * 2.0 ** -np.arange(0, 80),
            np.linspace(np.pi / 2, 0, 4000, endpoint=False)[1:],
        ])
        mesh = np.sort(mesh)
        bad = np.nonzero(self.branch_derivative(mesh) >= 0)[0]
        if bad.size == 0:
            return float(np.pi / 2)
        if bad[0] == 0:
            raise ConstructionDomainError("B is not increasing near t = 0")
        return float(mesh[bad[0] - 1])

    def branch_inverse(self, y, tol=4e-16, max_iter=100):
        """Solve ``beta(s) = y`` for ``s`` in (0, delta].

        Newton's method runs in ``u = 1/s``, in which ``beta`` is almost
        linear, safeguarded by bisection.  Values ``y <= beta(delta)`` return
        ``delta``.
        """
        y = np.asarray(y, dtype=float)
        lo = np.full(y.shape, 1 / self.delta)
        hi = np.full(y.shape, np.inf)
        u = np.maximum(y + self.lens_argument(np.arctan2(1.0, np.maximum(y, 0))), lo)
        for _ in range(max_iter):
            s = 1 / u
            f = self.branch_argument(s) - y
            fp = -self.branch_derivative(s) * s * s
            lo = np.where(f <= 0, u, lo)
            hi = np.where(f >= 0, u, hi)
            new = u - f / fp
            out = (new <= lo) | (new >= hi) | ~np.isfinite(new)
            bis = np.where(np.isfinite(hi), 0.5 * (lo + hi), 2 * lo)
            new = np.where(out, bis, new)
            done = np.abs(new - u) <= tol * u
            u = new
            if np.all(done):
                break
        s = 1 / u
        return _unwrap(np.where(y <= self.branch_argument(self.delta), self.delta, s))


@dataclass(frozen=True)
class ScaledIdentity(SchurMap):
    """Test symbol ``z -> scale * z``; ``scale = 1`` gives the identity."""

    scale: complex = 1.0

    def __post_init__(self):
        if abs(self.scale) > 1:
            raise ParameterError("scale must satisfy |scale| <= 1")

    @property
    def map_id(self):
        return f"scaled_identity(scale={self.scale!r})"

    def __call__(self, z):
        z = _as_complex(z)
        _check_interior(z)
        return _unwrap(self.scale * z)

    def boundary(self, t):
        return _unwrap(self.scale * np.exp(1j * np.asarray(t, dtype=float)))

    def one_minus_modulus_sq(self, t):
        return np.full(np.shape(t), 1 - abs(self.scale) ** 2)


@dataclass(frozen=True)
class ConstantMap(SchurMap):
    """Test symbol ``z -> value`` with ``|value| < 1``."""

    value: complex = 0.0

    def __post_init__(self):
        if abs(self.value) >= 1:
            raise ParameterError("a constant symbol needs |value| < 1")

    @property
    def map_id(self):
        return f"constant(value={self.value!r})"

    def __call__(self, z):
        z = _as_complex(z)
        _check_interior(z)
        return _unwrap(np.full(z.shape, self.value, dtype=complex))

    def boundary(self, t):
        return _unwrap(np.full(np.shape(t), self.value, dtype=complex))

    def one_minus_modulus_sq(self, t):
        return np.full(np.shape(t), 1 - abs(self.value) ** 2)
