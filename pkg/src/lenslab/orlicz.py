"""Orlicz functions with astronomically spaced breakpoints, Luxemburg norms and
the witness families used for the non-compactness arguments.

The breakpoints ``x_1 = 4``, ``x_{n+1} = x_n^3 - 2 x_n`` grow triple
exponentially: ``x_6`` is about ``1e141`` and ``x_7`` overflows a double.  All
exact-looking identities are therefore carried out with :class:`LogReal`, a
positive number stored as its natural logarithm in a private 256-bit mpmath
context.  Float evaluation on arrays is kept for integrals, where arguments
never leave double range.
"""

from collections import namedtuple
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .carleson import PseudoWindow, pullback_window_lens
from .errors import BracketError, DomainError, NumericInstabilityError, ParameterError
from .maps import check_theta
from .quadrature import circle_rule, graded_rule

__all__ = [
    "Delta2Row",
    "LogReal",
    "OrliczFunction",
    "WitnessFamily",
    "area_rule",
    "chi_square_composed",
    "collinearity_check",
    "custom_piecewise",
    "d_criterion",
    "delta2_diagnostics",
    "e_criterion",
    "lens_pullback_rule",
    "luxemburg_norm",
    "make_witness",
    "power_p",
    "psi_breakpoints",
    "psi_eval",
    "psi_inv",
    "psi_studia",
    "witness_report",
]

_mp = mpmath.MPContext()
_mp.prec = 256

LOG_THRESHOLD = 6  # breakpoints from this index on come from the log recursion


@dataclass(frozen=True, order=True)
class LogReal:
    """A nonnegative real ``exp(log_value)``; zero is ``log_value = -inf``."""

    log_value: object

    def __post_init__(self):
        object.__setattr__(self, "log_value", _mp.mpf(self.log_value))

    @classmethod
    def of(cls, x):
        """Exact conversion of an int, float or LogReal."""
        if isinstance(x, LogReal):
            return x
        if x < 0:
            raise DomainError("LogReal represents nonnegative numbers only")
        if x == 0:
            return cls.zero()
        return cls(_mp.log(_mp.mpf(x)))

    @classmethod
    def zero(cls):
        return cls(_mp.ninf)

    @property
    def is_zero(self):
        return self.log_value == _mp.ninf

    @property
    def log10(self):
        return float(self.log_value / _mp.ln10)

    def __float__(self):
        if self.log_value > 709.78:
            return float("inf")
        return float(_mp.exp(self.log_value))

    def __mul__(self, other):
        return LogReal(self.log_value + LogReal.of(other).log_value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = LogReal.of(other)
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogReal")
        return LogReal(self.log_value - other.log_value)

    def __rtruediv__(self, other):
        return LogReal.of(other) / self

    def __pow__(self, p):
        if self.is_zero:
            return LogReal.zero() if p > 0 else LogReal.of(1)
        return LogReal(self.log_value * _mp.mpf(p))

    def sqrt(self):
        return self ** _mp.mpf(0.5)

    def __add__(self, other):
        other = LogReal.of(other)
        a, b = max(self.log_value, other.log_value), min(self.log_value, other.log_value)
        if b == _mp.ninf:
            return LogReal(a)
        return LogReal(a + _mp.log1p(_mp.exp(b - a)))

    __radd__ = __add__

    def __sub__(self, other):
        other = LogReal.of(other)
        a, b = self.log_value, other.log_value
        if b > a:
            raise DomainError("LogReal subtraction would go negative")
        if b == _mp.ninf:
            return LogReal(a)
        if b == a:
            return LogReal.zero()
        return LogReal(a + _mp.log(-_mp.expm1(b - a)))

    def __repr__(self):
        if self.is_zero:
            return "LogReal(0)"
        return f"LogReal(~1e{self.log10:.6g})"


def _exact_breakpoints(n_max):
    x = [4]
    while len(x) < n_max:
        x.append(x[-1] ** 3 - 2 * x[-1])
    return x


def _log_recursion(log_x, steps):
    out = []
    L = _mp.mpf(log_x)
    for _ in range(steps):
        L = 3 * L + _mp.log1p(-2 * _mp.exp(-2 * L))
        out.append(L)
    return out


def psi_breakpoints(n_max):
    """``[x_1, ..., x_{n_max}]`` as LogReal values.

    Indices below 6 are exact integers; from 6 on the recursion runs on
    ``L = log x`` as ``3 L + log1p(-2 exp(-2 L))``.  The log route is checked
    against the exact integers up to index 5 before it is trusted.
    """
    if int(n_max) != n_max or n_max < 1:
        raise ParameterError("n_max must be a positive integer")
    n_max = int(n_max)
    exact = _exact_breakpoints(min(n_max, LOG_THRESHOLD - 1))
    xs = [LogReal.of(v) for v in exact]
    if n_max >= LOG_THRESHOLD - 1:
        via_log = _log_recursion(_mp.log(4), LOG_THRESHOLD - 2)
        for k, L in enumerate(via_log, start=1):
            ref = xs[k].log_value
            rel = abs(_mp.expm1(L - ref))
            if rel > 1e-12:
                raise NumericInstabilityError(
                    f"log-domain recursion drifted at index {k + 1}", discrepancy=float(rel))
    if n_max >= LOG_THRESHOLD:
        tail = _log_recursion(xs[-1].log_value, n_max - len(xs))
        xs += [LogReal(L) for L in tail]
    return xs


# ----------------------------------------------------------------------------
# Orlicz functions


@dataclass(frozen=True)
class OrliczFunction:
    """Convex increasing ``phi`` with ``phi(0) = 0``.

    Piecewise kinds (``psi_studia``, ``custom_piecewise``) hold breakpoints
    ``(X_k, Y_k)`` with ``X_0 = Y_0 = 0`` as LogReal pairs and are affine in
    between; past the last breakpoint the last slope continues.  ``power_p``
    is ``x**p`` and ``chi_square_composed`` is ``base(x**2)``.
    """

    kind: str
    breakpoints: tuple = ()
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("psi_studia", "chi_square_composed", "power_p", "custom_piecewise"):
            raise ParameterError(f"unknown Orlicz kind {self.kind!r}")
        if self.breakpoints:
            X = [LogReal.of(x) for x, _ in self.breakpoints]
            Y = [LogReal.of(y) for _, y in self.breakpoints]
            if not (X[0].is_zero and Y[0].is_zero):
                raise ParameterError("piecewise Orlicz functions start at (0, 0)")
            slopes = []
            for k in range(len(X) - 1):
                if not (X[k] < X[k + 1] and Y[k] < Y[k + 1]):
                    raise ParameterError("breakpoints must be strictly increasing")
                slopes.append((Y[k + 1] - Y[k]) / (X[k + 1] - X[k]))
            if any(b < a for a, b in zip(slopes[:-1], slopes[1:])):
                raise ParameterError("breakpoint slopes must be nondecreasing (convexity)")
            object.__setattr__(self, "breakpoints", tuple(zip(X, Y)))
            object.__setattr__(self, "_slopes", tuple(slopes))
            xf = np.array([float(x) for x in X])
            yf = np.array([float(y) for y in Y])
            sf = np.array([float(s) for s in slopes])
            object.__setattr__(self, "_float", (xf, yf, sf))

    # -- log-domain evaluation ------------------------------------------------

    def __call__(self, x):
        x = LogReal.of(x)
        if self.kind == "power_p":
            return x ** self.params["p"]
        if self.kind == "chi_square_composed":
            return self.params["base"](x * x)
        if x.is_zero:
            return LogReal.zero()
        k = self._segment([bx for bx, _ in self.breakpoints], x)
        X, Y = self.breakpoints[k]
        if x == X:
            return Y
        return Y + self._slopes[min(k, len(self._slopes) - 1)] * (x - X)

    def inverse(self, y):
        y = LogReal.of(y)
        if self.kind == "power_p":
            return y ** (1 / _mp.mpf(self.params["p"]))
        if self.kind == "chi_square_composed":
            return self.params["base"].inverse(y).sqrt()
        if y.is_zero:
            return LogReal.zero()
        k = self._segment([by for _, by in self.breakpoints], y)
        X, Y = self.breakpoints[k]
        if y == Y:
            return X
        return X + (y - Y) / self._slopes[min(k, len(self._slopes) - 1)]

    @staticmethod
    def _segment(edges, v):
        lo, hi = 0, len(edges) - 1
        if v >= edges[hi]:
            return hi
        while hi - lo > 1:  # edges[lo] <= v < edges[hi]
            mid = (lo + hi) // 2
            if edges[mid] <= v:
                lo = mid
            else:
                hi = mid
        return lo

    # -- float evaluation on arrays -------------------------------------------

    def evaluate(self, x):
        """Vectorized float evaluation; values beyond double range become ``inf``."""
        x = np.asarray(x, dtype=float)
        if self.kind == "power_p":
            with np.errstate(over="ignore"):
                return x ** float(self.params["p"])
        if self.kind == "chi_square_composed":
            with np.errstate(over="ignore"):
                return self.params["base"].evaluate(x * x)
        xf, yf, sf = self._float
        return self._float_piecewise(x, xf, yf, sf)

    def inverse_float(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "power_p":
            return y ** (1.0 / float(self.params["p"]))
        if self.kind == "chi_square_composed":
            return np.sqrt(self.params["base"].inverse_float(y))
        xf, yf, sf = self._float
        with np.errstate(divide="ignore"):
            return self._float_piecewise(y, yf, xf, 1.0 / sf)

    @staticmethod
    def _float_piecewise(v, edges, values, slopes):
        finite = np.isfinite(edges)
        edges, values = edges[finite], values[finite]
        k = np.clip(np.searchsorted(edges, v, side="right") - 1, 0, None)
        slope = slopes[np.minimum(k, slopes.size - 1)]
        with np.errstate(over="ignore", invalid="ignore"):
            out = values[k] + slope * (v - edges[k])
        out = np.where(v == np.inf, np.inf, out)
        return np.where(v == edges[k], values[k], out)


def psi_studia(n_max=12):
    """``psi = 4x`` on [0, 4], ``psi(x_n) = x_n^2`` and affine in between.

    Affine continuation past ``x_{n_max+1}`` keeps the function convex; it is
    only reached from arguments around ``1e(3^n_max)``.
    """
    xs = psi_breakpoints(int(n_max) + 1)
    pts = [(LogReal.zero(), LogReal.zero())] + [(x, x * x) for x in xs]
    return OrliczFunction("psi_studia", tuple(pts), {"n_max": int(n_max)})


def chi_square_composed(base=None):
    """``chi(x) = base(x^2)`` (``base`` defaults to :func:`psi_studia`)."""
    base = psi_studia() if base is None else base
    return OrliczFunction("chi_square_composed", (), {"base": base})


def power_p(p):
    if not p >= 1:
        raise ParameterError("power_p needs p >= 1 for convexity")
    return OrliczFunction("power_p", (), {"p": float(p)})


def custom_piecewise(points):
    """Affine interpolation of ``[(x, y), ...]``; ``(0, 0)`` is prepended if missing."""
    pts = [(float(x), float(y)) for x, y in points]
    if pts[0] != (0.0, 0.0):
        pts = [(0.0, 0.0)] + pts
    return OrliczFunction("custom_piecewise", tuple(pts), {})


def psi_eval(psi, x):
    return psi(x)


def psi_inv(psi, y):
    return psi.inverse(y)


# ----------------------------------------------------------------------------
# Diagnostics


def collinearity_check(n, domain="auto"):
    """Residual of collinearity of ``(x_n, x_n^2)``, ``(2x_n, x_n^4)``, ``(x_{n+1}, x_{n+1}^2)``.

    ``domain="linear"`` (``n <= 4``) works in doubles and returns
    ``|det| / (|T1| + |T2|)``; the log domain returns ``|T1/T2 - 1|`` with
    ``T1 = (x_{n+1} - x_n)(y_2 - y_1)`` and ``T2 = (2x_n - x_n)(y_{n+1} - y_1)``
    up to orientation, evaluated as a difference of logarithms.
    """
    if domain == "auto":
        domain = "linear" if n <= 4 else "log"
    if domain == "linear":
        if n > 4:
            raise ParameterError("linear-domain collinearity is limited to n <= 4")
        x0, x2 = (float(v) for v in _exact_breakpoints(n + 1)[n - 1:])
        p = [(x0, x0 ** 2), (2 * x0, x0 ** 4), (x2, x2 ** 2)]
        t1 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
        t2 = (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])
        return abs(t1 - t2) / (abs(t1) + abs(t2))
    if domain != "log":
        raise ParameterError(f"unknown domain {domain!r}")
    xs = psi_breakpoints(n + 1)
    xn, xm = xs[n - 1], xs[n]
    t1 = xn * (xm * xm - xn * xn)
    t2 = (xm - xn) * (xn ** 4 - xn * xn)
    return float(abs(_mp.expm1(t1.log_value - t2.log_value)))


Delta2Row = namedtuple("Delta2Row", "x ratio conjugate_witness")


def delta2_diagnostics(phi, x_grid):
    """Rows ``(x, phi(2x)/phi(x), flag)``.

    For ``chi_square_composed`` the flag records ``chi(2x) >= 4 chi(x)``,
    the inequality behind the conjugate function's Delta_2 property; for
    other kinds it is ``None``.
    """
    rows = []
    for x in x_grid:
        x = LogReal.of(x)
        if x.is_zero:
            raise ParameterError("grid points must be positive")
        ratio = phi(x * 2) / phi(x)
        flag = None
        if phi.kind == "chi_square_composed":
            flag = bool(ratio.log_value >= _mp.log(4) - _mp.mpf(2) ** -200)
        rows.append(Delta2Row(x, ratio, flag))
    return rows


def d_criterion(psi, rho, h):
    """``D(h) = psi^{-1}(1/h) / psi^{-1}(1/rho(h))`` from a circle profile."""
    r = rho.at(h)
    return float(psi.inverse(1 / LogReal.of(h)) / psi.inverse(1 / LogReal.of(r)))


def e_criterion(psi, rho_area, k):
    """``E(k) = psi^{-1}(1/k^2) / psi^{-1}(1/rho_area(k))`` from an area profile."""
    r = rho_area.at(k)
    kk = LogReal.of(k)
    return float(psi.inverse(1 / (kk * kk)) / psi.inverse(1 / LogReal.of(r)))


def luxemburg_norm(samples, phi, weights, rtol=1e-15, max_iter=400):
    """``inf{K > 0 : sum_i w_i phi(|f_i| / K) <= 1}`` for a discrete probability.

    ``samples`` holds ``|f|`` values, or ``(t, |f|)`` pairs.  The root is
    bracketed by ``[||f||_1, ||f||_inf] / phi^{-1}(1)`` (Jensen on the left)
    and found by bisection in ``log K``.
    """
    f = np.asarray(samples, dtype=float)
    if f.ndim == 2:
        f = f[:, 1]
    f = np.abs(f)
    w = np.asarray(weights, dtype=float)
    if f.shape != w.shape:
        raise ParameterError("samples and weights must have equal length")
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-9:
        raise ParameterError("weights must be nonnegative and sum to 1")
    if not np.all(np.isfinite(f)):
        raise BracketError("non-finite sample values")
    if not np.any((f > 0) & (w > 0)):
        return 0.0
    unit = float(phi.inverse_float(1.0))

    def modular(K):
        return float(w @ phi.evaluate(f / K))

    lo, hi = float(w @ f) / unit, float(f[w > 0].max()) / unit
    m_lo, m_hi = modular(lo), modular(hi)
    if np.isnan(m_lo) or not m_hi <= 1 + 1e-12:
        raise BracketError(f"no Luxemburg bracket: modular({hi:.3e}) = {m_hi:.3e}")
    if m_lo <= 1:
        return lo
    for _ in range(max_iter):
        mid = np.sqrt(lo * hi)
        if not lo < mid < hi or hi - lo <= rtol * hi:
            break
        if modular(mid) > 1:
            lo = mid
        else:
            hi = mid
    return hi


# ----------------------------------------------------------------------------
# Witness families


@dataclass(frozen=True)
class WitnessFamily:
    """``f_n(z) = u_n ((1 - r_n)/(1 - r_n z))^2`` or ``q_n(z) = ((1 - r_n)/(1 - r_n z))^4``.

    ``one_minus_r`` is stored as a LogReal; :meth:`modulus` takes ``1 - z``
    so that evaluations next to ``z = 1`` keep full relative accuracy.
    """

    kind: str
    index: int
    one_minus_r: LogReal
    u: LogReal = None

    @property
    def r(self):
        return 1.0 - float(self.one_minus_r)

    def modulus(self, one_minus_z):
        d = float(self.one_minus_r)
        if d == 0.0:
            raise ParameterError("1 - r_n underflows a double; stay in the log domain")
        omz = np.asarray(one_minus_z, dtype=complex)
        base = d / np.abs(d + (1 - d) * omz)  # (1 - r)/|1 - r z|
        if self.kind == "f_n_family":
            return float(self.u) * base ** 2
        return base ** 4

    def __call__(self, z):
        return self.modulus(1 - np.asarray(z, dtype=complex))


def make_witness(kind, n, psi=None):
    psi = psi_studia() if psi is None else psi
    x = psi_breakpoints(n)[-1]
    if kind == "f_n_family":
        u = x.sqrt()
        return WitnessFamily(kind, int(n), 1 / chi_square_composed(psi)(u), u)
    if kind == "q_n_family":
        return WitnessFamily(kind, int(n), (1 / psi(x * 2)).sqrt())
    raise ParameterError(f"unknown witness kind {kind!r}")


def lens_pullback_rule(theta, tmin=1e-300, ratio=2.0, order=16):
    """Nodes ``1 - gamma(t)`` and weights of ``dt/(2 pi)`` for the lens map.

    The rule is graded towards the contact angles ``t = 0`` and ``t = pi``;
    ``1 - gamma = 2w/(1 + w)`` with ``w = |tan(t/2)|^theta e^{-i theta pi/2 sign t}``
    has no cancellation next to ``gamma = 1``.
    """
    theta = check_theta(theta)
    t, wt = circle_rule((0.0, np.pi), tmin=tmin, ratio=ratio, order=order)
    w = np.abs(np.tan(t / 2)) ** theta * np.exp(-0.5j * theta * np.pi * np.sign(t))
    return 2 * w / (1 + w), wt / wt.sum()


def area_rule(scale, n_angle=64, ratio=2.0, order=16):
    """Normalized-area rule on the disk in polar coordinates about ``z = 1``.

    ``z = 1 - rho e^{i a}`` with ``|a| < pi/2`` and ``0 < rho < 2 cos a``; the
    radial rule is graded down to ``1e-6 * scale``.  Returns ``1 - z`` and
    weights summing to 1 (up to quadrature error, then renormalized).
    """
    xa, wa = np.polynomial.legendre.leggauss(n_angle)
    a = 0.5 * np.pi * xa
    wa = 0.5 * np.pi * wa
    nodes, weights = [], []
    for ak, wk in zip(a, wa):
        top = 2 * np.cos(ak)
        lo = min(1e-6 * scale, 1e-3 * top)
        rho, wr = graded_rule(lo, top, ratio, order, include_zero=True)
        nodes.append(rho * np.exp(1j * ak))
        weights.append(rho * wr * wk / np.pi)
    w = np.concatenate(weights)
    return np.concatenate(nodes), w / w.sum()


def witness_report(kind, n_range, theta=0.5, psi=None):
    """Per-index diagnostics of a witness family, as a list of dicts.

    ``f_n_family``: log-domain check of ``chi(sqrt2 u_n) = chi(u_n)^2 = x_n^4``,
    the window-mass ratio ``m_phi(|1 - z| <= 1 - r_n) / (1 - r_n)^2`` and the
    Luxemburg norm ``K_n`` of ``f_n`` in ``L^chi(m_phi)`` (while ``1 - r_n``
    fits a double).  ``q_n_family``: ``psi(x_n)/psi(2x_n)``, the boundary
    supremum of ``|q_n|``, its Bergman-Orlicz norm and
    ``int psi(|q_n| / (96 ||q_n||)) dA``.
    """
    psi = psi_studia() if psi is None else psi
    chi = chi_square_composed(psi)
    rows = []
    for n in n_range:
        wit = make_witness(kind, n, psi)
        x = psi_breakpoints(n)[-1]
        row = {"n": int(n), "log10_x": x.log10, "log10_one_minus_r": wit.one_minus_r.log10}
        small = float(wit.one_minus_r) > 0 and n <= 5
        if kind == "f_n_family":
            lhs, rhs = chi(wit.u * _mp.sqrt(2)), chi(wit.u) ** 2
            row["identity_residual"] = float(abs(lhs.log_value - rhs.log_value))
            row["x4_residual"] = float(abs(rhs.log_value - 4 * x.log_value))
            if small:
                d = float(wit.one_minus_r)
                mass = pullback_window_lens(theta, PseudoWindow(0.0, d))
                row["window_mass_ratio"] = mass / d ** 2
                if n <= 4:
                    omz, w = lens_pullback_rule(theta)
                    row["K_n"] = luxemburg_norm(wit.modulus(omz), chi, w)
        else:
            row["ratio"] = float(psi(x) / psi(x * 2))
            if small and n <= 4:
                d = float(wit.one_minus_r)
                t = np.concatenate([[0.0], np.geomspace(1e-300, np.pi, 4000)])
                row["boundary_sup"] = float(np.max(wit(np.exp(1j * t))))
                omz, w = area_rule(d)
                q = wit.modulus(omz)
                norm = luxemburg_norm(q, psi, w)
                row["bergman_norm"] = norm
                row["scaled_norm"] = 96 * float(x) * norm
                row["integral"] = float(w @ psi.evaluate(q / (96 * norm)))
        rows.append(row)
    return rows
