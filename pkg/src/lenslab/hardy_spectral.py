"""Approximation numbers and Hilbert-Schmidt norms of composition operators on H^2.

Two kinds of finite models are offered.

* :func:`matrix` is the compression of ``C_phi`` to the span of the first
  ``N`` monomials.  Its singular values are lower bounds for the true
  approximation numbers, and they are monotone in ``N``.  They converge very
  slowly for lens maps, because the operator's action is far from diagonal in
  the monomial basis.

* :func:`kernel_truncation` discretizes ``C_phi C_phi^*``, which acts on
  ``L^2(m_phi)`` by integration against the Szego kernel.  For lens-type
  symbols the kernel is written as a Laplace integral in Cayley coordinates,
  ``1/(W + conj W') = int_0^inf exp(-s W) exp(-s conj W') ds``, so a product
  quadrature in ``(t, s)`` gives a factor ``Phi`` with ``Phi Phi^*`` equal
  to the discretized kernel matrix.  The singular values of ``Phi`` converge
  to ``a_n(C_phi)`` far below the point where the compression stalls.  For
  the spread map the Gram matrix ``<phi^k, phi^j>`` is assembled from the
  boundary values directly ("radial_gram"); see :func:`kernel_truncation`.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import series
from .errors import (
    InsufficientDataError,
    NumericError,
    NumericInstabilityError,
    ParameterError,
    ToleranceNotMetError,
)
from .maps import (
    ConstantMap,
    LensMap,
    ReducedLensMap,
    ScaledIdentity,
    SpreadLensMap,
    _lens_quarter,
)
from .quadrature import graded_rule, uniform_rule

__all__ = [
    "CoefficientSeries",
    "DecayFit",
    "OperatorTruncation",
    "approximation_numbers",
    "boundary_integral",
    "fit_decay",
    "hs_norm_integral",
    "kernel_truncation",
    "matrix",
    "numeric_floor",
    "schatten_norm",
    "super_upper_bound",
    "taylor_coeffs",
]

_VALIDATION_TERMS = 96


@dataclass(frozen=True)
class CoefficientSeries:
    """First ``order`` Taylor coefficients of a symbol.

    ``est_tail_bound`` estimates ``sum_{k >= order} |c_k|^2`` as the gap between
    the boundary integral of ``|phi*|^2`` and the truncated sum.
    """

    coeffs: np.ndarray
    order: int
    est_tail_bound: float


@dataclass(frozen=True)
class OperatorTruncation:
    """A finite model of ``C_phi`` together with its singular values.

    ``method`` is ``"monomial"`` (``entries`` is the N x N compression),
    ``"laplace_nystrom"`` (``entries`` is a tuple of factors whose singular
    values are pooled) or ``"radial_gram"`` (``entries`` is a tuple of Gram
    blocks whose eigenvalues are the squared singular values).
    """

    dim: int
    entries: object
    singular_values: np.ndarray
    method: str = "monomial"
    info: dict = field(default_factory=dict)


def _check_order(N):
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    return int(N)


# ----------------------------------------------------------------------------
# Taylor coefficients and the monomial compression


def _raw_series(phi, n):
    if isinstance(phi, LensMap):
        th = phi.theta
        p = series.binomial_series(th, n, 1.0)
        m = series.binomial_series(th, n, -1.0)
        return series.div(p - m, p + m, n)
    if isinstance(phi, ReducedLensMap):
        th = phi.theta
        p = 1.5 ** th * series.binomial_series(th, n, 1.0 / 3.0)
        m = 0.5 ** th * series.binomial_series(th, n, -1.0)
        return series.div(p - m, p + m, n)
    if isinstance(phi, SpreadLensMap):
        g = np.zeros(n)
        g[0] = -1.0
        g[2::2] = -2.0
        inner = series.exp(g, n)
        return series.mul(_raw_series(LensMap(phi.theta), n), inner, n)
    if isinstance(phi, ScaledIdentity):
        c = np.zeros(n, dtype=complex if isinstance(phi.scale, complex) else float)
        if n > 1:
            c[1] = phi.scale
        return c
    if isinstance(phi, ConstantMap):
        c = np.zeros(n, dtype=complex if isinstance(phi.value, complex) else float)
        c[0] = phi.value
        return c
    raise ParameterError(f"no Taylor expansion available for {type(phi).__name__}")


def taylor_coeffs(phi, N):
    """Taylor coefficients ``c_0, ..., c_{N-1}`` of the symbol at 0.

    The expansion is validated by summing a longer series at ``z = 0.5`` and
    comparing with direct evaluation.
    """
    N = _check_order(N)
    full = _raw_series(phi, max(N, _VALIDATION_TERMS))
    direct = complex(phi(0.5))
    summed = complex(series.evaluate(full, 0.5))
    err = abs(summed - direct)
    if direct != 0:
        err /= abs(direct)
    if not err < 1e-10:
        raise NumericInstabilityError(
            f"series check at z=0.5 failed for {phi.map_id}: discrepancy {err:.3e}", err)
    coeffs = full[:N].copy()
    tail = max(0.0, boundary_integral(phi, lambda t: 1 - phi.one_minus_modulus_sq(t))
               - float(np.sum(np.abs(coeffs) ** 2)))
    return CoefficientSeries(coeffs=coeffs, order=N, est_tail_bound=tail)


def matrix(phi, N, method="fft"):
    """Compression of ``C_phi`` to the first ``N`` monomials.

    Column ``m`` holds the first ``N`` coefficients of ``phi**m``, built by
    repeated truncated multiplication; ``method`` selects FFT or direct
    convolution (the two agree to rounding).
    """
    N = _check_order(N)
    c = taylor_coeffs(phi, N).coeffs
    dtype = np.result_type(c, float)
    A = np.zeros((N, N), dtype=dtype)
    col = np.zeros(N, dtype=dtype)
    col[0] = 1.0
    A[:, 0] = col
    for m in range(1, N):
        col = series.mul(col, c, N, method=method)
        A[:, m] = col
    return OperatorTruncation(dim=N, entries=A, singular_values=_singular_values("monomial", A, N),
                              method="monomial",
                              info={"map": phi.map_id})


def _svd(A):
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc


def _singular_values(method, entries, dim):
    if method == "monomial":
        sv = _svd(np.asarray(entries))
    elif method == "laplace_nystrom":
        sv = np.concatenate([_svd(F) for F in entries])
    elif method == "radial_gram":
        try:
            ev = np.concatenate([np.linalg.eigvalsh(G) for G in entries])
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"eigensolver failed: {exc}") from exc
        sv = np.sqrt(np.maximum(ev, 0.0))
    else:
        raise ParameterError(f"unknown truncation method {method!r}")
    return np.sort(sv)[::-1][:dim]


def approximation_numbers(trunc):
    """Singular values ``s_1 >= s_2 >= ...`` of a truncation (recomputed from its entries)."""
    return _singular_values(trunc.method, trunc.entries, trunc.dim)


# ----------------------------------------------------------------------------
# Kernel-based truncations


def _laplace_factor(W, weight, mult, order):
    """Real factor whose Gram matrix discretizes ``(1+W)(1+conj W')/(W + conj W')``.

    Rows come in conjugate pairs ``t, -t``; only ``t > 0`` is stored and the
    pair is folded into ``[Re; Im]`` blocks scaled by sqrt(2).
    """
    s_lo = 1e-3 / np.max(np.abs(W))
    s_hi = 60.0 / np.min(W.real)
    s, ws = graded_rule(s_lo, s_hi, 2.0, order, include_zero=True)
    P = (np.sqrt(weight) * mult * (1 + W))[:, None] * np.sqrt(ws)[None, :] * np.exp(-np.outer(W, s))
    return np.sqrt(2.0) * np.vstack([P.real, P.imag])


def _tmin(theta, tail_mass=1e-28):
    # the neglected cap near a contact point carries kernel mass ~ tmin**(1 - theta),
    # which must stay below the square of the smallest singular value resolved
    return max(tail_mass ** (1.0 / (1.0 - theta)), 1e-300)


def _lens_factors(theta, order):
    t, w = graded_rule(_tmin(theta), np.pi / 2, 2.0, order)
    tau, _, _, _ = _lens_quarter(theta, t)
    v = tau * np.exp(-0.5j * theta * np.pi)
    z = (1 - v) / (1 + v)
    W = 2 * v / (1 + v * v)  # Cayley image of z**2
    weight = w / (2 * np.pi)
    # even functions of z are functions of z**2; odd ones are z times those
    return [_laplace_factor(W, weight, 1.0, order),
            _laplace_factor(W, weight, z, order)]


def _reduced_factors(phi, order):
    t, w = graded_rule(_tmin(phi.theta), np.pi, 2.0, order)
    W = phi.cayley_boundary(t)
    return [_laplace_factor(W, 0.5 * w / (2 * np.pi), 1.0, order)]


def _smooth_step(x):
    x = np.clip(x, 0.0, 1.0)

    def bump(y):
        with np.errstate(divide="ignore"):
            return np.where(y > 0, np.exp(-1.0 / np.maximum(y, 1e-300)), 0.0)

    return bump(x) / (bump(x) + bump(1 - x))


def _spread_gram(theta, M, t_cut, chunk=4096):
    """Gram blocks ``<phi^k, phi^j>`` (split by parity) for the spread map.

    The circle is cut smoothly at ``|t| = t_cut`` (and its mirror at pi).  The
    outer part is integrated in ``u = cot t``, in which the boundary argument
    is nearly linear.  In the inner cap the argument turns infinitely often,
    so off-diagonal entries are averaged out and only the diagonal
    ``int |phi*|^{2j}`` is kept.
    """
    j = np.arange(M)
    u_hi = 1 / np.tan(t_cut / 2)
    u, wu = uniform_rule(0.0, u_hi, 0.25, 64)
    t = np.arctan2(1.0, u)
    cut = 1 - _smooth_step((t - t_cut / 2) / (t_cut / 2))
    _, _, one_minus, arg = _lens_quarter(theta, t)
    logr = np.log1p(-one_minus)
    beta = arg - u
    w = 4 * wu / (1 + u * u) * (1 - cut) / (2 * np.pi)  # four symmetric quarters
    ti, wi = graded_rule(_tmin(theta), t_cut, 2.0, 16)
    cut_i = 1 - _smooth_step((ti - t_cut / 2) / (t_cut / 2))
    _, _, om_i, _ = _lens_quarter(theta, ti)
    wi = 4 * wi * cut_i / (2 * np.pi)
    blocks = []
    for parity in (0, 1):
        jp = j[j % 2 == parity]
        G = np.zeros((jp.size, jp.size))
        for lo in range(0, u.size, chunk):
            sl = slice(lo, lo + chunk)
            R = np.sqrt(w[sl])[:, None] * np.exp(np.outer(logr[sl], jp))
            ph = np.outer(beta[sl], jp)
            C = R * np.cos(ph)
            S = R * np.sin(ph)
            G += C.T @ C + S.T @ S
        G[np.diag_indices_from(G)] += np.exp(np.outer(2 * jp, np.log1p(-om_i))) @ wi
        blocks.append(G)
    return blocks


def kernel_truncation(phi, N, order=None, t_cut=0.01, gram_size=None):
    """Finite model of ``C_phi`` built from boundary values (see module docstring).

    Supported symbols: :class:`LensMap`, :class:`ReducedLensMap` (Laplace-Nystrom
    factorization of the Szego kernel) and :class:`SpreadLensMap` (Gram
    matrix of the powers ``phi^j``, ``j < gram_size``).  Returns the top
    ``N`` singular values.
    """
    N = _check_order(N)
    if isinstance(phi, (LensMap, ReducedLensMap)):
        if order is None:
            order = 12 if phi.theta <= 0.75 else 24
        if isinstance(phi, LensMap):
            entries = _lens_factors(phi.theta, order)
        else:
            entries = _reduced_factors(phi, order)
        method = "laplace_nystrom"
        info = {"map": phi.map_id, "order": order}
    elif isinstance(phi, SpreadLensMap):
        M = gram_size or max(N + 200, (3 * N) // 2)
        entries = _spread_gram(phi.theta, M, t_cut)
        method = "radial_gram"
        info = {"map": phi.map_id, "gram_size": M, "t_cut": t_cut}
    else:
        raise ParameterError(f"no kernel truncation for {type(phi).__name__}")
    entries = tuple(entries)
    return OperatorTruncation(dim=N, entries=entries,
                              singular_values=_singular_values(method, entries, N),
                              method=method, info=info)


# ----------------------------------------------------------------------------
# Boundary integrals and norms


def boundary_integral(phi, func, epsrel=1e-12, symmetric=False):
    """``int func(t) dt/(2 pi)`` over the circle for functions singular at the contact angles.

    Near each contact angle the substitution ``t = u**(1/(1 - theta))``
    removes an integrable ``|t|^{-theta}`` blow-up.  With ``symmetric=True``
    the caller asserts that ``func`` is even and ``pi``-periodic (a function
    of the distance to {0, pi}); only ``[0, pi/2]`` is integrated, so nodes
    next to ``t = pi`` never lose resolution to rounding.
    """
    theta = getattr(phi, "theta", 0.0)
    sing = sorted(np.mod(np.asarray(phi.singular_angles, dtype=float) + np.pi, 2 * np.pi) - np.pi)

    def scalar(t):
        return float(np.asarray(func(np.array([t])))[0])

    power = 1.0 / (1.0 - theta)
    # below umin, u**power underflows; the transformed integrand is flat there
    umin = 1e-300 ** (1.0 - theta)

    def transformed(u, origin=0.0, direction=1.0):
        u = max(u, umin)
        return scalar(origin + direction * u ** power) * power * u ** (power - 1.0)

    pieces = []
    if symmetric:
        value, error = integrate.quad(transformed,
                                      0.0, (np.pi / 2) ** (1.0 - theta), epsabs=0,
                                      epsrel=epsrel, limit=400)
        pieces.append((4 * value, 4 * error))
    elif not sing:
        pieces.append(integrate.quad(scalar, -np.pi, np.pi, epsabs=0, epsrel=epsrel, limit=400))
    else:
        ends = sing + [sing[0] + 2 * np.pi]
        for left, right in zip(ends[:-1], ends[1:]):
            half = (right - left) / 2
            umax = half ** (1.0 - theta)
            for origin, direction in ((left, 1.0), (right, -1.0)):
                pieces.append(integrate.quad(transformed, 0.0, umax, args=(origin, direction),
                                             epsabs=0, epsrel=epsrel, limit=400))
    value = sum(p[0] for p in pieces)
    error = sum(p[1] for p in pieces)
    if not np.isfinite(value) or error > max(1e-9 * abs(value), 1e-14):
        raise ToleranceNotMetError(f"boundary quadrature did not converge (error {error:.2e})")
    return value / (2 * np.pi)


def hs_norm_integral(phi):
    """Hilbert-Schmidt norm ``(int dm/(1 - |phi*|^2))^{1/2}`` of ``C_phi``."""
    if isinstance(phi, ScaledIdentity) and abs(phi.scale) == 1:
        raise ToleranceNotMetError("the boundary modulus is identically 1; the integral diverges")
    with np.errstate(divide="ignore"):
        return float(np.sqrt(boundary_integral(phi, lambda t: 1 / phi.one_minus_modulus_sq(t),
                                               symmetric=isinstance(phi, (LensMap, SpreadLensMap)))))


def schatten_norm(sv, p):
    """``(sum s_n^p)^{1/p}``."""
    if not p > 0:
        raise ParameterError("Schatten exponent must be positive")
    sv = np.asarray(sv, dtype=float)
    top = np.max(sv) if sv.size else 0.0
    if top == 0:
        return 0.0
    return float(top * np.sum((sv / top) ** p) ** (1.0 / p))


# ----------------------------------------------------------------------------
# Decay fits


@dataclass(frozen=True)
class DecayFit:
    """Fits of ``log s_n`` by ``log a - b n^alpha`` and by ``log a - beta log n``.

    ``fit_range`` is the 1-based index range ``(first, last)`` used.
    ``model`` names the fit with the smaller RMS residual.
    """

    amplitude: float
    rate: float
    exponent: float
    residual: float
    fit_range: tuple
    poly_amplitude: float
    poly_exponent: float
    poly_residual: float

    @property
    def model(self):
        return "stretched_exponential" if self.residual <= self.poly_residual else "polynomial"


def numeric_floor(sv):
    """Level below which double-precision singular values are not trusted."""
    sv = np.asarray(sv, dtype=float)
    return 1e3 * np.finfo(float).eps * float(sv[0])


def _lstsq(X, y):
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = float(np.sqrt(np.mean((X @ coef - y) ** 2)))
    return coef, resid


def fit_decay(sv, alpha_grid=None, min_points=20):
    """Fit the decay of a nonincreasing singular-value list.

    The stretched exponential is fitted by scanning ``alpha`` and solving for
    ``(log a, b)`` by least squares; the polynomial model is fitted by a
    single least-squares solve.
    """
    sv = np.asarray(sv, dtype=float)
    if sv.size == 0 or sv[0] <= 0:
        raise InsufficientDataError("no positive singular values")
    below = np.nonzero(~(sv > numeric_floor(sv)))[0]
    last = int(below[0]) if below.size else sv.size
    if last < min_points:
        raise InsufficientDataError(f"only {last} values above the numeric floor")
    n = np.arange(1, last + 1, dtype=float)
    y = np.log(sv[:last])
    if alpha_grid is None:
        alpha_grid = np.round(np.arange(0.10, 1.0 + 1e-9, 0.05), 10)
    best = None
    for alpha in alpha_grid:
        coef, resid = _lstsq(np.column_stack([np.ones_like(n), -n ** alpha]), y)
        if best is None or resid < best[2]:
            best = (alpha, coef, resid)
    alpha, coef, resid = best
    pcoef, presid = _lstsq(np.column_stack([np.ones_like(n), -np.log(n)]), y)
    return DecayFit(
        amplitude=float(np.exp(coef[0])), rate=float(coef[1]), exponent=float(alpha),
        residual=resid, fit_range=(1, last),
        poly_amplitude=float(np.exp(pcoef[0])), poly_exponent=float(pcoef[1]),
        poly_residual=presid,
    )


def super_upper_bound(rho, n):
    """``min_h (1 - h)^n + sqrt(rho(h)/h)`` over the sampled profile (constant taken as 1)."""
    h = np.asarray(rho.h, dtype=float)
    if h.size == 0:
        raise ParameterError("empty profile")
    r = np.asarray(rho.rho, dtype=float)
    return float(np.min((1 - h) ** n + np.sqrt(r / h)))
