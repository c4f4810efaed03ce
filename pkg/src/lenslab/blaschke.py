"""Finite Blaschke products and the constructive bound on approximation numbers.

A Blaschke product with zeros ``a_k`` kills the first Taylor coefficients
``f(a_k)``; composing with a lens map and measuring ``|B(gamma(t))|^2`` over
Carleson windows bounds the approximation numbers of ``C_phi`` from above.
The zeros used here sit on the lens boundary curve at the dyadic angles
``t_k = pi 2^-k`` and at their three mirror images, each with multiplicity
``N``.

Magnitudes are accumulated as sums of logarithms, so products of degree in
the thousands neither underflow nor lose accuracy near the circle.
"""

from dataclasses import dataclass, field

import numpy as np

from .carleson import PseudoWindow, lens_window_intervals
from .errors import ConstructionError, DomainError, ParameterError
from .maps import _lens_quarter, check_theta
from .quadrature import graded_rule

__all__ = [
    "BlaschkeProduct",
    "EmbeddingBoundReport",
    "build_symmetric_blaschke",
    "embedding_bound",
    "eval_log_magnitude",
    "goodportion_check",
    "lens_curve_point",
    "pseudo_hyperbolic",
    "pseudo_hyperbolic_pairs",
    "pseudo_hyperbolic_property_check",
]


def pseudo_hyperbolic(a, b):
    """Pseudo-hyperbolic distance ``|a - b| / |1 - conj(a) b|`` between disk points."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if np.any(np.abs(a) >= 1) or np.any(np.abs(b) >= 1):
        raise DomainError("pseudo-hyperbolic distance needs points of the open disk")
    out = np.abs(a - b) / np.abs(1 - np.conj(a) * b)
    return out.item() if out.ndim == 0 else out


def pseudo_hyperbolic_pairs(M, count, rng):
    """Random pairs with ``|a - b| <= M min(1 - |a|, 1 - |b|)``, by rejection.

    ``1 - |a|`` is log-uniform on ``[1e-8, 1]`` so the pairs reach deep into
    the boundary layer, and ``|a - b|`` is drawn up to ``M (1 - |a|)``.
    """
    if not M > 0:
        raise ParameterError("M must be positive")
    a_out, b_out = [], []
    have = 0
    while have < count:
        size = 2 * (count - have) + 16
        gap = 10.0 ** rng.uniform(-8, 0, size)
        a = (1 - gap) * np.exp(1j * rng.uniform(-np.pi, np.pi, size))
        b = a + M * gap * rng.random(size) * np.exp(1j * rng.uniform(-np.pi, np.pi, size))
        ok = (np.abs(b) < 1) & (np.abs(a - b) <= M * np.minimum(gap, 1 - np.abs(b)))
        a_out.append(a[ok])
        b_out.append(b[ok])
        have += int(ok.sum())
    return np.concatenate(a_out)[:count], np.concatenate(b_out)[:count]


def pseudo_hyperbolic_property_check(M, trials=10 ** 4, seed=0):
    """Count pairs violating ``d(a, b) <= M / sqrt(M^2 + 1)``.

    Returns ``(violations, largest d, bound)``.
    """
    rng = np.random.default_rng(seed)
    a, b = pseudo_hyperbolic_pairs(M, int(trials), rng)
    d = pseudo_hyperbolic(a, b)
    bound = M / np.sqrt(M * M + 1)
    return int(np.count_nonzero(d > bound)), float(np.max(d)), float(bound)


def lens_curve_point(theta, s):
    """``gamma(s)`` for ``s`` in [0, pi/2] together with ``1 - |gamma(s)|^2``."""
    s = np.asarray(s, dtype=float)
    tau, q, _, _ = _lens_quarter(theta, s)
    c = np.exp(-0.5j * theta * np.pi)
    return (1 - c * tau) / (1 + c * tau), q


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product ``prod_k ((a_k - z)/(1 - conj(a_k) z))^{m_k}``.

    ``one_minus_abs2`` optionally stores ``1 - |a_k|^2`` computed without
    cancellation.
    """

    zeros: np.ndarray
    multiplicities: np.ndarray
    one_minus_abs2: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        zeros = np.atleast_1d(np.asarray(self.zeros, dtype=complex))
        mult = np.atleast_1d(np.asarray(self.multiplicities, dtype=int))
        if zeros.shape != mult.shape:
            raise ParameterError("zeros and multiplicities must have equal length")
        if np.any(mult < 1):
            raise ParameterError("multiplicities must be positive")
        if np.any(np.abs(zeros) >= 1):
            raise ConstructionError("Blaschke zeros must lie in the open disk")
        oma = self.one_minus_abs2
        oma = 1 - np.abs(zeros) ** 2 if oma is None else np.atleast_1d(np.asarray(oma, dtype=float))
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "multiplicities", mult)
        object.__setattr__(self, "one_minus_abs2", oma)

    @property
    def degree(self):
        return int(np.sum(self.multiplicities))

    def evaluate(self, z):
        """Plain product-form evaluation (complex values); fine for small degrees."""
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for a, m in zip(self.zeros, self.multiplicities):
            out = out * ((a - z) / (1 - np.conj(a) * z)) ** m
        return out


def eval_log_magnitude(B, z, one_minus_abs2=None):
    """``log |B(z)| = sum_k m_k log d(z, a_k)`` for ``|z| <= 1``.

    Where ``d`` is close to 1 the identity ``1 - d^2 = (1 - |a|^2)(1 - |z|^2) /
    |1 - conj(a) z|^2`` is used with ``log1p``; ``one_minus_abs2`` may supply
    ``1 - |z|^2`` for points very close to the circle.  At a zero the result
    is ``-inf``.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1 + 1e-12):
        raise DomainError("eval_log_magnitude expects |z| <= 1")
    omz = 1 - np.abs(z) ** 2 if one_minus_abs2 is None else np.asarray(one_minus_abs2, dtype=float)
    zz = z[..., None]
    a = B.zeros
    den = np.abs(1 - np.conj(a) * zz) ** 2
    gap = B.one_minus_abs2 * omz[..., None] / den  # 1 - d^2
    with np.errstate(divide="ignore"):
        near = np.log(np.abs(a - zz)) - 0.5 * np.log(den)
        far = 0.5 * np.log1p(-np.minimum(gap, 1.0))
    logd = np.where(gap < 0.5, far, near)
    out = logd @ B.multiplicities
    return out.item() if out.ndim == 0 else out


def build_symmetric_blaschke(theta, N):
    """Zeros ``p_k = gamma(t_k)``, ``t_k = pi 2^-k`` (k = 1..N), with ``conj p_k``,
    ``-p_k`` and ``-conj p_k``, each of multiplicity ``N``; degree ``4 N^2``."""
    theta = check_theta(theta)
    if int(N) != N or N < 1:
        raise ParameterError("N must be a positive integer")
    N = int(N)
    t = np.pi * 2.0 ** -np.arange(1, N + 1)
    p, q = lens_curve_point(theta, t)
    if np.any(q <= 0):
        raise ConstructionError("a zero landed on the unit circle")
    zeros = np.concatenate([p, np.conj(p), -p, -np.conj(p)])
    return BlaschkeProduct(zeros=zeros, multiplicities=np.full(zeros.size, N),
                           one_minus_abs2=np.tile(q, 4))


def _abs_b_squared_on_lens(B, theta, s):
    """``|B(gamma(s))|^2`` for ``s`` in [0, pi/2]."""
    z, q = lens_curve_point(theta, s)
    return np.exp(2 * eval_log_magnitude(B, z, q))


def goodportion_check(theta, N, mesh=2000):
    """``max |B(gamma(t))|^{1/N}`` over a geometric mesh of ``[t_N, t_1]``."""
    theta = check_theta(theta)
    B = build_symmetric_blaschke(theta, N)
    t_hi, t_lo = np.pi / 2, np.pi * 2.0 ** -N
    if N == 1:
        t = np.array([t_hi])
    else:
        t = np.geomspace(t_lo, t_hi, int(mesh))
    return float(np.max(np.exp(eval_log_magnitude(B, *lens_curve_point(theta, t)) / N)))


@dataclass(frozen=True)
class EmbeddingBoundReport:
    """Window suprema of ``(1/h) int_S |B|^2 dm_phi`` for the symmetric product of order ``N``.

    ``per_window`` rows are ``(eta, h, value)`` with window centre ``e^{i eta}``;
    ``bound`` is ``sqrt(sup_value)``, the unnormalized bound for ``a_{4N^2+1}``.
    """

    N: int
    degree: int
    sup_value: float
    per_window: list
    chi_emp: float

    @property
    def bound(self):
        return float(np.sqrt(self.sup_value))


def _fold_to_quarter(lo, hi):
    """Split an arc of (-pi, pi] into ``s``-intervals, ``s`` = distance to {0, +-pi}."""
    cuts = [-np.pi, -np.pi / 2, 0.0, np.pi / 2, np.pi]
    out = []
    pts = sorted({lo, hi, *[c for c in cuts if lo < c < hi]})
    for a, b in zip(pts[:-1], pts[1:]):
        sa = min(abs(a), np.pi - abs(a))
        sb = min(abs(b), np.pi - abs(b))
        out.append((min(sa, sb), max(sa, sb)))
    return out


def _quarter_integral(B, theta, s0, s1, order=20):
    if s1 <= s0:
        return 0.0
    lo = s0 if s0 > 0 else 1e-6 * s1  # |B| is ~1 on [0, lo]; midpoint rule there
    s, w = graded_rule(lo, s1, np.sqrt(2.0), order)
    total = float(_abs_b_squared_on_lens(B, theta, s) @ w)
    if s0 == 0:
        total += lo * float(_abs_b_squared_on_lens(B, theta, np.array([lo / 2]))[0])
    return total


def embedding_bound(theta, N, n_max=None, scan=8):
    """Supremum of ``(1/h) int_{S(xi,h)} |B|^2 dm_phi`` over windows ``h = 2^{-n theta}``.

    Centres are ``xi = 1``, ``xi = -1`` and ``scan`` further points with
    ``0 < eta <= 2h``.  The window integral is taken over the boundary arcs
    ``{t : gamma(t) in S(xi, h)}``; because ``|B(gamma(t))|`` is even and
    ``pi``-periodic in ``t`` every arc folds onto ``[0, pi/2]``, where a
    graded Gauss rule resolves the zeros at the dyadic angles.
    """
    theta = check_theta(theta)
    if N < 2:
        raise ParameterError("embedding_bound needs N >= 2")
    B = build_symmetric_blaschke(theta, N)
    n_max = 3 * N + 6 if n_max is None else n_max
    rows = []
    for n in range(n_max + 1):
        h = 2.0 ** (-n * theta)
        etas = [0.0, np.pi] + list(np.linspace(0, 2 * h, scan + 1)[1:])
        for eta in etas:
            arcs = lens_window_intervals(theta, PseudoWindow(eta, h))
            integral = sum(_quarter_integral(B, theta, s0, s1)
                           for lo, hi in arcs for s0, s1 in _fold_to_quarter(lo, hi))
            rows.append((float(eta), h, integral / (2 * np.pi) / h))
    sup = max(r[2] for r in rows)
    return EmbeddingBoundReport(N=int(N), degree=B.degree, sup_value=sup, per_window=rows,
                                chi_emp=goodportion_check(theta, N))
