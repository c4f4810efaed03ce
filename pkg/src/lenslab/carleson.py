"""Pull-back measures of Carleson windows and maximal Carleson functions.

For a symbol ``phi`` the pull-back measure ``m_phi`` is the image of normalized
arc length under the boundary map ``t -> phi*(e^{it})``.  This module computes

* the ``m_phi`` mass of pseudo-windows ``S(xi, h) = {|z - xi| <= h}`` for lens
  maps, by solving for the boundary angles whose image falls in the window;
* the mass of dyadic windows ``W_{n,j}`` (annulus ``1 - 2^-n <= |z| < 1``
  intersected with the sector ``arg z in [2 pi j 2^-n, 2 pi (j+1) 2^-n)``) for
  lens and spread maps;
* maximal Carleson functions, Luecking sums and a Monte Carlo area version.

Angles are measured in (-pi, pi] and measures are normalized so that the
whole circle has mass 1.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    ConstructionDomainError,
    DominanceAssumptionError,
    InterpolationError,
    ParameterError,
)
from .hardy_spectral import boundary_integral
from .maps import LensMap, SpreadLensMap, _lens_quarter, check_theta

__all__ = [
    "DyadicWindow",
    "PseudoWindow",
    "RhoProfile",
    "WindowOccupation",
    "dyadic_measures_lens",
    "dyadic_measures_spread",
    "lens_modulus_cutoff",
    "lens_window_intervals",
    "luecking_sum",
    "modulus_integral",
    "pullback_window_lens",
    "rho_area_profile",
    "rho_profile",
    "spread_window_monte_carlo",
    "window_occupation_spread",
]

TWO_PI = 2 * np.pi


# ----------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class PseudoWindow:
    """``S(xi, h)`` with ``xi = exp(i * center)``."""

    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ParameterError("window radius must be positive")

    def contains(self, z):
        return np.abs(np.asarray(z) - np.exp(1j * self.center)) <= self.radius


@dataclass(frozen=True)
class DyadicWindow:
    """``W_{n,j}``: ``1 - 2^-n <= |z| < 1`` and ``arg z`` in the ``j``-th of ``2^n`` sectors."""

    level: int
    sector: int

    def __post_init__(self):
        if self.level < 1 or not 0 <= self.sector < 2 ** self.level:
            raise ParameterError(f"invalid dyadic window ({self.level}, {self.sector})")

    @property
    def arg_bounds(self):
        width = TWO_PI / 2 ** self.level
        return self.sector * width, (self.sector + 1) * width

    def contains(self, z):
        z = np.asarray(z)
        r = np.abs(z)
        lo, hi = self.arg_bounds
        a = np.mod(np.angle(z), TWO_PI)
        return (r >= 1 - 2.0 ** -self.level) & (r < 1) & (a >= lo) & (a < hi)


@dataclass(frozen=True)
class RhoProfile:
    """Sampled maximal Carleson function ``h -> rho(h)``.

    ``halfwidth`` carries Monte Carlo 95% confidence half-widths (zeros for
    deterministic methods).
    """

    h: np.ndarray
    rho: np.ndarray
    method: str
    map_id: str
    halfwidth: np.ndarray = None
    info: dict = field(default_factory=dict)

    @property
    def samples(self):
        return list(zip(self.h.tolist(), self.rho.tolist()))

    def slope(self, h_min=None, h_max=None):
        """Least-squares slope of ``log rho`` against ``log h`` on ``[h_min, h_max]``."""
        h_min = np.min(self.h) if h_min is None else h_min
        h_max = np.max(self.h) if h_max is None else h_max
        keep = (self.h >= h_min * (1 - 1e-12)) & (self.h <= h_max * (1 + 1e-12)) & (self.rho > 0)
        if np.count_nonzero(keep) < 2:
            raise InterpolationError("fewer than two profile points in range")
        return float(np.polyfit(np.log(self.h[keep]), np.log(self.rho[keep]), 1)[0])

    def at(self, h):
        """Log-log interpolation of the profile at ``h``."""
        order = np.argsort(self.h)
        hs, rs = self.h[order], self.rho[order]
        if not hs[0] * (1 - 1e-12) <= h <= hs[-1] * (1 + 1e-12):
            raise InterpolationError(f"h={h!r} outside the profile range [{hs[0]!r}, {hs[-1]!r}]")
        return float(np.exp(np.interp(np.log(h), np.log(hs), np.log(rs))))


@dataclass(frozen=True)
class WindowOccupation:
    """Mass of a dyadic window under the spread map's pull-back measure.

    ``intervals`` lists the boundary arcs computed explicitly; the remaining
    arcs (infinitely many, accumulating at the contact points) are summed by
    an Euler-Maclaurin tail reported in ``tail_measure``.  ``measure`` is the
    total, i.e. ``sum(lengths)/(2 pi) + tail_measure``.
    """

    window: DyadicWindow
    measure: float
    intervals: np.ndarray
    tail_measure: float
    info: dict = field(default_factory=dict)


# ----------------------------------------------------------------------------
# Lens map: pseudo-windows


def _quarter_distance(theta, tau, one_minus_center):
    """``|gamma(tau) - zeta|`` with ``1 - zeta`` given (no cancellation near 1)."""
    c = np.exp(-0.5j * theta * np.pi)
    return np.abs(one_minus_center - 2 * c * tau / (1 + c * tau))


def _tau_to_t(theta, tau):
    return 2 * np.arctan(tau ** (1.0 / theta))


def _quarter_sublevel(theta, eta, h):
    """Intervals of ``s`` in [0, pi/2] with ``|gamma(s) - e^{i eta}| <= h``."""
    one_minus = -2j * np.sin(eta / 2) * np.exp(0.5j * eta)
    if eta == 0:
        a = np.cos(theta * np.pi / 2)
        if h >= 2:
            return [(0.0, np.pi / 2)]
        tau = (a * h * h + h * np.sqrt(a * a * h * h + 4 - h * h)) / (4 - h * h)
        return [(0.0, float(_tau_to_t(theta, min(tau, 1.0))))]

    def f(tau):
        return _quarter_distance(theta, tau, one_minus) - h

    scale = min(h, abs(one_minus))
    grid = np.concatenate([[0.0], np.geomspace(1e-3 * scale, 1.0, 240)])
    vals = f(grid)
    # refine interior local extrema so that every piece between breakpoints is monotone
    breaks = [0.0]
    for i in range(1, grid.size - 1):
        lo, mid, hi = vals[i - 1], vals[i], vals[i + 1]
        if (mid <= lo and mid <= hi) or (mid >= lo and mid >= hi):
            sign = 1.0 if mid <= lo else -1.0
            res = minimize_scalar(lambda x: sign * f(x), bounds=(grid[i - 1], grid[i + 1]),
                                  method="bounded", options={"xatol": 1e-15 * grid[i + 1]})
            breaks.append(float(res.x))
    breaks.append(1.0)
    breaks = sorted(set(breaks))
    pieces = []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        flo, fhi = float(f(lo)), float(f(hi))
        if flo > 0 and fhi > 0:
            continue
        if flo <= 0 and fhi <= 0:
            pieces.append((lo, hi))
            continue
        root = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
        pieces.append((lo, root) if flo <= 0 else (root, hi))
    merged = []
    for lo, hi in pieces:
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return [(float(_tau_to_t(theta, lo)), float(_tau_to_t(theta, hi))) for lo, hi in merged]


def lens_window_intervals(theta, w):
    """Boundary arcs ``{t : gamma(t) in S(xi, h)}`` for the lens map, as ``(t_lo, t_hi)`` pairs.

    The four quarter arcs of the lens boundary are mapped onto ``[0, pi/2]``
    with the symmetries ``gamma(-t) = conj gamma(t)`` and
    ``gamma(t + pi) = -gamma(t)``; on each quarter the distance to the centre
    is piecewise monotone along a circular arc and the crossings are found by
    bracketed root finding.
    """
    theta = check_theta(theta)
    eta = float(np.pi - np.mod(np.pi - w.center, TWO_PI))
    h = float(w.radius)

    def wrap(x):
        return float(np.pi - np.mod(np.pi - x, TWO_PI))

    # gamma(-s) = conj gamma(s), gamma(pi - s) = -conj gamma(s), gamma(s - pi) = -gamma(s)
    out = [(lo, hi) for lo, hi in _quarter_sublevel(theta, eta, h)]
    out += [(-hi, -lo) for lo, hi in _quarter_sublevel(theta, -eta, h)]
    out += [(np.pi - hi, np.pi - lo) for lo, hi in _quarter_sublevel(theta, wrap(np.pi - eta), h)]
    out += [(lo - np.pi, hi - np.pi) for lo, hi in _quarter_sublevel(theta, wrap(eta + np.pi), h)]
    merged = []
    for lo, hi in sorted((lo, hi) for lo, hi in out if hi > lo):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))
        else:
            merged.append((lo, hi))
    return merged


def pullback_window_lens(theta, w):
    """``m_phi(S(xi, h))`` for the lens map."""
    return float(sum(hi - lo for lo, hi in lens_window_intervals(theta, w)) / TWO_PI)


# ----------------------------------------------------------------------------
# Dyadic windows


def lens_modulus_cutoff(theta, d):
    """Largest ``s`` in [0, pi/2] with ``1 - |gamma(s)| <= d`` (``1 - |gamma|`` increases in ``s``).

    Closed form: ``1 - |gamma|^2 = 4 a tau/(1 + 2 a tau + tau^2)`` is solved for tau.
    """
    a = np.cos(theta * np.pi / 2)
    d = np.asarray(d, dtype=float)
    q = d * (2 - d)
    b = 4 * a - 2 * a * q
    disc = b * b - 4 * q * q
    with np.errstate(invalid="ignore", divide="ignore"):
        tau = 2 * q / (b + np.sqrt(np.maximum(disc, 0)))
    full = (disc < 0) | (tau >= 1)
    s = np.where(full, np.pi / 2, _tau_to_t(theta, np.minimum(tau, 1.0)))
    return s


def _lens_arg_inverse(theta, A):
    """``s`` in [0, pi/2] with lens argument ``A`` in [0, pi/2]."""
    sn = np.sin(theta * np.pi / 2)
    sa, ca = np.sin(A), np.cos(A)
    tau = sa / (sn * ca + np.sqrt((sn * ca) ** 2 + sa * sa))
    return _tau_to_t(theta, tau)


def dyadic_measures_lens(theta, n):
    """Masses ``m_phi(W_{n,j})``, ``j = 0..2^n - 1``, for the lens map."""
    theta = check_theta(theta)
    s_mod = float(lens_modulus_cutoff(theta, 2.0 ** -n))
    A_mod = float(_lens_quarter(theta, s_mod)[3])
    edges = TWO_PI * np.arange(2 ** n + 1) / 2 ** n
    lo, hi = edges[:-1], edges[1:]

    def arc_length(a0, a1):
        # boundary length whose lens argument runs through [a0, a1] within [0, A_mod]
        a0 = np.clip(a0, 0, A_mod)
        a1 = np.clip(a1, 0, A_mod)
        return np.where(a1 > a0, _lens_arg_inverse(theta, a1) - _lens_arg_inverse(theta, a0), 0.0)

    total = (arc_length(lo, hi)  # t = s: argument A
             + arc_length(TWO_PI - hi, TWO_PI - lo)  # t = -s: argument 2 pi - A
             + arc_length(np.pi - hi, np.pi - lo)  # t = pi - s: argument pi - A
             + arc_length(lo - np.pi, hi - np.pi))  # t = s - pi: argument pi + A
    return total / TWO_PI


def _lens_arg_difference(theta, s1, d):
    """``A(s1) - A(s1 - d)`` without cancellation, for ``0 <= d < s1``."""
    c = np.exp(-0.5j * theta * np.pi)
    s2 = s1 - d
    t1 = np.tan(s1 / 2)
    tan_diff = -np.sin(d / 2) / (np.cos(s1 / 2) * np.cos(s2 / 2))  # tan(s2/2) - tan(s1/2)
    tau1 = t1 ** theta
    tau_diff = tau1 * np.expm1(theta * np.log1p(tan_diff / t1))  # tau2 - tau1
    tau2 = tau1 + tau_diff
    # gamma1/gamma2 = (1 - c tau1)(1 + c tau2)/((1 + c tau1)(1 - c tau2)) = 1 + eps
    eps = 2 * c * tau_diff / ((1 + c * tau1) * (1 - c * tau2))
    return np.arctan2(eps.imag, 1 + eps.real)


def _branch_steps(phi, s1, width, iters=60):
    """Solve ``beta(s1 - d) - beta(s1) = width`` for ``d`` in (0, s1)."""
    d = np.minimum(width / -phi.branch_derivative(s1), 0.5 * s1)
    lo = np.zeros_like(s1)
    hi = s1.copy()
    for _ in range(iters):
        s2 = s1 - d
        F = np.sin(d) / (np.sin(s2) * np.sin(s1)) + _lens_arg_difference(phi.theta, s1, d) - width
        Fp = -phi.branch_derivative(s2)
        lo = np.where(F <= 0, d, lo)
        hi = np.where(F >= 0, d, hi)
        new = d - F / Fp
        bad = (new <= lo) | (new >= hi) | ~np.isfinite(new)
        new = np.where(bad, 0.5 * (lo + hi), new)
        done = np.abs(new - d) <= 4e-16 * d
        d = new
        if np.all(done):
            break
    return d


def _spread_branch(theta, n, explicit_cycles=None, em_nodes=8):
    """Window masses of the branch ``t in [-s_mod, 0)`` of the spread map.

    Returns a dict with the per-sector lengths ``nu`` (in ``s``), the explicit
    interval data and the tail lengths.  See :func:`window_occupation_spread`.
    """
    phi = SpreadLensMap(theta)
    K = 2 ** n
    width = TWO_PI / K
    s_mod = float(lens_modulus_cutoff(theta, 2.0 ** -n))
    if s_mod > phi.delta:
        raise ConstructionDomainError("modulus cutoff exceeds the monotonicity interval of B")
    y_mod = float(phi.branch_argument(s_mod))
    m0 = int(np.ceil(y_mod / width))
    if m0 * width == y_mod:
        m0 += 1
    q_start = m0 * width / TWO_PI
    if explicit_cycles is None:
        # Euler-Maclaurin below is accurate to ~1/(30 q^4) relative once q >= 500
        explicit_cycles = max(2, int(np.ceil(500 - q_start)))
    m = np.arange(m0, m0 + explicit_cycles * K)
    s_lo_edge = phi.branch_inverse(m * width)  # s at the lower argument edge of interval m
    steps = _branch_steps(phi, s_lo_edge, width)
    # consecutive edges may coincide in floating point once beta ~ 1e16 * width;
    # the steps come from the difference equation and stay accurate
    if np.any(steps <= 0) or np.any(np.diff(s_lo_edge) > 0):
        raise ConstructionDomainError("B failed to be monotone during inversion")
    nu = np.zeros(K)
    first_sector = (m0 - 1) % K
    gap = min(max(m0 * width - y_mod, 0.0), width)
    first_len = float(_branch_steps(phi, np.array([s_mod]), gap)[0]) if gap > 0 else 0.0
    nu[first_sector] += first_len
    np.add.at(nu, m % K, steps)
    # Euler-Maclaurin tail: for each sector sum g(q) = S(Y + 2 pi q) - S(Y + width + 2 pi q), q >= 0
    m_tail = m[-1] + 1 + np.arange(K)
    Y = m_tail * width
    x, wq = np.polynomial.legendre.leggauss(em_nodes)
    yq = Y[:, None] + 0.5 * width * (x[None, :] + 1)
    integral = 0.5 * width * (phi.branch_inverse(yq) @ wq) / TWO_PI
    s_a = phi.branch_inverse(Y)
    g0 = _branch_steps(phi, s_a, width)
    s_b = s_a - g0
    dg = TWO_PI * (1 / phi.branch_derivative(s_a) - 1 / phi.branch_derivative(s_b))
    tail = integral + g0 / 2 - dg / 12
    np.add.at(nu, m_tail % K, tail)
    tail_sector = np.zeros(K)
    np.add.at(tail_sector, m_tail % K, tail)
    return {
        "nu": nu, "s_mod": s_mod, "m": m, "s_hi": s_lo_edge, "steps": steps,
        "first": (first_sector, s_mod, first_len), "tail": tail_sector,
        "q_start": q_start, "explicit_cycles": explicit_cycles,
    }


def _combine_branches(nu):
    """Sector masses from the base-branch lengths using the four quarter symmetries."""
    K = nu.size
    j = np.arange(K)
    pi_shift = (j - K // 2) % K
    return (nu[j] + nu[K - 1 - j] + nu[pi_shift] + nu[K - 1 - pi_shift]) / TWO_PI


def dyadic_measures_spread(theta, n, explicit_cycles=None):
    """Masses ``m_phi(W_{n,j})``, ``j = 0..2^n - 1``, for the spread map."""
    theta = check_theta(theta)
    if n < 1:
        raise ParameterError("level must be >= 1")
    return _combine_branches(_spread_branch(theta, n, explicit_cycles)["nu"])


def window_occupation_spread(theta, w, explicit_cycles=None):
    """Mass of the dyadic window ``w`` under the spread map, with its boundary arcs.

    On the branch ``t = -s`` near 0 the boundary argument is ``beta(s) =
    cot(s) - A(s)``, strictly decreasing, so the preimage of the sector is a
    union of arcs between consecutive solutions of ``beta(s) = 2 pi m 2^-n``.
    They are solved explicitly for ``explicit_cycles`` turns beyond the
    modulus cutoff; the arc lengths come from a difference equation that
    avoids subtracting nearly equal angles.  The remaining turns are summed by
    the Euler-Maclaurin formula.  The branches ``t = s``, ``t = pi - s`` and
    ``t = s - pi`` follow by symmetry.
    """
    theta = check_theta(theta)
    n, j = w.level, w.sector
    data = _spread_branch(theta, n, explicit_cycles)
    K = 2 ** n
    measure = float(_combine_branches(data["nu"])[j])
    m, s_hi, steps = data["m"], data["s_hi"], data["steps"]
    first_sector, first_hi, first_len = data["first"]

    def base_arcs(sector):
        sel = (m % K) == sector
        arcs = [(-s_hi[sel][k], -s_hi[sel][k] + steps[sel][k]) for k in range(np.count_nonzero(sel))]
        if sector == first_sector:
            arcs.append((-first_hi, -first_hi + first_len))
        return arcs

    pi_shift = (j - K // 2) % K
    arcs = base_arcs(j)
    arcs += [(-b, -a) for a, b in base_arcs(K - 1 - j)]
    arcs += [(a + np.pi, b + np.pi) for a, b in base_arcs(pi_shift)]
    arcs += [(-b - np.pi, -a - np.pi) for a, b in base_arcs(K - 1 - pi_shift)]
    tail = data["tail"]
    tail_measure = float((tail[j] + tail[K - 1 - j] + tail[pi_shift] + tail[K - 1 - pi_shift]) / TWO_PI)
    intervals = np.array(sorted(arcs)).reshape(-1, 2)
    return WindowOccupation(
        window=w, measure=measure, intervals=intervals, tail_measure=tail_measure,
        info={"q_start": data["q_start"], "explicit_cycles": data["explicit_cycles"],
              "s_mod": data["s_mod"]},
    )


def spread_window_monte_carlo(theta, windows, samples=10 ** 7, seed=0, chunk=10 ** 6):
    """Monte Carlo masses of dyadic windows under the spread map.

    Angles are drawn uniformly from arcs around 0 and pi that contain every
    boundary point reaching the annuli, and the boundary value is evaluated
    directly as ``T^{-1}((-i tan(t/2))^theta) * exp(-(1 + z^2)/(1 - z^2))``
    with ``z = e^{it}``.  Returns masses and their standard errors.
    """
    theta = check_theta(theta)
    windows = list(windows)
    n_min = min(w.level for w in windows)
    half = min(1.5 * float(lens_modulus_cutoff(theta, 2.0 ** -n_min)), np.pi / 2)
    region = 4 * half / TWO_PI
    rng = np.random.default_rng(seed)
    hits = np.zeros(len(windows))
    done = 0
    while done < samples:
        size = min(chunk, samples - done)
        t = rng.uniform(-half, half, size)
        t = np.where(rng.random(size) < 0.5, t, t + np.pi)
        z = np.exp(1j * t)
        w = np.power(-1j * np.tan(t / 2), theta)
        lens = (1 - w) / (1 + w)
        val = lens * np.exp(-(1 + z * z) / (1 - z * z))
        r = np.abs(val)
        a = np.mod(np.angle(val), TWO_PI)
        for k, win in enumerate(windows):
            lo, hi = win.arg_bounds
            hits[k] += np.count_nonzero((r >= 1 - 2.0 ** -win.level) & (a >= lo) & (a < hi))
        done += size
    p = hits / samples
    return region * p, region * np.sqrt(p * (1 - p) / samples)


# ----------------------------------------------------------------------------
# Profiles and sums


def rho_profile(phi, h_grid=None, scan=64):
    """Maximal Carleson function of a lens or spread map on ``h_grid``.

    Lens map: the mass of ``S(1, h)`` (equal to that of ``S(-1, h)`` by
    oddness) is validated against a scan of ``scan`` centres ``e^{i eta}``,
    ``0 <= eta <= 4h``; the reported value is the largest mass found, and a
    scan maximum above twice the mass at ``xi = 1`` raises
    :class:`DominanceAssumptionError`.

    Spread map: ``rho(2^-n)`` is the largest dyadic mass at level ``n``;
    ``h_grid`` must be dyadic.
    """
    if h_grid is None:
        h_grid = 2.0 ** -np.arange(4, 21)
    h = np.sort(np.asarray(h_grid, dtype=float))
    if np.any(h <= 0):
        raise ParameterError("h_grid must be positive")
    if isinstance(phi, LensMap):
        rho = np.empty(h.size)
        ratio = np.empty(h.size)
        for i, hh in enumerate(h):
            if hh >= 2:
                rho[i], ratio[i] = 1.0, 1.0
                continue
            tip = pullback_window_lens(phi.theta, PseudoWindow(0.0, hh))
            etas = np.linspace(0.0, min(4 * hh, np.pi), scan)
            best = max(pullback_window_lens(phi.theta, PseudoWindow(e, hh)) for e in etas)
            if best > 2 * tip:
                raise DominanceAssumptionError(
                    f"scan maximum {best:.3e} exceeds twice the tip mass {tip:.3e} at h={hh:.3e}")
            rho[i] = min(max(best, tip), 1.0)
            ratio[i] = best / tip if tip > 0 else np.inf
        return RhoProfile(h=h, rho=rho, method="analytic_interval", map_id=phi.map_id,
                          halfwidth=np.zeros(h.size), info={"scan_ratio": ratio})
    if isinstance(phi, SpreadLensMap):
        levels = -np.log2(h)
        if np.any(np.abs(levels - np.round(levels)) > 1e-9) or np.any(levels < 1):
            raise ParameterError("the spread-map profile needs dyadic h = 2^-n, n >= 1")
        rho = np.array([dyadic_measures_spread(phi.theta, int(round(n))).max() for n in levels])
        return RhoProfile(h=h, rho=rho, method="analytic_interval", map_id=phi.map_id,
                          halfwidth=np.zeros(h.size), info={"definition": "max_j m(W_{n,j})"})
    raise ParameterError(f"no circle profile for {type(phi).__name__}")


def luecking_sum(phi, p, n_max):
    """Partial sums ``S_n = sum_{m <= n} sum_j (2^m m_phi(W_{m,j}))^{p/2}``, ``n = 1..n_max``."""
    if not p > 0:
        raise ParameterError("p must be positive")
    if n_max < 2:
        raise ParameterError("n_max must be >= 2")
    if isinstance(phi, LensMap):
        level = dyadic_measures_lens
    elif isinstance(phi, SpreadLensMap):
        level = dyadic_measures_spread
    else:
        raise ParameterError(f"no dyadic windows for {type(phi).__name__}")
    terms = []
    for n in range(1, n_max + 1):
        mu = level(phi.theta, n)
        terms.append(float(np.sum((2.0 ** n * mu) ** (p / 2))))
    return np.cumsum(terms)


def modulus_integral(phi, power=1.0):
    """``int dt/(2 pi (1 - |phi*|)^power)``; finite for lens-type symbols when ``power*theta < 1``."""
    def integrand(t):
        q = np.asarray(phi.one_minus_modulus_sq(t))
        one_minus = q / (1 + np.sqrt(1 - q))
        return one_minus ** -power

    return boundary_integral(phi, integrand, symmetric=isinstance(phi, (LensMap, SpreadLensMap)))


def rho_area_profile(phi, h_grid=None, samples=10 ** 5, seed=0, scan=16):
    """Monte Carlo estimate of ``sup_xi A({z : phi(z) in S(xi, h)})`` for the lens map.

    ``A`` is normalized area.  Sampling is by importance in the Cayley
    coordinate ``u = T(z)**theta = T(phi(z))``: ``u`` is drawn uniformly from
    the sector ``|arg u| < theta pi/2``, ``|u| <= H/(2 - H)`` with
    ``H = 3h``, which contains the preimage of every window centred within
    ``2h`` of 1, and each hit is weighted by the area Jacobian ``|dz/du|^2``.
    Nothing is computed relative to ``z = 1``, so ``h`` can go down to
    ``1e-16`` and below.  For large windows (``H/(2 - H) > 1``) the disk is
    sampled uniformly instead.  The same points serve all ``scan`` centres;
    each ``h`` gets its own random stream spawned from ``seed`` and the
    reported half-width is the 95% normal interval at the maximizing centre.
    """
    if not isinstance(phi, LensMap):
        raise ParameterError("rho_area_profile supports LensMap symbols")
    if samples < 10 ** 5:
        raise ParameterError("at least 1e5 samples are required")
    theta = phi.theta
    if h_grid is None:
        h_grid = 2.0 ** -np.arange(4, 13)
    h = np.sort(np.asarray(h_grid, dtype=float))
    streams = np.random.SeedSequence(seed).spawn(h.size)
    rho = np.empty(h.size)
    half = np.empty(h.size)
    for i, hh in enumerate(h):
        if hh >= 2:
            rho[i], half[i] = 1.0, 0.0
            continue
        rng = np.random.default_rng(streams[i])
        etas = np.linspace(0.0, min(2 * hh, np.pi), scan)
        one_minus_xi = -2j * np.sin(etas / 2) * np.exp(0.5j * etas)  # 1 - xi
        H = 3 * hh
        radius = H / (2 - H) if H < 2 else np.inf
        sums = np.zeros(scan)
        sq = np.zeros(scan)
        done = 0
        while done < samples:
            size = min(samples - done, 250_000)
            if radius <= 1:
                u = radius * np.sqrt(rng.random(size)) * np.exp(
                    1j * rng.uniform(-0.5 * theta * np.pi, 0.5 * theta * np.pi, size))
                T = u ** (1.0 / theta)
                jac = np.abs(2 / (1 + T) ** 2) ** 2 * np.abs(T / (theta * u)) ** 2
                # sector area / pi turns the Jacobian average into normalized area
                weight = jac * (0.5 * theta * radius * radius)
                phi_minus_one = -2 * u / (1 + u)
            else:
                z = np.sqrt(rng.random(size)) * np.exp(1j * rng.uniform(-np.pi, np.pi, size))
                weight = np.ones(size)
                phi_minus_one = np.asarray(phi(z)) - 1
            hit = np.abs(phi_minus_one[:, None] + one_minus_xi[None, :]) <= hh
            contrib = hit * weight[:, None]
            sums += contrib.sum(axis=0)
            sq += (contrib ** 2).sum(axis=0)
            done += size
        mean = sums / samples
        var = np.maximum(sq / samples - mean ** 2, 0.0)
        k = int(np.argmax(mean))
        rho[i] = min(mean[k], 1.0)
        half[i] = 1.96 * np.sqrt(var[k] / samples)
    return RhoProfile(h=h, rho=rho, method="monte_carlo", map_id=phi.map_id, halfwidth=half,
                      info={"samples": samples, "seed": seed})
