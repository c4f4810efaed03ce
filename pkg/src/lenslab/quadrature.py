"""Composite Gauss-Legendre rules on uniform and geometrically graded panels."""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def geometric_edges(lo, hi, ratio=2.0):
    """Panel edges ``lo = e_0 < ... < e_m = hi`` with ``e_{i+1}/e_i <= ratio``."""
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    count = max(1, int(np.ceil(np.log(hi / lo) / np.log(ratio))))
    return np.geomspace(lo, hi, count + 1)


def panel_rule(edges, order=16):
    """Gauss-Legendre nodes and weights on consecutive panels ``[e_i, e_{i+1}]``."""
    x, w = _legendre(order)
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = (b - a) / 2
    nodes = (half * x + (a + b) / 2).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def graded_rule(lo, hi, ratio=2.0, order=16, include_zero=False):
    """Rule on ``[lo, hi]`` (or ``[0, hi]`` with an extra panel) graded towards ``lo``."""
    edges = geometric_edges(lo, hi, ratio)
    if include_zero:
        edges = np.concatenate([[0.0], edges])
    return panel_rule(edges, order)


def uniform_rule(lo, hi, width, order=16):
    """Rule on ``[lo, hi]`` with panels of width at most ``width``."""
    count = max(1, int(np.ceil((hi - lo) / width)))
    return panel_rule(np.linspace(lo, hi, count + 1), order)


def circle_rule(singular_angles=(), tmin=1e-40, ratio=2.0, order=16, width=0.25):
    """Rule for ``int f(t) dt/(2 pi)`` over (-pi, pi], graded towards singular angles.

    Each arc between consecutive singular angles is split at its midpoint and
    each half is graded geometrically towards its singular end, down to a gap
    of ``tmin``; the neglected gaps are the caller's truncation error.
    """
    sing = np.sort(np.mod(np.asarray(singular_angles, dtype=float) + np.pi, 2 * np.pi) - np.pi)
    if sing.size == 0:
        t, w = uniform_rule(-np.pi, np.pi, width, order)
        return t, w / (2 * np.pi)
    nodes, weights = [], []
    ends = np.append(sing, sing[0] + 2 * np.pi)
    for left, right in zip(ends[:-1], ends[1:]):
        half = (right - left) / 2
        if half <= tmin:
            continue
        u, wu = graded_rule(tmin, half, ratio, order)
        # offsets are applied to wrapped ends so that nodes next to an angle
        # such as 2 pi keep their full resolution after wrapping
        left_ref = np.mod(left + np.pi, 2 * np.pi) - np.pi
        right_ref = np.mod(right + np.pi, 2 * np.pi) - np.pi
        nodes += [left_ref + u, right_ref - u]
        weights += [wu, wu]
    t = np.concatenate(nodes)
    t = np.where(t > np.pi, t - 2 * np.pi, np.where(t <= -np.pi, t + 2 * np.pi, t))
    return t, np.concatenate(weights) / (2 * np.pi)
