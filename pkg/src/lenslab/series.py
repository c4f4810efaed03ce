"""Truncated power-series arithmetic on coefficient arrays ``c[0], ..., c[N-1]``."""

import numpy as np
from scipy.signal import fftconvolve


def binomial_series(exponent, n, scale=1.0):
    """Coefficients of ``(1 + scale*z)**exponent`` up to ``z**(n-1)``."""
    k = np.arange(1, n)
    ratios = (exponent - k + 1) / k * scale
    return np.concatenate([[1.0], np.cumprod(ratios)])


def mul(a, b, n=None, method="direct"):
    """Product of two series truncated to ``n`` terms (default ``len(a)``)."""
    n = len(a) if n is None else n
    a = np.asarray(a)[:n]
    b = np.asarray(b)[:n]
    if method == "fft":
        out = fftconvolve(a, b)[:n]
    elif method == "direct":
        out = np.convolve(a, b)[:n]
    else:
        raise ValueError(f"unknown convolution method {method!r}")
    if out.size < n:
        out = np.concatenate([out, np.zeros(n - out.size, dtype=out.dtype)])
    return out


def div(a, b, n=None):
    """Quotient ``a/b`` of two series; requires ``b[0] != 0``."""
    n = len(a) if n is None else n
    a = np.asarray(a)[:n]
    b = np.asarray(b)[:n]
    if b[0] == 0:
        raise ZeroDivisionError("series division needs a nonzero constant term")
    dtype = np.result_type(a, b, float)
    q = np.zeros(n, dtype=dtype)
    for k in range(n):
        acc = a[k] if k < a.size else 0.0
        if k:
            upto = min(k, b.size - 1)
            acc = acc - np.dot(b[1:upto + 1], q[k - 1::-1][:upto])
        q[k] = acc / b[0]
    return q


def exp(g, n=None):
    """``exp`` of a series via the recurrence ``n f_n = sum_k k g_k f_{n-k}``."""
    n = len(g) if n is None else n
    g = np.asarray(g)[:n]
    dtype = np.result_type(g, float)
    f = np.zeros(n, dtype=dtype)
    f[0] = np.exp(g[0])
    kg = np.arange(g.size) * g
    for m in range(1, n):
        upto = min(m, g.size - 1)
        f[m] = np.dot(kg[1:upto + 1], f[m - 1::-1][:upto]) / m
    return f


def evaluate(c, z):
    """Horner evaluation of the truncated series at ``z``."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for coeff in np.asarray(c)[::-1]:
        acc = acc * z + coeff
    return acc
