import math

import numpy as np
import pytest
from scipy.special import binom

from lenslab import series


def test_binomial_series_matches_scipy():
    c = series.binomial_series(0.3, 30, -1.0)
    k = np.arange(30)
    assert np.max(np.abs(c - binom(0.3, k) * (-1.0) ** k)) < 1e-14


@pytest.mark.parametrize("n", [8, 64, 300])
def test_fft_and_direct_products_agree(n):
    rng = np.random.default_rng(n)
    a, b = rng.normal(size=n), rng.normal(size=n)
    direct = series.mul(a, b, n, method="direct")
    fft = series.mul(a, b, n, method="fft")
    assert np.max(np.abs(direct - fft)) < 1e-12 * max(1.0, np.max(np.abs(direct)))


def test_division_inverts_multiplication():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=40), rng.normal(size=40)
    b[0] = 2.0
    q = series.div(a, b)
    assert np.max(np.abs(series.mul(q, b) - a)) < 1e-10
    with pytest.raises(ZeroDivisionError):
        series.div(a, np.zeros(40))


def test_exp_of_z_gives_factorials():
    g = np.zeros(20)
    g[1] = 1.0
    f = series.exp(g)
    assert np.max(np.abs(f - [1 / math.factorial(k) for k in range(20)])) < 1e-16


def test_evaluate_geometric_series():
    c = np.ones(200)
    assert series.evaluate(c, 0.5) == pytest.approx(2.0, rel=1e-14)
