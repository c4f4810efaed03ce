import numpy as np
import pytest

from lenslab.blaschke import (
    BlaschkeProduct,
    build_symmetric_blaschke,
    embedding_bound,
    eval_log_magnitude,
    goodportion_check,
    lens_curve_point,
    pseudo_hyperbolic,
    pseudo_hyperbolic_pairs,
    pseudo_hyperbolic_property_check,
)
from lenslab.errors import ConstructionError, DomainError, ParameterError
from lenslab.maps import LensMap


def random_disk(count, seed):
    rng = np.random.default_rng(seed)
    return np.sqrt(rng.random(count)) * 0.99 * np.exp(1j * rng.uniform(-np.pi, np.pi, count))


def test_pseudo_hyperbolic_basics():
    b = 0.3 + 0.4j
    assert pseudo_hyperbolic(b, b) == 0
    assert pseudo_hyperbolic(0, b) == pytest.approx(abs(b))
    a = random_disk(100, 0)
    c = random_disk(100, 1)
    assert np.allclose(pseudo_hyperbolic(a, c), pseudo_hyperbolic(c, a), rtol=1e-14)
    with pytest.raises(DomainError):
        pseudo_hyperbolic(1.0, 0.2)


def test_pseudo_hyperbolic_identity():
    a, b = random_disk(1000, 2), random_disk(1000, 3)
    d = pseudo_hyperbolic(a, b)
    lhs = 1 / d ** 2 - 1
    rhs = (1 - abs(a) ** 2) * (1 - abs(b) ** 2) / abs(a - b) ** 2
    assert np.max(np.abs(lhs - rhs) / rhs) < 1e-12


@pytest.mark.parametrize("M", [0.5, 1.0, 2.0])
def test_distance_bound_on_constrained_pairs(M):
    rng = np.random.default_rng(5)
    a, b = pseudo_hyperbolic_pairs(M, 1000, rng)
    assert np.all(np.abs(a - b) <= M * np.minimum(1 - abs(a), 1 - abs(b)) * (1 + 1e-12))
    violations, largest, bound = pseudo_hyperbolic_property_check(M, 10 ** 4, seed=6)
    assert violations == 0 and largest <= bound


def test_construction_and_symmetry():
    N = 4
    B = build_symmetric_blaschke(0.5, N)
    assert B.degree == 4 * N * N
    z = random_disk(100, 7)
    v = B.evaluate(z)
    assert np.max(np.abs(B.evaluate(np.conj(z)) - np.conj(v))) < 1e-12
    assert np.max(np.abs(B.evaluate(-z) - v)) < 1e-12
    t = np.linspace(-3, 3, 50)
    assert np.max(np.abs(np.abs(B.evaluate(np.exp(1j * t))) - 1)) < 1e-12
    with pytest.raises(ParameterError):
        build_symmetric_blaschke(0.5, 0)
    with pytest.raises(ConstructionError):
        BlaschkeProduct(zeros=[1.0], multiplicities=[1])


def test_zeros_on_lens_curve():
    s = np.array([0.2, 1.0])
    g, q = lens_curve_point(0.5, s)
    assert np.allclose(g, LensMap(0.5).boundary(s), atol=1e-15)
    assert np.allclose(q, 1 - abs(g) ** 2, rtol=1e-12)


def test_log_magnitude_against_product_form():
    B = BlaschkeProduct(zeros=random_disk(6, 8), multiplicities=[1, 2, 3, 1, 2, 1])
    z = random_disk(200, 9)
    ref = np.log(np.abs(B.evaluate(z)))
    assert np.max(np.abs(eval_log_magnitude(B, z) - ref)) < 1e-12
    assert eval_log_magnitude(BlaschkeProduct([0j], [1]), 0.5) == pytest.approx(np.log(0.5))
    assert abs(eval_log_magnitude(B, np.exp(0.7j))) < 1e-12
    assert eval_log_magnitude(B, B.zeros[0]) == -np.inf


def test_log_magnitude_high_degree_no_underflow():
    B = build_symmetric_blaschke(0.5, 50)  # degree 10^4
    val = eval_log_magnitude(B, 0.0)
    assert np.isfinite(val) and val < -100


def test_goodportion():
    for theta in (0.3, 0.5, 0.7):
        assert goodportion_check(theta, 5) < 1
    chi = [goodportion_check(0.5, N) for N in range(3, 9)]
    assert max(chi) - min(chi) < 0.05
    coarse, fine = goodportion_check(0.5, 6, 2000), goodportion_check(0.5, 6, 4000)
    assert fine >= coarse - 1e-6


def test_single_zero_sanity():
    B = build_symmetric_blaschke(0.5, 1)
    s = np.pi / 2
    g, q = lens_curve_point(0.5, np.array([s * 0.9]))
    own = pseudo_hyperbolic(g[0] * (1 - 1e-12), B.zeros[0])
    assert np.exp(eval_log_magnitude(B, g, q))[0] <= own + 1e-9


def test_embedding_bound_report():
    rep = embedding_bound(0.5, 3)
    assert rep.degree == 36
    assert rep.sup_value >= max(r[2] for r in rep.per_window)
    assert rep.bound == pytest.approx(np.sqrt(rep.sup_value))
    assert rep.chi_emp < 1
    with pytest.raises(ParameterError):
        embedding_bound(0.5, 1)


def test_embedding_bound_decays_and_dominates_spectrum():
    from lenslab.hardy_spectral import kernel_truncation

    sv = kernel_truncation(LensMap(0.5), 300).singular_values
    bounds = [embedding_bound(0.5, N).bound for N in (3, 4, 5, 6)]
    assert all(b2 < b1 for b1, b2 in zip(bounds[:-1], bounds[1:]))
    ratios = [sv[4 * N * N] / b for N, b in zip((3, 4, 5, 6), bounds)]
    assert max(ratios) <= 1.0


def test_window_profile_peaks_then_decays():
    rep = embedding_bound(0.5, 4)
    per_level = {}
    for eta, h, value in rep.per_window:
        per_level[h] = max(per_level.get(h, 0.0), value)
    values = [per_level[h] for h in sorted(per_level, reverse=True)]
    peak = int(np.argmax(values))
    assert 0 < peak < len(values) - 1
    assert all(b > a for a, b in zip(values[:peak], values[1:peak + 1]))
    assert all(b < a for a, b in zip(values[peak:-1], values[peak + 1:]))
    assert values[-1] < 0.5 * values[peak]
