"""The ten acceptance checks, each returning a :class:`CriterionResult`.

Every check computes its numbers from scratch, compares them against fixed
tolerances and also enforces a wall-clock budget.  ``run_all`` is what the
``verify`` subcommand and the acceptance test module call.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .blaschke import embedding_bound, pseudo_hyperbolic_property_check
from .carleson import (
    DyadicWindow,
    dyadic_measures_spread,
    luecking_sum,
    rho_area_profile,
    rho_profile,
    spread_window_monte_carlo,
    window_occupation_spread,
)
from .hardy_spectral import fit_decay, hs_norm_integral, kernel_truncation, matrix
from .maps import (
    ConstantMap,
    LensMap,
    ReducedLensMap,
    ScaledIdentity,
    SpreadLensMap,
    semigroup_compose_check,
)
from .orlicz import (
    LogReal,
    chi_square_composed,
    collinearity_check,
    d_criterion,
    delta2_diagnostics,
    e_criterion,
    luxemburg_norm,
    power_p,
    psi_breakpoints,
    psi_studia,
    witness_report,
)

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_criterion"]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    runtime: float
    budget: float
    values: dict = field(default_factory=dict)

    @property
    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] criterion {self.number:2d} ({self.title}): {self.detail} "
                f"[{self.runtime:.1f}s / {self.budget:.0f}s]")


def _disk_grid(count, seed=0):
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.random(count)) * 0.999
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, count))


def criterion_1():
    dev = semigroup_compose_check(0.5, 0.5, _disk_grid(1000))
    return dev < 1e-12, f"max |phi_.5(phi_.5) - phi_.25| = {dev:.2e} (< 1e-12)", {"deviation": dev}


def criterion_2():
    rows, ok = {}, True
    for theta in (0.3, 0.5, 0.7):
        start = time.perf_counter()
        fit = fit_decay(kernel_truncation(LensMap(theta), 400).singular_values)
        elapsed = time.perf_counter() - start
        rows[theta] = (fit.exponent, fit.residual, elapsed)
        ok &= 0.4 <= fit.exponent <= 0.6 and fit.residual < 0.15 and elapsed < 120
    detail = ", ".join(f"theta={t}: alpha={a:.2f} res={r:.3f}" for t, (a, r, _) in rows.items())
    return ok, detail + " (alpha in [0.4, 0.6], res < 0.15)", {"fits": rows}


def criterion_3():
    alphas = np.round(np.arange(0.5, 0.951, 0.05), 2)
    scaled = np.array([hs_norm_integral(LensMap(a)) * (1 - a) for a in alphas])
    ratio = scaled.max() / scaled.min()
    hs = hs_norm_integral(LensMap(0.5))
    frob = float(np.linalg.norm(matrix(LensMap(0.5), 512).entries))
    rel = abs(frob - hs) / hs
    ok = ratio <= 4 and rel < 0.02
    return ok, (f"HS(alpha)(1-alpha) in [{scaled.min():.3f}, {scaled.max():.3f}] ratio {ratio:.2f} "
                f"(<= 4); integral {hs:.5f} vs Frobenius(512) {frob:.5f}, rel {rel:.2%} (< 2%)"), \
        {"scaled": scaled.tolist(), "ratio": ratio, "relative": rel}


def criterion_4():
    slopes = {t: rho_profile(LensMap(t)).slope() for t in (0.3, 0.5, 0.7)}
    ok = all(abs(s - 1 / t) <= 0.1 for t, s in slopes.items())
    detail = ", ".join(f"theta={t}: {s:.3f} vs {1 / t:.3f}" for t, s in slopes.items())
    return ok, detail + " (+-0.1)", {"slopes": slopes}


def criterion_5():
    theta = 0.5
    slope = rho_profile(SpreadLensMap(theta)).slope()
    consts = [float(dyadic_measures_spread(theta, n).min() * 2.0 ** (n * (1 + 1 / theta)))
              for n in range(6, 13)]
    spread = max(consts) / min(consts)
    ok = abs(slope - (1 + 1 / theta)) <= 0.15 and spread <= 3
    return ok, (f"slope {slope:.3f} vs 3 (+-0.15); lower constants in "
                f"[{min(consts):.3f}, {max(consts):.3f}], ratio {spread:.3f} (<= 3)"), \
        {"slope": slope, "constants": consts}


def criterion_6():
    phi = SpreadLensMap(0.5)
    s_low = luecking_sum(phi, 0.8, 14)
    ratio = s_low[13] / s_low[12]
    s_high = luecking_sum(phi, 1.4, 14)
    tail = (s_high[13] - s_high[9]) / s_high[9]
    ok = ratio >= 1.2 and tail < 0.05
    return ok, (f"p=0.8: S14/S13 = {ratio:.4f} (>= 1.2); p=1.4: (S14-S10)/S10 = {tail:.4f} "
                f"(< 0.05)"), {"ratio": ratio, "tail": tail}


def criterion_7():
    Ns = np.arange(3, 9)
    reports = [embedding_bound(0.5, int(N)) for N in Ns]
    chi = np.array([r.chi_emp for r in reports])
    logb = np.log([r.bound for r in reports])
    slope, icpt = np.polyfit(Ns, logb, 1)
    fitted = slope * Ns + icpt
    r2 = 1 - np.sum((logb - fitted) ** 2) / np.sum((logb - logb.mean()) ** 2)
    variation = chi.max() - chi.min()
    ok = chi.max() < 0.999 and variation < 0.05 and slope < 0 and r2 > 0.9
    return ok, (f"chi_emp max {chi.max():.3e} (< 0.999), variation {variation:.2e} (< 0.05); "
                f"log sqrt(sup) slope {slope:.3f} (< 0), R^2 {r2:.4f} (> 0.9)"), \
        {"chi_emp": chi.tolist(), "slope": slope, "r2": r2}


def criterion_8():
    out = {M: pseudo_hyperbolic_property_check(M, 10 ** 4, seed=8) for M in (0.5, 1.0, 2.0)}
    bad = sum(v[0] for v in out.values())
    detail = ", ".join(f"M={M}: max d {v[1]:.4f} <= {v[2]:.4f}" for M, v in out.items())
    return bad == 0, f"{bad} violations in 3 x 1e4 pairs; " + detail, {"checks": out}


def _luxemburg_cases(count=20, seed=9):
    rng = np.random.default_rng(seed)
    psi = psi_studia()
    errors = []
    for k in range(count):
        choice = k % 4
        if choice == 0:
            phi = power_p(rng.uniform(1, 3))
        elif choice == 1:
            phi = psi
        elif choice == 2:
            phi = chi_square_composed(psi)
        else:
            phi = power_p(1.0)
        size = int(rng.integers(5, 400))
        f = np.exp(rng.normal(0, 1, size)) * 10 ** rng.uniform(-3, 3)
        w = rng.dirichlet(np.ones(size))
        K = luxemburg_norm(f, phi, w)
        errors.append(abs(float(w @ phi.evaluate(f / K)) - 1))
    return errors


def criterion_9():
    psi = psi_studia()
    exact = float(psi(4)) == 16.0 and float(psi(8)) == 256.0
    lin = max(collinearity_check(n, "linear") for n in range(1, 5))
    logd = max(collinearity_check(n, "log") for n in range(1, 11))
    chi = chi_square_composed(psi)
    xs = psi_breakpoints(10)
    tantum = max(float(abs(chi(x.sqrt() * LogReal.of(2).sqrt()).log_value
                           - 2 * chi(x.sqrt()).log_value)) for x in xs)
    d2 = max(float(abs(row.ratio.log_value - 2 * row.x.log_value))
             for row in delta2_diagnostics(psi, xs))
    xf = [float(x) for x in xs[:4]]
    rho = rho_profile(LensMap(0.5), [1 / x ** 2 for x in xf])
    D = np.array([d_criterion(psi, rho, 1 / x ** 2) for x in xf])
    area = rho_area_profile(LensMap(0.5), [1 / x for x in xf], samples=10 ** 5, seed=9)
    E = np.array([e_criterion(psi, area, 1 / x) for x in xf])
    d_ok = D[0] >= 0.1 and np.all((D / D[0] >= 1 / 3) & (D / D[0] <= 3))
    e_ok = E[0] > 0 and np.all((E / E[0] >= 1 / 3) & (E / E[0] <= 3))
    lux = max(_luxemburg_cases())
    ok = (exact and lin < 1e-12 and logd < 1e-12 and tantum < 1e-40 and d2 < 1e-40
          and d_ok and e_ok and lux <= 1e-8)
    detail = (f"psi(4), psi(8) exact: {exact}; collinearity {lin:.1e}/{logd:.1e}; "
              f"chi identity |dlog| {tantum:.1e}; Delta2 |dlog| {d2:.1e}; "
              f"D(h_n) {np.array2string(D, precision=3)}; E(k_n) {np.array2string(E, precision=3)}; "
              f"Luxemburg max |modular - 1| {lux:.1e}")
    return ok, detail, {"D": D.tolist(), "E": E.tolist(), "luxemburg": lux,
                        "witness": witness_report("f_n_family", range(1, 5))}


def criterion_10():
    theta, n = 0.5, 6
    sectors = (0, 3, 17, 32, 50)
    windows = [DyadicWindow(n, j) for j in sectors]
    exact = np.array([window_occupation_spread(theta, w).measure for w in windows])
    mc, se = spread_window_monte_carlo(theta, windows, samples=10 ** 7, seed=10)
    rel = np.abs(mc - exact) / exact
    maps = [LensMap(0.5), SpreadLensMap(0.5), ReducedLensMap(0.5), ScaledIdentity(0.5),
            ConstantMap(0.3)]
    worst = -np.inf
    for phi in maps:
        small = np.linalg.svd(matrix(phi, 64).entries, compute_uv=False)
        large = np.linalg.svd(matrix(phi, 128).entries, compute_uv=False)
        worst = max(worst, float(np.max(small - large[:64])))
    ok = rel.max() < 0.05 and worst <= 1e-12
    return ok, (f"MC vs exact max rel diff {rel.max():.2%} (< 5%); "
                f"max s_n(A_64) - s_n(A_128) = {worst:.1e} (<= 1e-12)"), \
        {"relative": rel.tolist(), "monotonicity": worst}


CRITERIA = {
    1: ("semigroup identity", criterion_1, 1.0),
    2: ("lens spectral decay", criterion_2, 360.0),
    3: ("Hilbert-Schmidt norms", criterion_3, 60.0),
    4: ("lens circle profile", criterion_4, 10.0),
    5: ("spread profile", criterion_5, 60.0),
    6: ("Luecking Schatten cut", criterion_6, 120.0),
    7: ("Blaschke bound", criterion_7, 120.0),
    8: ("pseudo-hyperbolic bound", criterion_8, 1.0),
    9: ("Orlicz suite", criterion_9, 30.0),
    10: ("cross-oracle", criterion_10, 180.0),
}


def run_criterion(number):
    title, func, budget = CRITERIA[number]
    start = time.perf_counter()
    passed, detail, values = func()
    runtime = time.perf_counter() - start
    return CriterionResult(number, title, bool(passed) and runtime < budget, detail,
                           runtime, budget, values)


def run_all(numbers=None):
    return [run_criterion(k) for k in (numbers or sorted(CRITERIA))]
