"""Acceptance suite: every exit criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.
"""

import functools
import json
import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from rankp import (
    IncrementSchedule,
    LambdaGrid,
    SampleSet,
    azuma_rank_p_tail,
    cgf_decomposition_check,
    classic_azuma_tail,
    cli,
    conjugate_exponent,
    crossover_epsilon,
    estimate_norm,
    gamma_one_limit,
    gamma_r,
    generate_paths,
    legendre_numeric,
    cgf_majorant,
    phi_eval,
    preset_spec,
    sample_double_weibull,
    validate_bound,
)

P_ACCEPT = (1.2, 1.5, 2.0, 3.0)
N_PATHS = 100_000
DELTA = 1e-3


def criterion(num, name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] criterion {num} ({name}): FAIL")
                raise
            print(f"[acceptance] criterion {num} ({name}): PASS")

        return wrapper

    return decorate


@criterion(1, "conjugate duality")
def test_c01_conjugate_duality():
    t0 = time.perf_counter()
    ys = np.linspace(-10.0, 10.0, 401)
    worst = 0.0
    for p in (1.2, 1.5, 2.0, 3.0, 5.0):
        q = conjugate_exponent(p)
        for y in ys:
            worst = max(worst, abs(legendre_numeric(p, float(y)) - phi_eval(q, float(y))))
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-6, f"worst conjugate mismatch {worst}"
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


@criterion(2, "norm bound defining equation and majorant domination")
def test_c02_defining_equation_and_majorant():
    rng = np.random.default_rng(20240)
    lams = np.linspace(-100.0, 100.0, 401)
    for _ in range(200):
        c = rng.uniform(0.2, 3.0)
        d = c * rng.uniform(1.0, 12.0)
        p = rng.uniform(1.0 + 1e-6, 2.0 - 1e-9)
        g = gamma_r(c, d, p).value
        lhs = phi_eval(p, g * 2.0 * d / (c * c))
        rhs = 2.0 * (d / c) ** 2
        assert abs(lhs - rhs) <= 1e-9, f"defining equation off by {abs(lhs - rhs)} at (c={c}, d={d}, p={p})"
        f = cgf_majorant(lams, c, d)
        assert np.all(f <= phi_eval(p, g * lams) + 1e-12), f"majorant domination failed at (c={c}, d={d}, p={p})"


@criterion(3, "gamma consistency: value at 2, monotonicity, limit at 1")
def test_c03_gamma_consistency():
    rng = np.random.default_rng(77)
    ps = np.arange(1.01, 2.0001, 0.01)
    for _ in range(100):
        c = rng.uniform(0.2, 3.0)
        d = c * rng.uniform(1.0, 12.0)
        assert gamma_r(c, d, 2.0).value == c
        vals = np.array([gamma_r(c, d, float(p)).value for p in ps])
        assert np.all(np.diff(vals) <= 1e-12)
        limit = gamma_one_limit(c, d)
        assert abs(gamma_r(c, d, 1.001).value - limit) <= 1e-2 * limit


@criterion(4, "classic reduction within 4 ulps")
def test_c04_classic_reduction():
    rng = np.random.default_rng(415)
    for _ in range(100):
        n = int(rng.integers(1, 16))
        sched = IncrementSchedule(tuple(rng.uniform(0.1, 3.0, size=n)))
        for eps in rng.uniform(0.0, sched.c, size=12):
            ours = azuma_rank_p_tail(float(eps), sched, 0.0, 2.0)
            direct = 2.0 * math.exp(-eps * eps / (2.0 * sched.sum_sq))
            assert abs(ours - direct) <= 4.0 * np.spacing(direct), (
                f"reduction off by {abs(ours - direct) / np.spacing(direct):.1f} ulps at eps={eps}, n={n}"
            )


@criterion(5, "crossover location and bound ordering")
def test_c05_crossover():
    t0 = time.perf_counter()
    # independent oracle: the power-branch crossing for c = d = 1, p = 3/2
    g_oracle = 0.5 * 3.25 ** (2.0 / 3.0)
    root = brentq(lambda e: e**3 / (3.0 * g_oracle**3) + 1.0 / 6.0 - 0.5 * e * e, 1.2, 2.5, xtol=1e-13)
    eps_p = crossover_epsilon(1.5, 1.0, 1.0).epsilon_p
    assert abs(eps_p - 1.7696) <= 0.005
    assert abs(eps_p - root) <= 0.005
    single = IncrementSchedule((1.0,))
    for eps in (2.0, 2.5, 3.0):
        assert azuma_rank_p_tail(eps, single, 0.0, 1.5) / classic_azuma_tail(eps, single) < 1.0
    for eps in (1.2, 1.5):
        assert azuma_rank_p_tail(eps, single, 0.0, 1.5) / classic_azuma_tail(eps, single) > 1.0
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0, f"took {elapsed:.3f}s"


@criterion(6, "superadditivity under the r-norm combination")
def test_c06_superadditivity():
    # randomized counterexample search; evaluated in 80-bit precision so the
    # 1e-12 threshold measures the mathematics, not float64 rounding noise
    rng = np.random.default_rng(606)
    n = 100_000
    a = rng.uniform(0.0, 10.0, size=n).astype(np.longdouble)
    b = rng.uniform(0.0, 10.0, size=n).astype(np.longdouble)
    lam = rng.uniform(-10.0, 10.0, size=n).astype(np.longdouble)
    for p in P_ACCEPT:
        pl = np.longdouble(p)
        rl = np.longdouble(min(p, 2.0))

        def phi_ld(x):
            ax = np.abs(x)
            return np.where(ax <= 1.0, 0.5 * ax * ax, ax**pl / pl - 1.0 / pl + 0.5)

        lhs = phi_ld(a * lam) + phi_ld(b * lam)
        rhs = phi_ld((a**rl + b**rl) ** (1.0 / rl) * lam)
        worst = float(np.max(lhs - rhs))
        assert worst <= 1e-12, f"superadditivity violated by {worst} at p={p}"


@criterion(7, "martingale bound Monte Carlo validity across presets")
def test_c07_bound_monte_carlo():
    t0 = time.perf_counter()
    grid = [float(v) for v in np.linspace(20.0 / 12.0, 20.0, 12)]
    failures = []
    for preset in ("zero-rademacher", "zero-uniform", "uniform-adaptive", "weibull-uniform"):
        for p in P_ACCEPT:
            spec = preset_spec(preset, p)
            report = validate_bound(spec, grid, N_PATHS, DELTA, seed=4242)
            if not report.all_passed:
                bad = [(row.eps, row.empirical, row.bound_rank_p) for row in report.rows if not row.passed]
                failures.append((preset, p, bad))
    elapsed = time.perf_counter() - t0
    assert not failures, f"bound violations: {failures}"
    assert elapsed < 60.0, f"took {elapsed:.1f}s"


@criterion(8, "norm estimator oracle values")
def test_c08_estimator_oracle():
    rademacher = SampleSet(np.array([1.0, -1.0]), centered=True)
    tau = estimate_norm(rademacher, 2.0).tau_hat
    assert 0.99 <= tau <= 1.0, f"tau_hat {tau}"
    point = SampleSet(np.zeros(8), centered=True)
    assert estimate_norm(point, 2.0).tau_hat == 0.0
    # scale equivariance: grid rescaled by 1/s, samples by s
    w = sample_double_weibull(2.0, 2_000, seed=808)
    grid = LambdaGrid.default()
    base = estimate_norm(w, 1.5, grid).tau_hat
    for s in (2.0, 3.0):
        scaled = estimate_norm(SampleSet(w.values * s), 1.5, LambdaGrid(grid.points / s, symmetric=True)).tau_hat
        assert abs(scaled - s * base) <= 1e-12 * max(1.0, s * base), f"equivariance off at s={s}"


@criterion(9, "sampler survival law and CGF decomposition")
def test_c09_sampler_and_decomposition():
    for q in (1.5, 2.0, 3.0):
        values = np.abs(sample_double_weibull(q, N_PATHS, seed=909 + int(10 * q)).values)
        worst = 0.0
        for x in (0.5, 1.0, 1.5, 2.0, 2.5):
            emp = float(np.mean(values >= x))
            worst = max(worst, abs(emp - math.exp(-(x**q) / q)))
        assert worst <= 0.01, f"survival deviation {worst} at q={q}"
    spec = preset_spec("zero-uniform", 2.0)
    paths = generate_paths(spec, N_PATHS, seed=910)
    report = cgf_decomposition_check(
        paths.xi0, paths.xin, spec.schedule,
        [-2.0, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 2.0],
        seed=910,
    )
    assert report.passed, [(r.lam, r.excess, r.slack) for r in report.rows if not r.passed]


@criterion(10, "byte-identical reports across 1, 4, and 8 worker threads")
def test_c10_determinism(tmp_path, capsys):
    reports = []
    for threads in ("1", "4", "8"):
        for repeat in range(2):
            out = tmp_path / f"report_{threads}_{repeat}.json"
            code = cli.main(
                [
                    "validate", "--preset", "weibull-uniform", "--p", "1.5",
                    "--n-paths", "20000", "--seed", "31337",
                    "--threads", threads, "--out", str(out),
                ]
            )
            assert code == 0
            text = out.read_text()
            json.loads(text)  # well-formed
            reports.append("\n".join(line for line in text.splitlines() if "duration_s" not in line))
    capsys.readouterr()
    assert all(r == reports[0] for r in reports[1:]), "reports differ beyond duration_s"
