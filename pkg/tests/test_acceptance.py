"""Acceptance battery: one test per exit criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Stochastic criteria are pinned to seed 11; rerunning reproduces every
statistic bitwise within one released version.
"""

import math
import time

import numpy as np
import pytest

from inarlim import (
    Bernoulli,
    ExplicitOffspring,
    FiniteSupport,
    GeometricDecay,
    InarModel,
    MdpSchedule,
    Poisson,
    PoissonOffspring,
    RandomStream,
    cesaro_check,
    clt_variance,
    critical_tilt,
    gbar_tables,
    inar1_ldp_rate,
    ldp_rate,
    limit_cgf,
    lln_mean,
    log_mgf_exact,
    mdp_mgf_curve,
    mdp_rate,
    oracle_log_mgf,
    simulate_batch,
    theory_summary,
    tilt_fixed_point,
    validate_clt,
    validate_lln,
    validate_mdp,
)

SEED = 11

HAWKES = InarModel(Poisson(1.0), PoissonOffspring(GeometricDecay(c=0.25, r=0.5)))
BERNOULLI_AR1 = InarModel(Bernoulli(0.5), ExplicitOffspring((Bernoulli(0.4),)))
INAR2 = InarModel(Bernoulli(0.5), ExplicitOffspring((Bernoulli(0.35), Bernoulli(0.25))))
FINITE_MIX = InarModel(
    FiniteSupport((0.3, 0.5, 0.2)), ExplicitOffspring((FiniteSupport((0.7, 0.2, 0.1)),))
)

ORACLE_THETAS = (-1.0, -0.3, 0.0, 0.4, math.log(2))

# Convergence of the scaled, centered log-MGF toward its quadratic limit is
# first-order n**(beta-1): the gap is theta**3 * kappa3 / 6 * n**(beta-1) + O(n**(2beta-2))
# with kappa3 the per-step third cumulant (64 for this Hawkes model), giving
# ~9.4% at n=1e6 for beta=0.75.  Tolerance frozen at 10% after measuring the
# curve itself; a 2% band would require n beyond 1e8.
MDP_CURVE_RTOL = 0.10


def _verdict(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"criterion {num} ({name}): {'PASS' if ok else 'FAIL'} - {detail}")


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for model in (BERNOULLI_AR1, INAR2, FINITE_MIX):
        for n in range(1, 6):
            for theta in ORACLE_THETAS:
                gap = abs(log_mgf_exact(model, theta, n) - oracle_log_mgf(model, theta, n))
                worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-10 and elapsed < 10.0
    _verdict(1, "oracle equivalence", ok, f"worst gap {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-10
    assert elapsed < 10.0


def test_criterion_2_hawkes_closed_forms():
    start = time.perf_counter()
    summary = theory_summary(HAWKES)
    theta_c_target = 0.5 - math.log(0.5) - 1
    const_errs = (
        abs(summary.mu - 2.0),
        abs(summary.sigma2 - 8.0),
        abs(summary.theta_c - theta_c_target),
        abs(mdp_rate(HAWKES, 1.0) - 0.0625),
    )
    worst_resid = 0.0
    for theta in np.linspace(-1.0, summary.theta_c, 21)[1:]:
        f = tilt_fixed_point(HAWKES, float(theta))
        worst_resid = max(worst_resid, abs(f - (theta + 0.5 * math.expm1(f))))
    elapsed = time.perf_counter() - start
    ok = max(const_errs) < 1e-8 and worst_resid < 1e-10 and elapsed < 1.0
    _verdict(
        2,
        "Hawkes constants",
        ok,
        f"constants err {max(const_errs):.2e}, fixed-point residual {worst_resid:.2e}, {elapsed:.2f}s",
    )
    assert max(const_errs) < 1e-8
    assert worst_resid < 1e-10
    assert elapsed < 1.0


def test_criterion_3_reparameterization_identity():
    start = time.perf_counter()
    worst = 0.0
    for x in np.linspace(0.1, 2.5, 21)[1:]:
        gap = abs(ldp_rate(BERNOULLI_AR1, float(x)) - inar1_ldp_rate(Bernoulli(0.5), Bernoulli(0.4), float(x)))
        worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 5.0
    _verdict(3, "reparameterization identity", ok, f"worst gap {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-8
    assert elapsed < 5.0


def test_criterion_4_limit_cgf_convergence():
    start = time.perf_counter()
    n = 10**5
    worst = 0.0
    for model in (HAWKES, BERNOULLI_AR1):
        tc, _ = critical_tilt(model)
        for frac in (0.25, 0.5, 0.9):
            theta = frac * tc
            gap = abs(log_mgf_exact(model, theta, n) / n - limit_cgf(model, theta))
            worst = max(worst, gap)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-3 and elapsed < 30.0
    _verdict(4, "limiting CGF convergence", ok, f"worst gap {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-3
    assert elapsed < 30.0


def test_criterion_5_lemma_bounds_and_cesaro():
    start = time.perf_counter()
    n = 10**5
    worst_rel = 0.0
    for model in (HAWKES, BERNOULLI_AR1):
        tables = gbar_tables(model, n)  # raises if a lemma bound is violated
        mean_l1 = 0.5 if model is HAWKES else 0.4
        var_l1 = 0.5 if model is HAWKES else 0.24
        assert (tables.g1 <= 1 / (1 - mean_l1)).all()
        assert (tables.g2 <= var_l1 / (2 * (1 - mean_l1) ** 3)).all()
        chk = cesaro_check(model, n)
        for empirical, limit in chk.pairs():
            worst_rel = max(worst_rel, abs(empirical - limit) / limit)
    elapsed = time.perf_counter() - start
    ok = worst_rel < 0.01 and elapsed < 30.0
    _verdict(5, "lemma bounds and Cesaro limits", ok, f"worst rel err {worst_rel:.2e}, {elapsed:.2f}s")
    assert worst_rel < 0.01
    assert elapsed < 30.0


def test_criterion_6_mdp_scaled_mgf_curve():
    start = time.perf_counter()
    sched = MdpSchedule(beta=0.75, horizons=(10**4, 10**5, 10**6))
    points = mdp_mgf_curve(HAWKES, 1.0, sched)
    gaps = [abs(p.value - p.limit) for p in points]
    monotone = gaps[0] > gaps[1] > gaps[2]
    rel = gaps[2] / points[2].limit
    elapsed = time.perf_counter() - start
    ok = monotone and rel < MDP_CURVE_RTOL and elapsed < 300.0
    _verdict(
        6,
        "MDP quadratic limit (deterministic)",
        ok,
        f"values {[round(p.value, 4) for p in points]} vs limit 4.0, final rel gap {rel:.3f}, {elapsed:.1f}s",
    )
    assert monotone
    assert rel < MDP_CURVE_RTOL
    assert elapsed < 300.0


def test_criterion_7_clt_empirical():
    start = time.perf_counter()
    reports = [validate_clt(model, n=2000, reps=2000, seed=SEED) for model in (HAWKES, BERNOULLI_AR1)]
    controls = [
        validate_clt(model, n=2000, reps=2000, seed=SEED, sigma2_override=clt_variance(model) / 2)
        for model in (HAWKES, BERNOULLI_AR1)
    ]
    elapsed = time.perf_counter() - start
    positives = all(r.passed for r in reports)
    negatives = all(not r.passed for r in controls)
    ok = positives and negatives and elapsed < 120.0
    detail = ", ".join(
        f"ks={r.statistics['ks_statistic']:.4f} (thr {r.statistics['threshold']:.4f})"
        for r in reports
    )
    _verdict(7, "CLT empirical", ok, f"{detail}; negative controls fail: {negatives}; {elapsed:.1f}s")
    assert positives
    assert negatives
    assert elapsed < 120.0


def test_criterion_8_lln_empirical():
    start = time.perf_counter()
    reports = [validate_lln(model, n=5000, reps=500, seed=SEED) for model in (HAWKES, BERNOULLI_AR1)]
    elapsed = time.perf_counter() - start
    ok = all(r.passed for r in reports) and elapsed < 60.0
    detail = ", ".join(
        f"err={r.statistics['abs_error']:.5f} (band {r.statistics['band']:.5f})" for r in reports
    )
    _verdict(8, "LLN empirical", ok, f"{detail}; {elapsed:.1f}s")
    assert all(r.passed for r in reports)
    assert elapsed < 60.0


def test_criterion_9_mdp_empirical_coarse():
    # Known red: at n=1e4, beta=0.6 the tail event (S_n - n mu)/c(n) >= 1 sits
    # only 0.89 standard deviations into the Gaussian bulk, where -log(p) is
    # dominated by its non-exponential prefactor.  The scaled statistic then
    # concentrates near 0.27-0.30, roughly 4.4x the quadratic rate 0.0625, so
    # the [0.6, 1.4] band cannot contain it at any replication count; the band
    # would first close at horizons beyond 1e9.  The deterministic scaled-MGF
    # curve (criterion 6) carries the sharp moderate-deviation check.
    start = time.perf_counter()
    report = validate_mdp(HAWKES, x=1.0, beta=0.6, n=10**4, reps=None, seed=SEED)
    elapsed = time.perf_counter() - start
    stats = report.statistics
    ok = report.passed and elapsed < 300.0
    _verdict(
        9,
        "MDP empirical (coarse)",
        ok,
        f"r_hat={stats['r_hat']:.4f} vs band [{stats['band_low']:.4f}, {stats['band_high']:.4f}], "
        f"tail count {stats['tail_count']}/{report.reps}, {elapsed:.1f}s",
    )
    assert elapsed < 300.0
    assert report.passed, (
        f"scaled tail statistic {stats['r_hat']:.4f} outside "
        f"[{stats['band_low']:.4f}, {stats['band_high']:.4f}]: the event is a bulk event "
        "at this horizon (0.89 sigma), so its log-probability is prefactor-dominated and "
        "the quadratic-rate band is unreachable at desk scale"
    )


def test_criterion_10_martingale_diagnostic():
    start = time.perf_counter()
    n, reps = 1000, 1000
    terminal = np.array(
        [s.m_n for s in simulate_batch(BERNOULLI_AR1, n, reps, RandomStream(seed=SEED))]
    )
    bound = n * 0.25 + 0.24 * n * lln_mean(BERNOULLI_AR1)
    mean_band = 4 * math.sqrt(bound / reps)
    mean_ok = abs(terminal.mean()) <= mean_band
    second_moment = float((terminal**2).mean())
    second_ok = second_moment <= 1.05 * bound
    elapsed = time.perf_counter() - start
    ok = mean_ok and second_ok and elapsed < 60.0
    _verdict(
        10,
        "martingale diagnostic",
        ok,
        f"mean {terminal.mean():.3f} (band {mean_band:.3f}), "
        f"mean M^2 {second_moment:.1f} <= {1.05 * bound:.1f}; {elapsed:.1f}s",
    )
    assert mean_ok
    assert second_ok
    assert elapsed < 60.0
