"""Acceptance criteria, one check per criterion.

Run with ``pytest -s tests/test_acceptance.py`` or as a script; either way
one PASS/FAIL line is printed per criterion.
"""

import itertools
import time

import numpy as np
import pytest

from fundstab.game import (
    LiabilityStructure,
    is_snnr_cb_only,
    payoff_matrix_cb_only,
    reverse_strategy,
)
from fundstab.model import (
    LiquidityParams,
    calibrate_delta_from_average_haircut,
    calibrate_theta_from_default_cost,
    fire_sale_loss,
    liquidity_generated,
)
from fundstab.optimizer import Candidate, FundingRates, solve_analytic, solve_bruteforce
from fundstab.policy import Shock, policy_report

RATES = FundingRates(0.05, 0.10)
THETAS = np.round(np.arange(1, 41) * 0.1, 10)  # 0.1 .. 4.0
DELTAS = np.round(np.arange(20) * 0.05, 10)  # 0.0 .. 0.95
MONO_TOL = 1e-12


def _grid():
    out = {}
    for name in ("t", "e", "s", "r"):
        out[name] = np.empty((len(THETAS), len(DELTAS)))
    for i, j in itertools.product(range(len(THETAS)), range(len(DELTAS))):
        opt = solve_analytic(LiquidityParams(THETAS[i], DELTAS[j]), RATES)
        out["t"][i, j], out["e"][i, j] = opt.t_opt, opt.e_opt
        out["s"][i, j], out["r"][i, j] = opt.s_opt, opt.r_opt
    return out


_GRID = None


def grid():
    global _GRID
    if _GRID is None:
        _GRID = _grid()
    return _GRID


def _violations(a, axis, sign):
    # sign=+1: non-decreasing expected, -1: non-increasing
    d = sign * np.diff(a, axis=axis)
    bad = d < -MONO_TOL
    return int(bad.sum()), float(d.min()) if d.size else 0.0


def check_worked_example():
    start = time.perf_counter()
    opt = solve_analytic(LiquidityParams(0.7, 0.2), RATES)
    elapsed = time.perf_counter() - start
    ok = (
        abs(opt.z_opt - 0.4444) <= 1e-3
        and abs(opt.r_opt - 0.025) <= 0.0015
        and abs(opt.t_opt - 0.185) <= 1e-3
        and abs(opt.e_opt - 0.148) <= 1e-3
        and abs(opt.s_opt - 0.667) <= 1e-3
        and elapsed < 0.1
    )
    detail = (
        f"z={opt.z_opt:.4f} r={opt.r_opt:.5f} t={opt.t_opt:.4f} e={opt.e_opt:.4f} "
        f"s={opt.s_opt:.4f} in {elapsed * 1e3:.2f} ms"
    )
    return ok, detail


def check_policy_triple():
    start = time.perf_counter()
    rep = policy_report(Shock(0.7, 0.2, 0.2, RATES), grid=0.1)
    elapsed = time.perf_counter() - start
    triple = (rep.delta2, rep.delta3, rep.delta4)
    return triple == (0.4, 0.7, 0.5) and elapsed < 1.0, f"{triple} in {elapsed:.3f} s"


def check_oracle(n=200, step=1e-3, seed=20240601):
    rng = np.random.default_rng(seed)
    worst_ratio, worst = 0.0, None
    for _ in range(n):
        theta = rng.uniform(0.05, 5.0)
        delta = rng.uniform(0.0, 1.2)
        r_t = rng.uniform(0.01, 0.10)
        rates = FundingRates(r_t, r_t + rng.uniform(0.0, 0.15))
        params = LiquidityParams(theta, delta)
        diff = abs(
            solve_analytic(params, rates).r_opt - solve_bruteforce(params, rates, step).r_opt
        )
        ratio = diff / (2.0 * (rates.r_t + rates.r_e) * step)
        if ratio >= worst_ratio:
            worst_ratio, worst = ratio, (theta, delta, rates.r_t, rates.r_e)
    detail = f"{n} draws, worst |diff|/bound = {worst_ratio:.3f} at {np.round(worst, 4).tolist()}"
    return worst_ratio <= 1.0, detail


def check_calibration():
    delta = calibrate_delta_from_average_haircut(0.8333)
    thetas = [calibrate_theta_from_default_cost(c) for c in (0.10, 0.25, 0.44)]
    ok = abs(delta - 0.2) <= 1e-3 and all(
        abs(got - want) <= 0.01 for got, want in zip(thetas, (9.0, 3.0, 1.27))
    )
    return ok, f"delta={delta:.4f} theta={[round(x, 4) for x in thetas]}"


def check_cost_monotone():
    r = grid()["r"]
    n_th, _ = _violations(r, 0, -1)
    n_de, _ = _violations(r, 1, -1)
    ok = n_th == 0 and n_de == 0
    return ok, f"r* violations in theta={n_th}, in delta={n_de} on a 40x20 grid"


def check_shares_monotone_in_theta():
    g = grid()
    n_t, _ = _violations(g["t"], 0, -1)
    n_s, _ = _violations(g["s"], 0, +1)
    ok = n_t == 0 and n_s == 0
    return ok, f"t* violations={n_t}, s* violations={n_s} along theta"


def check_shares_monotone_in_delta():
    g = grid()
    n_t, w_t = _violations(g["t"], 1, -1)
    n_s, w_s = _violations(g["s"], 1, +1)
    ok = n_t == 0 and n_s == 0
    detail = (
        f"t* violations={n_t} (worst step {w_t:+.4f}), "
        f"s* violations={n_s} (worst step {w_s:+.4f}) along delta"
    )
    return ok, detail


def check_equity_peak():
    thetas = np.round(np.arange(1, 401) * 0.01, 10)
    e = np.array([solve_analytic(LiquidityParams(th, 0.2), RATES).e_opt for th in thetas])
    k = int(e.argmax())
    interior = 0 < k < len(e) - 1
    rises = np.all(np.diff(e[: k + 1]) >= -MONO_TOL)
    falls = np.all(np.diff(e[k:]) <= MONO_TOL)
    ok = interior and rises and falls and abs(thetas[k] - 0.9) <= 0.1
    return ok, f"e* peaks at theta={thetas[k]:.2f} (e*={e[k]:.4f}), single-peaked={bool(rises and falls)}"


def check_payoff_buffer(n=1000, seed=7):
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(n):
        s = rng.uniform(1e-3, 1.0)
        equity = rng.uniform(0.0, 1.0 - s)
        delta = rng.uniform(0.0, 4.0)
        eps = rng.uniform(1e-3, 0.999) * s / 20
        liab = LiabilityStructure(equity, 1.0 - s - equity, s)
        params = LiquidityParams(0.0, delta)
        if payoff_matrix_cb_only(liab, params, eps).is_snnr() != is_snnr_cb_only(liab, params):
            mismatches += 1
    return mismatches == 0, f"{n} draws, {mismatches} mismatches"


def check_liquid_first(n_pairs=25, seed=11):
    rng = np.random.default_rng(seed)
    z = np.linspace(0.0, 1.0, 100)
    worst = np.inf
    for _ in range(n_pairs):
        delta = rng.uniform(0.0, 2.0)
        theta = delta + rng.uniform(0.05, 4.0)
        params = LiquidityParams(theta, delta)
        for w in z:
            y_rev, k_rev = reverse_strategy(w, params)
            # cutoff whose fire-sale loss equals the reverse strategy's
            z_eq = min(1.0, ((theta + 1.0) * k_rev) ** (1.0 / (theta + 1.0)))
            assert fire_sale_loss(z_eq, params) <= k_rev + 1e-12
            worst = min(worst, liquidity_generated(z_eq, params) - y_rev)
    ok = worst >= -1e-12
    return ok, f"{n_pairs} mixed (theta, delta) pairs x 100 cutoffs, min liquidity margin {worst:.3e}"


def check_regime_switch():
    thetas = np.round(np.arange(5, 401) * 0.05, 10)  # 0.25 .. 20
    labels = [solve_analytic(LiquidityParams(th, 0.2), RATES).winning_candidate for th in thetas]
    pattern = [k for k, _ in itertools.groupby(labels)]
    switch = thetas[labels.index(Candidate.ZERO_TERM_ROOT)] if Candidate.ZERO_TERM_ROOT in labels else None
    ok = pattern == [Candidate.INTERIOR_W4, Candidate.ZERO_TERM_ROOT]
    return ok, f"pattern {[p.value for p in pattern]}, switch at theta={switch}"


CRITERIA = [
    ("1 worked example", check_worked_example),
    ("2 policy triple", check_policy_triple),
    ("3 oracle equivalence", check_oracle),
    ("4 calibration", check_calibration),
    ("5a r* monotone in theta and delta", check_cost_monotone),
    ("5b t*, s* monotone in theta", check_shares_monotone_in_theta),
    ("5c t*, s* monotone in delta", check_shares_monotone_in_delta),
    ("5d e* interior maximum near theta 0.9", check_equity_peak),
    ("6 payoff matrix vs buffer condition", check_payoff_buffer),
    ("7 liquid-first ordering dominates", check_liquid_first),
    ("8 regime switching", check_regime_switch),
]


@pytest.mark.parametrize("label, check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, check, report):
    passed, detail = check()
    print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
    report(label, passed, detail)
    assert passed, detail


if __name__ == "__main__":
    failed = 0
    for label, check in CRITERIA:
        passed, detail = check()
        failed += not passed
        print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
    raise SystemExit(1 if failed else 0)
