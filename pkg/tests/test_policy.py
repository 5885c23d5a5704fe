import numpy as np
import pytest

from fundstab import DomainError
from fundstab.game import LiabilityStructure, is_snnr_mixed
from fundstab.model import LiquidityParams
from fundstab.optimizer import FundingRates, solve_analytic
from fundstab.policy import (
    Shock,
    baseline,
    delta_dominating_structure,
    delta_min_feasible,
    delta_restore_rate,
    policy_report,
)

RATES = FundingRates(0.05, 0.10)
CRISIS = Shock(0.7, 0.2, 0.2, RATES)


@pytest.fixture(scope="module")
def base():
    return baseline(CRISIS)


def test_shock_direction_validated():
    with pytest.raises(DomainError):
        Shock(0.2, 0.7, 0.2, RATES)
    with pytest.raises(DomainError):
        Shock(0.7, -0.1, 0.2, RATES)


class TestRestoreRate:
    def test_continuous_matches_corner_formula(self, base):
        # after the shock theta <= delta, so cost is r_t (1 - d) / (1 + d)
        r1 = base.r_opt
        expected = (RATES.r_t - r1) / (RATES.r_t + r1)
        # the cost comparison carries the default tolerance
        assert delta_restore_rate(CRISIS) == pytest.approx(expected, abs=1e-7)
        assert expected == pytest.approx(0.35, abs=1e-3)

    def test_grid(self):
        assert delta_restore_rate(CRISIS, grid=0.1) == 0.4

    def test_no_shock(self):
        shock = Shock(0.7, 0.7, 0.2, RATES)
        assert delta_restore_rate(shock) <= 0.2 + 1e-9

    def test_zero_cost_target(self):
        shock = Shock(2.0, 1.0, 1.2, RATES)
        assert baseline(shock).r_opt == 0.0
        assert delta_restore_rate(shock) == pytest.approx(1.0, abs=1e-6)

    def test_cap_too_low(self):
        with pytest.raises(DomainError):
            delta_restore_rate(CRISIS, delta_max=0.3)


class TestDominatingStructure:
    def test_continuous_matches_term_share_bound(self, base):
        t1 = base.t_opt
        expected = (1 - t1) / (1 + t1)
        assert delta_dominating_structure(CRISIS) == pytest.approx(expected, abs=1e-8)
        assert expected == pytest.approx(0.688, abs=1e-3)

    def test_grid(self):
        assert delta_dominating_structure(CRISIS, grid=0.1) == 0.7

    def test_no_shock_is_own_optimum(self):
        shock = Shock(0.7, 0.7, 0.2, RATES)
        assert delta_dominating_structure(shock) == pytest.approx(0.2, abs=1e-6)

    def test_never_above_one(self):
        shock = Shock(1.5, 0.3, 0.1, RATES)
        b = baseline(shock)
        assert b.e_opt > 0 or b.t_opt > 0
        assert delta_dominating_structure(shock) <= 1.0

    def test_not_found_below_cap(self):
        with pytest.raises(DomainError):
            delta_dominating_structure(CRISIS, delta_max=0.5)


class TestMinFeasible:
    def test_continuous_boundary(self, base):
        half = base.s_opt / 2
        assert delta_min_feasible(CRISIS) == pytest.approx(half / (1 - half), abs=1e-8)
        assert delta_min_feasible(CRISIS) == pytest.approx(0.5001248613, abs=1e-8)

    def test_grid(self):
        assert delta_min_feasible(CRISIS, grid=0.1) == 0.5

    def test_grid_without_table_rounding(self):
        # at full precision one depositor's claim slightly exceeds 1/3
        assert delta_min_feasible(CRISIS, grid=0.1, precision=1e-12) == 0.6

    def test_nothing_to_run_on(self):
        shock = Shock(0.0, 0.0, 0.0, RATES)
        assert baseline(shock).s_opt == 0.0
        assert delta_min_feasible(shock) == 0.0

    def test_fire_sales_alone_suffice(self):
        shock = Shock(3.0, 3.0, 0.0, RATES)
        held = baseline(shock).liability_structure()
        assert held.equity > 0
        assert is_snnr_mixed(held, LiquidityParams(3.0, 0.0))
        assert delta_min_feasible(shock) == 0.0

    def test_binding_structure_needs_positive_delta(self):
        shock = Shock(3.0, 3.0, 0.4, RATES)
        assert 0.0 < delta_min_feasible(shock) <= 0.4 + 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_min_feasible_below_dominating(seed):
    rng = np.random.default_rng(seed)
    theta_pre = rng.uniform(0.3, 4.0)
    shock = Shock(
        theta_pre,
        theta_pre * rng.uniform(0.1, 0.95),
        rng.uniform(0.0, 0.8),
        FundingRates(0.05, 0.05 + rng.uniform(0.0, 0.1)),
    )
    assert delta_min_feasible(shock) <= delta_dominating_structure(shock) + 1e-6


def test_feasibility_monotone_in_delta(base):
    held = base.liability_structure()
    flags = [is_snnr_mixed(held, LiquidityParams(0.2, d)) for d in np.linspace(0, 2, 401)]
    first = flags.index(True)
    assert all(flags[first:])
    assert not any(flags[:first])


def test_tightening_after_shock_shrinks_run_proof_set():
    grid = [(e, t) for e in np.linspace(0, 0.5, 26) for t in np.linspace(0, 1, 51) if e + t <= 1]

    def run_proof(delta):
        p = LiquidityParams(0.2, delta)
        return {
            (e, t)
            for e, t in grid
            if is_snnr_mixed(LiabilityStructure.from_equity_term(e, t), p)
        }

    kept, tightened = run_proof(0.2), run_proof(0.1)
    assert tightened < kept


def test_report(base):
    rep = policy_report(CRISIS, grid=0.1)
    assert (rep.delta2, rep.delta3, rep.delta4) == (0.4, 0.7, 0.5)
    assert rep.baseline == base
    assert rep.crisis_cost_unmitigated == pytest.approx(RATES.r_t * 2 / 3)
    assert rep.crisis_cost_unmitigated > base.r_opt
    assert rep.baseline_run_proof_after_shock is False
    assert rep.delta4 <= rep.delta3


def test_report_no_shock():
    rep = policy_report(Shock(0.7, 0.7, 0.2, RATES))
    assert rep.delta4 <= 0.2 + 1e-9
    assert rep.baseline_run_proof_after_shock is True
    assert rep.crisis_cost_unmitigated == pytest.approx(solve_analytic(LiquidityParams(0.7, 0.2), RATES).r_opt)
