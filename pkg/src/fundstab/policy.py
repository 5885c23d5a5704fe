"""Collateral-framework responses to a fire-sale liquidity shock.

After asset liquidity drops from ``theta_pre`` to ``theta_post`` the central
bank can widen its collateral framework (raise ``delta``). Three candidate
settings are computed:

``delta2``
    restores the pre-crisis minimum funding cost, once banks re-optimise;
``delta3``
    makes the post-shock optimal structure component-wise no more demanding
    than the structure banks already hold;
``delta4``
    the least widening under which the structure banks already hold is
    run-proof, with the fire-sale cutoff re-chosen freely.

Continuous mode (``grid=None``) locates each threshold by bisection.
Grid mode scans ``delta`` on a lattice and, as a printed table would,
expresses every liability share at ``precision`` (whole percentage points
by default) before comparing.
"""

import math
from dataclasses import dataclass

from ._numerics import bisect_threshold
from ._validation import check_exponent, resolve_tol
from .exceptions import DomainError
from .game import LiabilityStructure, is_snnr_mixed
from .model import LiquidityParams
from .optimizer import FundingRates, OptimalFunding, solve_analytic

DELTA_MAX = 5.0
SCAN_RESOLUTION = 1e-4
BISECT_RESOLUTION = 1e-10
TABLE_PRECISION = 0.01


@dataclass(frozen=True)
class Shock:
    theta_pre: float
    theta_post: float
    delta_pre: float
    rates: FundingRates

    def __post_init__(self):
        for name in ("theta_pre", "theta_post", "delta_pre"):
            object.__setattr__(self, name, check_exponent(getattr(self, name), name))
        if self.theta_post > self.theta_pre:
            raise DomainError(
                f"theta_post ({self.theta_post}) must not exceed theta_pre "
                f"({self.theta_pre})"
            )

    @property
    def pre(self):
        return LiquidityParams(self.theta_pre, self.delta_pre)

    def post(self, delta=None):
        return LiquidityParams(
            self.theta_post, self.delta_pre if delta is None else delta
        )


@dataclass(frozen=True)
class PolicyResponse:
    baseline: OptimalFunding
    delta2: float
    delta3: float
    delta4: float
    crisis_cost_unmitigated: float
    baseline_run_proof_after_shock: bool
    grid: float | None = None


@dataclass(frozen=True)
class _Structure:
    # liability shares and cost, possibly rounded to table precision
    t: float
    e: float
    s: float
    r: float


def _round_to(x, precision):
    return round(round(x / precision) * precision, 12)


def _structure(opt, rates, precision):
    if precision is None:
        return _Structure(opt.t_opt, opt.e_opt, opt.s_opt, opt.r_opt)
    t = _round_to(opt.t_opt, precision)
    e = _round_to(opt.e_opt, precision)
    s = round(1.0 - t - e, 12)
    return _Structure(t, e, s, rates.cost(t, e))


def _delta_lattice(grid, delta_max):
    n = int(math.floor(delta_max / grid + 1e-9))
    return [round(k * grid, 12) for k in range(n + 1)]


def _first(pred, grid, delta_max):
    for delta in _delta_lattice(grid, delta_max):
        if pred(delta):
            return delta
    return None


def _scan_then_bisect(pred, delta_max, scan=SCAN_RESOLUTION):
    """Scan ``[0, delta_max]`` at ``scan`` spacing, then refine the first hit.

    Does not rely on ``pred`` being monotone over the whole range.
    """
    if pred(0.0):
        return 0.0
    prev = 0.0
    n = int(math.ceil(delta_max / scan))
    for k in range(1, n + 1):
        delta = min(k * scan, delta_max)
        if pred(delta):
            return bisect_threshold(pred, prev, delta, BISECT_RESOLUTION)
        prev = delta
    return None


def _table_precision(grid, precision):
    # rounding only applies in grid mode
    return precision if grid is not None else None


def baseline(shock):
    """Pre-crisis optimal funding at ``(theta_pre, delta_pre)``."""
    return solve_analytic(shock.pre, shock.rates)


def delta_restore_rate(
    shock, grid=None, delta_max=DELTA_MAX, precision=TABLE_PRECISION, tol=None
):
    """Smallest ``delta`` whose post-shock minimum cost is back at the pre-crisis level."""
    tol = resolve_tol(tol)
    prec = _table_precision(grid, precision)
    rates = shock.rates
    target = _structure(baseline(shock), rates, prec).r

    def pred(delta):
        opt = solve_analytic(shock.post(delta), rates)
        return _structure(opt, rates, prec).r <= target + tol

    if grid is not None:
        found = _first(pred, grid, delta_max)
    else:
        # minimum cost is non-increasing in delta
        found = bisect_threshold(pred, 0.0, delta_max, BISECT_RESOLUTION)
    if found is None:
        raise DomainError(
            f"no delta <= {delta_max} restores the pre-crisis funding cost"
        )
    return found


def delta_dominating_structure(
    shock, grid=None, delta_max=DELTA_MAX, precision=TABLE_PRECISION, tol=None
):
    """Smallest ``delta`` at which the post-shock optimum needs no more equity
    or term funding, and no less short-term funding, than the pre-crisis one."""
    tol = resolve_tol(tol)
    prec = _table_precision(grid, precision)
    rates = shock.rates
    ref = _structure(baseline(shock), rates, prec)

    def pred(delta):
        cur = _structure(solve_analytic(shock.post(delta), rates), rates, prec)
        return cur.e <= ref.e + tol and cur.t <= ref.t + tol and cur.s >= ref.s - tol

    if grid is not None:
        found = _first(pred, grid, delta_max)
    else:
        found = _scan_then_bisect(pred, delta_max)
    if found is None:
        raise DomainError(
            f"no delta <= {delta_max} yields a dominated optimal structure"
        )
    return found


def delta_min_feasible(
    shock, grid=None, delta_max=DELTA_MAX, precision=TABLE_PRECISION, tol=None
):
    """Smallest ``delta`` making the pre-crisis structure run-proof after the shock."""
    tol = resolve_tol(tol)
    prec = _table_precision(grid, precision)
    ref = _structure(baseline(shock), shock.rates, prec)
    held = LiabilityStructure.from_equity_term(ref.e, ref.t)

    def pred(delta):
        return is_snnr_mixed(held, shock.post(delta), tol)

    if grid is not None:
        found = _first(pred, grid, delta_max)
    else:
        # feasibility only improves as delta grows
        found = bisect_threshold(pred, 0.0, delta_max, BISECT_RESOLUTION)
    if found is None:
        raise DomainError(
            f"no delta <= {delta_max} makes the pre-crisis structure run-proof"
        )
    return found


def policy_report(
    shock, grid=None, delta_max=DELTA_MAX, precision=TABLE_PRECISION, tol=None
):
    kwargs = dict(grid=grid, delta_max=delta_max, precision=precision, tol=tol)
    base = baseline(shock)
    crisis = solve_analytic(shock.post(), shock.rates)
    run_proof = is_snnr_mixed(base.liability_structure(), shock.post(), tol)
    return PolicyResponse(
        baseline=base,
        delta2=delta_restore_rate(shock, **kwargs),
        delta3=delta_dominating_structure(shock, **kwargs),
        delta4=delta_min_feasible(shock, **kwargs),
        crisis_cost_unmitigated=crisis.r_opt,
        baseline_run_proof_after_shock=run_proof,
        grid=grid,
    )
