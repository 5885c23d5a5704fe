"""Cost-minimal liability structure.

Choose term funding ``t``, equity ``e`` and fire-sale cutoff ``z`` to
minimise ``t*r_t + e*r_e`` subject to

* liquidity: ``f(z) >= (1 - t - e) / 2``
* equity:    ``e >= z**(theta+1) / (theta+1)``
* ``t + e <= 1``.

:func:`solve_analytic` enumerates the closed-form boundary candidates.
:func:`solve_bruteforce` is an exhaustive grid search that shares none of
that algebra and serves as an independent check.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import bisect_root
from ._validation import check_fraction, resolve_tol
from .exceptions import DomainError, InfeasibleProblemError, UnsupportedRegimeError
from .game import LiabilityStructure
from .model import LiquidityParams, fire_sale_loss, liquidity_generated

ROOT_TOL = 1e-12
ROOT_MAX_ITER = 200
COST_TIE_TOL = 1e-12


@dataclass(frozen=True)
class FundingRates:
    """Remuneration of term funding and equity; deposits pay nothing."""

    r_t: float
    r_e: float

    def __post_init__(self):
        r_t, r_e = float(self.r_t), float(self.r_e)
        if not (math.isfinite(r_t) and math.isfinite(r_e)):
            raise DomainError("rates must be finite")
        if r_t < 0:
            raise DomainError(f"r_t must be non-negative, got {r_t}")
        if r_e < r_t:
            raise DomainError(f"r_e ({r_e}) must not be below r_t ({r_t})")
        object.__setattr__(self, "r_t", r_t)
        object.__setattr__(self, "r_e", r_e)

    def cost(self, term, equity):
        return term * self.r_t + equity * self.r_e


class Candidate(enum.Enum):
    CORNER_CB_ONLY = "CornerCBOnly"
    ZERO_TERM_ROOT = "ZeroTermRoot"
    INTERIOR_W4 = "InteriorW4"
    TRIVIAL_ZERO = "TrivialZero"


@dataclass(frozen=True)
class OptimalFunding:
    t_opt: float
    e_opt: float
    z_opt: float
    r_opt: float
    winning_candidate: Candidate
    params: LiquidityParams
    rates: FundingRates

    @property
    def s_opt(self):
        return max(0.0, 1.0 - self.t_opt - self.e_opt)

    @property
    def equity_cap_warning(self):
        """Equity above ``1/(theta+1)``; reported, not enforced."""
        return self.e_opt > 1.0 / (self.params.theta + 1.0)

    def liability_structure(self):
        return LiabilityStructure.from_equity_term(self.e_opt, self.t_opt)

    def constraint_slacks(self):
        return constraint_slacks(self.t_opt, self.e_opt, self.z_opt, self.params)


def constraint_slacks(t, e, z, params):
    """Slack of the liquidity and equity constraints (non-negative if met)."""
    liquidity = liquidity_generated(z, params) - (1.0 - t - e) / 2.0
    equity = e - fire_sale_loss(z, params)
    return liquidity, equity


def is_feasible(t, e, z, params, tol=None):
    tol = resolve_tol(tol)
    if t < -tol or e < -tol or t + e > 1.0 + tol:
        return False
    liq, eq = constraint_slacks(t, e, z, params)
    return liq >= -tol and eq >= -tol


def slack_function(z, params):
    """Liquidity slack with ``t = 0`` and equity set equal to the fire-sale loss.

    Increasing in ``z`` whenever ``theta > delta``; its root is the cheapest
    cutoff for an all-equity backstop.
    """
    z = check_fraction(z, "z")
    t, d = params.theta, params.delta
    value = (
        (d - 1.0) / (d + 1.0)
        + 2.0 * np.power(z, d + 1.0) / (d + 1.0)
        - np.power(z, t + 1.0) / (t + 1.0)
    )
    return float(value) if np.ndim(value) == 0 else value


def solve_zero_term_candidate(params, tol=ROOT_TOL, max_iter=ROOT_MAX_ITER):
    """Root of :func:`slack_function` on ``[0, 1]`` and the equity it needs.

    Returns ``(z_star, e_star)``, or ``None`` if there is no sign change.
    """
    if params.delta >= 1.0 or params.theta <= 0.0:
        return None
    z_star = bisect_root(lambda z: slack_function(z, params), 0.0, 1.0, tol, max_iter)
    if z_star is None:
        return None
    return z_star, fire_sale_loss(z_star, params)


def zbar(params, rates):
    """Cutoff minimising cost along the face where equity equals the loss.

    Clamped to ``[0, 1]``.
    """
    gap = params.theta - params.delta
    if gap <= 0:
        raise UnsupportedRegimeError(
            "zbar needs theta > delta; otherwise pledging alone is optimal"
        )
    total = rates.r_t + rates.r_e
    if total <= 0:
        raise DomainError("r_t + r_e must be positive")
    base = 2.0 * rates.r_t / total
    value = base ** (1.0 / gap) if base > 0 else 0.0
    return min(1.0, max(0.0, value))


def _candidates(params, rates):
    delta = params.delta
    if delta >= 1.0:
        yield Candidate.TRIVIAL_ZERO, 0.0, 0.0, 0.0
        return

    yield Candidate.CORNER_CB_ONLY, (1.0 - delta) / (1.0 + delta), 0.0, 0.0

    if not params.mixed:
        return

    root = solve_zero_term_candidate(params)
    if root is not None:
        z_star, e_star = root
        yield Candidate.ZERO_TERM_ROOT, 0.0, e_star, z_star

    zb = zbar(params, rates)
    h = slack_function(zb, params)
    if h <= 0.0:
        yield Candidate.INTERIOR_W4, -h, fire_sale_loss(zb, params), zb


def _pick(options):
    # cheapest first; near-ties broken by smaller e, then t, then z
    r_min = min(o[0] for o in options)
    close = [o for o in options if o[0] <= r_min + COST_TIE_TOL]
    return min(close, key=lambda o: (o[3], o[2], o[4]))


def solve_analytic(params, rates, tol=None):
    """Closed-form candidate enumeration; returns the cheapest feasible one."""
    tol = resolve_tol(tol)
    options = []
    for label, t, e, z in _candidates(params, rates):
        options.append((rates.cost(t, e), label, t, e, z))
    r, label, t, e, z = _pick(options)
    if not is_feasible(t, e, z, params, tol):
        liq, eq = constraint_slacks(t, e, z, params)
        raise RuntimeError(
            f"{label.value} candidate violates constraints "
            f"(liquidity slack {liq:.3e}, equity slack {eq:.3e})"
        )
    return OptimalFunding(t, e, z, r, label, params, rates)


def _label_grid_point(t, e, z, delta):
    if t == 0.0 and e == 0.0 and z == 0.0 and delta >= 1.0:
        return Candidate.TRIVIAL_ZERO
    if e == 0.0 and z == 0.0:
        return Candidate.CORNER_CB_ONLY
    if t == 0.0:
        return Candidate.ZERO_TERM_ROOT
    return Candidate.INTERIOR_W4


def solve_bruteforce(params, rates, step=1e-3, tol=None):
    """Exhaustive search of the ``(t, e, z)`` lattice with spacing ``step``.

    For every ``(e, z)`` pair only the smallest admissible lattice ``t`` can
    be optimal (cost is non-decreasing in ``t``), so the ``t`` axis is
    resolved with a ceiling instead of being enumerated. Ties are broken
    lexicographically on ``(t, e, z)``. The winning label names the boundary
    face the grid optimum sits on.
    """
    step = float(step)
    if not 0.0 < step <= 0.01:
        raise DomainError(f"step must lie in (0, 0.01], got {step}")
    tol = resolve_tol(tol)

    n = int(math.floor(1.0 / step + 1e-9))
    grid = np.arange(n + 1) * step
    t_max = grid[-1]

    z = grid[:, None]
    e = grid[None, :]
    loss = fire_sale_loss(grid, params)[:, None]
    liquidity = liquidity_generated(grid, params)[:, None]

    need = 1.0 - e - 2.0 * liquidity
    t_idx = np.maximum(np.ceil((need - tol) / step - 1e-9), 0.0)
    t = t_idx * step
    ok = (e >= loss - tol) & (t <= t_max + tol) & (t + e <= 1.0 + tol)
    if not ok.any():
        raise InfeasibleProblemError(
            f"no admissible lattice point for theta={params.theta}, "
            f"delta={params.delta}, step={step}"
        )

    cost = np.where(ok, rates.r_t * t + rates.r_e * e, np.inf)
    r_min = cost.min()
    iz, ie = np.nonzero(cost <= r_min + COST_TIE_TOL)
    order = np.lexsort((iz, ie, t_idx[iz, ie]))
    k = order[0]
    zi, ei = iz[k], ie[k]
    t_best = float(t[zi, ei])
    e_best = float(grid[ei])
    z_best = float(grid[zi])
    return OptimalFunding(
        t_best,
        e_best,
        z_best,
        float(rates.cost(t_best, e_best)),
        _label_grid_point(t_best, e_best, z_best, params.delta),
        params,
        rates,
    )
