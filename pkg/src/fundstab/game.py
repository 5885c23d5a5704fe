"""Two-depositor run game and its no-run equilibrium conditions.

A strict Nash no-run (SNNR) equilibrium requires that keeping deposits is
the unique best reply to either action of the other depositor. The
predicates here use weak inequalities on the liquidity and equity buffers;
the transaction cost ``eps`` only enters the explicit payoff table.
"""

import enum
import warnings
from dataclasses import dataclass

from ._validation import check_fraction, check_share, resolve_tol
from .exceptions import DomainError, UnsupportedRegimeError
from .model import (
    LiquidityParams,
    fire_sale_capacity,
    liquidity_generated,
    pledge_capacity,
)

DEFAULT_EPS = 1e-6


class EquityCapWarning(UserWarning):
    """Equity exceeds the full-liquidation loss ``1/(theta+1)``."""


@dataclass(frozen=True)
class LiabilityStructure:
    equity: float
    term: float
    deposits: float

    def __post_init__(self):
        for name in ("equity", "term", "deposits"):
            object.__setattr__(self, name, check_share(getattr(self, name), name))
        total = self.equity + self.term + self.deposits
        if abs(total - 1.0) > 1e-12:
            raise DomainError(
                f"equity + term + deposits must equal 1, got {total!r}"
            )

    @classmethod
    def from_equity_term(cls, equity, term):
        """Build a structure whose deposits absorb the remainder."""
        equity = check_share(equity, "equity")
        term = check_share(term, "term")
        deposits = 1.0 - equity - term
        if deposits < -1e-12:
            raise DomainError(f"equity + term must not exceed 1, got {equity + term!r}")
        return cls(equity, term, max(deposits, 0.0))

    @property
    def per_depositor(self):
        return self.deposits / 2.0

    def exceeds_equity_cap(self, params):
        return self.equity > 1.0 / (params.theta + 1.0)

    def check_equity_cap(self, params):
        """Warn (never raise) when equity would survive a full liquidation."""
        if self.exceeds_equity_cap(params):
            warnings.warn(
                f"equity {self.equity:g} exceeds 1/(theta+1) = "
                f"{1.0 / (params.theta + 1.0):g}",
                EquityCapWarning,
                stacklevel=2,
            )
            return False
        return True


class DepositorAction(enum.Enum):
    KEEP = "K"
    RUN = "R"


@dataclass(frozen=True)
class GamePayoffs:
    """Depositor 1's payoffs; depositor 2's follow by symmetry."""

    u_kk: float
    u_rk: float
    u_kr: float
    u_rr: float
    epsilon: float
    case: int = 0

    def payoff(self, own, other):
        table = {
            (DepositorAction.KEEP, DepositorAction.KEEP): self.u_kk,
            (DepositorAction.RUN, DepositorAction.KEEP): self.u_rk,
            (DepositorAction.KEEP, DepositorAction.RUN): self.u_kr,
            (DepositorAction.RUN, DepositorAction.RUN): self.u_rr,
        }
        return table[(DepositorAction(own), DepositorAction(other))]

    def is_snnr(self):
        """Keeping strictly beats running whatever the other depositor does."""
        return self.u_kk > self.u_rk and self.u_kr > self.u_rr

    def as_tuple(self):
        return (self.u_kk, self.u_rk, self.u_kr, self.u_rr)


def _check_eps(eps, deposits):
    eps = float(eps)
    if not eps > 0.0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not eps < deposits / 20.0:
        raise DomainError(
            f"eps={eps:g} is not small relative to deposits={deposits:g} "
            f"(need eps < deposits/20)"
        )
    return eps


def payoff_matrix_cb_only(liabilities, params, eps=DEFAULT_EPS, tol=None):
    """Payoff table when markets are frozen and only central bank credit exists.

    The case depends on where the pledge capacity falls relative to total
    deposits ``s`` and one depositor's share ``s/2``; ties go to the
    lower-numbered case.
    """
    if params.theta != 0.0:
        raise UnsupportedRegimeError(
            "payoffs are only tabulated for theta == 0 (frozen asset market)"
        )
    tol = resolve_tol(tol)
    s = liabilities.deposits
    eps = _check_eps(eps, s)
    cap = pledge_capacity(params)
    half = s / 2.0
    if s <= cap + tol:
        return GamePayoffs(half, half - eps, half, half - eps, eps, case=1)
    if half <= cap + tol:
        return GamePayoffs(half, half - eps, half, cap / 2.0, eps, case=2)
    return GamePayoffs(half, cap, 0.0, cap / 2.0, eps, case=3)


def is_snnr_cb_only(liabilities, params, tol=None):
    """Pledge capacity covers one depositor's withdrawal."""
    tol = resolve_tol(tol)
    return pledge_capacity(params) >= liabilities.per_depositor - tol


def is_snnr_fire_sale_only(liabilities, params, tol=None):
    """No-run condition when the central bank accepts no collateral."""
    if params.delta != 0.0:
        raise UnsupportedRegimeError("fire-sale-only condition requires delta == 0")
    tol = resolve_tol(tol)
    theta = params.theta
    half = liabilities.per_depositor
    liquid = half <= fire_sale_capacity(params) + tol
    solvent = liabilities.equity >= half ** (theta + 1.0) / (theta + 1.0) - tol
    return liquid and solvent


class Regime(enum.Enum):
    CENTRAL_BANK_ONLY = "CentralBankOnly"
    FIRE_SALE_ONLY = "FireSaleOnly"
    MIXED = "Mixed"


@dataclass(frozen=True)
class RegimeClassification:
    regime: Regime
    reason: str


def classify_regime(liabilities, params, tol=None):
    tol = resolve_tol(tol)
    if params.delta >= params.theta:
        return RegimeClassification(
            Regime.CENTRAL_BANK_ONLY, "delta >= theta: pledging dominates fire sales"
        )
    if pledge_capacity(params) >= liabilities.per_depositor - tol:
        return RegimeClassification(
            Regime.CENTRAL_BANK_ONLY,
            "pledge capacity covers one depositor's withdrawal",
        )
    if params.delta == 0.0:
        return RegimeClassification(
            Regime.FIRE_SALE_ONLY, "delta == 0: no central bank credit"
        )
    return RegimeClassification(
        Regime.MIXED, "theta > delta and pledge capacity below s/2"
    )


def max_feasible_liquidity(equity, params):
    """Largest liquidity reachable while fire-sale losses stay within ``equity``.

    Returns ``(z_opt, y_max)``. When ``theta <= delta`` fire sales never
    help, so the answer is to pledge everything.
    """
    equity = float(equity)
    if equity < 0:
        raise DomainError(f"equity must be non-negative, got {equity}")
    if not params.mixed:
        return 0.0, pledge_capacity(params)
    theta = params.theta
    z = min(1.0, ((theta + 1.0) * equity) ** (1.0 / (theta + 1.0)))
    return z, liquidity_generated(z, params)


def liquidity_slack(liabilities, params):
    """Best attainable liquidity minus one depositor's withdrawal."""
    _, y_max = max_feasible_liquidity(liabilities.equity, params)
    return y_max - liabilities.per_depositor


def is_snnr_mixed(liabilities, params, tol=None):
    """General no-run condition with the fire-sale cutoff chosen optimally."""
    tol = resolve_tol(tol)
    return liquidity_slack(liabilities, params) >= -tol


def reverse_strategy(w, params):
    """Liquidity and loss when pledging ``[0, w]`` and fire-selling ``[w, 1]``.

    This is the ordering the bank should avoid; it exists for comparison.
    """
    w = check_fraction(w, "w")
    t, d = params.theta, params.delta
    loss = (1.0 - w ** (t + 1.0)) / (t + 1.0)
    pledged = w - w ** (d + 1.0) / (d + 1.0)
    sold = (1.0 - w) - loss
    return pledged + sold, loss


__all__ = [
    "DEFAULT_EPS",
    "DepositorAction",
    "EquityCapWarning",
    "GamePayoffs",
    "LiabilityStructure",
    "LiquidityParams",
    "Regime",
    "RegimeClassification",
    "classify_regime",
    "is_snnr_cb_only",
    "is_snnr_fire_sale_only",
    "is_snnr_mixed",
    "liquidity_slack",
    "max_feasible_liquidity",
    "payoff_matrix_cb_only",
    "reverse_strategy",
]
