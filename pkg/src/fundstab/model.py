"""Power-law liquidity curves and their integrals.

Assets sit on the unit interval ranked from most to least liquid. Two
curves share that ordering:

* the central bank haircut ``h(x) = x**delta``
* the fire-sale discount ``d(x) = x**theta``

Everything downstream only needs the integrals of these curves, which are
available in closed form.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_exponent, check_fraction
from .exceptions import DomainError


@dataclass(frozen=True)
class LiquidityParams:
    """Fire-sale exponent ``theta`` and collateral exponent ``delta``."""

    theta: float
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", check_exponent(self.theta, "theta"))
        object.__setattr__(self, "delta", check_exponent(self.delta, "delta"))

    @property
    def mixed(self):
        """True when fire sales can add liquidity beyond pledging."""
        return self.theta > self.delta


def _power(x, p):
    # numpy already gives 0**0 == 1, which is the convention we want
    return np.power(x, p)


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def haircut(x, params):
    """Central bank haircut applied to the asset at position ``x``."""
    x = check_fraction(x)
    return _out(_power(x, params.delta))


def fire_sale_discount(x, params):
    """Discount suffered when fire-selling the asset at position ``x``."""
    x = check_fraction(x)
    return _out(_power(x, params.theta))


def pledge_capacity(params):
    """Central bank credit obtainable by pledging the whole asset book."""
    d = params.delta
    return d / (d + 1.0)


def fire_sale_capacity(params):
    """Cash raised by fire-selling the whole asset book."""
    t = params.theta
    return t / (t + 1.0)


def fire_sale_loss(z, params):
    """Loss booked against equity when the ``z`` most liquid assets are sold."""
    z = check_fraction(z, "z")
    t = params.theta
    return _out(_power(z, t + 1.0) / (t + 1.0))


def pledged_haircut_loss(z, params):
    # haircut mass on the pledged tranche [z, 1]
    z = check_fraction(z, "z")
    d = params.delta
    return _out((1.0 - _power(z, d + 1.0)) / (d + 1.0))


def liquidity_generated(z, params):
    """Total liquidity from fire-selling ``[0, z]`` and pledging ``[z, 1]``.

    Equals :func:`pledge_capacity` at ``z=0`` and :func:`fire_sale_capacity`
    at ``z=1``.
    """
    z = check_fraction(z, "z")
    t, d = params.theta, params.delta
    y = d / (d + 1.0) + _power(z, d + 1.0) / (d + 1.0) - _power(z, t + 1.0) / (t + 1.0)
    return _out(y)


def liquidity_derivative(z, params):
    """Analytic derivative of :func:`liquidity_generated` in ``z``."""
    z = check_fraction(z, "z")
    return _out(_power(z, params.delta) - _power(z, params.theta))


@dataclass(frozen=True)
class LiquidationPlan:
    """A fire-sale cutoff together with the liquidity and loss it implies."""

    z: float
    liquidity_generated: float
    fire_sale_loss: float

    @classmethod
    def from_cutoff(cls, z, params):
        z = check_fraction(z, "z")
        return cls(
            z=z,
            liquidity_generated=liquidity_generated(z, params),
            fire_sale_loss=fire_sale_loss(z, params),
        )

    def matches(self, params, tol=1e-12):
        """Check the stored values against a recomputation under ``params``."""
        return (
            abs(self.liquidity_generated - liquidity_generated(self.z, params)) <= tol
            and abs(self.fire_sale_loss - fire_sale_loss(self.z, params)) <= tol
        )


def _check_open_unit(value, name):
    value = float(value)
    if not np.isfinite(value) or not 0.0 < value < 1.0:
        raise DomainError(f"{name} must lie strictly inside (0, 1), got {value}")
    return value


def calibrate_delta_from_average_haircut(avg_haircut):
    """Collateral exponent implied by the average haircut over all assets.

    Pledging the full book costs an average haircut of ``1/(delta+1)``.
    """
    avg_haircut = _check_open_unit(avg_haircut, "avg_haircut")
    return 1.0 / avg_haircut - 1.0


def calibrate_theta_from_default_cost(cost):
    """Fire-sale exponent implied by the cost of liquidating every asset."""
    cost = _check_open_unit(cost, "cost")
    return 1.0 / cost - 1.0
