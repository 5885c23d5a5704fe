"""Bank funding stability with power-law asset liquidity and collateral haircuts."""

__version__ = "0.1.0"

from .exceptions import (
    ConfigError,
    DomainError,
    InfeasibleProblemError,
    UnsupportedRegimeError,
)
from .game import (
    DepositorAction,
    GamePayoffs,
    LiabilityStructure,
    Regime,
    RegimeClassification,
    classify_regime,
    is_snnr_cb_only,
    is_snnr_fire_sale_only,
    is_snnr_mixed,
    max_feasible_liquidity,
    payoff_matrix_cb_only,
)
from .model import (
    LiquidationPlan,
    LiquidityParams,
    calibrate_delta_from_average_haircut,
    calibrate_theta_from_default_cost,
    fire_sale_capacity,
    fire_sale_discount,
    fire_sale_loss,
    haircut,
    liquidity_generated,
    pledge_capacity,
)
from .optimizer import (
    Candidate,
    FundingRates,
    OptimalFunding,
    slack_function,
    solve_analytic,
    solve_bruteforce,
    solve_zero_term_candidate,
    zbar,
)
from .policy import (
    PolicyResponse,
    Shock,
    delta_dominating_structure,
    delta_min_feasible,
    delta_restore_rate,
    policy_report,
)
from .sweep import Axis, SweepRow, SweepSpec, read_csv, run_sweep, write_csv
