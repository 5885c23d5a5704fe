"""scikit-learn wrappers so the solvers drop into pipelines and grid searches.

Neither estimator learns anything from data: ``fit`` only validates the
input shape. They exist so the closed-form model composes with the rest of
the ecosystem (``Pipeline``, ``clone``, ``get_params``/``set_params``).
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .game import LiabilityStructure, liquidity_slack
from .model import LiquidityParams
from .optimizer import FundingRates, solve_analytic, solve_bruteforce

OUTPUT_COLUMNS = ("t_opt", "e_opt", "s_opt", "z_opt", "r_opt")


def _check_two_columns(X, names):
    X = check_array(X, dtype=float, ensure_all_finite=True)
    if X.shape[1] != 2:
        raise ValueError(
            f"expected 2 columns ({', '.join(names)}), got {X.shape[1]}"
        )
    return X


class FundingStructureSolver(TransformerMixin, BaseEstimator):
    """Map ``(theta, delta)`` rows to the cost-minimal liability structure.

    Parameters
    ----------
    r_t, r_e : float
        Term funding and equity remuneration rates.
    method : {"analytic", "bruteforce"}
        Closed-form candidate enumeration or exhaustive grid search.
    step : float
        Grid spacing for ``method="bruteforce"``.

    ``transform`` returns columns ``t_opt, e_opt, s_opt, z_opt, r_opt``.
    """

    def __init__(self, r_t=0.05, r_e=0.10, method="analytic", step=1e-3):
        self.r_t = r_t
        self.r_e = r_e
        self.method = method
        self.step = step

    def fit(self, X, y=None):
        X = _check_two_columns(X, ("theta", "delta"))
        if self.method not in ("analytic", "bruteforce"):
            raise ValueError(f"unknown method {self.method!r}")
        self.rates_ = FundingRates(self.r_t, self.r_e)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "rates_")
        X = _check_two_columns(X, ("theta", "delta"))
        out = np.empty((X.shape[0], len(OUTPUT_COLUMNS)))
        for i, (theta, delta) in enumerate(X):
            params = LiquidityParams(theta, delta)
            if self.method == "bruteforce":
                opt = solve_bruteforce(params, self.rates_, self.step)
            else:
                opt = solve_analytic(params, self.rates_)
            out[i] = (opt.t_opt, opt.e_opt, opt.s_opt, opt.z_opt, opt.r_opt)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(OUTPUT_COLUMNS, dtype=object)


class RunStabilityClassifier(ClassifierMixin, BaseEstimator):
    """Predict whether ``(equity, term)`` structures are run-proof.

    ``decision_function`` is the best attainable liquidity minus one
    depositor's withdrawal; a structure is run-proof when it is at least
    ``-tol``.
    """

    def __init__(self, theta=0.7, delta=0.2, tol=1e-9):
        self.theta = theta
        self.delta = delta
        self.tol = tol

    def fit(self, X, y=None):
        X = _check_two_columns(X, ("equity", "term"))
        self.params_ = LiquidityParams(self.theta, self.delta)
        self.classes_ = np.array([False, True])
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X):
        check_is_fitted(self, "params_")
        X = _check_two_columns(X, ("equity", "term"))
        return np.array(
            [
                liquidity_slack(LiabilityStructure.from_equity_term(e, t), self.params_)
                for e, t in X
            ]
        )

    def predict(self, X):
        return self.decision_function(X) >= -self.tol
