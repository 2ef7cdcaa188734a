"""Degrees-of-freedom estimation and Cp / AIC / BIC model selection.

The unbiased df estimate at any lam is the nonzero-coefficient count, so each
criterion is a cheap function of (rss, df) and its global minimizer over all
lam >= 0 is attained at a transition value of the path.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError
from .path import FitResult, LassoPath, fit_at, transition_fit

CRITERIA = ("cp", "aic", "bic")


@dataclass(frozen=True)
class SelectionReport:
    criterion: str
    sigma2: float
    # One row per transition value: (lam, rss, df_hat, criterion value).
    rows: tuple[tuple[float, float, int, float], ...]
    chosen_m: int
    chosen_lambda: float
    chosen_beta: np.ndarray

    @property
    def chosen_df(self) -> int:
        return self.rows[self.chosen_m][2]


def df_hat(fit: FitResult) -> int:
    """Unbiased degrees-of-freedom estimate: the nonzero count."""
    return int(np.count_nonzero(fit.beta))


def estimate_sigma2(X, y) -> float:
    """Residual variance of the full OLS fit, rss / (n - p)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if n <= p:
        raise DataError(f"sigma2 estimation needs n > p (got n={n}, p={p})")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ beta
    s2 = float(r @ r) / (n - p)
    if s2 <= 1e-15 * max(float(y @ y), 1.0):
        warnings.warn("zero OLS residual: Cp/AIC/BIC are degenerate", RuntimeWarning)
    return s2


def cp(rss: float, df: int, n: int, sigma2: float) -> float:
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return rss / n + 2.0 * df * sigma2 / n


def aic(rss: float, df: int, n: int, sigma2: float) -> float:
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return rss / (n * sigma2) + 2.0 * df / n


def bic(rss: float, df: int, n: int, sigma2: float) -> float:
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return rss / (n * sigma2) + np.log(n) * df / n


_CRITERION_FN = {"cp": cp, "aic": aic, "bic": bic}


def criterion_value(criterion: str, rss: float, df: int, n: int, sigma2: float) -> float:
    try:
        fn = _CRITERION_FN[criterion]
    except KeyError:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}") from None
    return fn(rss, df, n, sigma2)


def select_optimal(path: LassoPath, criterion: str, sigma2: float) -> SelectionReport:
    """Minimize the criterion over every transition value (lam = 0 included).

    Ties are broken toward larger lam, i.e. the sparser model.
    """
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    if path.n_transitions == 0:
        raise ValueError("empty path")
    n = len(path.y)
    rows = []
    fits = []
    for m in range(path.n_transitions):
        fit = transition_fit(path, m)
        val = criterion_value(criterion, fit.rss, fit.df_hat, n, sigma2)
        rows.append((float(path.transition_lambdas[m]), fit.rss, fit.df_hat, val))
        fits.append(fit)
    values = np.array([r[3] for r in rows])
    chosen_m = int(np.argmin(values))  # argmin takes the first = largest lam on ties
    return SelectionReport(
        criterion=criterion,
        sigma2=sigma2,
        rows=tuple(rows),
        chosen_m=chosen_m,
        chosen_lambda=rows[chosen_m][0],
        chosen_beta=fits[chosen_m].beta,
    )


def criterion_curve(path: LassoPath, criterion: str, sigma2: float, lambdas) -> list[tuple[float, float]]:
    """Criterion values on an arbitrary lam grid (plot-ready)."""
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(lambdas < 0):
        raise ValueError("grid values must be nonnegative")
    n = len(path.y)
    out = []
    for lam in lambdas:
        fit = fit_at(path, float(lam))
        out.append((float(lam), criterion_value(criterion, fit.rss, fit.df_hat, n, sigma2)))
    return out
