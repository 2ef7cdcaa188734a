"""Monte Carlo machinery for the covariance definition of degrees of freedom.

Synthetic responses y* = X b + sigma * z are drawn from seeded per-replication
substreams; for each replication the full path is solved and the fit evaluated
on a lam grid.  The covariance estimate of df uses the model mean as control
variate, which matches its expectation with the zero control variate but has
smaller variance.  Also contains the last-step-with-k-predictors machinery,
the finite-difference divergence check, and a growing-n consistency
experiment against the limiting quadratic problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import selection
from .exceptions import ConvergenceError, DegeneracyError
from .path import FitResult, LassoPath, compute_path, fit_at, transition_fit

MAX_SKIP_FRACTION = 1e-3


@dataclass(frozen=True)
class SyntheticModel:
    X: np.ndarray
    beta_true: np.ndarray
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    @property
    def mu_true(self) -> np.ndarray:
        return self.X @ self.beta_true

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class MonteCarloReport:
    lambdas: np.ndarray
    df_mc: np.ndarray
    df_mc_se: np.ndarray
    e_active: np.ndarray
    bias: np.ndarray
    se: np.ndarray
    B: int
    seed: int
    skipped: int


@dataclass(frozen=True)
class UnbiasednessSummary:
    lambdas: np.ndarray
    bias: np.ndarray
    ci_lo: np.ndarray
    ci_hi: np.ndarray
    coverage_fraction: float


def _replication_rng(seed: int, b: int) -> np.random.Generator:
    # Substream keyed on (seed, b): parallel and serial runs draw identically.
    return np.random.default_rng([seed, b])


def synthesize(model: SyntheticModel, seed) -> np.ndarray:
    """One synthetic response draw from a seeded generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return model.mu_true + model.sigma * rng.standard_normal(model.n)


def pilot_lambda_grid(model: SyntheticModel, seed: int, max_points: int = 50) -> np.ndarray:
    """Evaluation grid: transition values of a pilot replication, subsampled
    to at most `max_points`, endpoints always kept."""
    y = synthesize(model, _replication_rng(seed, 0))
    t = compute_path(model.X, y).transition_lambdas
    if len(t) <= max_points:
        return t.copy()
    idx = np.unique(np.round(np.linspace(0, len(t) - 1, max_points)).astype(int))
    return t[idx]


def estimate_df_mc(
    model: SyntheticModel,
    lambdas,
    B: int,
    seed: int,
    control_variate: str = "mean",
) -> MonteCarloReport:
    """Covariance-based Monte Carlo df on a lam grid over B replications.

    Degenerate (tied) paths are skipped and counted; more than 0.1% skips
    aborts the run, since ties have measure zero for a sound design.
    """
    if B < 2:
        raise ValueError("need at least 2 replications")
    if model.sigma <= 0:
        raise ValueError("sigma must be positive")
    if control_variate not in ("mean", "zero"):
        raise ValueError("control_variate must be 'mean' or 'zero'")
    lambdas = np.asarray(lambdas, dtype=float)
    mu = model.mu_true
    a = mu if control_variate == "mean" else np.zeros(model.n)
    sigma2 = model.sigma**2

    cov_terms = []
    actives = []
    skipped = 0
    for b in range(B):
        y = synthesize(model, _replication_rng(seed, b))
        try:
            path = compute_path(model.X, y)
        except DegeneracyError:
            skipped += 1
            if skipped > max(1, MAX_SKIP_FRACTION * B):
                raise
            continue
        row_cov = np.empty(len(lambdas))
        row_act = np.empty(len(lambdas))
        for i, lam in enumerate(lambdas):
            fit = fit_at(path, float(lam))
            row_cov[i] = (fit.mu - a) @ (y - mu) / sigma2
            row_act[i] = fit.df_hat
        cov_terms.append(row_cov)
        actives.append(row_act)

    cov_terms = np.array(cov_terms)
    actives = np.array(actives)
    n_valid = cov_terms.shape[0]
    stat = actives - cov_terms  # per-replication bias statistic
    return MonteCarloReport(
        lambdas=lambdas,
        df_mc=cov_terms.mean(axis=0),
        df_mc_se=cov_terms.std(axis=0, ddof=1) / np.sqrt(n_valid),
        e_active=actives.mean(axis=0),
        bias=stat.mean(axis=0),
        se=stat.std(axis=0, ddof=1) / np.sqrt(n_valid),
        B=n_valid,
        seed=seed,
        skipped=skipped,
    )


def unbiasedness_report(report: MonteCarloReport) -> UnbiasednessSummary:
    """Pointwise 95% intervals for the bias and how often they cover zero."""
    ci_lo = report.bias - 1.96 * report.se
    ci_hi = report.bias + 1.96 * report.se
    covered = (ci_lo <= 0.0) & (0.0 <= ci_hi)
    return UnbiasednessSummary(
        lambdas=report.lambdas,
        bias=report.bias,
        ci_lo=ci_lo,
        ci_hi=ci_hi,
        coverage_fraction=float(covered.mean()),
    )


def transition_active_sizes(path: LassoPath) -> np.ndarray:
    """Nonzero-coefficient count at each transition value lam_m, m = 0..K."""
    sizes = np.empty(path.n_transitions, dtype=int)
    sizes[0] = 0
    for m in range(1, len(path.events)):
        kind = path.events[m][0]
        k = len(path.segments[m].active)
        sizes[m] = k - 1 if kind == "add" else k
    if path.n_transitions > 1:
        sizes[-1] = fit_at(path, 0.0).df_hat
    return sizes


def last_k_fit(path: LassoPath, k: int) -> FitResult | None:
    """Fit at the last transition with exactly k nonzero predictors, if any."""
    if not 0 <= k <= path.p:
        raise ValueError(f"k={k} out of range [0, {path.p}]")
    sizes = transition_active_sizes(path)
    hits = np.nonzero(sizes == k)[0]
    if hits.size == 0:
        return None
    return transition_fit(path, int(hits[-1]))


@dataclass(frozen=True)
class ConjectureBiasReport:
    # One row per k: (k, df_mc, bias = k - df_mc, se, valid replication count).
    rows: tuple[tuple[int, float, float, float, int], ...]
    B: int
    seed: int
    skipped: int


def conjecture_bias_report(model: SyntheticModel, B: int, seed: int) -> ConjectureBiasReport:
    """Monte Carlo df of the last-step-with-k-predictors fit, per k.

    Replications where no step has exactly k predictors are excluded for that
    k and counted.
    """
    if B < 2:
        raise ValueError("need at least 2 replications")
    mu = model.mu_true
    sigma2 = model.sigma**2
    per_k: dict[int, list[float]] = {k: [] for k in range(model.p + 1)}
    skipped = 0
    for b in range(B):
        y = synthesize(model, _replication_rng(seed, b))
        try:
            path = compute_path(model.X, y)
        except DegeneracyError:
            skipped += 1
            if skipped > max(1, MAX_SKIP_FRACTION * B):
                raise
            continue
        sizes = transition_active_sizes(path)
        for k in range(model.p + 1):
            hits = np.nonzero(sizes == k)[0]
            if hits.size == 0:
                continue
            fit = transition_fit(path, int(hits[-1]))
            per_k[k].append(float((fit.mu - mu) @ (y - mu)) / sigma2)
    rows = []
    for k in range(model.p + 1):
        vals = np.array(per_k[k])
        if vals.size < 2:
            rows.append((k, float("nan"), float("nan"), float("nan"), int(vals.size)))
            continue
        df_mc = float(vals.mean())
        se = float(vals.std(ddof=1) / np.sqrt(vals.size))
        rows.append((k, df_mc, k - df_mc, se, int(vals.size)))
    return ConjectureBiasReport(rows=tuple(rows), B=B, seed=seed, skipped=skipped)


def divergence_fd(X, y, lam: float, h: float | None = None) -> float:
    """Central-difference divergence of the fit map y -> mu(y) at fixed lam.

    Requires lam to be at least 10h away from every transition value of y,
    so no kink is straddled.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if h is None:
        h = 1e-5 * (1.0 + float(np.abs(y).max()))
    if h <= 0:
        raise ValueError("h must be positive")
    t = compute_path(X, y).transition_lambdas
    gap = float(np.abs(t - lam).min())
    if gap <= 10.0 * h:
        raise ValueError(f"lam={lam} is within the guard band (10h={10 * h:.3g}) of a transition value")
    total = 0.0
    for i in range(len(y)):
        yp = y.copy()
        yp[i] += h
        ym = y.copy()
        ym[i] -= h
        mup = fit_at(compute_path(X, yp), lam).mu[i]
        mum = fit_at(compute_path(X, ym), lam).mu[i]
        total += (mup - mum) / (2.0 * h)
    return total


def select_step_indexed(path: LassoPath, criterion: str, sigma2: float) -> FitResult:
    """Model selection over the last-step-with-k-predictors fits, treating k
    itself as the df penalty."""
    if criterion in ("cp", "aic"):
        w = 2.0  # cp and aic share the argmin
    elif criterion == "bic":
        w = float(np.log(len(path.y)))
    else:
        raise ValueError(f"unknown criterion {criterion!r}")
    n = len(path.y)
    best_fit = None
    best_val = np.inf
    for k in range(path.p + 1):
        fit = last_k_fit(path, k)
        if fit is None:
            continue
        val = fit.rss / (n * sigma2) + w * k / n
        if val < best_val:
            best_val = val
            best_fit = fit
    if best_fit is None:
        raise ValueError("path has no transition values")
    return best_fit


def solve_limit_problem(C, beta_star, lam: float, tol: float = 1e-12, max_iter: int = 100_000) -> np.ndarray:
    """Minimize (b - b*)' C (b - b*) + lam * ||b||_1 by coordinate descent."""
    C = np.asarray(C, dtype=float)
    beta_star = np.asarray(beta_star, dtype=float)
    p = len(beta_star)
    beta = beta_star.copy()
    for _ in range(max_iter):
        delta = 0.0
        for j in range(p):
            # Stationarity in b_j with the others held fixed soft-thresholds
            # z_j = C_jj b_j - C[j].(b - b*) at lam/2.
            z = C[j, j] * beta[j] - C[j] @ (beta - beta_star)
            old = beta[j]
            beta[j] = np.sign(z) * max(abs(z) - 0.5 * lam, 0.0) / C[j, j]
            delta = max(delta, abs(beta[j] - old))
        if delta <= tol:
            return beta
    raise ConvergenceError("limit-problem coordinate descent did not converge")


def limit_problem_is_transition(C, beta_star, lam: float, rtol: float = 1e-8) -> bool:
    """True when lam sits exactly at an active-set change of the limit problem."""
    C = np.asarray(C, dtype=float)
    beta = solve_limit_problem(C, beta_star, lam)
    grad = 2.0 * (C @ (beta - np.asarray(beta_star, dtype=float)))
    nz = beta != 0
    if np.any(np.abs(beta[nz]) <= rtol * (1.0 + np.abs(beta).max())):
        return True
    slack = lam - np.abs(grad[~nz])
    return bool(slack.size and slack.min() <= rtol * (1.0 + lam))


@dataclass(frozen=True)
class ConsistencyReport:
    limit_active_size: int
    # One row per n: (n, fraction with df_hat == |B*|, mode of df_hat, variance of df_hat).
    rows: tuple[tuple[int, float, int, float], ...]
    B: int
    seed: int


def consistency_experiment(
    design_sampler,
    beta_star,
    sigma: float,
    lam_star: float,
    n_grid,
    B: int,
    seed: int,
    C,
) -> ConsistencyReport:
    """Distribution of df_hat at lam = n * lam_star for growing n.

    `design_sampler(rng, n)` must return an (n, p) design with X'X/n -> C.
    The limiting active-set size comes from solving the limit problem.
    """
    beta_star = np.asarray(beta_star, dtype=float)
    if limit_problem_is_transition(C, beta_star, lam_star):
        raise ValueError("lam_star is a transition value of the limit problem")
    limit_beta = solve_limit_problem(C, beta_star, lam_star)
    limit_size = int(np.count_nonzero(limit_beta))

    rows = []
    for n in n_grid:
        counts = np.zeros(len(beta_star) + 1, dtype=int)
        dfs = np.empty(B)
        for b in range(B):
            rng = np.random.default_rng([seed, int(n), b])
            X = design_sampler(rng, int(n))
            y = X @ beta_star + sigma * rng.standard_normal(int(n))
            df = fit_at(compute_path(X, y), float(n) * lam_star).df_hat
            counts[df] += 1
            dfs[b] = df
        rows.append(
            (
                int(n),
                float(counts[limit_size] / B),
                int(np.argmax(counts)),
                float(dfs.var(ddof=1)),
            )
        )
    return ConsistencyReport(limit_active_size=limit_size, rows=tuple(rows), B=B, seed=seed)
