"""Exact LARS-lasso regularization path by homotopy.

Objective convention, fixed everywhere in this package:

    minimize  ||y - X @ beta||^2  +  lam * sum(|beta|)

so stationarity for an active coordinate reads 2 x_j'r = lam * sign(beta_j)
and inactive coordinates satisfy 2 |x_j'r| <= lam.  Between consecutive
transition values of lam the active coefficients are affine in lam:

    beta_active(lam) = a - (lam / 2) * d,
    a = G^{-1} X_a'y,   d = G^{-1} s,   G = X_a'X_a,

with s the active sign vector.  The solver walks lam downward from
lam0 = max_j 2|x_j'y|, at each step solving the linear equations for the next
predictor to reach correlation equality (addition) or the next active
coefficient to cross zero (drop), and takes the largest candidate below the
current lam.  Ties between distinct candidate events are refused as
degeneracies rather than broken arbitrarily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import chol
from .exceptions import ConvergenceError, DegeneracyError

# Relative guard against re-selecting the current transition.
RESELECT_GUARD = 1e-12
# Two candidate events closer than this (relative to current lam) are a tie.
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class PathSegment:
    """One affine piece of the path, valid for lam in (lambda_lo, lambda_hi)."""

    lambda_hi: float
    lambda_lo: float
    active: tuple[int, ...]
    signs: np.ndarray
    a: np.ndarray
    d: np.ndarray
    p: int

    def __post_init__(self):
        self.signs.flags.writeable = False
        self.a.flags.writeable = False
        self.d.flags.writeable = False


@dataclass(frozen=True)
class FitResult:
    """Coefficients and fit diagnostics at a single lam."""

    lam: float
    beta: np.ndarray
    mu: np.ndarray
    rss: float
    df_hat: int


@dataclass(frozen=True)
class KKTReport:
    active_violation: float
    inactive_violation: float


@dataclass(frozen=True)
class LassoPath:
    """The full path: transition values, events and affine segments.

    transition_lambdas[m] = lam_m with lam_0 > lam_1 > ... > lam_K = 0.
    events[m] is ("add", j) or ("drop", j), the change occurring at lam_m,
    for m = 0..K-1; segments[m] covers (lam_{m+1}, lam_m).
    """

    transition_lambdas: np.ndarray
    events: tuple[tuple[str, int], ...]
    segments: tuple[PathSegment, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.transition_lambdas.flags.writeable = False

    @property
    def lambda_max(self) -> float:
        return float(self.transition_lambdas[0])

    @property
    def n_transitions(self) -> int:
        return len(self.transition_lambdas)

    @property
    def p(self) -> int:
        return self.X.shape[1]


def _as_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be (n, p) and y length n")
    return X, y


def compute_path(X: np.ndarray, y: np.ndarray, max_steps: int | None = None) -> LassoPath:
    """Walk the whole path from lam0 down to 0.

    Raises DegeneracyError when two candidate events tie (within TIE_RTOL
    relative to the current lam) and ConvergenceError when the number of
    steps exceeds `max_steps` (default 8p).
    """
    X, y = _as_xy(X, y)
    n, p = X.shape
    if max_steps is None:
        max_steps = 8 * p

    c0 = 2.0 * (X.T @ y)
    lam0 = float(np.abs(c0).max())
    if lam0 <= 0.0:
        # y orthogonal to every column: the null fit is the whole path.
        return LassoPath(
            transition_lambdas=np.array([0.0]),
            events=(),
            segments=(),
            X=X,
            y=y,
        )
    order = np.argsort(np.abs(c0))
    if p > 1 and lam0 - np.abs(c0[order[-2]]) <= TIE_RTOL * lam0:
        raise DegeneracyError(
            f"predictors {order[-1]} and {order[-2]} tie for entry at lam0; "
            "jitter the response to break the tie"
        )
    j0 = int(order[-1])
    active: list[int] = [j0]
    signs: list[float] = [float(np.sign(c0[j0]))]
    f = chol.factor(np.array([[X[:, j0] @ X[:, j0]]]), active_order=[j0])

    lam_cur = lam0
    transitions = [lam0]
    events: list[tuple[str, int]] = [("add", j0)]
    segments: list[PathSegment] = []

    for _ in range(max_steps):
        Xa = X[:, active]
        s = np.array(signs)
        a = chol.solve(f, Xa.T @ y)
        d = chol.solve(f, s)

        # Correlations are affine in lam: c_j(lam) = u_j + lam * v_j.
        r0 = y - Xa @ a
        u = 2.0 * (X.T @ r0)
        v = X.T @ (Xa @ d)

        hi = lam_cur * (1.0 - RESELECT_GUARD)
        best: list[tuple[float, str, int]] = []
        inactive = np.setdiff1d(np.arange(p), active, assume_unique=False)
        for j in inactive:
            for st in (1.0, -1.0):
                denom = st - v[j]
                if denom == 0.0:
                    continue
                cand = u[j] / denom
                if 0.0 < cand < hi:
                    best.append((cand, "add", int(j)))
        for pos, i in enumerate(active):
            if d[pos] != 0.0:
                cand = 2.0 * a[pos] / d[pos]
                if 0.0 < cand < hi:
                    best.append((cand, "drop", int(i)))

        if not best:
            lam_next = 0.0
            event = None
        else:
            best.sort(reverse=True)
            lam_next, kind, idx = best[0]
            ties = [
                b for b in best[1:]
                if b[2] != idx and lam_next - b[0] <= TIE_RTOL * lam_cur
            ]
            if ties:
                raise DegeneracyError(
                    f"events {kind}({idx}) and {ties[0][1]}({ties[0][2]}) tie at "
                    f"lam={lam_next:.6g}; jitter the response to break the tie"
                )
            event = (kind, idx)

        segments.append(
            PathSegment(
                lambda_hi=lam_cur,
                lambda_lo=lam_next,
                active=tuple(active),
                signs=s,
                a=a,
                d=d,
                p=p,
            )
        )
        transitions.append(lam_next)
        if event is None:
            return LassoPath(
                transition_lambdas=np.array(transitions),
                events=tuple(events),
                segments=tuple(segments),
                X=X,
                y=y,
            )

        events.append(event)
        kind, idx = event
        if kind == "add":
            cross = Xa.T @ X[:, idx]
            f = chol.add_column(f, cross, float(X[:, idx] @ X[:, idx]), index=idx)
            # Entering sign is the sign of its correlation at the transition.
            st = 1.0 if u[idx] + lam_next * v[idx] > 0 else -1.0
            active.append(idx)
            signs.append(st)
        else:
            pos = active.index(idx)
            f = chol.drop_column(f, pos)
            del active[pos]
            del signs[pos]
        lam_cur = lam_next

    raise ConvergenceError(f"path did not terminate within {max_steps} steps")


def segment_coefficients(seg: PathSegment, lam: float) -> np.ndarray:
    """Full-length coefficient vector of one segment at lam."""
    if not seg.lambda_lo <= lam <= seg.lambda_hi:
        raise ValueError(f"lam={lam} outside segment [{seg.lambda_lo}, {seg.lambda_hi}]")
    beta = np.zeros(seg.p)
    beta[list(seg.active)] = seg.a - 0.5 * lam * seg.d
    return beta


def _segment_index(path: LassoPath, lam: float) -> int:
    t = path.transition_lambdas
    # t is strictly decreasing; find m with t[m+1] <= lam <= t[m].
    m = int(np.searchsorted(-t, -lam, side="left"))
    if m == 0:
        return 0
    return min(m - 1, len(path.segments) - 1)


def fit_at(path: LassoPath, lam: float) -> FitResult:
    """Evaluate the path at any lam >= 0.

    At a transition value the changing coefficient is exactly zero, so the
    reported nonzero count is the transition-point active-set size.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    y = path.y
    if not path.segments or lam >= path.lambda_max:
        beta = np.zeros(path.p)
        mu = np.zeros(len(y))
        return FitResult(lam=lam, beta=beta, mu=mu, rss=float(y @ y), df_hat=0)

    exact = np.nonzero(path.transition_lambdas == lam)[0]
    if exact.size and 0 < exact[0] < len(path.events):
        # At a transition the changing coefficient is zero; evaluate with the
        # adjacent segment that excludes it so the zero is exact.
        m_t = int(exact[0])
        kind = path.events[m_t][0]
        seg = path.segments[m_t - 1] if kind == "add" else path.segments[m_t]
    else:
        seg = path.segments[_segment_index(path, lam)]
    beta_active = seg.a - 0.5 * lam * seg.d
    active = list(seg.active)
    beta = np.zeros(path.p)
    beta[active] = beta_active
    mu = path.X[:, active] @ beta_active
    resid = y - mu
    return FitResult(
        lam=lam,
        beta=beta,
        mu=mu,
        rss=float(resid @ resid),
        df_hat=int(np.count_nonzero(beta_active)),
    )


def transition_fit(path: LassoPath, m: int) -> FitResult:
    """Fit at the m-th transition value (m = 0..K)."""
    if not 0 <= m < path.n_transitions:
        raise IndexError(f"transition index {m} out of range")
    return fit_at(path, float(path.transition_lambdas[m]))


def kkt_check(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> KKTReport:
    """Violations of the stationarity conditions at (beta, lam)."""
    X, y = _as_xy(X, y)
    beta = np.asarray(beta, dtype=float)
    corr = 2.0 * (X.T @ (y - X @ beta))
    nz = beta != 0
    active_v = float(np.abs(corr[nz] - lam * np.sign(beta[nz])).max()) if nz.any() else 0.0
    inactive_v = float(np.maximum(np.abs(corr[~nz]) - lam, 0.0).max()) if (~nz).any() else 0.0
    return KKTReport(active_violation=active_v, inactive_violation=inactive_v)


def objective(X: np.ndarray, y: np.ndarray, beta: np.ndarray, lam: float) -> float:
    r = y - X @ beta
    return float(r @ r + lam * np.abs(beta).sum())


def lipschitz_probe(X: np.ndarray, y: np.ndarray, delta: np.ndarray, lam: float) -> float:
    """||mu(y + delta) - mu(y)|| / ||delta||, both fits from scratch."""
    delta = np.asarray(delta, dtype=float)
    nd = float(np.linalg.norm(delta))
    if nd == 0.0:
        raise ValueError("delta must be nonzero")
    mu0 = fit_at(compute_path(X, y), lam).mu
    mu1 = fit_at(compute_path(X, y + delta), lam).mu
    return float(np.linalg.norm(mu1 - mu0)) / nd


def transition_smoother(path: LassoPath, m: int) -> np.ndarray:
    """Explicit linear smoother S with mu(lam_m) = S @ y at an addition event.

    Valid because at an addition transition the fit is linear in y with the
    entering predictor's correlation pinned to equality; tr(S) equals the
    transition-point active-set size.
    """
    if not 0 <= m < len(path.events):
        raise IndexError(f"event index {m} out of range")
    kind, j = path.events[m]
    if kind != "add":
        raise ValueError(f"transition {m} is not an addition event")
    seg = path.segments[m]
    keep = [q for q, idx in enumerate(seg.active) if idx != j]
    B = [seg.active[q] for q in keep]
    s = seg.signs[keep]
    sj = float(seg.signs[list(seg.active).index(j)])
    n = path.X.shape[0]
    xj = path.X[:, j]
    if not B:
        H = np.zeros((n, n))
        omega = np.zeros(n)
        denom = sj
    else:
        XB = path.X[:, B]
        G = XB.T @ XB
        Ginv_s = np.linalg.solve(G, s)
        H = XB @ np.linalg.solve(G, XB.T)
        omega = XB @ Ginv_s
        denom = sj - float(xj @ omega)
    return H - np.outer(omega, xj - H @ xj) / denom
