"""Independent lasso solvers used to cross-check the path solver.

Deliberately simple and slow: cyclic coordinate descent driven by the KKT
violation, and an exhaustive sign-pattern search feasible for p <= 6.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .exceptions import ConvergenceError
from .path import kkt_check, objective


@dataclass(frozen=True)
class OracleSolution:
    beta: np.ndarray
    iterations: int
    max_kkt_violation: float


def _soft(z: float, thresh: float) -> float:
    if z > thresh:
        return z - thresh
    if z < -thresh:
        return z + thresh
    return 0.0


def solve_iterative(X, y, lam, tol=1e-8, max_iter=100_000) -> OracleSolution:
    """Cyclic coordinate descent on ||y - Xb||^2 + lam ||b||_1.

    Convergence is declared on the KKT violation, not on parameter change.
    Columns need not be unit norm.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    n, p = X.shape
    norms2 = np.einsum("ij,ij->j", X, X)
    beta = np.zeros(p)
    resid = y.copy()
    for it in range(1, max_iter + 1):
        for j in range(p):
            old = beta[j]
            z = X[:, j] @ resid + norms2[j] * old
            new = _soft(z, 0.5 * lam) / norms2[j]
            if new != old:
                resid -= (new - old) * X[:, j]
                beta[j] = new
        rep = kkt_check(X, y, beta, lam)
        viol = max(rep.active_violation, rep.inactive_violation)
        if viol <= tol:
            return OracleSolution(beta=beta, iterations=it, max_kkt_violation=viol)
    raise ConvergenceError(f"coordinate descent: KKT violation {viol:.3g} > {tol:.3g} after {max_iter} sweeps")


def solve_signpattern(X, y, lam, tol=1e-10):
    """Exhaustive certificate: try every sign pattern in {-1, 0, +1}^p.

    For each candidate active set and sign vector, solve the stationarity
    system, keep patterns that are self-consistent and KKT-feasible, and
    return the objective minimizer among them.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    if p > 6:
        raise ValueError("sign-pattern enumeration is limited to p <= 6")
    best = None
    best_obj = np.inf
    for pattern in product((-1, 0, 1), repeat=p):
        s = np.array(pattern, dtype=float)
        active = np.nonzero(s)[0]
        beta = np.zeros(p)
        if active.size:
            Xa = X[:, active]
            try:
                ba = np.linalg.solve(Xa.T @ Xa, Xa.T @ y - 0.5 * lam * s[active])
            except np.linalg.LinAlgError:
                continue
            if np.any(np.sign(ba) != s[active]):
                continue
            beta[active] = ba
        rep = kkt_check(X, y, beta, lam)
        if max(rep.active_violation, rep.inactive_violation) > tol * (1.0 + lam):
            continue
        obj = objective(X, y, beta, lam)
        if obj < best_obj:
            best_obj = obj
            best = beta
    if best is None:
        raise ConvergenceError("no sign pattern passed the KKT certificate")
    return best


def compare_path_oracle(path, lambdas, tol=1e-8, max_iter=100_000) -> float:
    """Worst l-inf gap between path fits and coordinate descent on a grid."""
    from .path import fit_at

    worst = 0.0
    for lam in lambdas:
        beta_path = fit_at(path, float(lam)).beta
        beta_cd = solve_iterative(path.X, path.y, float(lam), tol=tol, max_iter=max_iter).beta
        worst = max(worst, float(np.abs(beta_path - beta_cd).max()))
    return worst
