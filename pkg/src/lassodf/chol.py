"""Cholesky factors of active-set Gram matrices with column add/drop updates.

The path solver grows and shrinks the active set one column at a time; these
kernels keep an up-to-date lower-triangular factor so each step costs O(k^2)
instead of a fresh O(k^3) factorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import RankDeficiencyError

PIVOT_TOL = 1e-10


@dataclass(frozen=True)
class CholFactor:
    """Lower-triangular L with L @ L.T equal to the active-set Gram matrix."""

    L: np.ndarray
    active_order: tuple[int, ...] = field(default=())

    def __post_init__(self):
        self.L.flags.writeable = False

    @property
    def k(self) -> int:
        return self.L.shape[0]


def factor(gram: np.ndarray, active_order=None) -> CholFactor:
    """Factor a symmetric positive-definite matrix from scratch."""
    gram = np.asarray(gram, dtype=float)
    k = gram.shape[0]
    if gram.shape != (k, k):
        raise ValueError("gram must be square")
    if k and np.abs(gram - gram.T).max() > 1e-10 * (1.0 + np.abs(gram).max()):
        raise ValueError("gram must be symmetric")
    L = np.zeros((k, k))
    for j in range(k):
        s = gram[j, j] - L[j, :j] @ L[j, :j]
        if s <= PIVOT_TOL:
            raise RankDeficiencyError(f"non-positive pivot at index {j}")
        L[j, j] = np.sqrt(s)
        if j + 1 < k:
            L[j + 1 :, j] = (gram[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    if active_order is None:
        active_order = tuple(range(k))
    return CholFactor(L=L, active_order=tuple(active_order))


def add_column(f: CholFactor, cross: np.ndarray, self_dot: float, index: int | None = None) -> CholFactor:
    """Extend the factor by one column of the Gram matrix.

    `cross` holds the inner products of the new column with the active ones
    (in insertion order) and `self_dot` its squared norm.
    """
    k = f.k
    cross = np.asarray(cross, dtype=float)
    if cross.shape != (k,):
        raise ValueError(f"cross must have length {k}")
    if k:
        v = scipy.linalg.solve_triangular(f.L, cross, lower=True)
    else:
        v = np.zeros(0)
    s = self_dot - v @ v
    if s <= PIVOT_TOL:
        raise RankDeficiencyError("new column is linearly dependent on the active set")
    L = np.zeros((k + 1, k + 1))
    L[:k, :k] = f.L
    L[k, :k] = v
    L[k, k] = np.sqrt(s)
    if index is None:
        index = k
    return CholFactor(L=L, active_order=f.active_order + (index,))


def drop_column(f: CholFactor, position: int) -> CholFactor:
    """Remove the column at `position` (within insertion order).

    Deleting row/column `position` leaves a lower-Hessenberg trailing block;
    Givens rotations restore the triangle without refactorizing.
    """
    k = f.k
    if not 0 <= position < k:
        raise IndexError(f"position {position} out of range for k={k}")
    L = np.delete(f.L, position, axis=0).copy()
    # Rows below `position` now carry one superdiagonal entry each.
    for j in range(position, k - 1):
        a, b = L[j, j], L[j, j + 1]
        r = np.hypot(a, b)
        c, s = a / r, b / r
        cols = np.array([c * L[j:, j] + s * L[j:, j + 1], -s * L[j:, j] + c * L[j:, j + 1]])
        L[j:, j], L[j:, j + 1] = cols[0], cols[1]
        if L[j, j] < 0:
            L[j:, j] = -L[j:, j]
    L = L[:, : k - 1]
    order = f.active_order[:position] + f.active_order[position + 1 :]
    return CholFactor(L=np.ascontiguousarray(L), active_order=order)


def solve(f: CholFactor, rhs: np.ndarray) -> np.ndarray:
    """Solve (L L^T) v = rhs."""
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (f.k,):
        raise ValueError(f"rhs must have length {f.k}")
    if f.k == 0:
        return np.zeros(0)
    z = scipy.linalg.solve_triangular(f.L, rhs, lower=True)
    return scipy.linalg.solve_triangular(f.L.T, z, lower=False)
