"""Tabular ingestion, standardization and quadratic expansion.

All downstream solvers operate on a :class:`StandardizedDataset`: columns of X
centered and scaled to unit Euclidean norm, response centered.  Scales and
means are kept so results can be mapped back to the original units.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .exceptions import DataError, RankDeficiencyError

CENTER_TOL = 1e-12


@dataclass(frozen=True)
class RawDataset:
    """Design matrix and response on their original scale."""

    X: np.ndarray
    y: np.ndarray
    names: list[str]

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise DataError("X must be 2-D and y 1-D with matching row counts")
        if X.shape[0] < 2:
            raise DataError("need at least 2 rows")
        if X.shape[1] < 1:
            raise DataError("need at least 1 predictor column")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("non-finite entries in data")
        if len(self.names) != X.shape[1]:
            raise DataError("names must match the number of columns")
        if len(set(self.names)) != len(self.names):
            raise DataError("duplicate column names")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        X.flags.writeable = False
        y.flags.writeable = False

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class StandardizedDataset:
    """Centered design with unit-norm columns and a centered response."""

    X: np.ndarray
    y: np.ndarray
    names: list[str]
    col_means: np.ndarray
    col_scales: np.ndarray
    y_mean: float

    def __post_init__(self):
        for arr in (self.X, self.y, self.col_means, self.col_scales):
            np.asarray(arr).flags.writeable = False

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def original_coefficients(self, beta: np.ndarray) -> tuple[float, np.ndarray]:
        """Map standardized-scale coefficients back to the raw scale.

        Returns (intercept, coefficients) such that
        intercept + X_raw @ coefficients reproduces the standardized fit.
        """
        beta = np.asarray(beta, dtype=float)
        coefs = beta / self.col_scales
        intercept = self.y_mean - float(coefs @ self.col_means)
        return intercept, coefs


def load_csv(path, response) -> RawDataset:
    """Read a header-row CSV, splitting off the named response column.

    `response` may be a column name or a 0-based column index.  Every
    non-response cell must parse as a finite float.
    """
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path!r} is empty") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise DataError(f"duplicate header column(s): {', '.join(dupes)}")
        if isinstance(response, int):
            if not 0 <= response < len(header):
                raise DataError(f"response index {response} out of range")
            resp_idx = response
        else:
            if response not in header:
                raise DataError(f"response column {response!r} not in header")
            resp_idx = header.index(response)

        rows = []
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"row {rownum}: expected {len(header)} cells, got {len(row)}")
            vals = []
            for colname, cell in zip(header, row):
                try:
                    v = float(cell)
                except ValueError:
                    v = math.nan
                if not math.isfinite(v):
                    raise DataError(f"non-numeric cell at row {rownum}, column {colname!r}: {cell!r}")
                vals.append(v)
            rows.append(vals)

    if len(rows) < 2:
        raise DataError(f"{path!r}: need at least 2 data rows, got {len(rows)}")
    data = np.array(rows, dtype=float)
    y = data[:, resp_idx]
    X = np.delete(data, resp_idx, axis=1)
    names = [h for i, h in enumerate(header) if i != resp_idx]
    return RawDataset(X=X, y=y, names=names)


def load_diabetes() -> RawDataset:
    """Bundled diabetes benchmark: 442 rows, 10 predictors, response 'y'."""
    with resources.as_file(resources.files("lassodf.fixtures") / "diabetes.csv") as p:
        return load_csv(p, "y")


def standardize(raw: RawDataset) -> StandardizedDataset:
    """Center each column and scale it to unit Euclidean norm; center y."""
    X = raw.X
    means = X.mean(axis=0)
    Xc = X - means
    scales = np.linalg.norm(Xc, axis=0)
    bad = np.nonzero(scales <= CENTER_TOL * (1.0 + np.abs(X).max(axis=0)))[0]
    if bad.size:
        raise DataError(f"constant column(s): {', '.join(raw.names[j] for j in bad)}")
    Xs = Xc / scales
    y_mean = float(raw.y.mean())
    return StandardizedDataset(
        X=Xs,
        y=raw.y - y_mean,
        names=list(raw.names),
        col_means=means,
        col_scales=scales,
        y_mean=y_mean,
    )


def from_arrays(X: np.ndarray, y: np.ndarray, names=None) -> StandardizedDataset:
    """Wrap already-standardized arrays (unit-norm centered columns) without
    re-scaling.  Used by synthetic experiments where y is not centered."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if names is None:
        names = [f"x{j}" for j in range(X.shape[1])]
    return StandardizedDataset(
        X=X,
        y=y,
        names=list(names),
        col_means=np.zeros(X.shape[1]),
        col_scales=np.ones(X.shape[1]),
        y_mean=0.0,
    )


def _is_binary(col: np.ndarray) -> bool:
    return np.unique(col).size == 2


def expand_quadratic(raw: RawDataset, binary_square_drop: bool = True) -> RawDataset:
    """Augment main effects with pairwise interactions and squares.

    Column order: the p originals, the p(p-1)/2 products "a*b" (index pairs
    i<j in order), then squares "a^2".  With `binary_square_drop`, squares of
    two-valued columns are omitted (they duplicate an affine shift of the
    column itself).
    """
    if raw.p < 2:
        raise DataError("quadratic expansion needs at least 2 predictors")
    cols = [raw.X[:, j] for j in range(raw.p)]
    names = list(raw.names)
    for i in range(raw.p):
        for j in range(i + 1, raw.p):
            cols.append(raw.X[:, i] * raw.X[:, j])
            names.append(f"{raw.names[i]}*{raw.names[j]}")
    for j in range(raw.p):
        if binary_square_drop and _is_binary(raw.X[:, j]):
            continue
        cols.append(raw.X[:, j] ** 2)
        names.append(f"{raw.names[j]}^2")
    return RawDataset(X=np.column_stack(cols), y=raw.y, names=names)


def expand_standardized(raw: RawDataset, binary_square_drop: bool = True) -> StandardizedDataset:
    """Quadratic design built the benchmark way: standardize the main
    effects, form products and squares of the standardized columns, then
    standardize the expanded matrix.  (Expanding on raw columns shifts which
    models the selection criteria pick on the diabetes benchmark.)
    """
    ds = standardize(raw)
    mains = RawDataset(X=ds.X, y=raw.y, names=list(ds.names))
    return standardize(expand_quadratic(mains, binary_square_drop=binary_square_drop))


def check_full_rank(ds: StandardizedDataset) -> None:
    """Raise if the standardized design is numerically rank deficient."""
    from . import chol

    gram = ds.X.T @ ds.X
    try:
        chol.factor(gram)
    except RankDeficiencyError as exc:
        raise RankDeficiencyError(f"design is rank deficient: {exc}") from exc
