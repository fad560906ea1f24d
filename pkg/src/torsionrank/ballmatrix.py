"""Determinants and rank witnesses for matrices of balls.

Row and column selection runs on float midpoints; only the certification
(a ball determinant excluding zero) decides anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np
from mpmath.libmp import fzero

__all__ = [
    "DetResult",
    "RankWitness",
    "ball_det",
    "approx_matrix",
    "select_minor",
    "certify_rank",
    "midpoint_singular_values",
]


@dataclass(frozen=True)
class DetResult:
    value: object  # RealBall | ComplexBall, or None when a pivot straddled zero
    certified: bool
    failed_step: int | None = None

    @property
    def margin(self):
        """Lower bound on |det| (nonpositive if undecided)."""
        if self.value is None:
            return fzero
        return self.value.margin()


def _one_like(x):
    return type(x).exact(1, x.prec)


def ball_det(matrix: Sequence[Sequence]) -> DetResult:
    """Gaussian elimination with partial pivoting on midpoint magnitude."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    a = [list(row) for row in matrix]
    det = _one_like(a[0][0])
    for col in range(n):
        piv = max(range(col, n), key=lambda r: a[r][col].approx_abs())
        if not a[piv][col].excludes_zero():
            return DetResult(None, False, col)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        pivot = a[col][col]
        det = det * pivot
        inv = 1 / pivot
        for r in range(col + 1, n):
            f = a[r][col] * inv
            row_r, row_c = a[r], a[col]
            for j in range(col + 1, n):
                row_r[j] = row_r[j] - f * row_c[j]
    return DetResult(det, det.excludes_zero())


def approx_matrix(matrix: Sequence[Sequence]) -> np.ndarray:
    return np.array([[x.approx() for x in row] for row in matrix], dtype=complex)


def select_minor(approx: np.ndarray, size: int) -> tuple[list[int], list[int]]:
    """Rows and columns of a well-conditioned ``size x size`` minor (complete pivoting)."""
    a = np.array(approx, dtype=complex)
    rows_left = list(range(a.shape[0]))
    cols_left = list(range(a.shape[1]))
    rows, cols = [], []
    for _ in range(size):
        sub = np.abs(a[np.ix_(rows_left, cols_left)])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        r, c = rows_left[i], cols_left[j]
        pivot = a[r, c]
        if pivot == 0:
            break
        a = a - np.outer(a[:, c], a[r, :]) / pivot
        rows.append(r)
        cols.append(c)
        rows_left.remove(r)
        cols_left.remove(c)
    return sorted(rows), sorted(cols)


@dataclass(frozen=True)
class RankWitness:
    """A ``rank x rank`` minor whose ball determinant excludes zero."""

    rank: int
    rows: tuple
    cols: tuple
    det: object
    certified: bool
    method: str

    @property
    def margin(self):
        return fzero if self.det is None else self.det.margin()


def _minor(matrix, rows, cols):
    return [[matrix[r][c] for c in cols] for r in rows]


def certify_rank(
    matrix: Sequence[Sequence],
    rank: int,
    row_labels: Sequence | None = None,
    col_labels: Sequence | None = None,
    full_search: bool = False,
) -> RankWitness:
    """Lower-bound the rank of a ball matrix by exhibiting a nonsingular minor.

    Greedy complete pivoting first; with ``full_search`` every row subset is
    tried (columns chosen greedily on it) before giving up.
    """
    nrows, ncols = len(matrix), len(matrix[0])
    row_labels = list(row_labels) if row_labels is not None else list(range(nrows))
    col_labels = list(col_labels) if col_labels is not None else list(range(ncols))
    if rank == 0:
        return RankWitness(0, (), (), None, True, "empty")
    approx = approx_matrix(matrix)
    rows, cols = select_minor(approx, rank)
    det = ball_det(_minor(matrix, rows, cols)) if len(rows) == rank else DetResult(None, False)
    method = "greedy"
    if not det.certified and full_search:
        for cand in combinations(range(nrows), rank):
            _, c = select_minor(approx[list(cand), :], rank)
            if len(c) < rank:
                continue
            trial = ball_det(_minor(matrix, cand, c))
            if trial.certified:
                rows, cols, det, method = list(cand), c, trial, "search"
                break
    return RankWitness(
        rank,
        tuple(row_labels[r] for r in rows),
        tuple(col_labels[c] for c in cols),
        det.value,
        det.certified,
        method,
    )


def midpoint_singular_values(matrix: Sequence[Sequence]) -> np.ndarray:
    """Uncertified double-precision singular values of the midpoints (sanity layer only)."""
    return np.linalg.svd(approx_matrix(matrix), compute_uv=False)
