"""Small dense two-phase simplex solver.

Solves ``min c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0`` (or ``x`` free where ``free`` is set). Bland's rule keeps it
cycle-free; the problems in this package have at most a few hundred
columns, so a dense tableau is plenty.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPFailure

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None = None
    fun: float | None = None
    duals_ub: np.ndarray | None = None
    duals_eq: np.ndarray | None = None
    iterations: int = 0

    @property
    def success(self) -> bool:
        return self.status == "optimal"


def _pivot(T, row, col):
    T[row] /= T[row, col]
    col_vals = T[:, col].copy()
    col_vals[row] = 0.0
    T -= np.outer(col_vals, T[row])


def _run(T, basis, n_rows, allowed, max_iter, counter):
    # T: (n_rows + 1) x (ncols + 1); last row holds reduced costs, last column the rhs
    while True:
        if counter[0] >= max_iter:
            raise LPFailure(f"simplex did not terminate within {max_iter} pivots")
        d = T[n_rows, :-1]
        candidates = np.flatnonzero((d < -PIVOT_TOL) & allowed)
        if candidates.size == 0:
            return "optimal"
        col = candidates[0]
        colv = T[:n_rows, col]
        rows = np.flatnonzero(colv > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / colv[rows]
        best = ratios.min()
        tied = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = min(tied, key=lambda r: basis[r])
        _pivot(T, row, col)
        basis[row] = col
        counter[0] += 1


def solve(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, free=None, max_iter: int = 20000) -> LPResult:
    c = np.asarray(c, dtype=np.float64)
    n = c.shape[0]
    A_ub = np.zeros((0, n)) if A_ub is None else np.atleast_2d(np.asarray(A_ub, dtype=np.float64))
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=np.float64).ravel()
    A_eq = np.zeros((0, n)) if A_eq is None else np.atleast_2d(np.asarray(A_eq, dtype=np.float64))
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=np.float64).ravel()
    if A_ub.shape != (b_ub.shape[0], n) or A_eq.shape != (b_eq.shape[0], n):
        raise ValueError("constraint shapes do not match the objective")
    free = np.zeros(n, dtype=bool) if free is None else np.asarray(free, dtype=bool)

    # split free variables x = x+ - x-
    neg_cols = np.flatnonzero(free)
    expand = lambda M: np.hstack([M, -M[:, neg_cols]])
    c2 = np.concatenate([c, -c[neg_cols]])
    A_ub2, A_eq2 = expand(A_ub), expand(A_eq)
    n2 = c2.shape[0]
    m_ub, m_eq = A_ub2.shape[0], A_eq2.shape[0]
    m = m_ub + m_eq

    A = np.zeros((m, n2 + m_ub))
    A[:m_ub, :n2] = A_ub2
    A[:m_ub, n2:] = np.eye(m_ub)
    A[m_ub:, :n2] = A_eq2
    b = np.concatenate([b_ub, b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    A *= sign[:, None]
    b = b * sign

    n_struct = n2 + m_ub
    T = np.zeros((m + 1, n_struct + m + 1))
    T[:m, :n_struct] = A
    T[:m, n_struct:n_struct + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n_struct, n_struct + m))
    counter = [0]

    # phase 1: minimise the sum of artificials
    T[m, :n_struct] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    allowed = np.ones(n_struct + m, dtype=bool)
    _run(T, basis, m, allowed, max_iter, counter)
    if -T[m, -1] > FEAS_TOL * max(1.0, np.abs(b).max(initial=0.0)):
        return LPResult("infeasible", iterations=counter[0])

    for r in range(m):
        if basis[r] >= n_struct:
            nz = np.flatnonzero(np.abs(T[r, :n_struct]) > PIVOT_TOL)
            if nz.size:
                _pivot(T, r, nz[0])
                basis[r] = nz[0]

    # phase 2
    cost = np.zeros(n_struct + m)
    cost[:n2] = c2
    cB = cost[basis]
    T[m, :-1] = cost - cB @ T[:m, :-1]
    T[m, -1] = -cB @ T[:m, -1]
    allowed[n_struct:] = False
    status = _run(T, basis, m, allowed, max_iter, counter)
    if status != "optimal":
        return LPResult(status, iterations=counter[0])

    z = np.zeros(n_struct + m)
    for r, j in enumerate(basis):
        z[j] = T[r, -1]
    x2 = z[:n2]
    x = x2[:n].copy()
    x[neg_cols] -= x2[n:]
    cB = cost[basis]
    y = (cB @ T[:m, n_struct:n_struct + m]) * sign
    return LPResult(
        "optimal",
        x=x,
        fun=float(c @ x),
        duals_ub=y[:m_ub],
        duals_eq=y[m_ub:],
        iterations=counter[0],
    )
