"""Dense primal simplex for  max c.x  s.t.  A x <= b,  x >= 0,  b >= 0."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LpProblem", "LpSolution", "solve_lp", "TOL"]

TOL = 1e-7
_PIVOT_EPS = 1e-12
_PRICE_EPS = 1e-9


@dataclass(frozen=True)
class LpProblem:
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.c, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.size == 0:
            A = A.reshape(len(b), len(c))
        if A.shape != (len(b), len(c)):
            raise ValueError(f"A has shape {A.shape}, expected {(len(b), len(c))}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        if np.any(b < 0):
            raise ValueError("right-hand sides must be non-negative")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    value: float
    status: str  # "optimal" | "unbounded" | "infeasible"


def solve_lp(problem: LpProblem, max_pivots: int = 1_000_000, rule: str = "hybrid") -> LpSolution:
    """Optimal basic solution by the tableau simplex.

    The slack basis is feasible because b >= 0, so no phase one is needed.
    ``rule="bland"`` prices by Bland's rule throughout.  ``rule="hybrid"``
    (the default) takes the most positive reduced cost, but switches to
    Bland's rule as soon as a pivot is degenerate and stays there until the
    objective strictly improves; cycling needs a run of degenerate pivots, so
    it cannot occur either way.
    """
    if rule not in ("hybrid", "bland"):
        raise ValueError(f"unknown pricing rule {rule!r}")
    M, N = problem.shape
    # tableau rows: [A | I | b]; objective row holds reduced costs c - z
    T = np.zeros((M, N + M + 1))
    T[:, :N] = problem.A
    T[:, N : N + M] = np.eye(M)
    T[:, -1] = problem.b
    cost = np.zeros(N + M + 1)
    cost[:N] = problem.c
    basis = list(range(N, N + M))

    bland = rule == "bland"
    for _ in range(max_pivots):
        candidates = np.flatnonzero(cost[:-1] > _PRICE_EPS)
        if candidates.size == 0:
            break
        if bland:
            col = int(candidates[0])
        else:
            # first index among the largest reduced costs
            col = int(candidates[np.argmax(cost[candidates])])
        column = T[:, col]
        rows = np.flatnonzero(column > _PIVOT_EPS)
        if rows.size == 0:
            return LpSolution(np.full(N, np.nan), float("inf"), "unbounded")
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + _PIVOT_EPS]
        row = int(min(tied, key=lambda r: basis[r]))
        if rule == "hybrid":
            bland = best <= _PIVOT_EPS
        T[row] /= T[row, col]
        others = column.copy()
        others[row] = 0.0
        T -= np.outer(others, T[row])
        cost -= cost[col] * T[row]
        basis[row] = col
    else:
        raise RuntimeError(f"simplex did not terminate within {max_pivots} pivots")

    full = np.zeros(N + M)
    for r, j in enumerate(basis):
        full[j] = T[r, -1]
    x = np.clip(full[:N], 0.0, None)
    x[np.abs(x) < _PIVOT_EPS] = 0.0
    return LpSolution(x, float(problem.c @ x), "optimal")
