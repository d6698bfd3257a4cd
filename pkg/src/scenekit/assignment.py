"""Optimal bipartite assignment on a rectangular cost matrix.

The solver is scipy's exact linear-sum-assignment; on top of it we pick, among
all minimum-cost matchings, the lexicographically smallest (row, col) pair
sequence so results are deterministic and testable.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

#: Relative slack when deciding that a forced pair keeps the optimum.
_TIE_RTOL = 1e-9


def _validate(costs: np.ndarray) -> np.ndarray:
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2 or c.size == 0:
        raise ValueError(f"cost matrix must be 2D and non-empty, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("cost matrix contains non-finite entries")
    if np.any(c < 0):
        raise ValueError("cost matrix contains negative entries")
    return c


def _optimal_cost(c: np.ndarray) -> float:
    if c.shape[0] == 0 or c.shape[1] == 0:
        return 0.0
    r, k = linear_sum_assignment(c)
    return float(c[r, k].sum())


def solve_assignment(costs) -> list[tuple[int, int]]:
    """Minimum-cost matching of size min(rows, cols), sorted by row.

    Among equal-cost optima the lexicographically smallest pair sequence is
    returned: rows are matched greedily in ascending order to the smallest
    column that still admits an optimal completion.
    """
    c = _validate(costs)
    n_rows, n_cols = c.shape
    size = min(n_rows, n_cols)

    remaining = _optimal_cost(c)
    row_ids = list(range(n_rows))
    col_ids = list(range(n_cols))
    sub = c
    pairs: list[tuple[int, int]] = []

    while len(pairs) < size:
        matched = False
        tol = _TIE_RTOL * (1.0 + abs(remaining))
        without_row = np.delete(sub, 0, axis=0)
        for c_local in range(len(col_ids)):
            sub_opt = _optimal_cost(np.delete(without_row, c_local, axis=1))
            if sub[0, c_local] + sub_opt <= remaining + tol:
                pairs.append((row_ids[0], col_ids[c_local]))
                sub = np.delete(without_row, c_local, axis=1)
                remaining = sub_opt
                del row_ids[0]
                del col_ids[c_local]
                matched = True
                break
        if not matched:
            # Every optimal solution leaves this row unmatched (only possible
            # when rows > cols).
            sub = without_row
            del row_ids[0]

    return pairs


def assignment_cost(costs, pairs: list[tuple[int, int]]) -> float:
    """Total cost of a matching, summed in row order."""
    c = np.asarray(costs, dtype=float)
    ordered = sorted(pairs)
    return float(sum(c[r, k] for r, k in ordered))
