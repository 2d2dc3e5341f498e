"""Exact linear sum assignment on square cost matrices.

Shortest augmenting path with dual potentials (the Jonker-Volgenant family),
O(n^3). Rows are players, columns are slots.
"""

from dataclasses import dataclass
import math

import numpy as np


class InvalidCostMatrix(ValueError):
    pass


@dataclass(frozen=True)
class Assignment:
    """Optimal player -> slot assignment.

    ``mapping[i]`` is the slot (column) assigned to player (row) ``i``.
    """

    mapping: tuple
    total_cost: float

    def as_matrix(self):
        """Binary assignment matrix with a single 1 per row and column."""
        n = len(self.mapping)
        x = np.zeros((n, n), dtype=np.int8)
        x[np.arange(n), list(self.mapping)] = 1
        return x


def _as_cost_matrix(costs):
    c = np.asarray(costs, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InvalidCostMatrix(f"cost matrix must be square, got shape {c.shape}")
    if c.shape[0] == 0:
        raise InvalidCostMatrix("cost matrix is empty")
    if not np.all(np.isfinite(c)):
        raise InvalidCostMatrix("cost matrix contains non-finite entries")
    return c


def solve(costs) -> Assignment:
    """Return a minimum-cost bijection between rows and columns of ``costs``.

    Ties between equally cheap assignments are broken deterministically:
    rows are inserted in index order and, during each augmentation, the
    lowest column index wins among equal reduced costs.
    """
    c = _as_cost_matrix(costs)
    n = c.shape[0]
    a = c.tolist()

    inf = math.inf
    # 1-based arrays; index 0 is the virtual root column.
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    owner = [0] * (n + 1)  # owner[j] = row (1-based) assigned to column j
    way = [0] * (n + 1)

    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = owner[j0]
            row = a[i0 - 1]
            ui = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - ui - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[owner[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        # augment along the alternating path back to the root
        while True:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
            if j0 == 0:
                break

    mapping = [0] * n
    for j in range(1, n + 1):
        mapping[owner[j] - 1] = j - 1
    total = math.fsum(a[i][mapping[i]] for i in range(n))
    return Assignment(mapping=tuple(mapping), total_cost=total)

