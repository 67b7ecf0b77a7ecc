"""Exact solver for the balanced transportation problem.

Transportation simplex (MODI / u-v method): a northwest-corner start, dual
potentials from the spanning-tree basis, and pivots around the unique cycle
closed by the entering cell. Degenerate bases carry explicit zero flows so
the basis always holds ``m + n - 1`` cells.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TransportPlan:
    flows: np.ndarray
    cost: float


def _weights(dist) -> np.ndarray:
    if hasattr(dist, "weights"):
        dist = dist.weights
    w = np.asarray(dist, dtype=float)
    if w.ndim != 1:
        raise ValueError("marginal must be one-dimensional")
    return w


def _northwest_corner(a, b):
    m, n = len(a), len(b)
    ra, rb = a.copy(), b.copy()
    flows = np.zeros((m, n))
    basis = []
    i = j = 0
    while True:
        x = min(ra[i], rb[j])
        flows[i, j] = x
        ra[i] -= x
        rb[j] -= x
        basis.append((i, j))
        if i == m - 1 and j == n - 1:
            break
        if j == n - 1 or (i < m - 1 and ra[i] <= rb[j]):
            i += 1
        else:
            j += 1
    return flows, basis


def _potentials(costs, basis, m, n):
    u = np.full(m, np.nan)
    v = np.full(n, np.nan)
    rows: list[list[int]] = [[] for _ in range(m)]
    cols: list[list[int]] = [[] for _ in range(n)]
    for i, j in basis:
        rows[i].append(j)
        cols[j].append(i)
    u[0] = 0.0
    queue = deque([("r", 0)])
    while queue:
        kind, k = queue.popleft()
        if kind == "r":
            for j in rows[k]:
                if np.isnan(v[j]):
                    v[j] = costs[k, j] - u[k]
                    queue.append(("c", j))
        else:
            for i in cols[k]:
                if np.isnan(u[i]):
                    u[i] = costs[i, k] - v[k]
                    queue.append(("r", i))
    return u, v


def _cycle(basis, m, n, enter):
    """Basis cells on the tree path from column ``enter[1]`` back to row ``enter[0]``."""
    adj: dict[tuple, list[tuple]] = {}
    for i, j in basis:
        adj.setdefault(("r", i), []).append(("c", j))
        adj.setdefault(("c", j), []).append(("r", i))
    start, goal = ("c", enter[1]), ("r", enter[0])
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nb in adj.get(node, ()):
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    path = []
    node = goal
    while parent[node] is not None:
        prev = parent[node]
        r = node[1] if node[0] == "r" else prev[1]
        c = node[1] if node[0] == "c" else prev[1]
        path.append((r, c))
        node = prev
    # path runs from the row end back to the column end; reverse so the
    # first cell shares the entering cell's column
    return path[::-1]


def solve_transport(supply, demand, costs, tol: float = 1e-12, max_iter: int | None = None) -> TransportPlan:
    """Minimum-cost flow moving ``supply`` onto ``demand``.

    Parameters
    ----------
    supply, demand : array-like or distribution
        Nonnegative masses with equal totals (within ``1e-9`` relative).
        Objects with a ``weights`` attribute are accepted.
    costs : array-like, shape (len(supply), len(demand))
        Nonnegative ground costs.

    Returns
    -------
    TransportPlan
        Flow matrix whose row and column sums reproduce the marginals, and
        its total cost.
    """
    a = _weights(supply)
    b = _weights(demand)
    c = np.asarray(costs, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("empty distribution")
    if c.shape != (a.size, b.size):
        raise ValueError(f"cost matrix shape {c.shape} does not match marginals ({a.size}, {b.size})")
    if (a < 0).any() or (b < 0).any():
        raise ValueError("marginals must be nonnegative")
    if (c < 0).any() or not np.isfinite(c).all():
        raise ValueError("costs must be finite and nonnegative")
    total = a.sum()
    if abs(total - b.sum()) > 1e-9 * max(total, 1.0):
        raise ValueError("supply and demand totals differ")
    b = b * (total / b.sum()) if b.sum() > 0 else b  # absorb rounding so the problem is exactly balanced

    m, n = a.size, b.size
    flows, basis = _northwest_corner(a, b)
    scale = max(float(c.max()), 1.0)
    limit = max_iter if max_iter is not None else 50 * (m + n) ** 2
    for it in range(limit):
        u, v = _potentials(c, basis, m, n)
        reduced = c - u[:, None] - v[None, :]
        for i, j in basis:
            reduced[i, j] = 0.0
        # past the halfway mark switch to first-negative entry (Bland) to
        # break any degenerate cycling
        if it < limit // 2:
            k = int(np.argmin(reduced))
            if reduced.flat[k] >= -tol * scale:
                break
            enter = divmod(k, n)
        else:
            neg = np.argwhere(reduced < -tol * scale)
            if neg.size == 0:
                break
            enter = tuple(int(x) for x in neg[0])
        path = _cycle(basis, m, n, enter)
        # signs alternate starting with "-" on the first path cell
        minus = path[0::2]
        plus = path[1::2]
        theta = min(flows[cell] for cell in minus)
        leave = min((cell for cell in minus if flows[cell] == theta), key=lambda cell: cell)
        for cell in minus:
            flows[cell] -= theta
        for cell in plus:
            flows[cell] += theta
        flows[enter] += theta
        basis.remove(leave)
        flows[leave] = 0.0
        basis.append(enter)
    else:
        raise RuntimeError("transportation simplex did not converge")
    np.maximum(flows, 0.0, out=flows)
    return TransportPlan(flows, float((flows * c).sum()))
