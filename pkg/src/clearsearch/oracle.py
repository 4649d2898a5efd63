"""Brute-force verifiers used by tests and acceptance runs only.

Deliberately independent of the production solvers: the small LPs are solved
from their explicit constraint rows with a textbook dense two-phase simplex
(Bland's rule, so it cannot cycle), and the postman oracle enumerates
odd-vertex pairings exhaustively.  Instances are tiny; clarity beats speed.
"""

from __future__ import annotations

import heapq
import itertools
from typing import NamedTuple

import numpy as np

from .errors import DisconnectedGraph, InvalidParameter

_TOL = 1e-9


class SimplexResult(NamedTuple):
    status: str  # "optimal" | "unbounded" | "infeasible"
    objective: float | None
    x: np.ndarray | None


def _pivot(tableau: np.ndarray, row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]


def _bland_loop(tableau: np.ndarray, basis: list[int], ncols: int) -> str:
    """Run primal simplex on a maximization tableau until optimal/unbounded.

    Last row holds reduced costs (z_j - c_j); Bland's rule picks the smallest
    eligible indices for both the entering column and tie-broken ratio test.
    """
    nrows = tableau.shape[0] - 1
    while True:
        col = -1
        for j in range(ncols):
            if tableau[-1, j] < -_TOL:
                col = j
                break
        if col < 0:
            return "optimal"
        best_ratio = None
        row = -1
        for i in range(nrows):
            a = tableau[i, col]
            if a > _TOL:
                ratio = tableau[i, -1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio - _TOL
                    or (abs(ratio - best_ratio) <= _TOL and basis[i] < basis[row])
                ):
                    best_ratio = ratio
                    row = i
        if row < 0:
            return "unbounded"
        _pivot(tableau, row, col)
        basis[row] = col


def simplex_maximize(c, A, b) -> SimplexResult:
    """Maximize ``c @ x`` subject to ``A @ x <= b`` and ``x >= 0``.

    Dense two-phase tableau method; right-hand sides of either sign are
    accepted (negative rows get artificial variables in phase one).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape

    flip = b < 0.0
    sign = np.where(flip, -1.0, 1.0)
    art_rows = np.flatnonzero(flip)
    n_art = len(art_rows)

    ncols = n + m + n_art
    tableau = np.zeros((m + 1, ncols + 1))
    tableau[:m, :n] = A * sign[:, None]
    tableau[:m, n : n + m] = np.diag(sign)
    for j, i in enumerate(art_rows):
        tableau[i, n + m + j] = 1.0
    tableau[:m, -1] = b * sign

    basis = [n + i for i in range(m)]
    for j, i in enumerate(art_rows):
        basis[i] = n + m + j

    if n_art:
        # Phase 1: maximize -(sum of artificials).  In the (z_j - c_j | value)
        # row convention this starts as the negated sum of the artificial rows.
        tableau[-1, :] = -tableau[art_rows, :].sum(axis=0)
        tableau[-1, n + m : ncols] = 0.0
        status = _bland_loop(tableau, basis, ncols)
        if status != "optimal" or tableau[-1, -1] < -1e-7 * max(1.0, abs(b).max()):
            return SimplexResult("infeasible", None, None)
        # Drive remaining artificial basics (at zero level) out of the basis.
        for i in range(m):
            if basis[i] >= n + m:
                for j in range(n + m):
                    if abs(tableau[i, j]) > _TOL:
                        _pivot(tableau, i, j)
                        basis[i] = j
                        break
        tableau[:, n + m : ncols] = 0.0

    # Phase 2 with the real objective, restricted to structural + slack columns.
    cost = np.zeros(ncols)
    cost[:n] = c
    tableau[-1, :] = 0.0
    for i in range(m):
        if basis[i] < n + m and cost[basis[i]] != 0.0:
            tableau[-1, :] += cost[basis[i]] * tableau[i, :]
    tableau[-1, :ncols] -= cost
    status = _bland_loop(tableau, basis, n + m)
    if status != "optimal":
        return SimplexResult(status, None, None)
    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tableau[i, -1]
    return SimplexResult("optimal", float(tableau[-1, -1]), x)


class OracleSolution(NamedTuple):
    objective: float
    lengths: tuple[float, ...]
    k: int


def _competitiveness_rows(m: int, rho: float, k: int) -> tuple[list[list[float]], list[float]]:
    """Explicit inequality rows shared by both LP families at step count k."""
    rows: list[list[float]] = []
    rhs: list[float] = []
    # head: x1+..+x[min(m-1,k)] <= rho
    row = [0.0] * k
    for i in range(min(m - 1, k)):
        row[i] = 1.0
    rows.append(row)
    rhs.append(rho)
    # interior: S[j+m-1] <= rho*x_j
    for j in range(1, k - m + 1):
        row = [0.0] * k
        for i in range(j + m - 1):
            row[i] += 1.0
        row[j - 1] -= rho
        rows.append(row)
        rhs.append(0.0)
    # extendability: S_k <= rho*x_j
    for j in range(max(1, k - m + 1), k):
        row = [1.0] * k
        row[j - 1] -= rho
        rows.append(row)
        rhs.append(0.0)
    # monotonicity: x_i <= x_{i+1}
    for i in range(1, k):
        row = [0.0] * k
        row[i - 1] = 1.0
        row[i] = -1.0
        rows.append(row)
        rhs.append(0.0)
    return rows, rhs


def lp_oracle_maxclear(m: int, rho: float, T: float, k_max: int) -> OracleSolution:
    """Best clearance over all step counts ``k <= k_max`` by dense LP.

    Each instance maximizes the sum of the last ``min(m, k)`` step lengths
    subject to the explicit competitiveness, extendability, monotonicity and
    budget rows.  Intended for small instances only.
    """
    if k_max < 1:
        raise InvalidParameter(f"k_max must be >= 1, got {k_max}")
    best: OracleSolution | None = None
    for k in range(1, k_max + 1):
        rows, rhs = _competitiveness_rows(m, rho, k)
        budget = [2.0] * k
        budget[-1] = 1.0
        rows.append(budget)
        rhs.append(T)
        c = [0.0] * k
        for i in range(k - min(m, k), k):
            c[i] = 1.0
        res = simplex_maximize(c, np.array(rows), np.array(rhs))
        if res.status != "optimal":
            continue
        assert res.objective is not None and res.x is not None
        if best is None or res.objective > best.objective:
            best = OracleSolution(res.objective, tuple(float(v) for v in res.x), k)
    if best is None:
        raise InvalidParameter("no feasible step count at this budget")
    return best


def lp_oracle_earliest(m: int, rho: float, L: float, k_max: int) -> OracleSolution:
    """Least duration reaching clearance ``L`` over all ``k <= k_max`` by dense LP."""
    if k_max < 1:
        raise InvalidParameter(f"k_max must be >= 1, got {k_max}")
    best: OracleSolution | None = None
    for k in range(1, k_max + 1):
        rows, rhs = _competitiveness_rows(m, rho, k)
        reach = [0.0] * k
        for i in range(k - min(m, k), k):
            reach[i] = -1.0
        rows.append(reach)
        rhs.append(-L)
        c = [-2.0] * k
        c[-1] = -1.0
        res = simplex_maximize(c, np.array(rows), np.array(rhs))
        if res.status != "optimal":
            continue
        assert res.objective is not None and res.x is not None
        duration = -res.objective
        if best is None or duration < best.objective:
            best = OracleSolution(duration, tuple(float(v) for v in res.x), k)
    if best is None:
        raise InvalidParameter("clearance target unreachable within k_max steps")
    return best


def _oracle_dijkstra(adj: dict, source) -> dict:
    dist = {source: 0.0}
    heap = [(0.0, 0, source)]
    counter = itertools.count(1)
    while heap:
        d, _, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for length, v in adj.get(u, ()):
            nd = d + length
            if nd < dist.get(v, float("inf")) - 1e-15:
                dist[v] = nd
                heapq.heappush(heap, (nd, next(counter), v))
    return dist


def brute_cpp(network, start=None) -> float:
    """Exact minimum length of a closed walk covering every edge.

    Total edge length plus the cheapest pairing of odd-degree vertices by
    shortest-path distance, found by exhaustive enumeration.  Meant for tiny
    graphs (at most ~10 odd vertices).
    """
    edges = [(e.u, e.v, e.length) for e in network.edges]
    if not edges:
        return 0.0
    adj: dict = {}
    degree: dict = {}
    for u, v, ln in edges:
        adj.setdefault(u, []).append((ln, v))
        adj.setdefault(v, []).append((ln, u))
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    anchor = start if start is not None else next(iter(adj))
    dist = _oracle_dijkstra(adj, anchor)
    if any(u not in dist for u in adj):
        raise DisconnectedGraph("postman oracle requires a connected graph")
    total = sum(ln for _, _, ln in edges)
    odd = sorted((u for u, d in degree.items() if d % 2 == 1), key=repr)
    if not odd:
        return total
    sp = {u: _oracle_dijkstra(adj, u) for u in odd}

    def cheapest(rest: tuple) -> float:
        if not rest:
            return 0.0
        first = rest[0]
        best = float("inf")
        for i in range(1, len(rest)):
            mate = rest[i]
            remainder = rest[1:i] + rest[i + 1 :]
            best = min(best, sp[first][mate] + cheapest(remainder))
        return best

    return total + cheapest(tuple(odd))
