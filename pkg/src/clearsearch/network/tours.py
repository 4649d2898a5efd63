"""Chinese- and rural-postman tour construction on truncated networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from ..errors import DisconnectedGraph, InvalidParameter
from .graph import TruncatedNetwork, Vertex, _dijkstra, _dijkstra_multi

MatchingMode = Literal["auto", "exact", "greedy"]

#: Exhaustive bitmask pairing is used up to this many odd-degree vertices.
EXACT_MATCHING_LIMIT = 20


@dataclass(frozen=True)
class TourStep:
    """One directed traversal of a retained piece, in base-edge offsets."""

    edge: int
    forward: bool
    enter: float
    exit: float

    @property
    def length(self) -> float:
        return abs(self.exit - self.enter)


@dataclass(frozen=True)
class Tour:
    start: Vertex
    end: Vertex
    steps: tuple[TourStep, ...]
    total_length: float


def _vertex_key(v: Vertex):
    return repr(v)


def _sub_adjacency(sub: TruncatedNetwork) -> dict:
    return {
        v: [(sub.tedges[i].length, w, i, fwd) for i, fwd, w in entries]
        for v, entries in sub.adjacency.items()
    }


def _sub_dijkstra(sub: TruncatedNetwork, source: Vertex):
    dist, prev = _dijkstra(_sub_adjacency(sub), source)
    return dist, prev


def _walk_to(prev: dict, source: Vertex, target: Vertex) -> list[tuple[int, bool]]:
    """Reconstruct the edge walk source -> target from Dijkstra predecessors."""
    walk: list[tuple[int, bool]] = []
    v = target
    while v != source:
        u, entry = prev[v]
        _, _, tidx, fwd = entry
        walk.append((tidx, fwd))
        v = u
    walk.reverse()
    return walk


def _walk_length(sub: TruncatedNetwork, walk: Iterable[tuple[int, bool]]) -> float:
    return sum(sub.tedges[t].length for t, _ in walk)


def _assert_connected(sub: TruncatedNetwork, start: Vertex) -> dict:
    if start not in sub.adjacency:
        raise InvalidParameter(f"start vertex {start!r} not in sub-network")
    dist, _ = _sub_dijkstra(sub, start)
    for te in sub.tedges:
        if te.a not in dist or te.b not in dist:
            raise DisconnectedGraph(
                "sub-network has pieces unreachable from the start vertex"
            )
    return dist


def _odd_vertices(sub: TruncatedNetwork, multiplicity: dict[int, int]) -> list[Vertex]:
    degree: dict[Vertex, int] = {}
    for tidx, count in multiplicity.items():
        te = sub.tedges[tidx]
        degree[te.a] = degree.get(te.a, 0) + count
        degree[te.b] = degree.get(te.b, 0) + count
    return sorted((v for v, d in degree.items() if d % 2 == 1), key=_vertex_key)


def _pair_exact(odd: list[Vertex], dist: dict) -> list[tuple[int, int]]:
    n = len(odd)
    full = (1 << n) - 1
    inf = float("inf")
    dp = [inf] * (1 << n)
    dp[0] = 0.0
    choice: dict[int, tuple[int, int]] = {}
    for mask in range(1 << n):
        if dp[mask] == inf or mask == full:
            continue
        i = 0
        while mask >> i & 1:
            i += 1
        base = mask | (1 << i)
        for j in range(i + 1, n):
            if mask >> j & 1:
                continue
            new = base | (1 << j)
            cand = dp[mask] + dist[(i, j)]
            if cand < dp[new]:
                dp[new] = cand
                choice[new] = (i, j)
    pairs = []
    mask = full
    while mask:
        i, j = choice[mask]
        pairs.append((i, j))
        mask &= ~(1 << i) & ~(1 << j)
    return pairs


def _pair_greedy(odd: list[Vertex], dist: dict) -> list[tuple[int, int]]:
    n = len(odd)
    ranked = sorted(
        ((dist[(i, j)], i, j) for i in range(n) for j in range(i + 1, n)),
    )
    used = [False] * n
    pairs = []
    for _, i, j in ranked:
        if not used[i] and not used[j]:
            used[i] = used[j] = True
            pairs.append((i, j))
    return pairs


def _pairing_paths(
    sub: TruncatedNetwork,
    multiplicity: dict[int, int],
    matching: MatchingMode,
) -> tuple[list[list[tuple[int, bool]]], float, bool]:
    """Shortest paths that fix the parity of all odd-degree vertices.

    Returns ``(paths, total weight, exact flag)``.  ``matching="auto"``
    selects exhaustive pairing up to :data:`EXACT_MATCHING_LIMIT` odd
    vertices and the greedy nearest-pair heuristic beyond.
    """
    odd = _odd_vertices(sub, multiplicity)
    if not odd:
        return [], 0.0, True
    if matching not in ("auto", "exact", "greedy"):
        raise InvalidParameter(f"unknown matching mode {matching!r}")
    if matching == "exact" and len(odd) > EXACT_MATCHING_LIMIT:
        raise InvalidParameter(
            f"exact matching supports <= {EXACT_MATCHING_LIMIT} odd vertices, "
            f"got {len(odd)}"
        )
    use_exact = matching == "exact" or (
        matching == "auto" and len(odd) <= EXACT_MATCHING_LIMIT
    )
    sssp = {v: _sub_dijkstra(sub, v) for v in odd}
    pair_dist: dict[tuple[int, int], float] = {}
    for i, u in enumerate(odd):
        for j in range(i + 1, len(odd)):
            pair_dist[(i, j)] = sssp[u][0].get(odd[j], float("inf"))
    pairs = _pair_exact(odd, pair_dist) if use_exact else _pair_greedy(odd, pair_dist)
    paths = []
    weight = 0.0
    for i, j in pairs:
        u, v = odd[i], odd[j]
        paths.append(_walk_to(sssp[u][1], u, v))
        weight += pair_dist[(min(i, j), max(i, j))]
    return paths, weight, use_exact


def _euler_circuit(
    sub: TruncatedNetwork, multiplicity: dict[int, int], start: Vertex
) -> list[tuple[int, bool]]:
    """Hierholzer's algorithm over the multigraph given by edge multiplicities."""
    arcs: dict[Vertex, list[tuple[int, int, bool, Vertex]]] = {start: []}
    copy_id = 0
    for tidx in sorted(multiplicity):
        te = sub.tedges[tidx]
        for _ in range(multiplicity[tidx]):
            arcs.setdefault(te.a, []).append((copy_id, tidx, True, te.b))
            arcs.setdefault(te.b, []).append((copy_id, tidx, False, te.a))
            copy_id += 1
    used = [False] * copy_id
    pointer: dict[Vertex, int] = {v: 0 for v in arcs}
    stack: list[tuple[Vertex, tuple[int, bool] | None]] = [(start, None)]
    out: list[tuple[int, bool]] = []
    while stack:
        v, incoming = stack[-1]
        advanced = False
        while pointer[v] < len(arcs[v]):
            cid, tidx, fwd, other = arcs[v][pointer[v]]
            pointer[v] += 1
            if used[cid]:
                continue
            used[cid] = True
            stack.append((other, (tidx, fwd)))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if incoming is not None:
                out.append(incoming)
    if not all(used):
        raise DisconnectedGraph("multigraph is not connected; no closed traversal")
    out.reverse()
    return out


def _materialize(
    sub: TruncatedNetwork,
    start: Vertex,
    end: Vertex,
    walk: Iterable[tuple[int, bool]],
) -> Tour:
    steps = []
    total = 0.0
    for tidx, fwd in walk:
        te = sub.tedges[tidx]
        enter, exit_ = (te.lo, te.hi) if fwd else (te.hi, te.lo)
        steps.append(TourStep(te.base, fwd, enter, exit_))
        total += te.length
    return Tour(start, end, tuple(steps), total)


def _cpt(
    sub: TruncatedNetwork, start: Vertex, matching: MatchingMode
) -> tuple[Tour, bool]:
    if not sub.tedges:
        return Tour(start, start, (), 0.0), True
    _assert_connected(sub, start)
    multiplicity = {i: 1 for i in range(len(sub.tedges))}
    paths, _, exact = _pairing_paths(sub, multiplicity, matching)
    for path in paths:
        for tidx, _ in path:
            multiplicity[tidx] += 1
    walk = _euler_circuit(sub, multiplicity, start)
    return _materialize(sub, start, start, walk), exact


def cpt_tour(
    sub: TruncatedNetwork, start: Vertex, matching: MatchingMode = "auto"
) -> Tour:
    """Closed walk from ``start`` covering every retained piece at least once.

    Odd-degree vertices are paired by shortest-path distance and the pairing
    paths duplicated before extracting an Euler circuit.
    """
    tour, _ = _cpt(sub, start, matching)
    return tour


def cpt_length(
    sub: TruncatedNetwork, matching: MatchingMode = "auto", start: Vertex | None = None
) -> tuple[float, bool]:
    """Length of the covering closed walk without building the tour.

    Returns ``(length, exact)`` where ``exact`` records whether the pairing
    was exhaustive (the length is then the true postman optimum).
    """
    if not sub.tedges:
        return 0.0, True
    _assert_connected(sub, start if start is not None else sub.root)
    multiplicity = {i: 1 for i in range(len(sub.tedges))}
    _, weight, exact = _pairing_paths(sub, multiplicity, matching)
    return sub.total_length + weight, exact


def rpt_tour(
    sub: TruncatedNetwork,
    required: Iterable[int],
    start: Vertex,
    open_ended: bool = False,
    matching: MatchingMode = "auto",
) -> Tour:
    """Walk from ``start`` covering the required pieces (rural postman).

    Components of the required set are joined by a minimum spanning tree over
    shortest-path distances, parity is fixed by duplicating matched paths, and
    an Euler circuit of the result is extracted.  When ``start`` is not on
    that subgraph the shortest path to it is prepended; in ``open_ended`` mode
    the walk does not return to ``start``.
    """
    req = sorted(set(required))
    if not req:
        return Tour(start, start, (), 0.0)
    for tidx in req:
        if not 0 <= tidx < len(sub.tedges):
            raise InvalidParameter(f"required piece {tidx} out of range")
    _assert_connected(sub, start)

    multiplicity: dict[int, int] = {t: 1 for t in req}

    # Union-find over the endpoints of required pieces.
    parent: dict[Vertex, Vertex] = {}

    def find(x: Vertex) -> Vertex:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tidx in req:
        te = sub.tedges[tidx]
        ra, rb = find(te.a), find(te.b)
        if ra != rb:
            parent[rb] = ra

    groups: dict[Vertex, list[Vertex]] = {}
    for v in parent:
        groups.setdefault(find(v), []).append(v)
    reps = sorted(groups, key=_vertex_key)

    if len(reps) > 1:
        # Minimum spanning tree over the components, weighted by shortest-path
        # distance; each tree edge contributes its realizing path.
        adj = _sub_adjacency(sub)
        comp_search = {
            rep: _dijkstra_multi(adj, sorted(groups[rep], key=_vertex_key))
            for rep in reps
        }
        in_tree = {reps[0]}
        while len(in_tree) < len(reps):
            best = None
            for g in sorted(in_tree, key=_vertex_key):
                dist_g = comp_search[g][0]
                for h in reps:
                    if h in in_tree:
                        continue
                    for v in sorted(groups[h], key=_vertex_key):
                        d = dist_g.get(v, float("inf"))
                        if best is None or d < best[0] - 1e-15:
                            best = (d, g, h, v)
            if best is None or best[0] == float("inf"):
                raise DisconnectedGraph("required pieces unreachable from each other")
            _, g, h, target = best
            dist_g, prev_g = comp_search[g]
            walk: list[tuple[int, bool]] = []
            v = target
            while dist_g[v] > 0.0:
                u, entry = prev_g[v]
                walk.append((entry[2], entry[3]))
                v = u
            walk.reverse()
            for tidx, _ in walk:
                multiplicity[tidx] = multiplicity.get(tidx, 0) + 1
            in_tree.add(h)

    paths, _, _ = _pairing_paths(sub, multiplicity, matching)
    for path in paths:
        for tidx, _ in path:
            multiplicity[tidx] = multiplicity.get(tidx, 0) + 1

    subgraph_vertices: set[Vertex] = set()
    for tidx in multiplicity:
        te = sub.tedges[tidx]
        subgraph_vertices.add(te.a)
        subgraph_vertices.add(te.b)

    prefix: list[tuple[int, bool]] = []
    attach = start
    if start not in subgraph_vertices:
        dist, prev = _sub_dijkstra(sub, start)
        attach = min(
            subgraph_vertices,
            key=lambda v: (dist.get(v, float("inf")), _vertex_key(v)),
        )
        if dist.get(attach) is None:
            raise DisconnectedGraph("required pieces unreachable from start")
        prefix = _walk_to(prev, start, attach)

    circuit = _euler_circuit(sub, multiplicity, attach)
    if open_ended:
        walk = prefix + circuit
        end = attach
    else:
        walk = prefix + circuit + [(t, not f) for t, f in reversed(prefix)]
        end = start
    return _materialize(sub, start, end, walk)
