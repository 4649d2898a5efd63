"""Edge-weighted search environments: TNTP ingestion and radius truncation."""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from ..errors import InvalidParameter, TntpParseError

Vertex = Hashable

#: Relative geometric tolerance for offsets/lengths.
GEOM_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    u: Vertex
    v: Vertex
    length: float


class Network:
    """Undirected multigraph with positive edge lengths and an optional root.

    Edges are addressed by their index in ``edges``; self-loops and parallel
    edges are allowed.
    """

    def __init__(self, edges: Iterable[Sequence], root: Vertex | None = None):
        self.edges: list[Edge] = []
        self.adjacency: dict[Vertex, list[tuple[int, Vertex]]] = {}
        for spec in edges:
            u, v, length = spec
            length = float(length)
            if length <= 0.0:
                raise InvalidParameter(f"edge ({u!r}, {v!r}) has non-positive length")
            idx = len(self.edges)
            self.edges.append(Edge(u, v, length))
            self.adjacency.setdefault(u, []).append((idx, v))
            if v != u:
                self.adjacency.setdefault(v, []).append((idx, u))
        self.root = root

    @property
    def vertices(self) -> set:
        verts = set(self.adjacency)
        if self.root is not None:
            verts.add(self.root)
        return verts

    @property
    def total_length(self) -> float:
        return sum(e.length for e in self.edges)

    def distances(self, source: Vertex, with_prev: bool = False):
        """Single-source shortest-path distances (Dijkstra over vertices)."""
        if source not in self.adjacency and source != self.root:
            raise InvalidParameter(f"vertex {source!r} not in network")
        adj = {
            v: [(self.edges[i].length, w) for i, w in entries]
            for v, entries in self.adjacency.items()
        }
        dist, prev = _dijkstra(adj, source)
        return (dist, prev) if with_prev else dist


def _dijkstra(adj: dict, source):
    """Dijkstra over ``adj: v -> [(weight, neighbor_key...)]`` style entries.

    Entries may carry extra payload after the weight; ``prev[v]`` records the
    full entry used to reach ``v`` together with the predecessor vertex.
    """
    dist = {source: 0.0}
    prev: dict = {}
    counter = itertools.count()
    heap = [(0.0, next(counter), source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")) * (1.0 + 1e-15):
            continue
        for entry in adj.get(u, ()):
            weight = entry[0]
            v = entry[1]
            nd = d + weight
            if nd < dist.get(v, float("inf")) * (1.0 - 1e-15) or v not in dist:
                dist[v] = nd
                prev[v] = (u, entry)
                heapq.heappush(heap, (nd, next(counter), v))
    return dist, prev


def _dijkstra_multi(adj: dict, sources) -> tuple[dict, dict]:
    """Dijkstra from a set of sources (all at distance zero)."""
    dist = {s: 0.0 for s in sources}
    prev: dict = {}
    counter = itertools.count()
    heap = [(0.0, next(counter), s) for s in sources]
    heapq.heapify(heap)
    while heap:
        d, _, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for entry in adj.get(u, ()):
            weight = entry[0]
            v = entry[1]
            nd = d + weight
            if nd < dist.get(v, float("inf")) - 1e-15:
                dist[v] = nd
                prev[v] = (u, entry)
                heapq.heappush(heap, (nd, next(counter), v))
    return dist, prev


_META_RE = re.compile(r"<\s*([^<>]*?)\s*>\s*(.*)$")


def parse_tntp(text: str) -> Network:
    """Parse a TNTP link file into a preprocessed :class:`Network`.

    Columns 1, 2 and 4 of each data row are read as tail node, head node and
    length; everything else is ignored.  Directed rows are merged into one
    undirected edge per unordered pair (minimum length on conflict),
    zero-length edges are contracted, and all lengths are rescaled so the
    shortest edge has length 4.
    """
    lines = text.splitlines()
    n_nodes = n_links = None
    data_start = None
    for i, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("~"):
            continue
        match = _META_RE.match(line)
        if match is None:
            raise TntpParseError(i + 1, "expected a <...> metadata tag")
        tag = match.group(1).upper()
        if tag == "END OF METADATA":
            data_start = i + 1
            break
        value = match.group(2).strip().rstrip(";").strip()
        try:
            if tag == "NUMBER OF NODES":
                n_nodes = int(value)
            elif tag == "NUMBER OF LINKS":
                n_links = int(value)
        except ValueError:
            raise TntpParseError(i + 1, f"non-numeric value for <{tag}>") from None
    if data_start is None:
        raise TntpParseError(len(lines), "missing <END OF METADATA>")
    if n_nodes is None or n_links is None:
        raise TntpParseError(
            data_start, "missing <NUMBER OF NODES> or <NUMBER OF LINKS>"
        )

    merged: dict[tuple, float] = {}
    for lineno, raw in enumerate(lines[data_start:], start=data_start + 1):
        line = raw.strip()
        if not line or line.startswith("~"):
            continue
        body = line[:-1].strip() if line.endswith(";") else line
        cols = body.split()
        if len(cols) < 4:
            raise TntpParseError(lineno, f"expected >= 4 columns, got {len(cols)}")
        try:
            a = int(cols[0])
            b = int(cols[1])
            length = float(cols[3])
        except ValueError:
            raise TntpParseError(lineno, "non-numeric node id or length") from None
        if length < 0.0:
            raise TntpParseError(lineno, f"negative length {length}")
        key = (a, b) if a <= b else (b, a)
        if key not in merged or length < merged[key]:
            merged[key] = length

    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b), length in merged.items():
        if length == 0.0:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

    edges = [
        (find(a), find(b), length)
        for (a, b), length in merged.items()
        if length > 0.0
    ]
    if not edges:
        raise TntpParseError(len(lines), "no positive-length edges after merging")
    scale = 4.0 / min(length for _, _, length in edges)
    return Network((u, v, length * scale) for u, v, length in edges)


@dataclass(frozen=True)
class TEdge:
    """A retained (partial) edge of a truncation, in base-edge coordinates.

    ``a`` is the endpoint vertex at offset ``lo`` and ``b`` the one at ``hi``,
    offsets measured from the base edge's ``u`` endpoint.
    """

    base: int
    lo: float
    hi: float
    a: Vertex
    b: Vertex

    @property
    def length(self) -> float:
        return self.hi - self.lo


class TruncatedNetwork:
    """The sub-network of all points within a given radius of the root.

    Edges crossing the radius are split at the boundary, introducing synthetic
    leaf vertices identified by ``("cut", edge_index, offset)``.  Extra split
    points may be requested so points of interest become vertices.
    """

    def __init__(self, net: Network, r: float, root: Vertex):
        self.net = net
        self.r = r
        self.root = root
        self.tedges: list[TEdge] = []
        self.adjacency: dict[Vertex, list[tuple[int, bool, Vertex]]] = {root: []}
        self.dist_from_root: dict[Vertex, float] = {}
        self.retained: dict[int, list[tuple[float, float]]] = {}
        self.boundary_points: list[tuple[int, float]] = []
        self.cut_vertices: dict[tuple[int, float], Vertex] = {}

    def _add_tedge(self, base: int, lo: float, hi: float, a: Vertex, b: Vertex):
        idx = len(self.tedges)
        self.tedges.append(TEdge(base, lo, hi, a, b))
        self.adjacency.setdefault(a, []).append((idx, True, b))
        self.adjacency.setdefault(b, []).append((idx, False, a))

    @property
    def total_length(self) -> float:
        return sum(t.length for t in self.tedges)

    @property
    def vertices(self) -> set:
        return set(self.adjacency)

    def resolve_vertex(self, v: Vertex) -> Vertex:
        """Map a vertex of an earlier/finer truncation into this one."""
        if v in self.adjacency:
            return v
        if isinstance(v, tuple) and len(v) == 3 and v[0] == "cut":
            alias = self.cut_vertices.get((v[1], v[2]))
            if alias is not None:
                return alias
        raise InvalidParameter(f"vertex {v!r} has no counterpart in this truncation")

    def new_tedges(self, prev_retained: dict[int, list[tuple[float, float]]]) -> set[int]:
        """Indices of retained pieces not covered by an earlier retention map."""
        fresh: set[int] = set()
        for idx, te in enumerate(self.tedges):
            mid = 0.5 * (te.lo + te.hi)
            tol = GEOM_TOL * max(1.0, te.hi)
            covered = any(
                lo - tol <= mid <= hi + tol
                for lo, hi in prev_retained.get(te.base, ())
            )
            if not covered:
                fresh.add(idx)
        return fresh


def truncate(
    net: Network,
    r: float,
    root: Vertex | None = None,
    extra_cuts: Iterable[tuple[int, float]] = (),
) -> TruncatedNetwork:
    """Restrict ``net`` to all points within distance ``r`` of the root.

    An edge ``(u, v, len)`` is fully retained iff both endpoints are within
    ``r`` and ``d(u) + d(v) + len <= 2r``; otherwise the reachable stubs
    ``[0, r - d(u)]`` and ``[len - (r - d(v)), len]`` are kept (when of
    positive length) with boundary leaves at the radius.  ``extra_cuts`` are
    (edge, offset) points that must appear as vertices of the result.
    """
    if r <= 0.0:
        raise InvalidParameter(f"radius must be positive, got {r}")
    root = root if root is not None else net.root
    if root is None:
        raise InvalidParameter("no root given and the network has none")
    dist = net.distances(root)

    sub = TruncatedNetwork(net, r, root)
    sub.dist_from_root[root] = 0.0
    tol = GEOM_TOL * max(1.0, r)

    cuts_by_edge: dict[int, list[float]] = {}
    for edge_idx, offset in extra_cuts:
        cuts_by_edge.setdefault(edge_idx, []).append(offset)

    # (base, lo, hi, a, b) pieces before extra cuts are applied
    pieces: list[tuple[int, float, float, Vertex, Vertex]] = []
    for idx, e in enumerate(net.edges):
        du = dist.get(e.u)
        dv = dist.get(e.v)
        if du is None or dv is None:
            continue
        if du <= r + tol and dv <= r + tol and du + dv + e.length <= 2.0 * r + tol:
            pieces.append((idx, 0.0, e.length, e.u, e.v))
            sub.retained[idx] = [(0.0, e.length)]
            continue
        kept: list[tuple[float, float]] = []
        cu = r - du
        if cu > tol:
            leaf = ("cut", idx, cu)
            sub.cut_vertices[(idx, cu)] = leaf
            sub.boundary_points.append((idx, cu))
            pieces.append((idx, 0.0, cu, e.u, leaf))
            kept.append((0.0, cu))
        cv = r - dv
        if cv > tol:
            start = e.length - cv
            leaf = ("cut", idx, start)
            sub.cut_vertices[(idx, start)] = leaf
            sub.boundary_points.append((idx, start))
            pieces.append((idx, start, e.length, leaf, e.v))
            kept.append((start, e.length))
        if kept:
            sub.retained[idx] = kept

    for base, lo, hi, a, b in pieces:
        inner = []
        for off in sorted(cuts_by_edge.get(base, ())):
            if lo + tol < off < hi - tol:
                inner.append(off)
            elif lo - tol <= off <= lo + tol:
                sub.cut_vertices.setdefault((base, off), a)
            elif hi - tol <= off <= hi + tol:
                sub.cut_vertices.setdefault((base, off), b)
        prev_off, prev_v = lo, a
        for off in inner:
            vertex = sub.cut_vertices.setdefault((base, off), ("cut", base, off))
            sub._add_tedge(base, prev_off, off, prev_v, vertex)
            prev_off, prev_v = off, vertex
        sub._add_tedge(base, prev_off, hi, prev_v, b)

    for te in sub.tedges:
        e = net.edges[te.base]
        du = dist[e.u]
        dv = dist[e.v]
        for vertex, off in ((te.a, te.lo), (te.b, te.hi)):
            d = min(du + off, dv + (e.length - off))
            known = sub.dist_from_root.get(vertex)
            if known is None or d < known:
                sub.dist_from_root[vertex] = d
    return sub


def max_point_distance(net: Network, dist: dict) -> float:
    """Largest shortest-path distance of any point of the root's component."""
    best = 0.0
    for e in net.edges:
        du = dist.get(e.u)
        dv = dist.get(e.v)
        if du is None or dv is None:
            continue
        best = max(best, (du + dv + e.length) / 2.0, du, dv)
    return best
