"""Round-based budgeted search runs: traces, clearance and competitive ratio.

A run repeatedly truncates the network at radii ``r, r**2, ...`` and covers
each truncation with a postman tour, simulated at unit speed until the time
budget is exhausted (stopping mid-edge if necessary).  The trace records the
first-visit time of every point, from which the clearance curve and the
competitive ratio follow exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

from ..errors import InvalidParameter
from .graph import (
    GEOM_TOL,
    Network,
    TruncatedNetwork,
    Vertex,
    max_point_distance,
    truncate,
)
from .tours import MatchingMode, Tour, _cpt, cpt_length, rpt_tour


@dataclass(frozen=True)
class FirstVisit:
    """A maximal stretch of ground seen for the first time.

    Offsets are base-edge coordinates; the visit time is linear over the
    stretch, from ``t_lo`` at offset ``lo`` to ``t_hi`` at offset ``hi``
    (``t_hi < t_lo`` when the stretch was entered at its far end).
    """

    edge: int
    lo: float
    hi: float
    t_lo: float
    t_hi: float


class TraversalTrace:
    """Accumulates traversals and keeps first-visit records per base edge."""

    def __init__(self, net: Network, root: Vertex):
        self.net = net
        self.root = root
        self.clock = 0.0
        self.records: list[FirstVisit] = []
        self._covered: dict[int, list[tuple[float, float]]] = {}
        self._cleared = 0.0
        self.stop_point: tuple[int, float] | None = None

    @property
    def total_cleared(self) -> float:
        return self._cleared

    def traverse(self, edge: int, start_off: float, end_off: float) -> None:
        """Move at unit speed along ``edge`` between the given offsets."""
        seg = abs(end_off - start_off)
        if seg <= 0.0:
            return
        lo, hi = (start_off, end_off) if start_off <= end_off else (end_off, start_off)
        cov = self._covered.setdefault(edge, [])
        tol = GEOM_TOL * max(1.0, hi)
        for p, q in _subtract(lo, hi, cov):
            if q - p <= tol:
                continue
            self.records.append(
                FirstVisit(
                    edge,
                    p,
                    q,
                    self.clock + abs(p - start_off),
                    self.clock + abs(q - start_off),
                )
            )
            self._cleared += q - p
        _insert(cov, lo, hi, tol)
        self.clock += seg

    def clearance_at(self, t: float) -> float:
        total = 0.0
        for rec in self.records:
            t0, t1 = sorted((rec.t_lo, rec.t_hi))
            if t >= t1:
                total += rec.hi - rec.lo
            elif t > t0:
                total += t - t0
        return total

    def curve_points(self) -> list[tuple[float, float]]:
        """Breakpoints of the piecewise-linear clearance curve."""
        points = [(0.0, 0.0)]
        cleared = 0.0
        for rec in sorted(self.records, key=lambda r: min(r.t_lo, r.t_hi)):
            t0, t1 = sorted((rec.t_lo, rec.t_hi))
            if t0 > points[-1][0] + GEOM_TOL:
                points.append((t0, cleared))
            cleared += rec.hi - rec.lo
            points.append((t1, cleared))
        if self.clock > points[-1][0] + GEOM_TOL:
            points.append((self.clock, cleared))
        return points


def _subtract(lo: float, hi: float, cov: list[tuple[float, float]]):
    """Parts of [lo, hi] not covered by the sorted disjoint intervals."""
    out = []
    cursor = lo
    for a, b in cov:
        if b <= cursor:
            continue
        if a >= hi:
            break
        if a > cursor:
            out.append((cursor, min(a, hi)))
        cursor = max(cursor, b)
        if cursor >= hi:
            break
    if cursor < hi:
        out.append((cursor, hi))
    return out


def _insert(cov: list[tuple[float, float]], lo: float, hi: float, tol: float) -> None:
    """Insert [lo, hi] into the sorted disjoint interval list, merging."""
    starts = [a for a, _ in cov]
    i = bisect.bisect_left(starts, lo)
    if i > 0 and cov[i - 1][1] >= lo - tol:
        i -= 1
    j = i
    while j < len(cov) and cov[j][0] <= hi + tol:
        lo = min(lo, cov[j][0])
        hi = max(hi, cov[j][1])
        j += 1
    cov[i:j] = [(lo, hi)]


class Witness(NamedTuple):
    edge: int
    offset: float
    time: float
    distance: float


class CompetitiveRatio(NamedTuple):
    ratio: float
    witness: Witness | None


def competitive_ratio(trace: TraversalTrace, net: Network | None = None) -> CompetitiveRatio:
    """Supremum of first-visit time over (clamped) distance, with its witness.

    Along each first-visit record both the visit time and the shortest-path
    distance are piecewise linear in the offset, so the supremum is attained
    at record endpoints or at the distance breakpoints; only those points are
    evaluated.  Distances are clamped below at 1.
    """
    net = net if net is not None else trace.net
    if not trace.records:
        return CompetitiveRatio(1.0, None)
    dist = net.distances(trace.root)
    best_ratio = 0.0
    best_witness: Witness | None = None
    for rec in trace.records:
        e = net.edges[rec.edge]
        du = dist[e.u]
        dv = dist[e.v]
        candidates = {rec.lo, rec.hi}
        ridge = 0.5 * (dv + e.length - du)  # du + o == dv + (len - o)
        if rec.lo < ridge < rec.hi:
            candidates.add(ridge)
        for crossing in (1.0 - du, dv + e.length - 1.0):  # clamp breakpoints
            if rec.lo < crossing < rec.hi:
                candidates.add(crossing)
        span = rec.hi - rec.lo
        for off in candidates:
            d = max(min(du + off, dv + (e.length - off)), 1.0)
            t = rec.t_lo + (rec.t_hi - rec.t_lo) * ((off - rec.lo) / span)
            ratio = t / d
            if ratio > best_ratio:
                best_ratio = ratio
                best_witness = Witness(rec.edge, off, t, d)
    return CompetitiveRatio(best_ratio, best_witness)


class LowerBound(NamedTuple):
    value: float
    exact: bool


def cr_lower_bound(
    net: Network,
    r: float,
    rounds: int,
    root: Vertex | None = None,
    matching: MatchingMode = "auto",
) -> LowerBound:
    """Max over rounds of (covering-walk length of the truncation) / radius.

    Certifies the approximation factor of the iterative-deepening strategies;
    valid as a lower bound on the optimal competitive ratio when the pairing
    is exact (the ``exact`` flag records this).
    """
    if rounds < 1:
        raise InvalidParameter(f"need at least one round, got {rounds}")
    root = root if root is not None else net.root
    best = 0.0
    exact_all = True
    for i in range(1, rounds + 1):
        sub = truncate(net, r**i, root=root)
        if not sub.tedges:
            continue
        length, exact = cpt_length(sub, matching)
        exact_all = exact_all and exact
        best = max(best, length / r**i)
    return LowerBound(best, exact_all)


@dataclass(frozen=True)
class RoundRecord:
    radius: float
    kind: str  # which tour was taken: "cpt" | "rpt"
    tour_length: float


@dataclass
class RunReport:
    mode: Literal["cpt", "rpt"]
    r: float
    T: float
    root: Vertex
    open_ended: bool
    matching: MatchingMode
    rounds: tuple[RoundRecord, ...]
    clearance_at_T: float
    total_length: float
    competitive_ratio: float
    witness: Witness | None
    lower_bound_Rhat: float
    rhat_exact: bool
    final_time: float
    trace: TraversalTrace = field(repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "r": self.r,
            "T": self.T,
            "root": _vertex_json(self.root),
            "open_ended": self.open_ended,
            "matching": self.matching,
            "rounds": [
                {
                    "radius": rd.radius,
                    "kind": rd.kind,
                    "tour_length": rd.tour_length,
                }
                for rd in self.rounds
            ],
            "clearance_at_T": self.clearance_at_T,
            "total_length": self.total_length,
            "competitive_ratio": self.competitive_ratio,
            "witness": None
            if self.witness is None
            else {
                "edge": self.witness.edge,
                "offset": self.witness.offset,
                "time": self.witness.time,
                "distance": self.witness.distance,
            },
            "lower_bound_Rhat": self.lower_bound_Rhat,
            "rhat_exact": self.rhat_exact,
            "final_time": self.final_time,
        }


def _vertex_json(v: Vertex):
    if isinstance(v, (int, str)):
        return v
    return repr(v)


def _simulate(trace: TraversalTrace, tour: Tour, budget: float) -> bool:
    """Walk the tour, stopping mid-edge when the budget runs out.

    Returns True when the whole tour fit within the budget.
    """
    for step in tour.steps:
        remaining = budget - trace.clock
        if step.length <= remaining + GEOM_TOL * max(1.0, budget):
            trace.traverse(step.edge, step.enter, step.exit)
        else:
            if remaining > 0.0:
                direction = 1.0 if step.exit >= step.enter else -1.0
                stop = step.enter + direction * remaining
                trace.traverse(step.edge, step.enter, stop)
                trace.stop_point = (step.edge, stop)
            trace.clock = budget
            return False
    return True


def run_strategy(
    net: Network,
    root: Vertex,
    r: float,
    T: float,
    mode: Literal["cpt", "rpt"] = "rpt",
    open_ended: bool = False,
    matching: MatchingMode = "auto",
) -> RunReport:
    """Iterative-deepening search with budget ``T`` and radius base ``r``.

    Round ``i`` covers the truncation at radius ``r**i`` with a covering tour;
    in ``rpt`` mode the rural-postman tour over the newly added ground is also
    built and the cheaper of the two is walked.  Rounds that add no new ground
    are skipped without consuming time.
    """
    if r <= 1.0:
        raise InvalidParameter(f"radius base must exceed 1, got {r}")
    if T <= 0.0:
        raise InvalidParameter(f"budget must be positive, got {T}")
    if mode not in ("cpt", "rpt"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    if root not in net.adjacency and net.edges:
        raise InvalidParameter(f"root {root!r} not in network")

    trace = TraversalTrace(net, root)
    reach = max_point_distance(net, net.distances(root))
    cuts: list[tuple[int, float]] = []
    seen_cuts: set[tuple[int, float]] = set()
    prev_retained: dict[int, list[tuple[float, float]]] = {}
    prev_total = 0.0
    position: Vertex = root
    rounds: list[RoundRecord] = []
    rhat = 0.0
    rhat_exact = True

    i = 0
    while trace.clock < T * (1.0 - 1e-15):
        i += 1
        radius = r**i
        sub = truncate(net, radius, root=root, extra_cuts=cuts)
        if sub.total_length <= prev_total + GEOM_TOL * max(1.0, prev_total):
            if radius >= reach:
                break  # everything reachable is already covered
            continue  # nothing new at this radius; skip without cost
        start = sub.resolve_vertex(position)
        cpt_cand, exact = _cpt(sub, start, matching)
        rhat = max(rhat, cpt_cand.total_length / radius)
        rhat_exact = rhat_exact and exact
        if mode == "cpt":
            tour, kind = cpt_cand, "cpt"
        else:
            required = sub.new_tedges(prev_retained)
            rpt_cand = rpt_tour(sub, required, start, open_ended, matching)
            if rpt_cand.total_length < cpt_cand.total_length * (1.0 - 1e-12):
                tour, kind = rpt_cand, "rpt"
            else:
                tour, kind = cpt_cand, "cpt"
        finished = _simulate(trace, tour, T)
        rounds.append(RoundRecord(radius, kind, tour.total_length))
        if not finished:
            break
        position = tour.end
        for bp in sub.boundary_points:
            if bp not in seen_cuts:
                seen_cuts.add(bp)
                cuts.append(bp)
        prev_retained = sub.retained
        prev_total = sub.total_length

    cr = competitive_ratio(trace)
    return RunReport(
        mode=mode,
        r=r,
        T=T,
        root=root,
        open_ended=open_ended,
        matching=matching,
        rounds=tuple(rounds),
        clearance_at_T=trace.total_cleared,
        total_length=net.total_length,
        competitive_ratio=max(cr.ratio, 1.0),
        witness=cr.witness,
        lower_bound_Rhat=rhat,
        rhat_exact=rhat_exact,
        final_time=trace.clock,
        trace=trace,
    )
