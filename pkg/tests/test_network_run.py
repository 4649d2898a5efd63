import random

import numpy as np
import pytest

from clearsearch import InvalidParameter
from clearsearch.network import (
    Network,
    TraversalTrace,
    competitive_ratio,
    cr_lower_bound,
    run_strategy,
)
from conftest import random_network


class TestTraversalTrace:
    def test_first_visit_only_counts_once(self):
        net = Network([(0, 1, 4.0)], root=0)
        tr = TraversalTrace(net, 0)
        tr.traverse(0, 0.0, 3.0)
        tr.traverse(0, 3.0, 1.0)
        tr.traverse(0, 1.0, 4.0)
        assert tr.total_cleared == pytest.approx(4.0)
        assert tr.clock == pytest.approx(8.0)

    def test_clearance_curve_slopes(self):
        net = Network([(0, 1, 4.0)], root=0)
        tr = TraversalTrace(net, 0)
        tr.traverse(0, 0.0, 2.0)  # new ground: slope 1 on [0, 2]
        tr.traverse(0, 2.0, 0.0)  # backtrack: flat on [2, 4]
        tr.traverse(0, 0.0, 4.0)  # flat on [4, 6], then new on [6, 8]
        assert tr.clearance_at(1.0) == pytest.approx(1.0)
        assert tr.clearance_at(3.0) == pytest.approx(2.0)
        assert tr.clearance_at(5.0) == pytest.approx(2.0)
        assert tr.clearance_at(7.0) == pytest.approx(3.0)
        assert tr.clearance_at(8.0) == pytest.approx(4.0)
        pts = tr.curve_points()
        assert pts[0] == (0.0, 0.0)
        assert pts[-1] == (8.0, 4.0)
        times = [t for t, _ in pts]
        values = [c for _, c in pts]
        assert times == sorted(times)
        assert values == sorted(values)

    def test_curve_matches_discrete_sampler(self):
        rng = random.Random(11)
        net = random_network(rng, n_min=8, n_max=14, max_extra=6)
        rep = run_strategy(net, 0, 2.0, net.total_length * 1.5, mode="rpt")
        _assert_sampler_agreement(rep.trace, net)


def _assert_sampler_agreement(trace, net, samples_per_edge=10_000, rel=0.01):
    per_edge_first = {}
    for idx, e in enumerate(net.edges):
        offs = (np.arange(samples_per_edge) + 0.5) * (e.length / samples_per_edge)
        first = np.full(samples_per_edge, np.inf)
        for rec in trace.records:
            if rec.edge != idx:
                continue
            mask = (offs >= rec.lo) & (offs <= rec.hi)
            span = rec.hi - rec.lo
            t = rec.t_lo + (rec.t_hi - rec.t_lo) * ((offs[mask] - rec.lo) / span)
            first[mask] = np.minimum(first[mask], t)
        per_edge_first[idx] = (first, e.length / samples_per_edge)
    checkpoints = np.linspace(0.0, trace.clock, 7)[1:]
    for t in checkpoints:
        discrete = sum(
            float((first <= t).sum()) * w for first, w in per_edge_first.values()
        )
        analytic = trace.clearance_at(t)
        assert discrete == pytest.approx(analytic, rel=rel, abs=0.02 * max(1.0, analytic))


class TestTraceStructure:
    def test_records_disjoint_in_time_and_unit_slope(self):
        rng = random.Random(71)
        for _ in range(8):
            net = random_network(rng, n_min=5, n_max=10, max_extra=4)
            rep = run_strategy(net, 0, 2.0, net.total_length * 2, mode="rpt")
            spans = sorted(
                tuple(sorted((r.t_lo, r.t_hi))) for r in rep.trace.records
            )
            for (a0, a1), (b0, b1) in zip(spans, spans[1:]):
                assert b0 >= a1 - 1e-9  # the searcher is in one place at a time
            pts = rep.trace.curve_points()
            assert pts[0] == (0.0, 0.0)
            for (t1, c1), (t2, c2) in zip(pts, pts[1:]):
                assert t2 >= t1
                assert c2 >= c1 - 1e-12
                assert c2 - c1 <= (t2 - t1) * (1 + 1e-9)  # unit speed

    def test_ratio_supremum_dominates_interior_samples(self):
        # the sup over record endpoints and breakpoints must dominate any
        # densely sampled interior point of any record
        rng = random.Random(3571)
        for _ in range(6):
            net = random_network(rng, n_min=5, n_max=10, max_extra=4)
            rep = run_strategy(net, 0, 2.0, net.total_length * 1.3, mode="rpt")
            sup = competitive_ratio(rep.trace).ratio
            dist = net.distances(0)
            for rec in rep.trace.records:
                e = net.edges[rec.edge]
                span = rec.hi - rec.lo
                for i in range(1, 40):
                    off = rec.lo + span * i / 40.0
                    d = max(min(dist[e.u] + off, dist[e.v] + e.length - off), 1.0)
                    t = rec.t_lo + (rec.t_hi - rec.t_lo) * ((off - rec.lo) / span)
                    assert t / d <= sup * (1 + 1e-12)


class TestCompetitiveRatio:
    def test_out_and_back_is_one(self):
        net = Network([("O", "A", 2.0)], root="O")
        tr = TraversalTrace(net, "O")
        tr.traverse(0, 0.0, 2.0)
        tr.traverse(0, 2.0, 0.0)
        res = competitive_ratio(tr)
        assert res.ratio == pytest.approx(1.0)

    def test_doubling_approaches_nine(self):
        depth = 14
        length = float(2**depth)
        net = Network([("O", "A", length), ("O", "B", length)], root="O")
        tr = TraversalTrace(net, "O")
        x = 1.0
        for j in range(1, depth + 1):
            e = 0 if j % 2 == 1 else 1
            tr.traverse(e, 0.0, x)
            tr.traverse(e, x, 0.0)
            x *= 2
        got = competitive_ratio(tr).ratio
        # a point just past turn j is reached at step j+2; best visible j
        expected = max(9 - 2.0 ** (2 - j) for j in range(1, depth - 1))
        assert got == pytest.approx(expected, rel=1e-12)
        assert got < 9.0

    def test_empty_trace(self):
        net = Network([(0, 1, 1.0)], root=0)
        assert competitive_ratio(TraversalTrace(net, 0)).ratio == 1.0

    def test_witness_on_clamped_distance(self):
        # points closer than 1 are clamped, so the worst ratio sits at d=1
        net = Network([(0, 1, 2.0)], root=0)
        tr = TraversalTrace(net, 0)
        tr.traverse(0, 0.0, 0.5)
        tr.traverse(0, 0.5, 0.0)
        tr.traverse(0, 0.0, 2.0)
        res = competitive_ratio(tr)
        # offset 0.5..2 first seen on the third pass; t(1.0) = 2, d = 1
        assert res.ratio == pytest.approx(2.0)
        assert res.witness.distance == pytest.approx(1.0)


class TestCrLowerBound:
    def test_three_spokes(self):
        net = Network([("O", i, 1.0) for i in range(3)], root="O")
        lb = cr_lower_bound(net, 2.0, 1)
        assert lb.value == pytest.approx(3.0)
        assert lb.exact

    def test_nondecreasing_in_rounds(self):
        rng = random.Random(2)
        net = random_network(rng, n_min=6, n_max=10)
        values = [cr_lower_bound(net, 2.0, k).value for k in (1, 2, 3, 4, 5)]
        assert values == sorted(values)


def _round_end_times(report):
    times = []
    clock = 0.0
    for rd in report.rounds:
        clock += rd.tour_length
        times.append(min(clock, report.T))
    return times


class TestRunStrategy:
    def test_everything_cleared_with_big_budget(self):
        net = Network([(0, 1, 4.0), (1, 2, 6.0)], root=0)
        for mode in ("cpt", "rpt"):
            rep = run_strategy(net, 0, 2.0, 100.0, mode=mode)
            assert rep.clearance_at_T == pytest.approx(10.0)
            assert rep.final_time < 100.0
            assert rep.competitive_ratio >= 1.0

    def test_budget_truncates_mid_edge(self):
        net = Network([(0, 1, 4.0), (1, 2, 6.0)], root=0)
        rep = run_strategy(net, 0, 2.0, 5.0, mode="cpt")
        assert rep.final_time == pytest.approx(5.0)
        assert rep.clearance_at_T <= 5.0
        assert rep.trace.stop_point is not None

    def test_rejects_bad_parameters(self):
        net = Network([(0, 1, 1.0)], root=0)
        with pytest.raises(InvalidParameter):
            run_strategy(net, 0, 1.0, 10.0)
        with pytest.raises(InvalidParameter):
            run_strategy(net, 5, 2.0, 10.0)
        with pytest.raises(InvalidParameter):
            run_strategy(net, 0, 2.0, 10.0, mode="best")

    def test_rpt_rounds_never_slower(self):
        rng = random.Random(31)
        for _ in range(12):
            net = random_network(rng, n_min=6, n_max=12, max_extra=5)
            T = net.total_length * 3
            cpt = run_strategy(net, 0, 2.0, T, mode="cpt")
            rpt = run_strategy(net, 0, 2.0, T, mode="rpt")
            c_times = _round_end_times(cpt)
            r_times = _round_end_times(rpt)
            for i in range(min(len(c_times), len(r_times))):
                assert r_times[i] <= c_times[i] + 1e-9
            # clearance comparison at cpt round boundaries
            for i, t in enumerate(c_times):
                assert rpt.trace.clearance_at(t) >= cpt.trace.clearance_at(t) - 1e-9

    def test_rpt_round_lengths_at_most_cpt_candidate(self):
        rng = random.Random(17)
        net = random_network(rng, n_min=8, n_max=12, max_extra=6)
        rep = run_strategy(net, 0, 2.0, net.total_length * 4, mode="rpt")
        cpt = run_strategy(net, 0, 2.0, net.total_length * 4, mode="cpt")
        for mine, ref in zip(rep.rounds, cpt.rounds):
            assert mine.radius == ref.radius
            assert mine.tour_length <= ref.tour_length + 1e-9

    def test_open_ended_runs(self):
        # worst case needs ~2 * total per round over log2(diameter) rounds
        rng = random.Random(55)
        for _ in range(8):
            net = random_network(rng, n_min=6, n_max=10, max_extra=4)
            T = net.total_length * 20
            rep = run_strategy(net, 0, 2.0, T, mode="rpt", open_ended=True)
            closed = run_strategy(net, 0, 2.0, T, mode="rpt")
            assert rep.clearance_at_T == pytest.approx(net.total_length)
            assert rep.final_time <= closed.final_time + 1e-9

    def test_approximation_certificate(self):
        rng = random.Random(404)
        for _ in range(10):
            net = random_network(rng, n_min=5, n_max=12, max_extra=4)
            T = net.total_length * 10
            rep = run_strategy(net, 0, 2.0, T, mode="rpt", matching="exact")
            assert rep.rhat_exact
            assert rep.competitive_ratio <= 4.0 * rep.lower_bound_Rhat + 1e-9

    def test_recorded_rhat_matches_standalone_bound(self):
        rng = random.Random(88)
        net = random_network(rng, n_min=6, n_max=10, max_extra=4)
        rep = run_strategy(net, 0, 2.0, net.total_length * 20, mode="rpt", matching="exact")
        standalone = cr_lower_bound(net, 2.0, len(rep.rounds), root=0, matching="exact")
        assert rep.lower_bound_Rhat == pytest.approx(standalone.value, rel=1e-12)
        assert standalone.exact == rep.rhat_exact

    @pytest.mark.parametrize("r", [1.3, 1.7, 2.5, 3.5])
    def test_full_coverage_across_radius_bases(self, r):
        # stresses boundary-cut bookkeeping across rounds at awkward radii
        rng = random.Random(int(r * 100))
        for _ in range(4):
            net = random_network(rng, n_min=5, n_max=11, max_extra=4)
            budget = net.total_length * 40
            for mode in ("cpt", "rpt"):
                rep = run_strategy(net, 0, r, budget, mode=mode)
                assert rep.clearance_at_T == pytest.approx(net.total_length)
                assert rep.trace.clearance_at(rep.final_time) == pytest.approx(
                    net.total_length
                )

    def test_report_round_invariants(self):
        rng = random.Random(9)
        net = random_network(rng, n_min=6, n_max=9)
        rep = run_strategy(net, 0, 2.0, net.total_length * 2, mode="rpt")
        radii = [rd.radius for rd in rep.rounds]
        assert radii == sorted(radii)
        assert rep.clearance_at_T <= net.total_length + 1e-9
        payload = rep.to_dict()
        assert payload["mode"] == "rpt"
        assert len(payload["rounds"]) == len(rep.rounds)
