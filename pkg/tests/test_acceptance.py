"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with ``pytest -s tests/test_acceptance.py`` to see one PASS/FAIL line per
criterion.  The city-network criteria depend on externally supplied TNTP
files (see ``CLEARSEARCH_TNTP_DIR``) and are skipped when absent; seeded
property checks stand in for them.
"""

import os
import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from clearsearch import (
    aggressive_sequence,
    check_constraints,
    eval_cyclic,
    mixed_aggressive_star,
    rho_star,
    scaled_aggressive_star,
    scaled_geometric,
    solve_line_maxclear,
    solve_star_earliest,
    solve_star_maxclear,
)
from clearsearch.network import (
    Network,
    cpt_tour,
    parse_tntp,
    run_strategy,
    truncate,
)
from clearsearch.oracle import brute_cpp, lp_oracle_earliest, lp_oracle_maxclear
from clearsearch.star import _geometric_step_bound
from conftest import random_network


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE[{name}]: FAIL", flush=True)
        raise
    else:
        print(f"ACCEPTANCE[{name}]: PASS", flush=True)


def test_closed_form_correctness():
    with criterion("closed-form correctness"):
        t0 = time.perf_counter()
        for m in range(2, 21):
            for mult in (1.0, 1.5, 5.0):
                rho = rho_star(m) * mult
                z = aggressive_sequence(m, rho, 200)
                assert sum(z[: m - 1]) == pytest.approx(rho, rel=1e-9)
                assert sum(z[:m]) == pytest.approx(rho * z[0], rel=1e-9)
                for i in range(200 - m - 1):
                    assert z[i + m] == pytest.approx(
                        rho * (z[i + 1] - z[i]), rel=1e-9
                    )
        assert time.perf_counter() - t0 < 1.0


def test_oracle_equivalence_line():
    with criterion("oracle equivalence (line)"):
        for rho in (4.0, 4.5, 6.0, 10.0):
            for T in (5.0, 10.0, 50.0, 100.0, 1e3, 1e4):
                sol = solve_line_maxclear(rho, T)
                k_max = max(3, _geometric_step_bound(2, T))
                ora = lp_oracle_maxclear(2, rho, T, k_max)
                assert sol.clearance == pytest.approx(ora.objective, rel=1e-6)
        exact = solve_line_maxclear(4.0, 64.0)
        assert abs(exact.clearance - 44.0) <= 1e-9
        assert abs(lp_oracle_maxclear(2, 4.0, 64.0, 5).objective - 44.0) <= 1e-9


def _star_grid():
    for m in (2, 3, 4):
        for mult in (1.0, 1.5):
            for T in (1e2, 1e3, 1e4):
                yield m, rho_star(m) * mult, T


def test_oracle_equivalence_star():
    with criterion("oracle equivalence (star)"):
        for m, rho, T in _star_grid():
            k_max = max(m, _geometric_step_bound(m, T))
            sol = solve_star_maxclear(m, rho, T)
            ora = lp_oracle_maxclear(m, rho, T, k_max)
            assert sol.clearance == pytest.approx(ora.objective, rel=1e-6)
            if m == 2:
                assert sol.clearance == pytest.approx(
                    solve_line_maxclear(rho, T).clearance, rel=1e-9
                )
            L = sol.clearance
            early = solve_star_earliest(m, rho, L)
            k_max_e = max(m, _geometric_step_bound(m, 4 * T))
            orae = lp_oracle_earliest(m, rho, L, k_max_e)
            assert early.duration == pytest.approx(orae.objective, rel=1e-6)


def test_tightness_pattern():
    with criterion("tightness pattern"):
        for m, rho, T in _star_grid():
            sol = solve_star_maxclear(m, rho, T)
            rep = check_constraints(sol.strategy, T)
            scale = max(1.0, sum(sol.strategy.lengths))
            for slack in rep.slack_C + rep.slack_E:
                assert abs(slack) <= 1e-9 * scale
            assert min(abs(rep.slack_C0), abs(rep.slack_B)) <= 1e-9 * max(scale, T)
            assert rep.feasible


def test_table2_reproduction():
    with criterion("Table 2 reproduction"):
        t0 = time.perf_counter()
        expected = {3: 1.124, 4: 1.197, 5: 1.244}
        for m, target in expected.items():
            rho = rho_star(m)
            opt = solve_star_maxclear(m, rho, 1e16).clearance
            scaled = eval_cyclic(scaled_aggressive_star(m, rho, 1e16)).clearance
            assert opt / scaled == pytest.approx(target, abs=0.03)
        assert time.perf_counter() - t0 < 5.0


def test_fig1_reproduction():
    with criterion("Fig. 1 reproduction"):
        rho = rho_star(4)
        for T in (1e2, 1e4, 1e6, 1e8):
            opt = solve_star_maxclear(4, rho, T).clearance
            geo = eval_cyclic(scaled_geometric(4, rho, T)).clearance
            assert opt / geo >= 1.15


def test_solver_performance():
    with criterion("solver performance"):
        t0 = time.perf_counter()
        sol = solve_star_maxclear(10, rho_star(10), 1e12)
        assert time.perf_counter() - t0 < 1.0
        assert check_constraints(sol.strategy, 1e12).feasible


def test_cpt_oracle():
    with criterion("CPT oracle"):
        rng = random.Random(2024)
        for _ in range(100):
            net = random_network(rng, max_edges=12, max_odd=10)
            sub = truncate(net, 10 * net.total_length, root=0)
            tour = cpt_tour(sub, 0, matching="exact")
            assert tour.total_length == pytest.approx(brute_cpp(net, 0), abs=1e-9)


def test_proposition1_certificate():
    with criterion("Proposition 1 certificate"):
        rng = random.Random(7777)
        for _ in range(50):
            net = random_network(rng, n_min=4, n_max=12, max_extra=5)
            T = 10.0 * net.total_length
            rep = run_strategy(net, 0, 2.0, T, mode="rpt", matching="exact")
            assert rep.rhat_exact
            assert rep.competitive_ratio <= 4.0 * rep.lower_bound_Rhat + 1e-9


def _city_grid(rows=4, cols=6, seed=99):
    """Synthetic city at the scale of the smallest benchmark network
    (24 nodes, 38 edges), with the preprocessing floor of length 4."""
    rng = random.Random(seed)
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1, round(rng.uniform(4.0, 16.0), 2)))
            if i + 1 < rows:
                edges.append((v, v + cols, round(rng.uniform(4.0, 16.0), 2)))
    return Network(edges, root=0)


def test_rpt_dominance():
    with criterion("RPT dominance"):
        rng = random.Random(13)
        nets = [random_network(rng, n_min=6, n_max=12, max_extra=5) for _ in range(6)]
        nets.append(_city_grid())
        for net in nets:
            T = net.total_length * 20
            cpt = run_strategy(net, 0, 2.0, T, mode="cpt")
            rpt = run_strategy(net, 0, 2.0, T, mode="rpt")
            clock_c = clock_r = 0.0
            for rc, rr in zip(cpt.rounds, rpt.rounds):
                clock_c += rc.tour_length
                clock_r += rr.tour_length
                assert clock_r <= clock_c + 1e-9
                boundary = min(clock_c, T)
                assert rpt.trace.clearance_at(boundary) >= (
                    cpt.trace.clearance_at(boundary) - 1e-9
                )


def test_clearance_curve_sampler():
    import numpy as np

    with criterion("clearance-curve sampler"):
        rng = random.Random(5150)
        nets = [
            random_network(rng, n_min=10, n_max=16, max_extra=8),
            _city_grid(seed=31),
        ]
        for net in nets:
            assert len(net.edges) <= 50
            rep = run_strategy(net, 0, 2.0, net.total_length * 1.2, mode="rpt")
            trace = rep.trace
            samples = 10_000
            per_edge = []
            for idx, e in enumerate(net.edges):
                offs = (np.arange(samples) + 0.5) * (e.length / samples)
                first = np.full(samples, np.inf)
                for rec in trace.records:
                    if rec.edge != idx:
                        continue
                    mask = (offs >= rec.lo) & (offs <= rec.hi)
                    span = rec.hi - rec.lo
                    t = rec.t_lo + (rec.t_hi - rec.t_lo) * (
                        (offs[mask] - rec.lo) / span
                    )
                    first[mask] = np.minimum(first[mask], t)
                per_edge.append((first, e.length / samples))
            for frac in (0.25, 0.5, 0.75, 1.0):
                t = frac * trace.clock
                discrete = sum(float((f <= t).sum()) * w for f, w in per_edge)
                analytic = trace.clearance_at(t)
                assert discrete == pytest.approx(analytic, rel=0.01, abs=0.01)


CITY_DIR = os.environ.get("CLEARSEARCH_TNTP_DIR")


@pytest.mark.skipif(
    not CITY_DIR or not Path(CITY_DIR).exists(),
    reason="city TNTP files not supplied (set CLEARSEARCH_TNTP_DIR)",
)
def test_city_networks_optional():
    with criterion("city networks (data-dependent)"):
        directory = Path(CITY_DIR)
        sioux = next(directory.glob("*[Ss]ioux*net*"), None)
        assert sioux is not None, "expected a Sioux Falls *_net.tntp file"
        net = parse_tntp(sioux.read_text())
        assert len(net.vertices) == 24
        assert len(net.edges) == 38
        roots = sorted(net.vertices)[:3]
        for root in roots:
            T = net.total_length
            cpt = run_strategy(net, root, 2.0, T, mode="cpt")
            rpt = run_strategy(net, root, 2.0, T, mode="rpt")
            assert rpt.clearance_at_T >= cpt.clearance_at_T - 1e-9
