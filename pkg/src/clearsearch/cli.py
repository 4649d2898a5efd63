"""Command-line harness: solvers, comparison sweeps and network runs.

Exit codes: 0 success, 2 bad flags/parameters, 3 infeasible instance,
4 input file parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import line as line_mod
from . import star as star_mod
from .errors import ClearsearchError, InfeasibleBudget, TntpParseError
from .network import Network, parse_tntp, run_strategy
from .strategy import check_constraints, eval_cyclic, rho_star

SIG_DIGITS = 12


def fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def jround(x: float) -> float:
    """Round to the CLI's significant-digit budget for stable JSON output."""
    return float(fmt(x))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _slack_dict(strategy, T: float) -> dict:
    rep = check_constraints(strategy, T)
    return {
        "C0": jround(rep.slack_C0),
        "C": [jround(v) for v in rep.slack_C],
        "E": [jround(v) for v in rep.slack_E],
        "M": [jround(v) for v in rep.slack_M],
        "B": jround(rep.slack_B),
        "feasible": rep.feasible,
    }


def _cmd_line(args) -> int:
    if args.T is not None:
        sol = line_mod.solve_line_maxclear(args.rho, args.T)
        ev = eval_cyclic(sol.strategy)
        payload = {
            "problem": "maxclear",
            "rho": jround(args.rho),
            "T": jround(args.T),
            "lengths": [jround(v) for v in sol.strategy.lengths],
            "clearance": jround(sol.clearance),
            "duration": jround(ev.duration),
            "which": sol.which,
            "slacks": _slack_dict(sol.strategy, args.T),
        }
    else:
        sol = line_mod.solve_line_earliest(args.rho, args.L)
        ev = eval_cyclic(sol.strategy)
        payload = {
            "problem": "earliest",
            "rho": jround(args.rho),
            "L": jround(args.L),
            "lengths": [jround(v) for v in sol.strategy.lengths],
            "clearance": jround(ev.clearance),
            "duration": jround(sol.duration),
            "which": None,
            "slacks": _slack_dict(sol.strategy, sol.duration),
        }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _parse_grid(spec: str, integral: bool = False) -> list[float]:
    """Grid syntax: 'log:LO:HI:N', 'lin:LO:HI:N' or comma-separated values."""
    if spec.startswith(("log:", "lin:")):
        kind, lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        if n < 1 or hi < lo:
            raise ValueError(f"bad grid {spec!r}")
        if n == 1:
            vals = [lo]
        elif kind == "log":
            step = (math.log(hi) - math.log(lo)) / (n - 1)
            vals = [math.exp(math.log(lo) + i * step) for i in range(n)]
        else:
            step = (hi - lo) / (n - 1)
            vals = [lo + i * step for i in range(n)]
    else:
        vals = [float(v) for v in spec.split(",") if v.strip()]
    if integral:
        vals = [float(int(round(v))) for v in vals]
    return vals


def _star_rho(m: int, r_mult: float) -> float:
    if r_mult == 1.0:
        return rho_star(m)
    return (r_mult * (1.0 + 2.0 * rho_star(m)) - 1.0) / 2.0


def _cmd_star_compare(args) -> int:
    grids: list[tuple[int, float, float]] = []  # (m, r_mult, T)
    if args.T_grid:
        for T in _parse_grid(args.T_grid):
            grids.append((args.m, args.R_mult, T))
    elif args.m_grid:
        for mv in _parse_grid(args.m_grid, integral=True):
            grids.append((int(mv), args.R_mult, args.T))
    else:
        for mult in _parse_grid(args.R_grid):
            grids.append((args.m, mult, args.T))

    lines = [
        "m,rho,T,clr_optimal,clr_mixed_aggressive,clr_scaled_geometric,"
        "ratio_opt_over_geo,ratio_opt_over_scaled_aggressive"
    ]
    for m, mult, T in grids:
        rho = _star_rho(m, mult)
        opt = star_mod.solve_star_maxclear(m, rho, T).clearance
        mixed = eval_cyclic(star_mod.mixed_aggressive_star(m, rho, T)).clearance
        geo = eval_cyclic(star_mod.scaled_geometric(m, rho, T)).clearance
        scaled = eval_cyclic(star_mod.scaled_aggressive_star(m, rho, T)).clearance
        lines.append(
            ",".join(
                fmt(v)
                for v in (m, rho, T, opt, mixed, geo, opt / geo, opt / scaled)
            )
        )
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _splitmix64(seed: int):
    """SplitMix64: 64-bit state, documented constants, platform-independent."""
    mask = (1 << 64) - 1
    state = seed & mask
    while True:
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        yield (z ^ (z >> 31)) & mask


def _pick_roots(net: Network, seed: int, n: int) -> list:
    verts = sorted(net.vertices)
    gen = _splitmix64(seed)
    return [verts[next(gen) % len(verts)] for _ in range(n)]


def _run_one(job):
    net, root, r, T, mode, open_ended, matching = job
    return run_strategy(net, root, r, T, mode=mode, open_ended=open_ended, matching=matching)


def _worker_cap(n_jobs: int) -> int:
    env = os.environ.get("CLEARSEARCH_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_jobs))


def _cmd_net_run(args) -> int:
    try:
        with open(args.tntp) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.tntp}: {exc}", file=sys.stderr)
        return 4
    net = parse_tntp(text)

    seed = None
    if args.root.startswith("random:"):
        seed = int(args.root.split(":", 1)[1])
        roots = _pick_roots(net, seed, args.runs)
    else:
        root_id: object = int(args.root) if args.root.lstrip("-").isdigit() else args.root
        if args.runs != 1:
            raise ClearsearchError("--runs > 1 requires --root random:SEED")
        roots = [root_id]

    jobs = [
        (net, root, args.r, args.T, args.mode, args.open_ended, args.matching)
        for root in roots
    ]
    if len(jobs) == 1:
        reports = [_run_one(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=_worker_cap(len(jobs))) as pool:
            reports = list(pool.map(_run_one, jobs))

    summary = {
        "network": {
            "vertices": len(net.vertices),
            "edges": len(net.edges),
            "total_length": jround(net.total_length),
        },
        "seed": seed,
        "runs": [_roundtrip(rep.to_dict()) for rep in reports],
    }
    _emit(json.dumps(summary, indent=2) + "\n", args.out)

    if args.curves_out:
        rows = []
        if len(reports) == 1:
            rows.append("time,clearance")
            for t, c in reports[0].trace.curve_points():
                rows.append(f"{fmt(t)},{fmt(c)}")
        else:
            rows.append("run,time,clearance")
            for i, rep in enumerate(reports):
                for t, c in rep.trace.curve_points():
                    rows.append(f"{i},{fmt(t)},{fmt(c)}")
        _emit("\n".join(rows) + "\n", args.curves_out)

    if args.summary_csv:
        rows = [
            "mode,r,T,run,root,clearance,competitive_ratio,lower_bound_rhat,rounds"
        ]
        for i, rep in enumerate(reports):
            rows.append(
                ",".join(
                    [
                        rep.mode,
                        fmt(rep.r),
                        fmt(rep.T),
                        str(i),
                        str(rep.root),
                        fmt(rep.clearance_at_T),
                        fmt(rep.competitive_ratio),
                        fmt(rep.lower_bound_Rhat),
                        str(len(rep.rounds)),
                    ]
                )
            )
        _emit("\n".join(rows) + "\n", args.summary_csv)
    return 0


def _roundtrip(obj):
    """Recursively round floats so JSON output is digit-stable."""
    if isinstance(obj, float):
        return jround(obj)
    if isinstance(obj, dict):
        return {k: _roundtrip(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_roundtrip(v) for v in obj]
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clearsearch",
        description="Budgeted competitive search: solvers and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("line", help="solve the line problem")
    p.add_argument("--rho", type=float, required=True, help="half-excess ratio (>= 4)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--T", type=float, help="time budget (maximize clearance)")
    g.add_argument("--L", type=float, help="clearance target (minimize duration)")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_line)

    p = sub.add_parser("star-compare", help="compare star strategies over a grid")
    p.add_argument("--m", type=int, default=4, help="ray count")
    p.add_argument("--R-mult", dest="R_mult", type=float, default=1.0,
                   help="competitive ratio as a multiple of the optimum")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--T-grid", dest="T_grid", help="budget grid (log:LO:HI:N | lin:... | v1,v2,...)")
    g.add_argument("--m-grid", dest="m_grid", help="ray-count grid")
    g.add_argument("--R-grid", dest="R_grid", help="ratio-multiplier grid")
    p.add_argument("--T", type=float, default=1e8, help="budget for m/R grids")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_star_compare)

    p = sub.add_parser("net-run", help="budgeted search run on a TNTP network")
    p.add_argument("--tntp", required=True, help="TNTP link file")
    p.add_argument("--root", required=True, help="vertex id or random:SEED")
    p.add_argument("--r", type=float, required=True, help="radius base (> 1)")
    p.add_argument("--T", type=float, required=True, help="time budget")
    p.add_argument("--mode", choices=("cpt", "rpt"), default="rpt")
    p.add_argument("--open-ended", dest="open_ended", action="store_true",
                   help="rural tours do not return to their start")
    p.add_argument("--matching", choices=("auto", "exact", "greedy"), default="auto")
    p.add_argument("--runs", type=int, default=1, help="number of seeded random-root runs")
    p.add_argument("--out", help="summary JSON path (default stdout)")
    p.add_argument("--curves-out", dest="curves_out", help="clearance curve CSV path")
    p.add_argument("--summary-csv", dest="summary_csv", help="per-run summary CSV path")
    p.set_defaults(func=_cmd_net_run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TntpParseError as exc:
        print(f"error: {args.tntp}: {exc}", file=sys.stderr)
        return 4
    except InfeasibleBudget as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ClearsearchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
