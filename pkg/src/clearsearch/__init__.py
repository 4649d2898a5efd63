"""Budgeted competitive search: exact line/star solvers and network heuristics."""

from . import network, oracle
from .errors import (
    ClearsearchError,
    DegenerateSystem,
    DisconnectedGraph,
    InfeasibleBudget,
    InvalidParameter,
    NoRealRoots,
    TntpParseError,
)
from .line import (
    LineSolution,
    ScaledAggressive,
    aggressive_prefix,
    scaled_aggressive,
    solve_line_earliest,
    solve_line_maxclear,
)
from .star import (
    CriticalK,
    DeltaSolution,
    StarSolution,
    delta_direction,
    delta_solution,
    find_critical_k,
    mixed_aggressive_star,
    scaled_aggressive_star,
    scaled_geometric,
    solve_star_earliest,
    solve_star_maxclear,
    solve_X0,
    solve_XB,
)
from .strategy import (
    ConstraintReport,
    CyclicStrategy,
    EarliestSolution,
    Evaluation,
    RootPair,
    SearchParams,
    aggressive_sequence,
    char_roots,
    check_constraints,
    eval_cyclic,
    geometric_cr,
    rho_star,
)

__version__ = "0.1.0"

__all__ = [
    "network",
    "oracle",
    "ClearsearchError",
    "DegenerateSystem",
    "DisconnectedGraph",
    "InfeasibleBudget",
    "InvalidParameter",
    "NoRealRoots",
    "TntpParseError",
    "LineSolution",
    "ScaledAggressive",
    "aggressive_prefix",
    "scaled_aggressive",
    "solve_line_earliest",
    "solve_line_maxclear",
    "CriticalK",
    "DeltaSolution",
    "StarSolution",
    "delta_direction",
    "delta_solution",
    "find_critical_k",
    "mixed_aggressive_star",
    "scaled_aggressive_star",
    "scaled_geometric",
    "solve_star_earliest",
    "solve_star_maxclear",
    "solve_X0",
    "solve_XB",
    "ConstraintReport",
    "CyclicStrategy",
    "EarliestSolution",
    "Evaluation",
    "RootPair",
    "SearchParams",
    "aggressive_sequence",
    "char_roots",
    "check_constraints",
    "eval_cyclic",
    "geometric_cr",
    "rho_star",
]
