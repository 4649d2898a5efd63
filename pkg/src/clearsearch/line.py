"""Pareto-optimal budgeted search on the unbounded line (two rays).

The optimum is the better of two strategies derived from the step-greedy
sequence ``Z``: its longest budget-feasible prefix, and the shortest prefix
scaled down so the budget is depleted exactly at a turn point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import InfeasibleBudget, InvalidParameter
from .strategy import (
    REL_TOL,
    CyclicStrategy,
    EarliestSolution,
    aggressive_prefix_lengths,
    aggressive_scaled_lengths,
    aggressive_terms,
    eval_cyclic,
    rho_star,
)


def _check_rho(rho: float) -> None:
    if rho < rho_star(2) * (1.0 - 1e-12):
        raise InvalidParameter(f"the line requires rho >= 4, got {rho}")


@dataclass(frozen=True)
class ScaledAggressive:
    strategy: CyclicStrategy
    gamma: float


@dataclass(frozen=True)
class LineSolution:
    strategy: CyclicStrategy
    clearance: float
    which: Literal["prefix", "scaled"]


def aggressive_prefix(rho: float, T: float) -> CyclicStrategy:
    """Longest prefix of the step-greedy sequence with duration <= ``T``.

    Empty when even the first step exceeds the budget.
    """
    _check_rho(rho)
    return CyclicStrategy(2, rho, tuple(aggressive_prefix_lengths(2, rho, T)))


def scaled_aggressive(rho: float, T: float) -> ScaledAggressive:
    """Shortest step-greedy prefix scaled so its duration is exactly ``T``."""
    _check_rho(rho)
    lengths, gamma = aggressive_scaled_lengths(2, rho, T)
    return ScaledAggressive(CyclicStrategy(2, rho, tuple(lengths)), gamma)


def solve_line_maxclear(rho: float, T: float) -> LineSolution:
    """Maximum clearance within budget ``T`` at competitive ratio ``1+2*rho``.

    Returns the better of the prefix and scaled variants; ties go to the
    prefix (fewer scaled coefficients).
    """
    _check_rho(rho)
    if T < 1.0:
        raise InfeasibleBudget(
            f"budget {T} cannot clear a target at distance >= 1"
        )
    prefix = aggressive_prefix(rho, T)
    scaled = scaled_aggressive(rho, T).strategy
    clr_prefix = eval_cyclic(prefix).clearance
    clr_scaled = eval_cyclic(scaled).clearance
    if clr_scaled > clr_prefix + REL_TOL * max(1.0, clr_scaled):
        return LineSolution(scaled, clr_scaled, "scaled")
    return LineSolution(prefix, clr_prefix, "prefix")


def solve_line_earliest(rho: float, L: float) -> EarliestSolution:
    """Minimum duration to reach clearance ``L`` at ratio ``1+2*rho``.

    Takes the shortest step-greedy prefix whose clearance reaches ``L`` and
    scales it down so the clearance constraint is exactly tight.
    """
    _check_rho(rho)
    if L < 1.0:
        raise InvalidParameter(f"clearance target must be >= 1, got {L}")
    taken: list[float] = []
    for z in aggressive_terms(2, rho):
        taken.append(z)
        clearance = sum(taken[-2:])
        if clearance >= L * (1.0 - REL_TOL):
            gamma = L / clearance
            lengths = tuple(gamma * v for v in taken)
            duration = 2.0 * sum(lengths[:-1]) + lengths[-1]
            return EarliestSolution(CyclicStrategy(2, rho, lengths), duration)
    raise AssertionError("unreachable: prefix clearances grow without bound")
