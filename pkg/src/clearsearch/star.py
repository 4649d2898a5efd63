"""Optimal budgeted search on the m-ray star via the tight-constraint line.

Every optimal strategy with ``k >= m`` steps lies on the one-dimensional
solution set of the homogeneous tight system (all competitiveness and
extendability constraints at equality).  The solver computes a positive
direction vector of that line in O(k), scales it so either the head
constraint (``C0``) or the budget (``B``) is tight, and picks the critical
step counts by binary search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import mpmath

from .errors import DegenerateSystem, InfeasibleBudget, InvalidParameter
from .strategy import (
    REL_TOL,
    CyclicStrategy,
    EarliestSolution,
    aggressive_prefix_lengths,
    aggressive_scaled_lengths,
    char_roots,
    duration_of,
    eval_cyclic,
    rho_star,
)

_MAX_STEPS = 20_000_000  # safety cap for step-count searches


def _check_params(m: int, rho: float) -> int:
    if m != int(m) or int(m) < 2:
        raise InvalidParameter(f"ray count must be an integer >= 2, got {m!r}")
    m = int(m)
    floor = rho_star(m)
    if rho < floor * (1.0 - 1e-12):
        raise InvalidParameter(f"rho={rho} below the minimum {floor} for m={m}")
    return m


@dataclass(frozen=True)
class DeltaSolution:
    """A direction of the tight-constraint line and its two canonical scales."""

    k: int
    direction: tuple[float, ...]  # max-normalized, entrywise positive
    x0_scale: float               # scale making the head constraint tight
    xB_scale: float | None        # scale making the budget tight (given T)


def _backward_direction(m: int, rho, k: int, one):
    """Shared backward solve; ``one`` selects the scalar type (1.0 or mpf(1)).

    Represents ``x_i = lin[i] + lin_c[i] * c`` with ``c`` the free last entry,
    runs the backward recurrence ``x[i] = x[i+1] - x[i+m]/rho`` from the seed
    block of ones, then pins ``c`` with the total-sum equation.
    """
    zero = one * 0
    lin = [zero] * k
    lin_c = [zero] * k
    lin_c[k - 1] = one
    for i in range(k - m, k - 1):
        lin[i] = one
    for i in range(k - m - 1, -1, -1):
        lin[i] = lin[i + 1] - lin[i + m] / rho
        lin_c[i] = lin_c[i + 1] - lin_c[i + m] / rho
    const_sum = sum(lin[:-1], zero)
    coef_sum = sum(lin_c[:-1], zero) + one
    c = (rho - const_sum) / coef_sum
    return [a + b * c for a, b in zip(lin, lin_c)]


#: Below this min/max entry ratio the double-precision backward solve has lost
#: too many digits to cancellation and the computation is redone in mpmath.
_FLOAT_RANGE_LIMIT = 1e-5


def delta_direction(m: int, rho: float, k: int) -> list[float]:
    """Positive solution of the k-1 homogeneous tight equations, in O(k).

    The last ``m-1`` entries are equal and the total sum is ``rho`` times any
    of them; the remaining entries follow from the backward recurrence
    ``x[i] = x[i+1] - x[i+m]/rho`` with the final entry left as a free
    parameter, fixed by the total-sum equation.  The result is normalized so
    its largest entry is 1.

    Entries decay geometrically toward the front, so for budgets near 1e16
    their dynamic range exhausts double precision; those solves are repeated
    in arbitrary precision sized to the expected range.
    """
    m = _check_params(m, rho)
    if k < m:
        raise InvalidParameter(f"need k >= m, got k={k}, m={m}")
    direction = _backward_direction(m, rho, k, 1.0)
    top = max(direction)
    bottom = min(direction)
    if top <= 0.0 or bottom <= 0.0 or bottom / top < _FLOAT_RANGE_LIMIT:
        # The entries can decay as fast as zeta2**-i toward the front; size
        # the working precision to that worst case.
        zeta2 = char_roots(m, rho).zeta2
        span_digits = max(0.0, (k - 1) * math.log10(zeta2))
        with mpmath.workdps(40 + int(span_digits)):
            refined = _backward_direction(m, mpmath.mpf(rho), k, mpmath.mpf(1))
            top = max(refined)
            if top <= 0 or min(refined) <= 0:
                raise DegenerateSystem(
                    f"tight system for m={m}, rho={rho}, k={k} has no positive "
                    f"direction"
                )
            return [float(v / top) for v in refined]
    return [v / top for v in direction]


def delta_solution(m: int, rho: float, k: int, T: float | None = None) -> DeltaSolution:
    """Direction plus the scales that make the head or budget constraint tight."""
    direction = delta_direction(m, rho, k)
    head = sum(direction[: m - 1])
    x0_scale = rho / head
    xb_scale = None if T is None else T / duration_of(direction)
    return DeltaSolution(k, tuple(direction), x0_scale, xb_scale)


def solve_X0(m: int, rho: float, k: int) -> CyclicStrategy:
    """Point of the tight line where the head constraint is tight.

    Feasibility against the budget is not implied; callers must check it.
    """
    sol = delta_solution(m, rho, k)
    return CyclicStrategy(m, rho, tuple(sol.x0_scale * v for v in sol.direction))


def solve_XB(m: int, rho: float, T: float, k: int) -> CyclicStrategy:
    """Point of the tight line with duration exactly ``T``.

    Feasibility against the head constraint is not implied; callers must
    check it.
    """
    sol = delta_solution(m, rho, k, T)
    assert sol.xB_scale is not None
    return CyclicStrategy(m, rho, tuple(sol.xB_scale * v for v in sol.direction))


def _geometric_step_bound(m: int, T: float) -> int:
    """Steps taken by the budget-scaled geometric strategy with base m/(m-1)."""
    b = m / (m - 1)
    running = 0.0
    x = 1.0
    for j in range(1, _MAX_STEPS):
        x *= b
        if 2.0 * running + x >= T:
            return j
        running += x
    raise AssertionError("unreachable: geometric durations grow without bound")


def _xb_head_feasible(m: int, rho: float, k: int, T: float) -> bool:
    sol = delta_solution(m, rho, k, T)
    assert sol.xB_scale is not None
    head = sol.xB_scale * sum(sol.direction[: m - 1])
    return head <= rho * (1.0 + REL_TOL)


class CriticalK(NamedTuple):
    k0: int | None  # greatest k with the head-tight point inside the budget
    kB: int         # least k with the budget-tight point head-feasible


def find_critical_k(m: int, rho: float, T: float) -> CriticalK:
    """Critical step counts for the two scaled families.

    Head-feasibility of the budget-tight point is monotone nondecreasing in
    ``k``, so ``kB`` comes from binary search below the geometric step bound;
    ``k0`` is then ``kB`` or ``kB - 1`` (``None`` when even ``k = m`` exceeds
    the budget).
    """
    m = _check_params(m, rho)
    if T < 1.0:
        raise InvalidParameter(f"time budget must be >= 1, got {T}")
    hi = max(m, _geometric_step_bound(m, T))
    while not _xb_head_feasible(m, rho, hi, T):
        # The geometric bound should always suffice; widen defensively.
        hi *= 2
        if hi > _MAX_STEPS:
            raise DegenerateSystem("no head-feasible budget-tight point found")
    lo = m
    if _xb_head_feasible(m, rho, lo, T):
        kB = m
    else:
        # invariant: predicate False at lo, True at hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _xb_head_feasible(m, rho, mid, T):
                hi = mid
            else:
                lo = mid
        kB = hi
    dur0 = duration_of(solve_X0(m, rho, kB).lengths)
    if dur0 <= T * (1.0 + REL_TOL):
        k0: int | None = kB
    elif kB - 1 >= m:
        k0 = kB - 1
    else:
        k0 = None
    return CriticalK(k0, kB)


@dataclass(frozen=True)
class StarSolution:
    strategy: CyclicStrategy
    clearance: float
    which: Literal["X0", "XB"]


def _better(a: float, b: float) -> bool:
    """Strictly better clearance, beyond the relative tolerance."""
    return a > b + REL_TOL * max(1.0, abs(b))


def solve_star_maxclear(m: int, rho: float, T: float) -> StarSolution:
    """Maximum clearance within budget ``T`` on the ``m``-ray star.

    Compares the head-tight point at ``k0``, the budget-tight point at ``kB``
    and, for budgets too small to support ``m`` steps, the single-step
    strategy of length ``min(T, rho)``.  Ties prefer the head-tight point
    (unscaled, exactly reproducible).
    """
    m = _check_params(m, rho)
    if T < 1.0:
        raise InfeasibleBudget(f"budget {T} cannot clear a target at distance >= 1")
    crit = find_critical_k(m, rho, T)
    candidates: list[StarSolution] = []
    if crit.k0 is not None:
        x0 = solve_X0(m, rho, crit.k0)
        candidates.append(StarSolution(x0, eval_cyclic(x0).clearance, "X0"))
    xb = solve_XB(m, rho, T, crit.kB)
    candidates.append(StarSolution(xb, eval_cyclic(xb).clearance, "XB"))
    # k < m regime: one fresh ray per step, a single step of min(T, rho)
    # dominates (clearance <= min(budget, rho) for any such strategy).
    v = min(T, rho)
    single = CyclicStrategy(m, rho, (v,))
    which: Literal["X0", "XB"] = "X0" if v >= rho * (1.0 - REL_TOL) else "XB"
    candidates.append(StarSolution(single, eval_cyclic(single).clearance, which))

    best = candidates[0]
    for cand in candidates[1:]:
        if _better(cand.clearance, best.clearance):
            best = cand
    return best


def scaled_geometric(m: int, rho: float, T: float) -> CyclicStrategy:
    """Geometric strategy with base ``zeta2``, truncated at the first step
    where the duration reaches ``T`` and scaled so it equals ``T`` exactly."""
    m = _check_params(m, rho)
    if T < 1.0:
        raise InvalidParameter(f"time budget must be >= 1, got {T}")
    b = char_roots(m, rho).zeta2
    lengths: list[float] = []
    running = 0.0
    x = 1.0
    for _ in range(_MAX_STEPS):
        x *= b
        lengths.append(x)
        dur = 2.0 * running + x
        if dur >= T * (1.0 - REL_TOL):
            gamma = T / dur
            return CyclicStrategy(m, rho, tuple(gamma * v for v in lengths))
        running += x
    raise AssertionError("unreachable: geometric durations grow without bound")


def scaled_aggressive_star(m: int, rho: float, T: float) -> CyclicStrategy:
    """Budget-depleting scaled variant of the step-greedy sequence."""
    m = _check_params(m, rho)
    lengths, _ = aggressive_scaled_lengths(m, rho, T)
    return CyclicStrategy(m, rho, tuple(lengths))


def mixed_aggressive_star(m: int, rho: float, T: float) -> CyclicStrategy:
    """Better of the budget-feasible step-greedy prefix and its scaled variant."""
    m = _check_params(m, rho)
    if T < 1.0:
        raise InvalidParameter(f"time budget must be >= 1, got {T}")
    prefix = CyclicStrategy(m, rho, tuple(aggressive_prefix_lengths(m, rho, T)))
    scaled = scaled_aggressive_star(m, rho, T)
    if _better(eval_cyclic(scaled).clearance, eval_cyclic(prefix).clearance):
        return scaled
    return prefix


def solve_star_earliest(m: int, rho: float, L: float) -> EarliestSolution:
    """Minimum duration to reach clearance ``L`` on the ``m``-ray star.

    For ``L <= rho`` a single step of length ``L`` attains the trivial lower
    bound.  Otherwise the answer is the direction of the tight line at the
    smallest step count whose head-tight clearance reaches ``L``, rescaled so
    the clearance constraint is exactly tight.
    """
    m = _check_params(m, rho)
    if L < 1.0:
        raise InvalidParameter(f"clearance target must be >= 1, got {L}")
    if L <= rho * (1.0 + REL_TOL):
        v = min(L, rho)
        return EarliestSolution(CyclicStrategy(m, rho, (v,)), v)

    def head_tight_clearance(k: int) -> float:
        return eval_cyclic(solve_X0(m, rho, k)).clearance

    hi = m
    while head_tight_clearance(hi) < L * (1.0 - REL_TOL):
        hi *= 2
        if hi > _MAX_STEPS:
            raise DegenerateSystem("clearance target out of reach")
    lo = m
    if head_tight_clearance(lo) >= L * (1.0 - REL_TOL):
        k = m
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if head_tight_clearance(mid) >= L * (1.0 - REL_TOL):
                hi = mid
            else:
                lo = mid
        k = hi
    direction = delta_direction(m, rho, k)
    scale = L / eval_cyclic(CyclicStrategy(m, rho, tuple(direction))).clearance
    lengths = tuple(scale * v for v in direction)
    return EarliestSolution(CyclicStrategy(m, rho, lengths), duration_of(lengths))
