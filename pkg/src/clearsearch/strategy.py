"""Closed-form machinery shared by the line and star solvers.

A cyclic strategy on the ``m``-ray star visits ray ``i mod m`` at step ``i``,
walking out to length ``x_i`` and back to the origin.  For a target
competitive ratio ``R = 1 + 2*rho`` the admissible strategies are governed by
the characteristic polynomial ``p(t) = t**m - rho*t + rho``: its two positive
roots ``zeta1 <= zeta2`` bracket the bases of admissible geometric strategies,
and the step-greedy ("aggressive") sequence solves the linear recurrence
``z[i+m] = rho * (z[i+1] - z[i])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .errors import InvalidParameter, NoRealRoots

#: Relative feasibility tolerance.  Budgets reach 1e16, so every slack test is
#: scaled by the magnitude of the sums being compared.
REL_TOL = 1e-9

#: Target residual for root finding: |p(zeta)| <= ROOT_RESIDUAL * max(1, rho).
ROOT_RESIDUAL = 1e-12

_BISECT_MAX_ITER = 200


def _check_rays(m: int) -> int:
    if m != int(m) or int(m) < 2:
        raise InvalidParameter(f"ray count must be an integer >= 2, got {m!r}")
    return int(m)


def rho_star(m: int) -> float:
    """Smallest admissible half-excess ratio for ``m`` rays: m**m/(m-1)**(m-1)."""
    m = _check_rays(m)
    return float(m**m) / float((m - 1) ** (m - 1))


def geometric_cr(m: int, b: float) -> float:
    """Competitive ratio ``1 + 2*b**m/(b-1)`` of the geometric strategy with base ``b``."""
    m = _check_rays(m)
    if b <= 1.0:
        raise InvalidParameter(f"geometric base must exceed 1, got {b}")
    return 1.0 + 2.0 * b**m / (b - 1.0)


def char_poly(m: int, rho: float, t: float) -> float:
    """Evaluate ``t**m - rho*t + rho``."""
    return t**m - rho * t + rho


@dataclass(frozen=True)
class RootPair:
    """Positive roots ``zeta1 <= zeta2`` of the characteristic polynomial."""

    zeta1: float
    zeta2: float
    multiplicity_flag: bool  # True iff zeta1 == zeta2 (rho at its minimum)


def _bisect_root(m: int, rho: float, lo: float, hi: float, tol: float) -> float:
    flo = char_poly(m, rho, lo)
    mid = 0.5 * (lo + hi)
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        fmid = char_poly(m, rho, mid)
        if abs(fmid) <= tol or (hi - lo) <= math.ulp(mid):
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return mid


def char_roots(m: int, rho: float) -> RootPair:
    """Both positive roots of ``p(t) = t**m - rho*t + rho``.

    Bisection on the brackets ``[1, m/(m-1)]`` and ``[m/(m-1), rho**(1/(m-1))]``;
    ``p`` is positive at all three bracket ends except the pivot, where
    ``p(m/(m-1)) <= 0`` exactly when ``rho >= rho_star(m)``.
    """
    m = _check_rays(m)
    pivot = m / (m - 1)
    tol = ROOT_RESIDUAL * max(1.0, rho)
    p_pivot = char_poly(m, rho, pivot)
    if p_pivot > tol:
        raise NoRealRoots(
            f"rho={rho} is below rho_star({m})={rho_star(m)}: no real roots"
        )
    if p_pivot >= -ROOT_RESIDUAL:
        return RootPair(pivot, pivot, True)
    zeta1 = _bisect_root(m, rho, 1.0, pivot, tol)
    zeta2 = _bisect_root(m, rho, pivot, rho ** (1.0 / (m - 1)), tol)
    return RootPair(zeta1, zeta2, False)


def aggressive_terms(m: int, rho: float) -> Iterator[float]:
    """Yield ``z1, z2, ...`` of the step-greedy sequence for ``m`` rays.

    The sequence is the unique positive solution of
    ``z[i+m] = rho*(z[i+1]-z[i])`` pinned by the two initial conditions
    ``z1+...+z[m-1] = rho`` and ``z1+...+z[m] = rho*z1``.  At the minimum
    admissible ``rho`` the double root gives
    ``z_i = (m+i-1)/(m-1) * (m/(m-1))**i``; otherwise
    ``z_i = A*zeta2**i + B*zeta1**i`` with ``A, B`` solved from the two
    initial conditions.
    """
    m = _check_rays(m)
    roots = char_roots(m, rho)
    if roots.multiplicity_flag:
        base = roots.zeta1

        def term(i: int) -> float:
            return (m + i - 1) / (m - 1) * base**i

    else:
        z1, z2 = roots.zeta1, roots.zeta2
        g1 = sum(z1**i for i in range(1, m))
        g2 = sum(z2**i for i in range(1, m))
        h1 = g1 + z1**m
        h2 = g2 + z2**m
        # 2x2 system: A*g2 + B*g1 = rho ; A*(h2-rho*z2) + B*(h1-rho*z1) = 0
        a21 = h2 - rho * z2
        a22 = h1 - rho * z1
        det = g2 * a22 - g1 * a21
        coef_a = rho * a22 / det
        coef_b = -rho * a21 / det

        def term(i: int) -> float:
            return coef_a * z2**i + coef_b * z1**i

    i = 1
    while True:
        yield term(i)
        i += 1


def aggressive_sequence(m: int, rho: float, n: int) -> list[float]:
    """First ``n`` terms of the step-greedy sequence."""
    if n < 1:
        raise InvalidParameter(f"sequence length must be >= 1, got {n}")
    it = aggressive_terms(m, rho)
    return [next(it) for _ in range(n)]


@dataclass(frozen=True)
class SearchParams:
    """Validated parameter bundle for a search instance."""

    m: int
    rho: float
    T: float | None = None
    L: float | None = None

    def __post_init__(self) -> None:
        _check_rays(self.m)
        floor = rho_star(self.m)
        if self.rho < floor * (1.0 - 1e-12):
            raise InvalidParameter(
                f"rho={self.rho} below the minimum {floor} for m={self.m}"
            )
        if self.T is not None and self.T < 1.0:
            raise InvalidParameter(f"time budget must be >= 1, got {self.T}")
        if self.L is not None and self.L < 1.0:
            raise InvalidParameter(f"clearance target must be >= 1, got {self.L}")

    @property
    def R(self) -> float:
        return 1.0 + 2.0 * self.rho


@dataclass(frozen=True)
class CyclicStrategy:
    """A finite cyclic strategy: step ``i`` searches ray ``i mod m`` to ``lengths[i]``."""

    m: int
    rho: float
    lengths: tuple[float, ...]

    def __post_init__(self) -> None:
        _check_rays(self.m)
        object.__setattr__(self, "lengths", tuple(float(v) for v in self.lengths))
        for i, v in enumerate(self.lengths):
            if v <= 0.0:
                raise InvalidParameter(f"step {i + 1} has non-positive length {v}")
        for i in range(len(self.lengths) - self.m):
            if self.lengths[i + self.m] <= self.lengths[i]:
                raise InvalidParameter(
                    f"step {i + 1 + self.m} does not progress past step {i + 1} "
                    f"on the same ray"
                )

    def __len__(self) -> int:
        return len(self.lengths)

    def prefix_sums(self) -> tuple[float, ...]:
        """Partial sums ``S_0=0, S_1, ..., S_k``."""
        sums = [0.0]
        for v in self.lengths:
            sums.append(sums[-1] + v)
        return tuple(sums)


class Evaluation(NamedTuple):
    duration: float
    clearance: float


def eval_cyclic(s: CyclicStrategy) -> Evaluation:
    """Round-trip duration ``2*(x1+..+x[k-1]) + xk`` and clearance.

    Clearance is the summed farthest excursion on each visited ray, i.e. the
    sum of the last ``min(m, k)`` lengths of a monotone strategy; unexplored
    rays contribute nothing.
    """
    x = s.lengths
    k = len(x)
    if k == 0:
        return Evaluation(0.0, 0.0)
    duration = 2.0 * sum(x[:-1]) + x[-1]
    clearance = sum(x[k - min(s.m, k):])
    return Evaluation(duration, clearance)


@dataclass(frozen=True)
class ConstraintReport:
    """Signed slacks of the competitiveness / extendability / budget system."""

    slack_C0: float
    slack_C: tuple[float, ...]
    slack_E: tuple[float, ...]
    slack_M: tuple[float, ...]
    slack_B: float
    feasible: bool


def _within(slack: float, scale: float) -> bool:
    return slack >= -REL_TOL * max(1.0, scale)


def check_constraints(s: CyclicStrategy, T: float) -> ConstraintReport:
    """Slacks of the strategy against ratio ``1+2*rho`` and budget ``T``.

    ``C0``: ``rho - (x1+..+x[min(m-1,k)])``; ``C_j``: ``rho*x_j - S[j+m-1]``
    for ``j in [1, k-m]``; ``E_j``: ``rho*x_j - S_k`` for
    ``j in [max(1, k-m+1), k-1]``; ``M_i``: ``x[i+1] - x[i]``;
    ``B``: ``T - duration``.  Feasibility uses a relative tolerance scaled to
    the compared sums.
    """
    x = s.lengths
    k = len(x)
    m = s.m
    rho = s.rho
    S = s.prefix_sums()

    head = S[min(m - 1, k)]
    slack_c0 = rho - head
    ok = _within(slack_c0, max(rho, head))

    slack_c = []
    for j in range(1, k - m + 1):
        lhs = S[j + m - 1]
        rhs = rho * x[j - 1]
        slack_c.append(rhs - lhs)
        ok = ok and _within(slack_c[-1], max(lhs, rhs))

    slack_e = []
    for j in range(max(1, k - m + 1), k):
        rhs = rho * x[j - 1]
        slack_e.append(rhs - S[k])
        ok = ok and _within(slack_e[-1], max(S[k], rhs))

    slack_m = []
    for i in range(1, k):
        slack_m.append(x[i] - x[i - 1])
        ok = ok and _within(slack_m[-1], max(x[i], x[i - 1]))

    duration = 2.0 * S[k - 1] + x[k - 1] if k else 0.0
    slack_b = T - duration
    ok = ok and _within(slack_b, max(T, duration))

    return ConstraintReport(
        slack_C0=slack_c0,
        slack_C=tuple(slack_c),
        slack_E=tuple(slack_e),
        slack_M=tuple(slack_m),
        slack_B=slack_b,
        feasible=ok,
    )


def duration_of(lengths) -> float:
    """Round-trip duration of a step list without building a strategy."""
    seq = list(lengths)
    if not seq:
        return 0.0
    return 2.0 * sum(seq[:-1]) + seq[-1]


def aggressive_prefix_lengths(m: int, rho: float, T: float) -> list[float]:
    """Longest prefix of the step-greedy sequence whose duration stays within ``T``."""
    out: list[float] = []
    running = 0.0  # sum of accepted steps
    for z in aggressive_terms(m, rho):
        if 2.0 * running + z <= T * (1.0 + REL_TOL):
            out.append(z)
            running += z
        else:
            break
    return out


def aggressive_scaled_lengths(m: int, rho: float, T: float) -> tuple[list[float], float]:
    """Shortest step-greedy prefix reaching duration >= ``T``, scaled to deplete it.

    Returns ``(lengths, gamma)`` with ``gamma = T / duration(prefix) <= 1`` and
    the scaled duration exactly ``T``.
    """
    taken: list[float] = []
    running = 0.0
    for z in aggressive_terms(m, rho):
        taken.append(z)
        dur = 2.0 * running + z
        if dur >= T * (1.0 - REL_TOL):
            gamma = T / dur
            return [gamma * v for v in taken], gamma
        running += z
    raise AssertionError("unreachable: aggressive durations grow without bound")


@dataclass(frozen=True)
class EarliestSolution:
    """Minimum-duration strategy reaching a prescribed clearance."""

    strategy: CyclicStrategy
    duration: float
