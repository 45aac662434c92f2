"""
Optimal Solvers

This module computes exact optimal solutions. `brute_force_optimal`
enumerates every feasible solution and serves as the oracle;
`fast_optimal_sum` uses the structure of sum-variant optima (a window of
consecutive agents around the median) and must agree with it on cost.
"""

import itertools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

from .config import Settings, load_settings
from .coords import distance
from .errors import (
    BudgetExceededError,
    InfeasibleError,
    UnsupportedVariantError,
)
from .model import Instance, Solution, Variant, order_stats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OptResult:
    """An optimal solution and its social cost."""

    solution: Solution
    cost: Fraction


def enumerate_solutions(inst: Instance) -> Iterator[Solution]:
    """
    Yields every k-subset of agents once.

    Subsets are produced in lexicographic order over sorted positions, so
    leftmost windows come first.

    Example:
        - len(list(enumerate_solutions(make_instance([0, 1, 2], 2, "sum"))))
          # Returns: 3
    """
    if inst.k > inst.n:
        raise InfeasibleError("infeasible: k exceeds n")
    order = order_stats(inst).sorted_order
    for positions in itertools.combinations(range(inst.n), inst.k):
        yield Solution(tuple(order[p] for p in positions))


class _CostTable:
    """
    Memoised social cost of solutions of one instance.

    Sum-variant cost splits over facilities; max-variant cost only depends
    on the two extreme facilities, since on a line the farthest facility of
    any agent is one of them.
    """

    def __init__(self, inst: Instance) -> None:
        self.inst = inst
        self._totals: dict[Fraction, Fraction] = {}
        self._spans: dict[tuple[Fraction, Fraction], Fraction] = {}

    def _total_distance(self, x: Fraction) -> Fraction:
        if x not in self._totals:
            self._totals[x] = sum(
                (distance(y, x) for y in self.inst.locations), Fraction(0)
            )
        return self._totals[x]

    def _extremes(self, lo: Fraction, hi: Fraction) -> Fraction:
        key = (lo, hi)
        if key not in self._spans:
            self._spans[key] = sum(
                (
                    max(distance(y, lo), distance(y, hi))
                    for y in self.inst.locations
                ),
                Fraction(0),
            )
        return self._spans[key]

    def cost(self, sol: Solution) -> Fraction:
        coords = sol.coordinates(self.inst)
        if self.inst.variant is Variant.SUM:
            return sum(
                (self._total_distance(x) for x in coords), Fraction(0)
            )
        return self._extremes(coords[0], coords[-1])


def check_budget(inst: Instance, settings: Settings | None = None) -> None:
    """
    Refuses enumerations larger than the configured budget.

    Example:
        - check_budget(make_instance(range(30), 10, "max"))
          # Raises: BudgetExceededError
    """
    settings = settings or load_settings()
    count = math.comb(inst.n, inst.k)
    if count <= settings.budget:
        return

    hint = (
        "; use fast_optimal_sum for the sum variant"
        if inst.variant is Variant.SUM
        else ""
    )
    logger.warning(
        "refusing to enumerate %d solutions (budget %d)",
        count,
        settings.budget,
    )
    raise BudgetExceededError(
        f"C({inst.n},{inst.k}) = {count} exceeds the enumeration budget "
        f"{settings.budget}{hint}"
    )


def brute_force_optimal(
    inst: Instance, settings: Settings | None = None
) -> OptResult:
    """
    Minimises the social cost over all feasible solutions.

    Ties go to the first solution in enumeration order.

    Args:
        inst (Instance): The instance
        settings (Settings | None): Budget source, defaults to the
        environment

    Returns:
        OptResult: An optimal solution and its cost

    Example:
        - brute_force_optimal(make_instance([-0.5, 0, 1, 2], 2, "max")).cost
          # Returns: Fraction(5)
    """
    check_budget(inst, settings)
    table = _CostTable(inst)

    best: OptResult | None = None
    for sol in enumerate_solutions(inst):
        cost = table.cost(sol)
        if best is None or cost < best.cost:
            best = OptResult(sol, cost)

    return best


def fast_optimal_sum(inst: Instance) -> OptResult:
    """
    Optimal sum-variant solution from the median structure.

    For k = 2 and even n the two medians are optimal; for k = 2 and odd n,
    the median and its nearer neighbour (the left one on ties). For larger k
    the cheapest window of k consecutive agents containing a median is
    optimal; ties go to the leftmost window.

    Example:
        - fast_optimal_sum(make_instance([0, 1, 3], 2, "sum")).cost
          # Returns: Fraction(7)
        - fast_optimal_sum(make_instance([0, 1, 3], 2, "max"))
          # Raises: UnsupportedVariantError
    """
    if inst.variant is not Variant.SUM:
        raise UnsupportedVariantError(
            "no structural optimum is known for the max variant"
        )

    stats = order_stats(inst)
    table = _CostTable(inst)
    locations = inst.locations

    if inst.k == 2:
        if inst.n % 2 == 0:
            sol = Solution((stats.median_lo, stats.median_hi))
        else:
            m = locations[stats.median_lo]
            near_left = distance(locations[stats.left], m) <= distance(
                m, locations[stats.right]
            )
            neighbour = stats.left if near_left else stats.right
            sol = Solution((stats.median_lo, neighbour))
        return OptResult(sol, table.cost(sol))

    lo = stats.median_position
    hi = inst.n // 2
    order = stats.sorted_order
    first = max(0, lo - inst.k + 1)
    last = min(hi, inst.n - inst.k)

    best: OptResult | None = None
    for start in range(first, last + 1):
        sol = Solution(order[start : start + inst.k])
        cost = table.cost(sol)
        if best is None or cost < best.cost:
            best = OptResult(sol, cost)

    return best


__all__ = [
    "OptResult",
    "enumerate_solutions",
    "check_budget",
    "brute_force_optimal",
    "fast_optimal_sum",
]
