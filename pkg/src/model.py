"""
Game Model

This module provides the data model of the agent-constrained facility
location game on a line and the cost algebra built on it.

Agents report positions on the line; `k` facilities are placed at the
positions of `k` distinct agents. In the sum-variant an agent pays its total
distance to the facilities, in the max-variant the distance to the farthest
one. Agent indices are 0-based positions in the reported list.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .coords import distance, parse_coord
from .errors import (
    InfeasibleError,
    InputError,
    LotteryError,
    PreconditionError,
    UnsupportedVariantError,
)

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    """Individual cost variant."""

    SUM = "sum"
    MAX = "max"


class Side(str, Enum):
    """Neighbour of the median agent paired with it."""

    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Instance:
    """
    Reported locations, facility count and cost variant.

    Attributes:
        locations (tuple[Fraction, ...]): Reports in their original order
        k (int): Number of facilities, 2 <= k <= n
        variant (Variant): Individual cost variant
    """

    locations: tuple[Fraction, ...]
    k: int
    variant: Variant

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "locations", tuple(Fraction(x) for x in self.locations)
        )
        object.__setattr__(self, "variant", Variant(self.variant))
        if len(self.locations) < 2:
            raise InputError("an instance needs at least 2 agents")
        if self.k < 2:
            raise InputError("an instance needs at least 2 facilities")
        if self.k > len(self.locations):
            raise InfeasibleError("infeasible: k exceeds n")

    @property
    def n(self) -> int:
        return len(self.locations)

    def check_agent(self, agent: int) -> None:
        if not 0 <= agent < self.n:
            raise InputError(
                f"agent index {agent} out of range for n={self.n}"
            )


@dataclass(frozen=True)
class Solution:
    """
    The agents hosting the facilities, as a sorted tuple of indices.

    Two facilities may share a coordinate when their host agents coincide;
    feasibility only asks for distinct indices.
    """

    host_agents: tuple[int, ...]

    def __post_init__(self) -> None:
        hosts = tuple(sorted(self.host_agents))
        if len(set(hosts)) != len(hosts):
            raise InputError(f"host agents must be distinct: {hosts}")
        object.__setattr__(self, "host_agents", hosts)

    def coordinates(self, inst: Instance) -> tuple[Fraction, ...]:
        """Facility coordinates in increasing order."""
        return tuple(sorted(inst.locations[i] for i in self.host_agents))

    def check_feasible(self, inst: Instance) -> None:
        if len(self.host_agents) != inst.k:
            raise InputError(
                f"solution hosts {len(self.host_agents)} facilities, "
                f"instance needs {inst.k}"
            )
        for agent in self.host_agents:
            inst.check_agent(agent)


@dataclass(frozen=True)
class Lottery:
    """
    A probability distribution over solutions.

    Probabilities are exact, nonnegative and sum to exactly 1; support
    solutions are pairwise distinct.
    """

    support: tuple[tuple[Solution, Fraction], ...]

    def __post_init__(self) -> None:
        support = tuple((sol, Fraction(p)) for sol, p in self.support)
        if not support:
            raise LotteryError("a lottery needs a nonempty support")
        if any(p < 0 for _, p in support):
            raise LotteryError("probabilities must be nonnegative")
        total = sum((p for _, p in support), Fraction(0))
        if total != 1:
            raise LotteryError(f"probabilities sum to {total}, not 1")
        if len({sol for sol, _ in support}) != len(support):
            raise LotteryError("support solutions must be distinct")
        object.__setattr__(self, "support", support)

    @classmethod
    def point(cls, solution: Solution) -> "Lottery":
        """Degenerate lottery of a deterministic outcome."""
        return cls(((solution, Fraction(1)),))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Solution, Fraction]]
    ) -> "Lottery":
        """Builds a lottery, dropping zero-probability solutions."""
        return cls(tuple((sol, p) for sol, p in pairs if p != 0))

    @property
    def is_deterministic(self) -> bool:
        return len(self.support) == 1


@dataclass(frozen=True)
class OrderStats:
    """
    Stable sorted order of the agents and the median neighbourhood.

    `sorted_order` lists agent indices by (coordinate, index). The positions
    are 0-based positions in that order; `left` and `right` are the agents
    directly beside `median_lo`, when they exist.
    """

    sorted_order: tuple[int, ...]
    median_lo: int
    median_hi: int
    left: int | None
    right: int | None

    @property
    def median_position(self) -> int:
        return (len(self.sorted_order) - 1) // 2


def make_instance(
    locations: Iterable[str | int | Fraction],
    k: int,
    variant: Variant | str,
) -> Instance:
    """
    Builds an instance, parsing textual locations exactly.

    Args:
        locations (Iterable): Decimal/rational strings or numbers
        k (int): Number of facilities
        variant (Variant | str): "sum" or "max"

    Returns:
        Instance: The validated instance

    Example:
        - make_instance(["-0.5", "0", "1", "2"], 2, "max").locations[0]
          # Returns: Fraction(-1, 2)
        - make_instance(["0", "1"], 3, "sum")  # Raises: InfeasibleError
    """
    try:
        variant = Variant(variant)
    except ValueError:
        raise InputError(f"unknown variant: {variant!r}") from None
    return Instance(tuple(parse_coord(x) for x in locations), k, variant)


def point_cost(
    variant: Variant, point: Fraction, facilities: Sequence[Fraction]
) -> Fraction:
    """Cost of a point facing the given facility coordinates."""
    distances = [distance(point, x) for x in facilities]
    if variant is Variant.SUM:
        return sum(distances, Fraction(0))
    return max(distances)


def agent_cost(inst: Instance, sol: Solution, agent: int) -> Fraction:
    """
    Individual cost of an agent at its reported location.

    Args:
        inst (Instance): The instance
        sol (Solution): A feasible solution
        agent (int): 0-based agent index

    Returns:
        Fraction: Total (sum) or farthest (max) facility distance

    Example:
        - agent_cost(make_instance([0, 1, 2], 2, "sum"), Solution((0, 1)), 2)
          # Returns: Fraction(3)
    """
    inst.check_agent(agent)
    sol.check_feasible(inst)
    return point_cost(
        inst.variant, inst.locations[agent], sol.coordinates(inst)
    )


def social_cost(inst: Instance, sol: Solution) -> Fraction:
    """
    Sum of the individual costs of all agents.

    Example:
        - social_cost(make_instance([-0.5, 0, 1, 2], 2, "max"),
                      Solution((1, 2)))  # Returns: Fraction(11, 2)
    """
    sol.check_feasible(inst)
    facilities = sol.coordinates(inst)
    return sum(
        (point_cost(inst.variant, x, facilities) for x in inst.locations),
        Fraction(0),
    )


def expected_social_cost(inst: Instance, lot: Lottery) -> Fraction:
    """Probability-weighted social cost of a lottery."""
    return sum(
        (p * social_cost(inst, sol) for sol, p in lot.support), Fraction(0)
    )


def expected_agent_cost(
    inst: Instance,
    lot: Lottery,
    agent: int,
    true_location: Fraction | None = None,
) -> Fraction:
    """
    Expected cost of an agent, measured from its true location.

    Args:
        inst (Instance): The (possibly misreported) instance the lottery
        was computed on
        lot (Lottery): The lottery
        agent (int): 0-based agent index
        true_location (Fraction | None): Genuine position, defaults to the
        reported one

    Returns:
        Fraction: Expected individual cost

    Example:
        - (0, 1, 3) with {(0, 1): 2/3, (1, 3): 1/3}, agent 2
          # Returns: Fraction(4)
    """
    inst.check_agent(agent)
    if true_location is None:
        true_location = inst.locations[agent]
    return sum(
        (
            p * point_cost(inst.variant, true_location, sol.coordinates(inst))
            for sol, p in lot.support
        ),
        Fraction(0),
    )


def order_stats(inst: Instance) -> OrderStats:
    """
    Stable sorted order with the median agents and their neighbours.

    Ties between coinciding agents are broken by input index. The leftmost
    median sits at 0-based position (n - 1) // 2, the rightmost at n // 2.

    Example:
        - order_stats(make_instance([0, 0, 1], 2, "sum")).median_lo
          # Returns: 1
    """
    order = tuple(
        sorted(range(inst.n), key=lambda i: (inst.locations[i], i))
    )
    lo = (inst.n - 1) // 2
    hi = inst.n // 2
    return OrderStats(
        sorted_order=order,
        median_lo=order[lo],
        median_hi=order[hi],
        left=order[lo - 1] if lo > 0 else None,
        right=order[lo + 1] if lo + 1 < inst.n else None,
    )


def median_distances(inst: Instance, stats: OrderStats) -> Fraction:
    """Total distance of all agents from the leftmost median agent."""
    m = inst.locations[stats.median_lo]
    return sum((distance(x, m) for x in inst.locations), Fraction(0))


def lemma_pair_cost(inst: Instance, side: Side | str) -> Fraction:
    """
    Closed-form sum-variant cost of (l, m) or (m, r) for odd n.

    SC(x, m) = 2 * sum_i d(i, m) + d(m, x), where x is the neighbour of the
    median on the requested side.

    Example:
        - lemma_pair_cost(make_instance([0, 1, 3], 2, "sum"), "right")
          # Returns: Fraction(8)
    """
    side = Side(side)
    if inst.n % 2 == 0 or inst.k != 2:
        raise PreconditionError("requires odd n and k = 2")
    if inst.variant is not Variant.SUM:
        raise UnsupportedVariantError("the pair formula is sum-variant only")

    stats = order_stats(inst)
    neighbour = stats.left if side is Side.LEFT else stats.right
    m = inst.locations[stats.median_lo]
    return 2 * median_distances(inst, stats) + distance(
        m, inst.locations[neighbour]
    )


def max_pair_cost(inst: Instance, side: Side | str) -> Fraction:
    """
    Closed-form max-variant cost of (l, m) or (m, r).

    (m, r) costs sum_i d(i, m) + |{i <= m}| * d(m, r); (l, m) costs
    sum_i d(i, m) + |{i >= m}| * d(l, m), with counts taken over sorted
    positions.

    Example:
        - max_pair_cost(make_instance([0, 0, 1], 2, "max"), "right")
          # Returns: Fraction(3)
    """
    side = Side(side)
    if inst.k != 2:
        raise PreconditionError("requires k = 2")
    if inst.variant is not Variant.MAX:
        raise UnsupportedVariantError("the pair formula is max-variant only")

    stats = order_stats(inst)
    neighbour = stats.left if side is Side.LEFT else stats.right
    if neighbour is None:
        raise PreconditionError(f"the median has no {side.value} neighbour")

    m = inst.locations[stats.median_lo]
    position = stats.median_position
    count = position + 1 if side is Side.RIGHT else inst.n - position
    return median_distances(inst, stats) + count * distance(
        m, inst.locations[neighbour]
    )


def uniform_max_cost(inst: Instance) -> Fraction:
    """
    Expected max-variant cost of the half-half lottery over (l, m), (m, r).

    Equals sum_i d(i, m) + ((n + 1) / 4) * d(l, r) for odd n.
    """
    if inst.n % 2 == 0 or inst.k != 2:
        raise PreconditionError("requires odd n and k = 2")
    if inst.variant is not Variant.MAX:
        raise UnsupportedVariantError("the formula is max-variant only")

    stats = order_stats(inst)
    spread = distance(
        inst.locations[stats.left], inst.locations[stats.right]
    )
    return median_distances(inst, stats) + Fraction(inst.n + 1, 4) * spread


def three_agent_costs(
    x: Fraction, y: Fraction, z: Fraction
) -> tuple[Fraction, Fraction, Fraction]:
    """
    Sum-variant costs of the three solutions on agents x <= y <= z.

    Returns:
        tuple: SC(x, y), SC(y, z) and SC(x, z)

    Example:
        - three_agent_costs(0, 1, 2)  # Returns: (5, 5, 6)
    """
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    if not x <= y <= z:
        raise InputError("expected x <= y <= z")
    a, b = distance(x, y), distance(y, z)
    return 3 * a + 2 * b, 2 * a + 3 * b, 3 * a + 3 * b


__all__ = [
    "Variant",
    "Side",
    "Instance",
    "Solution",
    "Lottery",
    "OrderStats",
    "make_instance",
    "point_cost",
    "agent_cost",
    "social_cost",
    "expected_social_cost",
    "expected_agent_cost",
    "order_stats",
    "median_distances",
    "lemma_pair_cost",
    "max_pair_cost",
    "uniform_max_cost",
    "three_agent_costs",
]
