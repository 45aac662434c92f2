"""
Mechanisms

This module provides every placement mechanism behind one interface:
`apply(mechanism, instance)` returns a lottery over feasible solutions.
Deterministic mechanisms return point masses.

All rules only look at the stable sorted order of the reports (plus, for
Reverse-Proportional, the gaps around the median), which is what makes
them strategyproof. `opt-sum-baseline` is the exception: it computes the
sum-variant optimum and serves as a negative control.
"""

import logging
from collections.abc import Callable
from enum import Enum
from fractions import Fraction

from .coords import distance
from .errors import InputError, MechanismPreconditionError
from .model import Instance, Lottery, Solution, Variant, order_stats
from .solver import fast_optimal_sum

logger = logging.getLogger(__name__)


class MechanismId(str, Enum):
    """Mechanism identifiers, valued by their CLI names."""

    TWO_MEDIANS = "two-medians"
    MEDIAN_RIGHT = "median-right"
    MEDIAN_LEFT = "median-left"
    UNIFORM_LR = "uniform"
    REVERSE_PROPORTIONAL = "reverse-proportional"
    MEDIAN_BALL = "median-ball"
    AUTO_SUM = "auto-sum"
    OPT_SUM_BASELINE = "opt-sum-baseline"

    @property
    def strategyproof(self) -> bool:
        return self is not MechanismId.OPT_SUM_BASELINE

    @property
    def randomized(self) -> bool:
        return self in (
            MechanismId.UNIFORM_LR,
            MechanismId.REVERSE_PROPORTIONAL,
            MechanismId.AUTO_SUM,
        )


def mechanism_ids() -> list[str]:
    """
    CLI identifiers of all mechanisms.

    Example:
        - mechanism_ids()[0]  # Returns: "two-medians"
    """
    return [mech.value for mech in MechanismId]


def parse_mechanism(text: str | MechanismId) -> MechanismId:
    """
    Resolves a CLI identifier.

    Example:
        - parse_mechanism("median-ball")  # Returns: MechanismId.MEDIAN_BALL
        - parse_mechanism("median")  # Raises: InputError
    """
    try:
        return MechanismId(text.strip() if isinstance(text, str) else text)
    except ValueError:
        valid = ", ".join(mechanism_ids())
        raise InputError(
            f"unknown mechanism {text!r}; expected one of: {valid}"
        ) from None


def _require_pair(mech: MechanismId, inst: Instance) -> None:
    if inst.k != 2:
        raise MechanismPreconditionError(mech.value, "requires k = 2")


def _require_odd(mech: MechanismId, inst: Instance) -> None:
    if inst.n % 2 == 0:
        raise MechanismPreconditionError(mech.value, "requires odd n")


def _require_sum(mech: MechanismId, inst: Instance) -> None:
    if inst.variant is not Variant.SUM:
        raise MechanismPreconditionError(
            mech.value, "requires the sum variant"
        )


def two_medians(inst: Instance) -> Lottery:
    """
    Places the two facilities at the two median agents (even n).

    Example:
        - (0, 1, 2, 3)  # Returns: point mass on coordinates (1, 2)
    """
    _require_pair(MechanismId.TWO_MEDIANS, inst)
    if inst.n % 2 == 1:
        raise MechanismPreconditionError(
            MechanismId.TWO_MEDIANS.value, "requires even n"
        )
    stats = order_stats(inst)
    return Lottery.point(Solution((stats.median_lo, stats.median_hi)))


def median_right(inst: Instance) -> Lottery:
    """
    Places the facilities at the leftmost median m and its right neighbour.

    Example:
        - (0, 1, 3)  # Returns: point mass on coordinates (1, 3)
    """
    _require_pair(MechanismId.MEDIAN_RIGHT, inst)
    stats = order_stats(inst)
    if stats.right is None:
        raise MechanismPreconditionError(
            MechanismId.MEDIAN_RIGHT.value, "the median has no right neighbour"
        )
    return Lottery.point(Solution((stats.median_lo, stats.right)))


def median_left(inst: Instance) -> Lottery:
    """
    Places the facilities at the leftmost median m and its left neighbour.

    Example:
        - (0, 1, 3)  # Returns: point mass on coordinates (0, 1)
    """
    _require_pair(MechanismId.MEDIAN_LEFT, inst)
    stats = order_stats(inst)
    if stats.left is None:
        raise MechanismPreconditionError(
            MechanismId.MEDIAN_LEFT.value, "the median has no left neighbour"
        )
    return Lottery.point(Solution((stats.left, stats.median_lo)))


def uniform_lr(inst: Instance) -> Lottery:
    """
    Chooses (l, m) and (m, r) with probability 1/2 each (odd n).

    Example:
        - (0, 0, 1)  # Returns: {(0, 0): 1/2, (0, 1): 1/2}
    """
    _require_pair(MechanismId.UNIFORM_LR, inst)
    _require_odd(MechanismId.UNIFORM_LR, inst)
    stats = order_stats(inst)
    half = Fraction(1, 2)
    return Lottery.from_pairs(
        [
            (Solution((stats.left, stats.median_lo)), half),
            (Solution((stats.median_lo, stats.right)), half),
        ]
    )


def reverse_proportional(inst: Instance) -> Lottery:
    """
    Randomises between (l, m) and (m, r) against the gaps around m.

    (l, m) is chosen with probability d(m, r) / d(l, r) and (m, r) with
    probability d(l, m) / d(l, r), so the nearer neighbour is favoured.
    When l, m and r coincide both solutions get 1/2.

    Example:
        - (0, 1, 3)  # Returns: {(0, 1): 2/3, (1, 3): 1/3}
        - (0, 0, 1)  # Returns: point mass on coordinates (0, 0)
    """
    mech = MechanismId.REVERSE_PROPORTIONAL
    _require_pair(mech, inst)
    _require_odd(mech, inst)
    stats = order_stats(inst)

    left = inst.locations[stats.left]
    m = inst.locations[stats.median_lo]
    right = inst.locations[stats.right]
    span = distance(left, right)

    if span == 0:
        p_left = p_right = Fraction(1, 2)
    else:
        p_left = distance(m, right) / span
        p_right = distance(left, m) / span

    return Lottery.from_pairs(
        [
            (Solution((stats.left, stats.median_lo)), p_left),
            (Solution((stats.median_lo, stats.right)), p_right),
        ]
    )


def median_ball(inst: Instance) -> Lottery:
    """
    Places the k facilities on consecutive agents around the median.

    Odd k takes (k - 1) / 2 agents on each side of the leftmost median m;
    even k takes k / 2 - 1 on the left and k / 2 on the right. A window that
    would leave the sorted order is shifted inward.

    Example:
        - k = 3, (0, 1, 1, 1)  # Returns: point mass on coordinates (0, 1, 1)
        - k = 4, (0, 1, 2, 3, 4, 5)  # Returns: coordinates (1, 2, 3, 4)
    """
    stats = order_stats(inst)
    k = inst.k
    reach_left = (k - 1) // 2 if k % 2 == 1 else k // 2 - 1
    start = stats.median_position - reach_left
    start = min(max(start, 0), inst.n - k)
    return Lottery.point(Solution(stats.sorted_order[start : start + k]))


def auto_sum(inst: Instance) -> Lottery:
    """
    Two-Medians for even n, Reverse-Proportional for odd n (sum variant).

    Example:
        - (0, 1)  # Returns: point mass on coordinates (0, 1)
    """
    _require_pair(MechanismId.AUTO_SUM, inst)
    _require_sum(MechanismId.AUTO_SUM, inst)
    if inst.n % 2 == 0:
        return two_medians(inst)
    return reverse_proportional(inst)


def opt_sum_baseline(inst: Instance) -> Lottery:
    """
    The sum-variant optimum as a mechanism; not strategyproof for odd n.

    Example:
        - (0, 1, 3/2)  # Returns: point mass on coordinates (1, 3/2)
    """
    _require_sum(MechanismId.OPT_SUM_BASELINE, inst)
    return Lottery.point(fast_optimal_sum(inst).solution)


RULES: dict[MechanismId, Callable[[Instance], Lottery]] = {
    MechanismId.TWO_MEDIANS: two_medians,
    MechanismId.MEDIAN_RIGHT: median_right,
    MechanismId.MEDIAN_LEFT: median_left,
    MechanismId.UNIFORM_LR: uniform_lr,
    MechanismId.REVERSE_PROPORTIONAL: reverse_proportional,
    MechanismId.MEDIAN_BALL: median_ball,
    MechanismId.AUTO_SUM: auto_sum,
    MechanismId.OPT_SUM_BASELINE: opt_sum_baseline,
}


def apply(mech: MechanismId | str, inst: Instance) -> Lottery:
    """
    Runs a mechanism on an instance.

    Args:
        mech (MechanismId | str): Mechanism or its CLI identifier
        inst (Instance): Reported instance

    Returns:
        Lottery: The (possibly degenerate) lottery chosen by the mechanism

    Example:
        - apply("two-medians", make_instance([0, 1, 2, 3], 2, "sum"))
          # Returns: point mass on coordinates (1, 2)
        - apply("uniform", make_instance([0, 1, 2, 3], 2, "max"))
          # Raises: MechanismPreconditionError
    """
    return RULES[parse_mechanism(mech)](inst)


def reverse_proportional_ratio(p_right: Fraction) -> Fraction:
    """
    Worst ratio of Reverse-Proportional when the far solution has mass p.

    1 + p * (1 - 2p) / (2 + p) for p in [0, 1/2]; maximal at p = sqrt(5) - 2
    where it equals 10 - 4 * sqrt(5).

    Example:
        - reverse_proportional_ratio(Fraction(1, 4))
          # Returns: Fraction(19, 18)
    """
    p = Fraction(p_right)
    if not 0 <= p <= Fraction(1, 2):
        raise InputError(f"expected 0 <= p <= 1/2, got {p}")
    return 1 + p * (1 - 2 * p) / (2 + p)


__all__ = [
    "MechanismId",
    "mechanism_ids",
    "parse_mechanism",
    "two_medians",
    "median_right",
    "median_left",
    "uniform_lr",
    "reverse_proportional",
    "median_ball",
    "auto_sum",
    "opt_sum_baseline",
    "RULES",
    "apply",
    "reverse_proportional_ratio",
]
