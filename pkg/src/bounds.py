"""
Approximation Bounds

This module ships the proven approximation bounds of each mechanism as data
and provides exact rational brackets of the irrational bound 10 - 4*sqrt(5)
attained by Reverse-Proportional.
"""

import math
from collections.abc import Callable
from fractions import Fraction

from .mechanisms import MechanismId
from .model import Variant

BoundRule = Callable[[int, int], Fraction | None]


def _sqrt5_scaled(guard: int) -> int:
    """floor(sqrt(5) * 10**guard)."""
    return math.isqrt(5 * 10 ** (2 * guard))


def sqrt5_ratio_upper(digits: int = 12) -> Fraction:
    """
    Smallest `digits`-decimal rational that is >= 10 - 4*sqrt(5).

    Example:
        - sqrt5_ratio_upper(12)  # Returns: Fraction("1.055728090001")
    """
    guard = digits + 4
    # flooring sqrt(5) overestimates 10 - 4*sqrt(5)
    upper = 10 * 10**guard - 4 * _sqrt5_scaled(guard)
    scale = 10 ** (guard - digits)
    return Fraction(-((-upper) // scale), 10**digits)


def sqrt5_ratio_lower(digits: int = 12) -> Fraction:
    """
    Largest `digits`-decimal rational that is <= 10 - 4*sqrt(5).

    Example:
        - sqrt5_ratio_lower(4)  # Returns: Fraction("1.0557")
    """
    guard = digits + 4
    lower = 10 * 10**guard - 4 * (_sqrt5_scaled(guard) + 1)
    scale = 10 ** (guard - digits)
    return Fraction(lower // scale, 10**digits)


def _median_right_sum(n: int, k: int) -> Fraction:
    return Fraction(n, n - 1) if n % 2 == 1 else Fraction(1)


def _median_right_max(n: int, k: int) -> Fraction:
    return Fraction(2 * n, n - 1) if n % 2 == 1 else Fraction(2)


def _median_left_sum(n: int, k: int) -> Fraction | None:
    return _median_right_sum(n, k) if n % 2 == 1 else None


def _median_left_max(n: int, k: int) -> Fraction | None:
    return _median_right_max(n, k) if n % 2 == 1 else None


def _uniform_max(n: int, k: int) -> Fraction:
    return Fraction(3 * n - 1, 2 * n - 2)


def _reverse_proportional_sum(n: int, k: int) -> Fraction:
    return sqrt5_ratio_upper()


def _auto_sum(n: int, k: int) -> Fraction:
    return Fraction(1) if n % 2 == 0 else sqrt5_ratio_upper()


BOUNDS: dict[tuple[MechanismId, Variant], BoundRule] = {
    (MechanismId.TWO_MEDIANS, Variant.SUM): lambda n, k: Fraction(1),
    (MechanismId.TWO_MEDIANS, Variant.MAX): lambda n, k: Fraction(2),
    (MechanismId.MEDIAN_RIGHT, Variant.SUM): _median_right_sum,
    (MechanismId.MEDIAN_RIGHT, Variant.MAX): _median_right_max,
    (MechanismId.MEDIAN_LEFT, Variant.SUM): _median_left_sum,
    (MechanismId.MEDIAN_LEFT, Variant.MAX): _median_left_max,
    (MechanismId.UNIFORM_LR, Variant.MAX): _uniform_max,
    (MechanismId.REVERSE_PROPORTIONAL, Variant.SUM): _reverse_proportional_sum,
    (MechanismId.MEDIAN_BALL, Variant.SUM): lambda n, k: Fraction(2),
    (MechanismId.MEDIAN_BALL, Variant.MAX): lambda n, k: Fraction(k + 1),
    (MechanismId.AUTO_SUM, Variant.SUM): _auto_sum,
    (MechanismId.OPT_SUM_BASELINE, Variant.SUM): lambda n, k: Fraction(1),
}


def theoretical_bound(
    mech: MechanismId, variant: Variant, n: int, k: int
) -> Fraction | None:
    """
    Proven worst-case ratio of a mechanism, if one is known.

    Args:
        mech (MechanismId): Mechanism
        variant (Variant): Cost variant
        n (int): Number of agents
        k (int): Number of facilities

    Returns:
        Fraction | None: The bound, or None where nothing is claimed

    Example:
        - theoretical_bound(MechanismId.MEDIAN_RIGHT, Variant.SUM, 5, 2)
          # Returns: Fraction(5, 4)
        - theoretical_bound(MechanismId.UNIFORM_LR, Variant.SUM, 3, 2)
          # Returns: None
    """
    rule = BOUNDS.get((MechanismId(mech), Variant(variant)))
    return None if rule is None else rule(n, k)


__all__ = [
    "BOUNDS",
    "sqrt5_ratio_upper",
    "sqrt5_ratio_lower",
    "theoretical_bound",
]
