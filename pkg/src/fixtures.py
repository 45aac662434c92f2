"""
Regression Fixtures

This module replays the tight lower-bound constructions of the game as
exact regressions. Each fixture pins a mechanism, an instance and the exact
value the mechanism must attain there.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import sqrt5_ratio_lower, sqrt5_ratio_upper
from .coords import format_coord
from .errors import InputError, PreconditionError, RegressionFailure
from .mechanisms import MechanismId
from .model import Instance, Solution, Variant, social_cost
from .solver import brute_force_optimal
from .verification import approx_ratio

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixtureResult:
    """Outcome of one fixture."""

    name: str
    passed: bool
    details: str


@dataclass(frozen=True)
class Fixture:
    """
    A pinned instance with the exact outcome expected of a mechanism.

    Attributes:
        name (str): Stable identifier
        instance (Instance): The instance
        mechanism (MechanismId | None): Mechanism under test, None for
        solver-only fixtures
        check (Callable): Receives the fixture, raises RegressionFailure
        on mismatch, returns a details line on success
    """

    name: str
    instance: Instance
    mechanism: MechanismId | None
    check: Callable[["Fixture"], str] = field(repr=False)


def lower_bound_instance(k: int, eps: Fraction = Fraction(0)) -> list:
    """
    One agent at 0, k - 1 agents at 1 and one agent at 1 + eps.

    Example:
        - lower_bound_instance(3, Fraction(1, 1000))
          # Returns: [0, 1, 1, 1001/1000]
    """
    if k < 2:
        raise InputError("k must be at least 2")
    return [Fraction(0)] + [Fraction(1)] * (k - 1) + [1 + Fraction(eps)]


def _ratio_equals(expected: Fraction) -> Callable[[Fixture], str]:
    def check(fixture: Fixture) -> str:
        ratio = approx_ratio(fixture.mechanism, fixture.instance).ratio
        if ratio != expected:
            raise RegressionFailure(
                f"ratio {format_coord(ratio)} != expected "
                f"{format_coord(expected)}"
            )
        return f"ratio {format_coord(ratio)}"

    return check


def _ratio_between(
    low: Fraction, high: Fraction | None
) -> Callable[[Fixture], str]:
    def check(fixture: Fixture) -> str:
        ratio = approx_ratio(fixture.mechanism, fixture.instance).ratio
        if ratio < low or (high is not None and ratio > high):
            bracket = f"[{format_coord(low)}, " + (
                "inf)" if high is None else f"{format_coord(high)}]"
            )
            raise RegressionFailure(
                f"ratio {format_coord(ratio)} outside {bracket}"
            )
        return f"ratio {format_coord(ratio)} ~ {float(ratio):.10f}"

    return check


def _structure_counterexample(fixture: Fixture) -> str:
    inst = fixture.instance
    opt = brute_force_optimal(inst)
    coords = opt.solution.coordinates(inst)
    medians = social_cost(inst, Solution((1, 2)))

    if opt.cost != 5 or coords != (Fraction(-1, 2), Fraction(0)):
        raise RegressionFailure(
            f"optimum {tuple(map(format_coord, coords))} at cost "
            f"{format_coord(opt.cost)}, expected (-1/2, 0) at cost 5"
        )
    if medians != Fraction(11, 2) or not opt.cost < medians:
        raise RegressionFailure(
            f"two-medians cost {format_coord(medians)}, expected 11/2"
        )
    return "optimum (-1/2, 0) at 5 beats two medians (0, 1) at 11/2"


def _instance(locations: list, k: int, variant: Variant) -> Instance:
    return Instance(tuple(Fraction(x) for x in locations), k, variant)


FIXTURES: list[Fixture] = [
    Fixture(
        "sum-det-3/2",
        _instance([0, 0, 1], 2, Variant.SUM),
        MechanismId.MEDIAN_RIGHT,
        _ratio_equals(Fraction(3, 2)),
    ),
    Fixture(
        "sum-rand-1.0557",
        _instance([0, Fraction(2361, 10000), 1], 2, Variant.SUM),
        MechanismId.REVERSE_PROPORTIONAL,
        _ratio_between(sqrt5_ratio_lower(4), sqrt5_ratio_upper()),
    ),
    Fixture(
        "max-det-3",
        _instance([0, 0, 1], 2, Variant.MAX),
        MechanismId.MEDIAN_RIGHT,
        _ratio_equals(Fraction(3)),
    ),
    Fixture(
        "max-rand-2",
        _instance([0, 0, 1], 2, Variant.MAX),
        MechanismId.UNIFORM_LR,
        _ratio_equals(Fraction(2)),
    ),
    Fixture(
        "sum-k-lower",
        _instance(lower_bound_instance(3, Fraction(1, 1000)), 3, Variant.SUM),
        MechanismId.MEDIAN_BALL,
        _ratio_between(Fraction(5, 3) - Fraction(1, 100), None),
    ),
    Fixture(
        "max-k-lower",
        _instance(lower_bound_instance(3), 3, Variant.MAX),
        MechanismId.MEDIAN_BALL,
        _ratio_equals(Fraction(4)),
    ),
    Fixture(
        "max-structure-counterexample",
        _instance([Fraction(-1, 2), 0, 1, 2], 2, Variant.MAX),
        None,
        _structure_counterexample,
    ),
]


def fixture_names() -> list[str]:
    """
    Names of the regression fixtures, in replay order.

    Returns:
        list[str]: Names accepted by `run_regressions(only=...)`

    Example:
        - fixture_names()[0]  # Returns: "sum-det-3/2"
    """
    return [fixture.name for fixture in FIXTURES]


def run_fixture(fixture: Fixture) -> FixtureResult:
    """
    Runs one fixture, turning every mismatch into a failed result.

    A mechanism whose preconditions do not hold on the fixture's instance
    is reported as a misconfigured fixture.
    """
    try:
        details = fixture.check(fixture)
    except RegressionFailure as exc:
        return FixtureResult(fixture.name, False, str(exc))
    except PreconditionError as exc:
        return FixtureResult(
            fixture.name, False, f"fixture misconfiguration: {exc}"
        )
    return FixtureResult(fixture.name, True, details)


def run_regressions(only: str | None = None) -> list[FixtureResult]:
    """
    Replays every fixture, or only the one named by `only`.

    Example:
        - all(r.passed for r in run_regressions())  # Returns: True
        - run_regressions("no-such-fixture")  # Raises: InputError
    """
    selected = FIXTURES
    if only is not None:
        selected = [fixture for fixture in FIXTURES if fixture.name == only]
        if not selected:
            raise InputError(
                f"unknown fixture {only!r}; expected one of: "
                + ", ".join(fixture_names())
            )

    results = [run_fixture(fixture) for fixture in selected]
    for result in results:
        log = logger.info if result.passed else logger.error
        log("%s: %s", result.name, result.details)
    return results


__all__ = [
    "Fixture",
    "FixtureResult",
    "FIXTURES",
    "lower_bound_instance",
    "fixture_names",
    "run_fixture",
    "run_regressions",
]
