"""
Verification Functions

This module refutes strategyproofness, measures exact approximation ratios
and searches for bad instances.

The strategyproofness check is a refuter: it tries a finite set of
misreports per agent, so a returned violation is a certificate while a
clean pass is only evidence.

Sweeps accept a `workers` count. Results are always collected in instance
order, so the output does not depend on how many processes ran it.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from multiprocessing import Pool
from typing import TypeVar

from .config import Settings, load_settings
from .errors import InputError, PreconditionError
from .generator import Family, GenSpec, generate, perturb, relocate
from .mechanisms import MechanismId, apply, parse_mechanism
from .model import (
    Instance,
    Lottery,
    Variant,
    expected_agent_cost,
    expected_social_cost,
)
from .solver import brute_force_optimal

logger = logging.getLogger(__name__)

# Moves per agent and direction in one climbing round
MAX_MOVES = 64

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class SpViolation:
    """
    A profitable misreport.

    Attributes:
        agent (int): Deviating agent
        true_location (Fraction): Its genuine position
        misreport (Fraction): The profitable report
        honest_cost (Fraction): Expected cost when reporting truthfully
        deviated_cost (Fraction): Expected cost after misreporting, measured
        from the true location; strictly below `honest_cost`
    """

    agent: int
    true_location: Fraction
    misreport: Fraction
    honest_cost: Fraction
    deviated_cost: Fraction


@dataclass(frozen=True)
class RefutationReport:
    """Outcome of a misreport search on one instance."""

    violation: SpViolation | None
    deviations_checked: int
    deviations_skipped: int


@dataclass(frozen=True)
class RatioReport:
    """
    Expected mechanism cost against the optimum on one instance.

    `ratio` is mech_cost / opt_cost, and 1 when both are 0.
    """

    mechanism: MechanismId
    instance: Instance
    lottery: Lottery
    mech_cost: Fraction
    opt_cost: Fraction
    ratio: Fraction


@dataclass
class SuiteReport:
    """Totals of a strategyproofness sweep over generated instances."""

    mechanism: MechanismId
    trials: int = 0
    deviations_checked: int = 0
    deviations_skipped: int = 0
    violations: list[tuple[int, Instance, SpViolation]] = field(
        default_factory=list
    )

    @property
    def passed(self) -> bool:
        return not self.violations


def map_ordered(
    func: Callable[[T], R], items: Sequence[T], workers: int = 1
) -> list[R]:
    """
    Applies `func` to every item and returns the results in item order.

    With more than one worker the calls run in a process pool, so `func`
    must be picklable (a module-level function or a `partial` of one).

    Args:
        func (Callable): Function of one item
        items (Sequence): Inputs, typically generated instances
        workers (int): Process count, 1 runs in the calling process

    Returns:
        list: `[func(item) for item in items]`

    Example:
        - map_ordered(abs, [-2, 1, -3], workers=2)  # Returns: [2, 1, 3]
        - map_ordered(abs, [1], workers=0)  # Raises: InputError
    """
    if workers < 1:
        raise InputError("workers must be positive")
    if workers == 1 or len(items) < 2:
        return [func(item) for item in items]

    chunksize = max(1, len(items) // (4 * workers))
    logger.debug("mapping %d items over %d workers", len(items), workers)
    with Pool(min(workers, len(items))) as pool:
        return pool.map(func, items, chunksize)


def candidate_misreports(
    inst: Instance, agent: int, grid_points: int = 200
) -> list[Fraction]:
    """
    Finite set of misreports worth trying for one agent.

    The set holds the other agents' coordinates, the midpoints of
    consecutive distinct coordinates, two outer points one span beyond the
    extremes and a uniform grid of `grid_points` values between those outer
    points. A zero span counts as 1.

    Example:
        - candidate_misreports((0, 1, 2), agent=2, grid_points=0)
          # Returns: [0, 1, 1/2, 3/2, -2, 4]
    """
    inst.check_agent(agent)
    if grid_points < 0:
        raise InputError("grid_points must be nonnegative")

    distinct = sorted(set(inst.locations))
    span = distinct[-1] - distinct[0] or Fraction(1)
    outer_lo = distinct[0] - span
    outer_hi = distinct[-1] + span

    candidates = [x for i, x in enumerate(inst.locations) if i != agent]
    candidates += [(a + b) / 2 for a, b in zip(distinct, distinct[1:])]
    candidates += [outer_lo, outer_hi]
    if grid_points == 1:
        candidates.append(outer_lo)
    elif grid_points > 1:
        step = (outer_hi - outer_lo) / (grid_points - 1)
        candidates += [outer_lo + j * step for j in range(grid_points)]

    return list(dict.fromkeys(candidates))


def check_deviation(
    mech: MechanismId | str,
    inst: Instance,
    agent: int,
    misreport: Fraction,
    honest_cost: Fraction | None = None,
) -> SpViolation | None:
    """
    Tests a single misreport of one agent.

    Args:
        mech (MechanismId | str): Mechanism under test
        inst (Instance): Truthful instance
        agent (int): Deviating agent
        misreport (Fraction): Reported location
        honest_cost (Fraction | None): Cached truthful cost

    Returns:
        SpViolation | None: The violation when the misreport strictly pays

    Example:
        - check_deviation("opt-sum-baseline", (0, 1, 3), 2, Fraction(3, 2))
          # Returns: SpViolation(honest_cost=5, deviated_cost=7/2, ...)
    """
    inst.check_agent(agent)
    true_location = inst.locations[agent]
    if honest_cost is None:
        honest_cost = expected_agent_cost(inst, apply(mech, inst), agent)

    deviated = relocate(inst, agent, misreport)
    deviated_cost = expected_agent_cost(
        deviated, apply(mech, deviated), agent, true_location
    )
    if deviated_cost < honest_cost:
        return SpViolation(
            agent=agent,
            true_location=true_location,
            misreport=Fraction(misreport),
            honest_cost=honest_cost,
            deviated_cost=deviated_cost,
        )
    return None


def refute_strategyproofness(
    mech: MechanismId | str,
    inst: Instance,
    grid_points: int | None = None,
    misreports: list[Fraction] | None = None,
) -> RefutationReport:
    """
    Searches every agent's candidate misreports for a profitable one.

    Deviated instances the mechanism cannot handle are skipped and counted.
    An explicit `misreports` list replaces the candidate sets.

    Returns:
        RefutationReport: The first violation found (or None) with counts
    """
    mech = parse_mechanism(mech)
    if grid_points is None:
        grid_points = load_settings().grid_points
    honest = apply(mech, inst)

    checked = skipped = 0
    for agent in range(inst.n):
        honest_cost = expected_agent_cost(inst, honest, agent)
        reports = (
            misreports
            if misreports is not None
            else candidate_misreports(inst, agent, grid_points)
        )
        for report in reports:
            try:
                violation = check_deviation(
                    mech, inst, agent, report, honest_cost
                )
            except PreconditionError as exc:
                skipped += 1
                logger.debug("skipped deviation: %s", exc)
                continue
            checked += 1
            if violation is not None:
                logger.info(
                    "%s: agent %d gains by reporting %s",
                    mech.value,
                    agent,
                    violation.misreport,
                )
                return RefutationReport(violation, checked, skipped)

    if skipped:
        logger.warning(
            "%s: %d deviations skipped on preconditions", mech.value, skipped
        )
    return RefutationReport(None, checked, skipped)


def sp_refute(
    mech: MechanismId | str,
    inst: Instance,
    grid_points: int | None = None,
) -> SpViolation | None:
    """
    First profitable misreport found, or None.

    None is not a proof of strategyproofness. Agents are tried in index
    order and each agent's misreports in `candidate_misreports` order, so
    the other agents' coordinates come before midpoints and the grid. Use
    `check_deviation` to test one specific misreport.

    Example:
        - sp_refute("median-right", make_instance([0, 1, 2], 2, "sum"))
          # Returns: None
        - sp_refute("opt-sum-baseline", make_instance([0, 1, 3], 2, "sum"))
          # Returns: SpViolation(agent=2, misreport=1, deviated_cost=4, ...)
          # since the coordinate 1 precedes the midpoint 3/2
    """
    return refute_strategyproofness(mech, inst, grid_points).violation


def recheck_violation(
    mech: MechanismId | str, inst: Instance, violation: SpViolation
) -> bool:
    """
    Recomputes a violation from scratch and confirms it.

    Returns:
        bool: True if both costs reproduce and the decrease is strict
    """
    fresh = check_deviation(mech, inst, violation.agent, violation.misreport)
    return (
        fresh is not None
        and fresh.honest_cost == violation.honest_cost
        and fresh.deviated_cost == violation.deviated_cost
        and fresh.deviated_cost < fresh.honest_cost
    )


def approx_ratio(
    mech: MechanismId | str,
    inst: Instance,
    settings: Settings | None = None,
) -> RatioReport:
    """
    Exact ratio of the mechanism's expected cost to the optimal cost.

    Example:
        - approx_ratio("median-right", make_instance([0, 0, 1], 2, "max"))
          .ratio  # Returns: Fraction(3)
    """
    mech = parse_mechanism(mech)
    lottery = apply(mech, inst)
    mech_cost = expected_social_cost(inst, lottery)
    opt_cost = brute_force_optimal(inst, settings).cost

    if opt_cost == 0:
        # only all-coincident instances have a zero optimum
        if mech_cost != 0:
            raise AssertionError(
                f"{mech.value}: cost {mech_cost} against a zero optimum"
            )
        ratio = Fraction(1)
    else:
        ratio = mech_cost / opt_cost

    return RatioReport(mech, inst, lottery, mech_cost, opt_cost, ratio)


def _climb(
    mech: MechanismId, start: RatioReport, rounds: int, settings: Settings
) -> RatioReport:
    """Coordinate ascent on the ratio with step halving."""
    best = start
    locations = start.instance.locations
    step = (max(locations) - min(locations)) / 4 or Fraction(1, 4)

    for _ in range(rounds):
        for agent in range(best.instance.n):
            for direction in (1, -1):
                for _ in range(MAX_MOVES):
                    moved = perturb(best.instance, agent, direction * step)
                    try:
                        report = approx_ratio(mech, moved, settings)
                    except PreconditionError:
                        break
                    if report.ratio <= best.ratio:
                        break
                    best = report
        step /= 2

    return best


def worst_ratio_search(
    mech: MechanismId | str,
    variant: Variant | str,
    n: int,
    k: int,
    trials: int,
    perturb_rounds: int | None = None,
    seed: int = 0,
    settings: Settings | None = None,
    workers: int = 1,
) -> RatioReport:
    """
    Heuristic maximisation of the approximation ratio.

    Samples `trials` instances on a fine lattice of [0, 1], then hill-climbs
    the best few by moving one agent at a time, halving the step after each
    round. Deterministic given the seed, whatever the worker count.

    Example:
        - worst_ratio_search("median-right", "sum", 3, 2, 50, seed=1).ratio
          # Returns: a value close to 3/2
    """
    mech = parse_mechanism(mech)
    settings = settings or load_settings()
    if perturb_rounds is None:
        perturb_rounds = settings.perturb_rounds
    if trials < 1:
        raise InputError("trials must be positive")

    spec = GenSpec(
        family=Family.UNIFORM_GRID,
        n=n,
        k=k,
        variant=Variant(variant),
        seed=seed,
        lo=Fraction(0),
        hi=Fraction(1),
        denominator=1000,
    )
    sampled = map_ordered(
        partial(approx_ratio, mech, settings=settings),
        generate(spec, trials),
        workers,
    )
    # stable: earlier samples win ties
    sampled.sort(key=lambda report: report.ratio, reverse=True)

    starts = sampled[: settings.climb_candidates]
    climbs = map_ordered(
        partial(_climb, mech, rounds=perturb_rounds, settings=settings),
        starts,
        workers,
    )
    best = sampled[0]
    for start, climbed in zip(starts, climbs):
        logger.debug(
            "climbed %s from %s to %s", mech.value, start.ratio, climbed.ratio
        )
        if climbed.ratio > best.ratio:
            best = climbed

    logger.info("worst ratio of %s found: %s", mech.value, best.ratio)
    return best


def sp_suite(
    mech: MechanismId | str,
    spec: GenSpec,
    count: int,
    grid_points: int | None = None,
    workers: int = 1,
) -> SuiteReport:
    """
    Runs the misreport search over `count` generated instances.

    Returns:
        SuiteReport: Totals and every violation with its instance index,
        identical for any `workers`
    """
    mech = parse_mechanism(mech)
    if grid_points is None:
        grid_points = load_settings().grid_points
    instances = generate(spec, count)
    reports = map_ordered(
        partial(refute_strategyproofness, mech, grid_points=grid_points),
        instances,
        workers,
    )

    suite = SuiteReport(mechanism=mech)
    for index, (inst, report) in enumerate(zip(instances, reports)):
        suite.trials += 1
        suite.deviations_checked += report.deviations_checked
        suite.deviations_skipped += report.deviations_skipped
        if report.violation is not None:
            suite.violations.append((index, inst, report.violation))

    logger.info(
        "%s: %d trials, %d deviations checked, %d skipped, %d violations",
        mech.value,
        suite.trials,
        suite.deviations_checked,
        suite.deviations_skipped,
        len(suite.violations),
    )
    return suite


__all__ = [
    "SpViolation",
    "RefutationReport",
    "RatioReport",
    "SuiteReport",
    "map_ordered",
    "candidate_misreports",
    "check_deviation",
    "refute_strategyproofness",
    "sp_refute",
    "recheck_violation",
    "approx_ratio",
    "worst_ratio_search",
    "sp_suite",
]
