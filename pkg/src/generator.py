"""
Instance Generators

This module provides seeded generators of instance families. Every
instance draws from its own numpy `SeedSequence`, derived from the master
seed, the family and the instance index, so instance i is the same no
matter how many instances are generated or in which order.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import InfeasibleError, InputError
from .model import Instance, Variant

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64


class Family(str, Enum):
    """Instance families, valued by their CLI names."""

    UNIFORM_INT = "uniform-int"
    UNIFORM_GRID = "uniform-grid"
    CLUSTERED = "clustered"
    COINCIDENT = "coincident"


# Stable codes; never renumber, seeds depend on them.
FAMILY_CODES = {
    Family.UNIFORM_INT: 1,
    Family.UNIFORM_GRID: 2,
    Family.CLUSTERED: 3,
    Family.COINCIDENT: 4,
}


@dataclass(frozen=True)
class GenSpec:
    """
    Description of a generated family.

    Attributes:
        family (Family): Family to draw from
        n (int): Agents per instance
        k (int): Facilities per instance
        variant (Variant): Cost variant
        seed (int): Master seed, 0 <= seed < 2**64
        lo (Fraction): Left end of the coordinate range
        hi (Fraction): Right end of the coordinate range
        denominator (int): Lattice denominator of the fractional families
        clusters (int): Cluster count of the clustered family
        spread (Fraction): Cluster half-width of the clustered family
    """

    family: Family = Family.UNIFORM_INT
    n: int = 3
    k: int = 2
    variant: Variant = Variant.SUM
    seed: int = 0
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(10)
    denominator: int = 1000
    clusters: int = 2
    spread: Fraction = Fraction(1, 10)

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "family", Family(self.family))
            object.__setattr__(self, "variant", Variant(self.variant))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        object.__setattr__(self, "spread", Fraction(self.spread))
        validate_spec(self)


def validate_spec(spec: GenSpec) -> None:
    """
    Rejects specs that cannot produce valid instances.

    Example:
        - GenSpec(n=3, k=4)  # Raises: InfeasibleError
        - GenSpec(lo=5, hi=1)  # Raises: InputError
    """
    if spec.n < 2:
        raise InputError("n must be at least 2")
    if spec.k < 2:
        raise InputError("k must be at least 2")
    if spec.k > spec.n:
        raise InfeasibleError("infeasible: k exceeds n")
    if not 0 <= spec.seed < SEED_LIMIT:
        raise InputError("seed must be a 64-bit nonnegative integer")
    if spec.lo > spec.hi:
        raise InputError(f"empty range [{spec.lo}, {spec.hi}]")
    if spec.denominator < 1:
        raise InputError("denominator must be positive")
    if spec.clusters < 1:
        raise InputError("clusters must be positive")
    if spec.spread < 0:
        raise InputError("spread must be nonnegative")
    if _lattice_bounds(spec)[0] > _lattice_bounds(spec)[1]:
        raise InputError(
            f"no multiple of 1/{spec.denominator} in [{spec.lo}, {spec.hi}]"
        )


def _lattice_bounds(spec: GenSpec) -> tuple[int, int]:
    """Numerators j with lo <= j / denominator <= hi."""
    den = spec.denominator
    if spec.family is Family.UNIFORM_INT:
        den = 1
    return math.ceil(spec.lo * den), math.floor(spec.hi * den)


def instance_seed(
    master_seed: int, family: Family, index: int
) -> np.random.SeedSequence:
    """
    Seed sequence of one instance, a pure function of its coordinates.

    Example:
        - instance_seed(7, Family.UNIFORM_INT, 0).entropy
          # Returns: [7, 1, 0]
    """
    return np.random.SeedSequence(
        [int(master_seed), FAMILY_CODES[Family(family)], int(index)]
    )


def _draw_uniform(
    spec: GenSpec, rng: np.random.Generator
) -> list[Fraction]:
    first, last = _lattice_bounds(spec)
    den = 1 if spec.family is Family.UNIFORM_INT else spec.denominator
    numerators = rng.integers(first, last, size=spec.n, endpoint=True)
    return [Fraction(int(j), den) for j in numerators]


def _draw_clustered(
    spec: GenSpec, rng: np.random.Generator
) -> list[Fraction]:
    first, last = _lattice_bounds(spec)
    den = spec.denominator
    centers = rng.integers(first, last, size=spec.clusters, endpoint=True)
    width = math.floor(spec.spread * den)

    locations = []
    for _ in range(spec.n):
        center = int(centers[int(rng.integers(0, spec.clusters))])
        jitter = int(rng.integers(-width, width, endpoint=True))
        locations.append(Fraction(center + jitter, den))
    return locations


def _draw_coincident(
    spec: GenSpec, rng: np.random.Generator
) -> list[Fraction]:
    first, last = _lattice_bounds(spec)
    den = spec.denominator

    # A hub shared by at least half of the agents, the rest from a tiny pool
    hub_size = max(2, math.ceil(spec.n / 2))
    pool = rng.integers(first, last, size=2, endpoint=True)
    hub = int(pool[0])
    numerators = [hub] * hub_size
    for _ in range(spec.n - hub_size):
        numerators.append(int(pool[int(rng.integers(0, 2))]))

    order = rng.permutation(spec.n)
    return [Fraction(numerators[int(i)], den) for i in order]


DRAWERS = {
    Family.UNIFORM_INT: _draw_uniform,
    Family.UNIFORM_GRID: _draw_uniform,
    Family.CLUSTERED: _draw_clustered,
    Family.COINCIDENT: _draw_coincident,
}


def generate_one(spec: GenSpec, index: int) -> Instance:
    """The instance at position `index` of the family."""
    rng = np.random.default_rng(instance_seed(spec.seed, spec.family, index))
    locations = DRAWERS[spec.family](spec, rng)
    return Instance(tuple(locations), spec.k, spec.variant)


def generate(spec: GenSpec, count: int) -> list[Instance]:
    """
    Draws `count` instances, reproducibly from the spec's seed.

    Args:
        spec (GenSpec): Family description
        count (int): Number of instances

    Returns:
        list[Instance]: Instances 0 .. count - 1 of the family

    Example:
        - generate(GenSpec(seed=7), 2) == generate(GenSpec(seed=7), 2)
          # Returns: True
    """
    if count < 0:
        raise InputError("count must be nonnegative")
    logger.debug("generating %d %s instances", count, spec.family.value)
    return [generate_one(spec, index) for index in range(count)]


def perturb(inst: Instance, agent: int, delta: Fraction) -> Instance:
    """
    Copy of the instance with one agent shifted by `delta`.

    Example:
        - perturb(make_instance([0, 1, 2], 2, "sum"), 2, Fraction(1, 2))
          # Returns: instance (0, 1, 5/2)
    """
    inst.check_agent(agent)
    locations = list(inst.locations)
    locations[agent] += Fraction(delta)
    return replace(inst, locations=tuple(locations))


def relocate(inst: Instance, agent: int, location: Fraction) -> Instance:
    """Copy of the instance with one agent reporting `location`."""
    inst.check_agent(agent)
    locations = list(inst.locations)
    locations[agent] = Fraction(location)
    return replace(inst, locations=tuple(locations))


def mirror(inst: Instance) -> Instance:
    """
    Reflects every coordinate through 0.

    Example:
        - mirror(make_instance([0, 1, 3], 2, "sum")).locations
          # Returns: (0, -1, -3)
    """
    return replace(inst, locations=tuple(-x for x in inst.locations))


__all__ = [
    "Family",
    "FAMILY_CODES",
    "GenSpec",
    "validate_spec",
    "instance_seed",
    "generate_one",
    "generate",
    "perturb",
    "relocate",
    "mirror",
]
