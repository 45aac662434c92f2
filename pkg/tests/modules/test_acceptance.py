"""
Acceptance sweeps over seeded families. Slow; run with `pytest -m slow`.
"""

import os
from fractions import Fraction

import pytest

from src.bounds import theoretical_bound
from src.generator import Family, GenSpec, generate
from src.mechanisms import MechanismId, median_right
from src.model import Variant, expected_social_cost, lemma_pair_cost
from src.solver import brute_force_optimal, fast_optimal_sum
from src.verification import approx_ratio, sp_suite

pytestmark = pytest.mark.slow

ODD_N = (3, 5, 7, 9)

WORKERS = os.cpu_count() or 1


def family(n, k=2, variant=Variant.SUM, seed=0, kind=Family.UNIFORM_GRID):
    return GenSpec(
        family=kind,
        n=n,
        k=k,
        variant=variant,
        seed=seed,
        lo=Fraction(-5),
        hi=Fraction(5),
        denominator=100,
    )


def assert_within_bound(mech, spec, count):
    bound = theoretical_bound(mech, spec.variant, spec.n, spec.k)
    assert bound is not None
    for inst in generate(spec, count):
        ratio = approx_ratio(mech, inst).ratio
        assert ratio <= bound, (inst, ratio, bound)


def test_fast_solver_matches_oracle():
    shapes = [(n, k) for n in range(2, 10) for k in range(2, min(n, 5) + 1)]
    per_shape = -(-10_000 // len(shapes))

    for n, k in shapes:
        for kind in (Family.UNIFORM_GRID, Family.COINCIDENT):
            spec = family(n, k, seed=n * 10 + k, kind=kind)
            for inst in generate(spec, per_shape // 2 + 1):
                assert (
                    fast_optimal_sum(inst).cost
                    == brute_force_optimal(inst).cost
                ), inst


@pytest.mark.parametrize("n", ODD_N)
def test_median_right_sum_bound(n):
    assert_within_bound(MechanismId.MEDIAN_RIGHT, family(n, seed=n), 500)


@pytest.mark.parametrize("n", ODD_N)
def test_reverse_proportional_sum_bound(n):
    spec = family(n, seed=100 + n)
    assert_within_bound(MechanismId.REVERSE_PROPORTIONAL, spec, 500)


@pytest.mark.parametrize("n", range(3, 10))
def test_median_right_max_bound(n):
    spec = family(n, variant=Variant.MAX, seed=200 + n)
    assert_within_bound(MechanismId.MEDIAN_RIGHT, spec, 300)


@pytest.mark.parametrize("n", ODD_N)
def test_uniform_max_bound(n):
    spec = family(n, variant=Variant.MAX, seed=300 + n)
    assert_within_bound(MechanismId.UNIFORM_LR, spec, 300)


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("k", range(2, 6))
def test_median_ball_bounds(k, variant):
    for n in range(k, 10):
        spec = family(n, k, variant, seed=400 + 10 * n + k)
        assert_within_bound(MechanismId.MEDIAN_BALL, spec, 40)


@pytest.mark.parametrize("n", (4, 6, 8))
def test_two_medians_is_optimal_for_sum(n):
    for inst in generate(family(n, seed=500 + n), 200):
        assert approx_ratio(MechanismId.TWO_MEDIANS, inst).ratio == 1


def test_pair_formula_matches_social_cost():
    for n in ODD_N:
        spec = family(n, seed=600 + n, kind=Family.UNIFORM_INT)
        for inst in generate(spec, 1250):
            assert lemma_pair_cost(inst, "right") == expected_social_cost(
                inst, median_right(inst)
            )


SP_SUITES = [
    (MechanismId.TWO_MEDIANS, 4, 2, Variant.SUM),
    (MechanismId.MEDIAN_RIGHT, 3, 2, Variant.SUM),
    (MechanismId.MEDIAN_LEFT, 5, 2, Variant.MAX),
    (MechanismId.UNIFORM_LR, 3, 2, Variant.MAX),
    (MechanismId.REVERSE_PROPORTIONAL, 3, 2, Variant.SUM),
    (MechanismId.MEDIAN_BALL, 5, 3, Variant.SUM),
    (MechanismId.AUTO_SUM, 4, 2, Variant.SUM),
]


@pytest.mark.parametrize("mech, n, k, variant", SP_SUITES)
def test_strategyproofness_suite(mech, n, k, variant):
    spec = GenSpec(family=Family.UNIFORM_INT, n=n, k=k, variant=variant)
    suite = sp_suite(mech, spec, 1000, workers=WORKERS)

    assert suite.passed, suite.violations[:1]
    assert suite.trials == 1000
