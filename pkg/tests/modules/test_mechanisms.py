from collections import defaultdict
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import InputError, MechanismPreconditionError
from src.generator import mirror
from src.mechanisms import (
    RULES,
    MechanismId,
    apply,
    auto_sum,
    mechanism_ids,
    median_ball,
    median_left,
    median_right,
    opt_sum_baseline,
    parse_mechanism,
    reverse_proportional,
    reverse_proportional_ratio,
    two_medians,
    uniform_lr,
)
from src.model import (
    Lottery,
    Solution,
    Variant,
    expected_social_cost,
    make_instance,
    order_stats,
)
from src.solver import brute_force_optimal
from tests.strategies import coords, instances


def coordinates(inst, lot):
    return [(sol.coordinates(inst), p) for sol, p in lot.support]


def test_mechanism_ids():
    assert mechanism_ids() == [
        "two-medians",
        "median-right",
        "median-left",
        "uniform",
        "reverse-proportional",
        "median-ball",
        "auto-sum",
        "opt-sum-baseline",
    ]
    assert set(RULES) == set(MechanismId)


def test_parse_mechanism():
    assert parse_mechanism("median-ball") is MechanismId.MEDIAN_BALL
    assert parse_mechanism(" uniform ") is MechanismId.UNIFORM_LR
    assert parse_mechanism(MechanismId.AUTO_SUM) is MechanismId.AUTO_SUM

    with pytest.raises(InputError, match="two-medians"):
        parse_mechanism("median")


def test_flags():
    assert not MechanismId.OPT_SUM_BASELINE.strategyproof
    assert all(
        mech.strategyproof
        for mech in MechanismId
        if mech is not MechanismId.OPT_SUM_BASELINE
    )
    assert MechanismId.REVERSE_PROPORTIONAL.randomized
    assert not MechanismId.MEDIAN_BALL.randomized


def test_two_medians():
    inst = make_instance([0, 1, 2, 3], 2, "sum")

    assert two_medians(inst) == Lottery.point(Solution((1, 2)))

    with pytest.raises(MechanismPreconditionError, match="requires even n"):
        two_medians(make_instance([0, 1, 2], 2, "sum"))
    with pytest.raises(MechanismPreconditionError, match="requires k = 2"):
        two_medians(make_instance([0, 1, 2, 3], 3, "sum"))


def test_median_right_and_left():
    inst = make_instance([0, 1, 3], 2, "sum")

    assert coordinates(inst, median_right(inst)) == [((1, 3), 1)]
    assert coordinates(inst, median_left(inst)) == [((0, 1), 1)]

    with pytest.raises(MechanismPreconditionError):
        median_left(make_instance([0, 1], 2, "sum"))


def test_uniform_lr():
    inst = make_instance([0, 0, 1], 2, "max")

    assert uniform_lr(inst) == Lottery(
        (
            (Solution((0, 1)), Fraction(1, 2)),
            (Solution((1, 2)), Fraction(1, 2)),
        )
    )

    with pytest.raises(MechanismPreconditionError) as error:
        uniform_lr(make_instance([0, 1, 2, 3], 2, "max"))
    assert str(error.value) == "uniform: requires odd n"


def test_reverse_proportional():
    inst = make_instance([0, 1, 3], 2, "sum")

    assert coordinates(inst, reverse_proportional(inst)) == [
        ((0, 1), Fraction(2, 3)),
        ((1, 3), Fraction(1, 3)),
    ]


def test_reverse_proportional_degenerate_cases():
    inst = make_instance([0, 0, 1], 2, "sum")
    assert coordinates(inst, reverse_proportional(inst)) == [((0, 0), 1)]

    inst = make_instance([2, 2, 2], 2, "sum")
    lot = reverse_proportional(inst)
    assert [p for _, p in lot.support] == [Fraction(1, 2), Fraction(1, 2)]


def test_median_ball():
    inst = make_instance([0, 1, 1, 1], 3, "max")
    assert coordinates(inst, median_ball(inst)) == [((0, 1, 1), 1)]

    inst = make_instance([5, 4, 3, 2, 1, 0], 4, "sum")
    assert coordinates(inst, median_ball(inst)) == [((1, 2, 3, 4), 1)]

    inst = make_instance([0, 1, 2], 3, "sum")
    assert coordinates(inst, median_ball(inst)) == [((0, 1, 2), 1)]


def test_auto_sum():
    inst = make_instance([0, 1], 2, "sum")
    assert auto_sum(inst) == two_medians(inst)

    inst = make_instance([0, 1, 3], 2, "sum")
    assert auto_sum(inst) == reverse_proportional(inst)

    with pytest.raises(MechanismPreconditionError, match="sum variant"):
        auto_sum(make_instance([0, 1, 3], 2, "max"))


def test_opt_sum_baseline():
    inst = make_instance([0, 1, "3/2"], 2, "sum")
    assert coordinates(inst, opt_sum_baseline(inst)) == [
        ((1, Fraction(3, 2)), 1)
    ]

    with pytest.raises(MechanismPreconditionError):
        opt_sum_baseline(make_instance([0, 1, 3], 2, "max"))


def test_apply():
    inst = make_instance([0, 1, 2, 3], 2, "sum")

    assert apply("two-medians", inst) == two_medians(inst)
    with pytest.raises(MechanismPreconditionError):
        apply("uniform", make_instance([0, 1, 2, 3], 2, "max"))


@given(instances(max_n=8, max_k=4), st.sampled_from(list(MechanismId)))
def test_every_outcome_is_feasible(inst, mech):
    try:
        lot = apply(mech, inst)
    except MechanismPreconditionError:
        return

    assert sum(p for _, p in lot.support) == 1
    for sol, p in lot.support:
        assert p > 0
        assert len(sol.host_agents) == inst.k
        assert all(0 <= i < inst.n for i in sol.host_agents)
    if not mech.randomized:
        assert lot.is_deterministic


@given(instances(min_n=3, max_n=9, k=2, odd=True))
def test_median_right_mirrors_median_left(inst):
    flipped = mirror(inst)
    [(right, _)] = median_right(inst).support
    [(left, _)] = median_left(flipped).support

    assert sorted(-x for x in right.coordinates(inst)) == list(
        left.coordinates(flipped)
    )


def test_reverse_proportional_ratio():
    assert reverse_proportional_ratio(Fraction(1, 4)) == Fraction(19, 18)
    assert reverse_proportional_ratio(Fraction(0)) == 1
    assert reverse_proportional_ratio(Fraction(1, 2)) == 1

    with pytest.raises(InputError):
        reverse_proportional_ratio(Fraction(3, 4))


def test_reverse_proportional_ratio_matches_instances():
    # one agent at 0, the median at p and the last agent at 1
    for p in (Fraction(1, 10), Fraction(1, 4), Fraction(2361, 10000)):
        inst = make_instance([0, p, 1], 2, Variant.SUM)
        mech_cost = expected_social_cost(inst, reverse_proportional(inst))
        ratio = mech_cost / brute_force_optimal(inst).cost
        assert ratio == reverse_proportional_ratio(p)


ANONYMOUS = [
    mech for mech in MechanismId if mech is not MechanismId.OPT_SUM_BASELINE
]


def distribution(inst, lot):
    masses = defaultdict(Fraction)
    for sol, p in lot.support:
        masses[sol.coordinates(inst)] += p
    return dict(masses)


def outcome_or_none(mech, inst):
    try:
        return apply(mech, inst)
    except MechanismPreconditionError:
        return None


@given(instances(max_n=8, max_k=4), st.sampled_from(ANONYMOUS), st.data())
def test_outcome_ignores_report_order(inst, mech, data):
    order = data.draw(st.permutations(range(inst.n)))
    permuted = replace(inst, locations=tuple(inst.locations[i] for i in order))
    lot = outcome_or_none(mech, inst)
    if lot is None:
        assert outcome_or_none(mech, permuted) is None
        return

    assert distribution(permuted, apply(mech, permuted)) == distribution(
        inst, lot
    )


@given(instances(max_n=8, max_k=4), st.sampled_from(list(MechanismId)), coords)
def test_outcome_follows_translation(inst, mech, shift):
    lot = outcome_or_none(mech, inst)
    if lot is None:
        return
    shifted = replace(inst, locations=tuple(x + shift for x in inst.locations))

    expected = {
        tuple(x + shift for x in point): p
        for point, p in distribution(inst, lot).items()
    }
    assert distribution(shifted, apply(mech, shifted)) == expected


@given(instances(min_n=3, max_n=9, k=2, variant=Variant.SUM, odd=True))
def test_reverse_proportional_probabilities(inst):
    stats = order_stats(inst)
    left, m, right = (
        inst.locations[stats.left],
        inst.locations[stats.median_lo],
        inst.locations[stats.right],
    )
    masses = dict(reverse_proportional(inst).support)
    p_left = masses.get(Solution((stats.left, stats.median_lo)), 0)
    p_right = masses.get(Solution((stats.median_lo, stats.right)), 0)

    assert p_left + p_right == 1
    assert p_left * (right - left) == right - m
    assert p_right * (right - left) == m - left


@given(instances(max_n=9, k=2))
def test_median_ball_with_two_facilities_is_median_right(inst):
    assert median_ball(inst) == median_right(inst)
