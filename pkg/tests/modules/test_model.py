from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import (
    InfeasibleError,
    InputError,
    LotteryError,
    PreconditionError,
    UnsupportedVariantError,
)
from src.mechanisms import median_left, median_right, uniform_lr
from src.model import (
    Instance,
    Lottery,
    Solution,
    Variant,
    agent_cost,
    expected_agent_cost,
    expected_social_cost,
    lemma_pair_cost,
    make_instance,
    max_pair_cost,
    order_stats,
    social_cost,
    three_agent_costs,
    uniform_max_cost,
)
from tests.strategies import coords, instances


def test_make_instance():
    inst = make_instance(["-0.5", "0", "1", "2"], 2, "max")

    assert inst.locations[0] == Fraction(-1, 2)
    assert inst.n == 4
    assert inst.variant is Variant.MAX


def test_make_instance_rejects_bad_shapes():
    with pytest.raises(InfeasibleError, match="infeasible: k exceeds n"):
        make_instance(["0", "1"], 3, "sum")
    with pytest.raises(InputError):
        make_instance(["0"], 2, "sum")
    with pytest.raises(InputError):
        make_instance(["0", "1"], 1, "sum")
    with pytest.raises(InputError):
        make_instance(["0", "1"], 2, "median")
    with pytest.raises(InputError):
        make_instance(["0", "x"], 2, "sum")


def test_solution():
    assert Solution((2, 0)).host_agents == (0, 2)
    assert Solution((2, 0)) == Solution((0, 2))

    with pytest.raises(InputError):
        Solution((1, 1))


def test_solution_feasibility():
    inst = make_instance([0, 1, 2], 2, "sum")

    with pytest.raises(InputError):
        social_cost(inst, Solution((0, 1, 2)))
    with pytest.raises(InputError):
        social_cost(inst, Solution((0, 5)))


def test_coinciding_hosts_share_a_coordinate():
    inst = make_instance([0, 0, 1], 2, "sum")

    assert Solution((0, 1)).coordinates(inst) == (0, 0)
    assert social_cost(inst, Solution((0, 1))) == 2


def test_agent_cost():
    inst = make_instance([0, 1, 2], 2, "sum")

    assert agent_cost(inst, Solution((0, 1)), 2) == 3
    assert agent_cost(inst, Solution((0, 1)), 0) == 1

    inst = make_instance([0, 1, 2], 2, "max")
    assert agent_cost(inst, Solution((0, 1)), 2) == 2


def test_social_cost():
    inst = make_instance(["-0.5", "0", "1", "2"], 2, "max")

    assert social_cost(inst, Solution((1, 2))) == Fraction(11, 2)
    assert social_cost(inst, Solution((0, 1))) == 5


def test_lottery_invariants():
    a, b = Solution((0, 1)), Solution((1, 2))

    with pytest.raises(LotteryError):
        Lottery(((a, Fraction(-1, 2)), (b, Fraction(3, 2))))
    with pytest.raises(LotteryError):
        Lottery(((a, Fraction(1, 2)), (b, Fraction(1, 3))))
    with pytest.raises(LotteryError):
        Lottery(((a, Fraction(1, 2)), (a, Fraction(1, 2))))
    with pytest.raises(LotteryError):
        Lottery(())


def test_lottery_from_pairs_drops_zero_mass():
    a, b = Solution((0, 1)), Solution((1, 2))
    lot = Lottery.from_pairs([(a, Fraction(1)), (b, Fraction(0))])

    assert lot.is_deterministic
    assert lot == Lottery.point(a)


def test_expected_costs():
    inst = make_instance([0, 1, 3], 2, "sum")
    lot = Lottery(
        (
            (Solution((0, 1)), Fraction(2, 3)),
            (Solution((1, 2)), Fraction(1, 3)),
        )
    )

    assert expected_agent_cost(inst, lot, 2) == 4
    assert expected_social_cost(inst, lot) == Fraction(22, 3)


def test_expected_agent_cost_from_true_location():
    reported = make_instance([0, 1, Fraction(3, 2)], 2, "sum")
    lot = Lottery.point(Solution((1, 2)))

    assert expected_agent_cost(reported, lot, 2) == Fraction(1, 2)
    assert expected_agent_cost(reported, lot, 2, Fraction(3)) == Fraction(
        7, 2
    )


def test_order_stats():
    stats = order_stats(make_instance([0, 0, 1], 2, "sum"))

    assert stats.sorted_order == (0, 1, 2)
    assert stats.median_lo == 1
    assert stats.left == 0
    assert stats.right == 2


def test_order_stats_breaks_ties_by_index():
    stats = order_stats(make_instance([1, 0, 0, 2], 2, "sum"))

    assert stats.sorted_order == (1, 2, 0, 3)
    assert stats.median_lo == 2
    assert stats.median_hi == 0


def test_lemma_pair_cost():
    inst = make_instance([0, 1, 3], 2, "sum")

    assert lemma_pair_cost(inst, "right") == 8
    assert lemma_pair_cost(inst, "left") == 7

    with pytest.raises(PreconditionError):
        lemma_pair_cost(make_instance([0, 1, 2, 3], 2, "sum"), "left")
    with pytest.raises(UnsupportedVariantError):
        lemma_pair_cost(make_instance([0, 1, 3], 2, "max"), "left")


@given(instances(min_n=3, max_n=9, k=2, variant=Variant.SUM, odd=True))
def test_lemma_pair_cost_matches_social_cost(inst):
    assert lemma_pair_cost(inst, "right") == expected_social_cost(
        inst, median_right(inst)
    )
    assert lemma_pair_cost(inst, "left") == expected_social_cost(
        inst, median_left(inst)
    )


def test_max_pair_cost():
    inst = make_instance([0, 0, 1], 2, "max")

    assert max_pair_cost(inst, "right") == 3
    assert max_pair_cost(inst, "left") == 1

    with pytest.raises(PreconditionError):
        max_pair_cost(make_instance([0, 1], 2, "max"), "left")


@given(instances(min_n=3, max_n=9, k=2, variant=Variant.MAX))
def test_max_pair_cost_matches_social_cost(inst):
    assert max_pair_cost(inst, "right") == expected_social_cost(
        inst, median_right(inst)
    )
    assert max_pair_cost(inst, "left") == expected_social_cost(
        inst, median_left(inst)
    )


def test_uniform_max_cost():
    assert uniform_max_cost(make_instance([0, 0, 1], 2, "max")) == 2

    with pytest.raises(PreconditionError):
        uniform_max_cost(make_instance([0, 0, 1, 1], 2, "max"))


@given(instances(min_n=3, max_n=9, k=2, variant=Variant.MAX, odd=True))
def test_uniform_max_cost_matches_lottery(inst):
    assert uniform_max_cost(inst) == expected_social_cost(
        inst, uniform_lr(inst)
    )


def test_three_agent_costs():
    assert three_agent_costs(0, 1, 2) == (5, 5, 6)

    x, y, z = Fraction(0), Fraction(1, 4), Fraction(3)
    inst = Instance((x, y, z), 2, Variant.SUM)
    assert three_agent_costs(x, y, z) == (
        social_cost(inst, Solution((0, 1))),
        social_cost(inst, Solution((1, 2))),
        social_cost(inst, Solution((0, 2))),
    )

    with pytest.raises(InputError):
        three_agent_costs(2, 1, 0)


positive_scales = st.builds(
    Fraction, st.integers(min_value=1, max_value=20), st.sampled_from([1, 3])
)


@st.composite
def instances_with_solution(draw):
    inst = draw(instances(max_n=7, max_k=4))
    hosts = draw(st.permutations(range(inst.n)))[: inst.k]
    return inst, Solution(tuple(hosts))


@given(instances_with_solution(), st.data())
def test_social_cost_ignores_report_order(case, data):
    inst, sol = case
    order = data.draw(st.permutations(range(inst.n)))
    permuted = replace(inst, locations=tuple(inst.locations[i] for i in order))
    moved = Solution(tuple(order.index(h) for h in sol.host_agents))

    assert social_cost(permuted, moved) == social_cost(inst, sol)


@given(instances_with_solution(), coords, positive_scales)
def test_social_cost_under_translation_and_scaling(case, shift, scale):
    inst, sol = case
    shifted = replace(inst, locations=tuple(x + shift for x in inst.locations))
    scaled = replace(inst, locations=tuple(x * scale for x in inst.locations))

    assert social_cost(shifted, sol) == social_cost(inst, sol)
    assert social_cost(scaled, sol) == scale * social_cost(inst, sol)


@given(instances_with_solution())
def test_max_cost_bounds_sum_cost(case):
    inst, sol = case
    as_sum = replace(inst, variant=Variant.SUM)
    as_max = replace(inst, variant=Variant.MAX)

    for agent in range(inst.n):
        farthest = agent_cost(as_max, sol, agent)
        total = agent_cost(as_sum, sol, agent)
        assert farthest <= total <= inst.k * farthest
