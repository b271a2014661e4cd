import math
from fractions import Fraction as F

import pytest

from setupsched import Instance, SearchConfig, lower_bound, makespan, solve, trivial_schedule, validate
from setupsched.generators import packed, random_instance, single_class
from setupsched.search import iteration_budget, trivial_upper_bound


def test_packed_within_epsilon():
    cert = packed(8, 50, seed=2)
    res = solve(cert.instance, SearchConfig(epsilon=F(1, 100)))
    assert res.accepted_T <= F(101, 100) * cert.opt
    assert makespan(res.schedule) <= F(4, 3) * res.accepted_T
    assert not res.fallback


def test_single_class_within_ratio():
    cert = single_class(5, 3, [7, 2, 9, 4, 4, 1])
    schedule, T = solve(cert.instance)
    assert makespan(schedule) <= F(4, 3) * F(101, 100) * cert.opt


def test_coarse_epsilon_call_count():
    inst = random_instance(5, classes=10, jobs=30)
    lb, ub = lower_bound(inst), trivial_upper_bound(inst)
    res = solve(inst, SearchConfig(epsilon=1))
    assert res.decide_calls <= math.ceil(math.log2(ub / lb)) + 1
    assert res.accepted_T <= 2 * res.lower


@pytest.mark.parametrize("seed", range(10))
def test_bracket_and_budget(seed):
    inst = random_instance(seed, classes=8, jobs=25)
    eps = F(1, 50)
    res = solve(inst, SearchConfig(epsilon=eps))
    lb, ub = lower_bound(inst), trivial_upper_bound(inst)
    assert res.iterations <= iteration_budget(lb, ub, eps)
    assert res.accepted_T <= (1 + eps) * res.lower
    assert res.accepted_T >= lb
    assert validate(res.schedule, inst, F(4, 3) * res.accepted_T).ok
    assert all(r < res.accepted_T for r in res.rejections)


def test_trivial_schedule_examples():
    one = Instance.build(1, [2], [(0, 3)])
    assert makespan(trivial_schedule(one)) == 5
    three = Instance.build(4, [1, 1, 1], [(0, 1), (1, 1), (2, 1)])
    sched = trivial_schedule(three)
    assert makespan(sched) == 6 and validate(sched, three).ok
    assert trivial_schedule(None).machines == ()


def test_config_checks_and_hook():
    with pytest.raises(ValueError):
        SearchConfig(epsilon=0)
    with pytest.raises(TypeError):
        SearchConfig(epsilon=0.1)
    cert = packed(4, 20, seed=1)
    seen = []

    def tight(inst):
        seen.append(inst)
        return F(2) * lower_bound(inst)

    res = solve(cert.instance, SearchConfig(upper_bound=tight))
    assert seen and res.accepted_T <= F(101, 100) * cert.opt
