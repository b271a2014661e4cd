import math
import random
from fractions import Fraction as F

import pytest

from setupsched import (ClassType, Instance, NiceInstance, Reject, compute_l_nice, compute_m_nice,
                        normalize_and_type, solve_nice, validate)
from setupsched.generators import random_nice
from setupsched.nice import NiceClass


def nice_of(inst, T=1):
    return NiceInstance.from_typed(normalize_and_type(inst, T))


FOURS_AND_SEVEN = Instance.build(3, ["2/5", "2/5", "1/10"],
                                 [(0, "2/5"), (0, "2/5"), (1, "2/5"), (1, "2/5"), (2, "1/5")])


def check(inst, nice, m, T=F(1)):
    sched = solve_nice(nice, m)
    assert not isinstance(sched, Reject)
    rep = validate(sched, Instance(m, inst.setups, inst.jobs), 4 * T / 3)
    assert rep.ok, rep.violations
    types = normalize_and_type(inst, T).types
    for _, seg in sched.segments():
        if types[seg.cls] == ClassType.SEVEN and not seg.is_setup:
            assert seg.start >= T / 3
    return sched


def test_obligatory_load_and_machine_count():
    nice = nice_of(FOURS_AND_SEVEN)
    assert [c.kind for c in nice.classes] == [ClassType.FOUR, ClassType.FOUR, ClassType.SEVEN]
    assert compute_l_nice(nice) == F(27, 10)
    assert compute_m_nice(nice) == 3


def test_empty_nice_instance():
    empty = NiceInstance(F(1), ())
    assert compute_l_nice(empty) == 0 and compute_m_nice(empty) == 0
    assert solve_nice(empty, 0).machines == ()


def test_type_one_counts_floor_alpha():
    nice = nice_of(Instance.build(2, ["7/10"], [(0, "3/10"), (0, "3/10")]))
    assert nice.classes[0].kind == ClassType.ONE
    assert compute_l_nice(nice) == 2


def test_single_cheap_class():
    assert compute_m_nice(nice_of(Instance.build(1, ["1/10"], [(0, "1/10")]))) == 1


def test_solve_example_and_rejection():
    nice = nice_of(FOURS_AND_SEVEN)
    check(FOURS_AND_SEVEN, nice, 3)
    assert isinstance(solve_nice(nice, 2), Reject)


def test_type_three_pair_uses_three_machines():
    inst = Instance.build(3, ["1/2", "1/2"], [(0, "9/20"), (0, "9/20"), (1, "1/2"), (1, "2/5")])
    nice = nice_of(inst)
    assert {c.kind for c in nice.classes} == {ClassType.THREE}
    assert compute_m_nice(nice) == 3
    sched = check(inst, nice, 3)
    assert sched.num_machines == 3


def test_type_two_wrap_height():
    # P = 2.5 over width 0.6: four machines, remainder 0.1 spread as 0.025 each
    inst = Instance.build(4, ["2/5"], [(0, "1/2")] * 5)
    nice = nice_of(inst)
    assert nice.classes[0].kind == ClassType.TWO
    sched = check(inst, nice, 4)
    assert max(seg.end for _, seg in sched.segments()) == F(1) + F(1, 40)


def test_all_five_leftovers():
    inst = Instance.build(6, ["1/2", "7/20", "7/20", "7/20", "2/5"],
                          [(0, "19/40"), (0, "19/40"), (1, "1/5"), (2, "1/20"), (3, "1/20"), (4, "3/50")])
    nice = nice_of(inst)
    kinds = [c.kind for c in nice.classes]
    assert kinds == [ClassType.THREE, ClassType.FIVE, ClassType.SIX, ClassType.SIX,
                     ClassType.EIGHT]
    for m in range(compute_m_nice(nice), compute_m_nice(nice) + 3):
        check(inst, nice, m)


def test_nice_rejects_troublesome_classes():
    e = NiceClass(0, ClassType.EIGHT, F(2, 5), ((0, F(1, 20)),))
    with pytest.raises(ValueError):
        NiceInstance(F(1), (e, NiceClass(1, ClassType.EIGHT, F(2, 5), ((1, F(1, 20)),))))
    with pytest.raises(ValueError):
        NiceInstance(F(1), (NiceClass(0, ClassType.NINE, F(1, 2), ((0, F(1, 4)),)),))


@pytest.mark.parametrize("seed", range(40))
def test_random_nice_instances(seed):
    rng = random.Random(seed)
    T = rng.choice([9, 36, 360])
    inst = random_nice(seed, T=T, classes=rng.randint(1, 15), jobs=rng.randint(15, 40))
    nice = nice_of(inst, T)
    m = compute_m_nice(nice)
    assert math.ceil(compute_l_nice(nice) / T) >= m
    check(inst, nice, max(m, 1), F(T))
    check(inst, nice, m + 2, F(T))
