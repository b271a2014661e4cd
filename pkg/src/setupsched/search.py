"""Bisection over makespan guesses around the dual decider."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .core import Instance, Reject, as_fraction, lower_bound
from .decider import decide
from .schedule import Schedule, Segment


def trivial_schedule(instance: Optional[Instance]) -> Schedule:
    """Every class in turn on the first machine, one setup each."""
    if instance is None:
        return Schedule()
    line = []
    t = Fraction(0)
    for i, s in enumerate(instance.setups):
        if s:
            line.append(Segment(t, t + s, i))
        t += s
        for j in instance.class_jobs[i]:
            p = instance.jobs[j].p
            line.append(Segment(t, t + p, i, j))
            t += p
    return Schedule.from_lists([line])


def trivial_upper_bound(instance: Instance) -> Fraction:
    return sum(instance.setups, Fraction(0)) + sum(instance.class_totals, Fraction(0))


@dataclass(frozen=True)
class SearchConfig:
    epsilon: Fraction = Fraction(1, 100)
    max_iterations: Optional[int] = None  # derived from the bracket when None
    matching: str = "greedy"
    upper_bound: Optional[Callable[[Instance], Fraction]] = None  # hook for a tighter seed

    def __post_init__(self):
        object.__setattr__(self, "epsilon", as_fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class SearchResult:
    schedule: Schedule
    accepted_T: Fraction
    lower: Fraction
    decide_calls: int
    fallback: bool
    iterations: int
    rejections: tuple[Fraction, ...] = field(default=(), repr=False)

    def __iter__(self):
        # allows ``schedule, T = solve(...)``
        yield self.schedule
        yield self.accepted_T


def iteration_budget(lb: Fraction, ub: Fraction, eps: Fraction) -> int:
    ratio = (ub / lb) / eps
    return max(0, math.ceil(math.log2(ratio))) + 2 if ratio > 1 else 2


def solve(instance: Instance, config: SearchConfig = SearchConfig()) -> SearchResult:
    """Bisect between the lower bound and the sequential makespan.

    The returned schedule comes from the smallest accepted guess ``u``; the
    search stops once ``u <= (1 + eps) * l`` where ``l`` is the lower bound
    or the largest rejected guess.
    """
    eps = config.epsilon
    lo = lower_bound(instance)
    hi = config.upper_bound(instance) if config.upper_bound else trivial_upper_bound(instance)
    hi = max(hi, lo)
    budget = config.max_iterations or iteration_budget(lo, hi, eps)
    calls = 0
    rejected = []

    best = decide(instance, hi, matching=config.matching)
    calls += 1
    if isinstance(best, Reject):
        return SearchResult(trivial_schedule(instance), trivial_upper_bound(instance), lo, calls,
                            True, 0)
    iterations = 0
    while hi > (1 + eps) * lo and iterations < budget:
        mid = (lo + hi) / 2
        got = decide(instance, mid, matching=config.matching)
        calls += 1
        iterations += 1
        if isinstance(got, Reject):
            lo = mid
            rejected.append(mid)
        else:
            hi, best = mid, got
    return SearchResult(best, hi, lo, calls, False, iterations, tuple(rejected))
