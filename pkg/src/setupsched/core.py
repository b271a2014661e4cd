"""Problem data, class typing and lower bounds.

All quantities are exact :class:`fractions.Fraction` values.  A makespan
guess ``T`` is carried next to the instance instead of rescaling it, so the
type thresholds below are always multiples of ``T``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

Number = Union[int, Fraction]


def as_fraction(value: Number | str) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    return Fraction(value)


class InfeasibleGuess(Exception):
    """Certificate that a makespan guess is below the optimum."""


class ClassType(enum.IntEnum):
    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4
    FIVE = 5
    SIX = 6
    SEVEN = 7
    EIGHT = 8
    NINE = 9
    TEN = 10

    @property
    def symbol(self) -> str:
        return "①②③④⑤⑥⑦⑧⑨⑩"[self.value - 1]

    @property
    def is_nice(self) -> bool:
        return self.value <= 7


@dataclass(frozen=True)
class Job:
    cls: int
    p: Fraction


@dataclass(frozen=True)
class Instance:
    """``machines`` identical machines, class setup times and jobs.

    Jobs reference classes by index.  Every class must own at least one job.
    """

    machines: int
    setups: tuple[Fraction, ...]
    jobs: tuple[Job, ...]

    def __post_init__(self):
        if self.machines < 1:
            raise ValueError("need at least one machine")
        if not self.jobs:
            raise ValueError("instance has no jobs")
        seen = [False] * len(self.setups)
        for j, job in enumerate(self.jobs):
            if not 0 <= job.cls < len(self.setups):
                raise ValueError(f"job {j} references unknown class {job.cls}")
            if job.p <= 0:
                raise ValueError(f"job {j} has non-positive processing time")
            seen[job.cls] = True
        for i, s in enumerate(self.setups):
            if s < 0:
                raise ValueError(f"class {i} has negative setup time")
        if not all(seen):
            raise ValueError(f"class {seen.index(False)} has no jobs")

    @classmethod
    def build(cls, machines: int, setups: Iterable[Number | str],
              jobs: Iterable[tuple[int, Number | str]]) -> "Instance":
        return cls(
            machines=int(machines),
            setups=tuple(as_fraction(s) for s in setups),
            jobs=tuple(Job(int(c), as_fraction(p)) for c, p in jobs),
        )

    @property
    def num_classes(self) -> int:
        return len(self.setups)

    @cached_property
    def class_jobs(self) -> tuple[tuple[int, ...], ...]:
        members: list[list[int]] = [[] for _ in self.setups]
        for j, job in enumerate(self.jobs):
            members[job.cls].append(j)
        return tuple(tuple(m) for m in members)

    @cached_property
    def class_totals(self) -> tuple[Fraction, ...]:
        totals = [Fraction(0)] * len(self.setups)
        for job in self.jobs:
            totals[job.cls] += job.p
        return tuple(totals)

    @cached_property
    def class_max_job(self) -> tuple[Fraction, ...]:
        best = [Fraction(0)] * len(self.setups)
        for job in self.jobs:
            if job.p > best[job.cls]:
                best[job.cls] = job.p
        return tuple(best)

    def setup_of_job(self, j: int) -> Fraction:
        return self.setups[self.jobs[j].cls]


def classify_class(s: Fraction, total: Fraction, T: Fraction) -> ClassType:
    """Type of a class with setup ``s`` and load ``total = s + P`` at guess ``T``.

    Raises :class:`InfeasibleGuess` when ``s >= T``.
    """
    if s >= T:
        raise InfeasibleGuess(f"setup {s} does not fit below guess {T}")
    if total <= s:
        raise ValueError("class load must exceed its setup time")
    if s < T / 3:
        return ClassType.SEVEN
    if s >= 2 * T / 3:
        if total >= T:
            return ClassType.ONE
        return ClassType.NINE if total <= 5 * T / 6 else ClassType.TEN
    # medium setup
    if total >= 2 * T - s:
        return ClassType.TWO
    if total > 4 * T / 3:
        return ClassType.THREE
    if total >= T:
        return ClassType.FOUR
    if total > 5 * T / 6:
        return ClassType.TEN
    if total > 2 * T / 3:
        return ClassType.NINE
    if total > T / 2:
        return ClassType.FIVE
    if total > 4 * T / 9:
        return ClassType.EIGHT
    return ClassType.SIX


def compute_alpha(P: Fraction, s: Fraction, T: Fraction) -> tuple[int, int]:
    """Ceiling and floor of ``P / (T - s)``."""
    if s >= T:
        raise InfeasibleGuess(f"setup {s} does not fit below guess {T}")
    q = Fraction(P) / (T - s)
    lo = q.numerator // q.denominator
    return (lo if q.denominator == 1 else lo + 1), lo


@dataclass(frozen=True)
class TypedInstance:
    base: Instance
    T: Fraction
    types: tuple[ClassType, ...]
    alpha: tuple[int, ...]
    alpha_floor: tuple[int, ...]

    @property
    def totals(self) -> tuple[Fraction, ...]:
        return self.base.class_totals

    def load(self, i: int) -> Fraction:
        return self.base.setups[i] + self.base.class_totals[i]

    def of_type(self, *labels: ClassType) -> list[int]:
        return [i for i, t in enumerate(self.types) if t in labels]

    @cached_property
    def by_type(self) -> dict[ClassType, list[int]]:
        groups: dict[ClassType, list[int]] = {t: [] for t in ClassType}
        for i, t in enumerate(self.types):
            groups[t].append(i)
        return groups


def normalize_and_type(instance: Instance, T: Number) -> TypedInstance:
    """Type every class at guess ``T``.

    Raises :class:`InfeasibleGuess` if some job cannot run within ``T``
    together with its setup, which proves ``T < OPT``.
    """
    T = as_fraction(T)
    if T <= 0:
        raise ValueError("makespan guess must be positive")
    setups = instance.setups
    for i, pmax in enumerate(instance.class_max_job):
        if setups[i] + pmax > T:
            raise InfeasibleGuess(f"class {i}: setup plus longest job exceeds {T}")
    types, alpha, alpha_floor = [], [], []
    for i, P in enumerate(instance.class_totals):
        types.append(classify_class(setups[i], setups[i] + P, T))
        a, af = compute_alpha(P, setups[i], T)
        alpha.append(a)
        alpha_floor.append(af)
    return TypedInstance(instance, T, tuple(types), tuple(alpha), tuple(alpha_floor))


def lower_bound(instance: Instance) -> Fraction:
    """Largest of the longest setup-plus-job and the average machine load."""
    elapsed = max(instance.setups[i] + p for i, p in enumerate(instance.class_max_job))
    load = sum(instance.setups, Fraction(0)) + sum(instance.class_totals, Fraction(0))
    return max(elapsed, load / instance.machines)


def setup_load_bound(typed: TypedInstance) -> Fraction:
    """Total load any schedule of makespan ``typed.T`` must carry."""
    inst = typed.base
    return sum((a * s for a, s in zip(typed.alpha, inst.setups)), Fraction(0)) + sum(
        inst.class_totals, Fraction(0))


@dataclass(frozen=True)
class Reject:
    """A decider's refusal of a guess, with the reason it is provably too small."""

    reason: str

    def __bool__(self) -> bool:
        return False
