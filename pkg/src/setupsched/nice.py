"""The 4/3 construction for instances without troublesome classes.

An instance is *nice* for a guess ``T`` when it has at most one class of
type 8 and none of types 9 or 10.  For such instances a machine count
``m_nice`` certifies ``T < OPT`` whenever ``m < m_nice``, and otherwise a
schedule of makespan at most ``4T/3`` is built greedily.

Classes here may be partial: the general decider hands over type-7
classes with only some of their jobs, or only parts of some jobs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .core import ClassType, Reject, TypedInstance, compute_alpha
from .schedule import Schedule, Segment
from .wrap import Gap, WrapGroup, WrapSequence, WrapTemplate, wrap

T1, T2, T3, T4, T5, T6, T7, T8 = (ClassType(k) for k in range(1, 9))


@dataclass(frozen=True)
class NiceClass:
    cls: int
    kind: ClassType
    setup: Fraction
    pieces: tuple[tuple[int, Fraction], ...]

    @cached_property
    def total(self) -> Fraction:
        return sum((a for _, a in self.pieces), Fraction(0))

    @property
    def load(self) -> Fraction:
        return self.setup + self.total


@dataclass(frozen=True)
class NiceInstance:
    """Classes (possibly partial) to be placed at guess ``T``.

    Leftover sets are the unpaired tails of each type in the given order.
    """

    T: Fraction
    classes: tuple[NiceClass, ...]

    def __post_init__(self):
        kinds = [c.kind for c in self.classes]
        if kinds.count(T8) > 1:
            raise ValueError("a nice instance holds at most one class of type 8")
        if any(k in (ClassType.NINE, ClassType.TEN) for k in kinds):
            raise ValueError("a nice instance holds no class of type 9 or 10")

    @classmethod
    def from_typed(cls, typed: TypedInstance, only: Optional[Iterable[int]] = None) -> "NiceInstance":
        """Whole classes of ``typed`` (all of them unless ``only`` is given)."""
        inst = typed.base
        picked = range(inst.num_classes) if only is None else only
        classes = tuple(
            NiceClass(i, typed.types[i], inst.setups[i],
                      tuple((j, inst.jobs[j].p) for j in inst.class_jobs[i]))
            for i in picked)
        return cls(typed.T, classes)

    def of_kind(self, kind: ClassType) -> list[NiceClass]:
        return [c for c in self.classes if c.kind == kind]

    def leftovers(self) -> tuple[list[NiceClass], list[NiceClass], list[NiceClass]]:
        """The unpaired tails of types 3, 5 and 6."""
        c3, c5, c6 = self.of_kind(T3), self.of_kind(T5), self.of_kind(T6)
        return c3[len(c3) - len(c3) % 2:], c5[len(c5) - len(c5) % 2:], c6[len(c6) - len(c6) % 3:]


def _alpha_floor(c: NiceClass, T: Fraction) -> int:
    return compute_alpha(c.total, c.setup, T)[1]


def compute_l_nice(nice: NiceInstance) -> Fraction:
    """Load every schedule of makespan ``T`` carries for these classes."""
    T = nice.T
    total = Fraction(0)
    for c in nice.classes:
        if c.kind in (T1, T2):
            total += _alpha_floor(c, T) * c.setup
        elif c.kind == T3:
            total += 2 * c.setup
        else:
            total += c.setup
        total += c.total
    return total


def fixed_terms(classes: Sequence[NiceClass], T: Fraction) -> tuple[int, Fraction]:
    """Machine count and leftover load contributed by classes of types 1 to 6 and 8.

    Type 7 classes are not inspected; callers add their load to the
    leftover part themselves.
    """
    count = 0
    rest = Fraction(0)
    by = {k: [] for k in ClassType}
    for c in classes:
        by[c.kind].append(c)
    for c in by[T1] + by[T2]:
        count += _alpha_floor(c, T)
    c3, c5, c6 = by[T3], by[T5], by[T6]
    count += 3 * (len(c3) // 2) + len(by[T4]) + len(c5) // 2 + len(c6) // 3
    for c in c3[len(c3) - len(c3) % 2:]:
        rest += 2 * c.setup + c.total
    for c in c5[len(c5) - len(c5) % 2:] + c6[len(c6) - len(c6) % 3:] + by[T8]:
        rest += c.load
    return count, rest


def machines_for(count: int, rest: Fraction, T: Fraction) -> int:
    q = rest / T
    return count + (q.numerator + q.denominator - 1) // q.denominator


def compute_m_nice(nice: NiceInstance) -> int:
    """Lower bound on the machines any makespan-``T`` schedule needs."""
    count, rest = fixed_terms(nice.classes, nice.T)
    rest += sum((c.load for c in nice.classes if c.kind == T7), Fraction(0))
    return machines_for(count, rest, nice.T)


def _fill(pieces: Sequence[tuple[int, Fraction]], windows: Sequence[tuple[list, Fraction, Fraction]],
          cls: int) -> None:
    """McNaughton-style filling of ``windows`` (timeline, lo, hi) in order."""
    it = iter(windows)
    line, t, hi = next(it)
    for job, amount in pieces:
        rest = amount
        while rest:
            if t >= hi:
                line, t, hi = next(it)
            take = min(rest, hi - t)
            line.append(Segment(t, t + take, cls, job))
            t += take
            rest -= take


def _setup(line: list, c: NiceClass, start: Fraction, end: Fraction) -> None:
    if end > start:
        line.append(Segment(start, end, c.cls))


def _block(line: list, c: NiceClass, start: Fraction) -> Fraction:
    """Put class ``c`` as one setup plus its pieces back to back from ``start``."""
    _setup(line, c, start, start + c.setup)
    t = start + c.setup
    for job, amount in c.pieces:
        line.append(Segment(t, t + amount, c.cls, job))
        t += amount
    return t


class NiceConstructionError(RuntimeError):
    """The construction ran out of room although the machine count allowed it."""


def solve_nice(nice: NiceInstance, m: int) -> Schedule | Reject:
    """Schedule ``nice`` on ``m`` machines within ``4T/3`` or certify ``T < OPT``.

    Machines of the returned schedule are numbered from 0; empty machines are
    dropped, so fewer than ``m`` timelines may come back.
    """
    T = nice.T
    need = compute_m_nice(nice)
    if m < need:
        return Reject(f"nice part needs {need} machines, {m} available")
    third, two3, four3 = T / 3, 2 * T / 3, 4 * T / 3
    lines: list[list[Segment]] = []

    def fresh() -> list:
        lines.append([])
        return lines[-1]

    by = {k: nice.of_kind(k) for k in ClassType}

    for c in by[T1] + by[T2]:
        k = _alpha_floor(c, T)
        width = T - c.setup
        extra = c.total - width * (c.total // width)
        top = T + extra / k
        windows = []
        for _ in range(k):
            line = fresh()
            _setup(line, c, Fraction(0), c.setup)
            windows.append((line, c.setup, top))
        _fill(c.pieces, windows, c.cls)

    c3 = by[T3]
    for x, y in zip(c3[0:len(c3) - 1:2], c3[1::2]):
        m1, m2, m3 = fresh(), fresh(), fresh()
        ax = x.total - (two3 - x.setup)
        ay = y.total - (two3 - y.setup)
        _setup(m1, x, Fraction(0), x.setup)
        _setup(m2, x, Fraction(0), x.setup)
        _setup(m2, y, two3, two3 + y.setup)
        _setup(m3, y, Fraction(0), y.setup)
        _fill(x.pieces, [(m1, x.setup, x.setup + ax), (m2, x.setup, two3)], x.cls)
        _fill(y.pieces, [(m2, two3 + y.setup, four3), (m3, y.setup, y.setup + ay)], y.cls)

    for c in by[T4]:
        _block(fresh(), c, Fraction(0))
    c5 = by[T5]
    for x, y in zip(c5[0:len(c5) - 1:2], c5[1::2]):
        line = fresh()
        _block(line, y, _block(line, x, Fraction(0)))
    c6 = by[T6]
    for k in range(0, len(c6) - len(c6) % 3, 3):
        line = fresh()
        t = Fraction(0)
        for c in c6[k:k + 3]:
            t = _block(line, c, t)

    r3, r5, r6 = nice.leftovers()
    # blocks are (load, placer) where placer(line, start, at_bottom) lays the block out
    blocks: list[tuple[Fraction, object]] = []
    i3_block = None
    if r3:
        c = r3[0]
        dedicated = fresh()
        _setup(dedicated, c, Fraction(0), c.setup)
        a3 = c.total - (two3 - c.setup)

        def place_i3(line, start, c=c, dedicated=dedicated, a3=a3):
            _setup(line, c, start, start + c.setup)
            own = (line, start + c.setup, start + two3)
            ded = (dedicated, c.setup, c.setup + a3)
            # a job split between the two windows must not run twice at once
            _fill(c.pieces, [ded, own] if start + T - c.setup <= a3 else [own, ded], c.cls)
            return start + two3

        i3_block = (two3, place_i3)

    def whole(c: NiceClass):
        return (c.load, lambda line, start, c=c: _block(line, c, start))

    others = [whole(c) for c in r5 + r6 + by[T8]]
    if i3_block is not None and len(others) == 4:
        # all five leftovers: the type-3 rest shares a machine with one type-6 class
        line = fresh()
        t = i3_block[1](line, Fraction(0))
        r6_first = others.pop(1)
        r6_first[1](line, t)
        i3_block = None
    ordered = ([i3_block] if i3_block is not None else []) + others

    q_s: Optional[list] = None
    q_e: Optional[list] = None
    a, b = Fraction(0), four3
    if ordered:
        q_s = fresh()
        total = sum((blk[0] for blk in ordered), Fraction(0))
        bottom, top = (ordered, []) if total <= four3 else (ordered[:2], ordered[2:])
        for load, place in bottom:
            a = place(q_s, a)
        if top:
            q_e = []
            b = four3 - sum((blk[0] for blk in top), Fraction(0))
            t = b
            for load, place in top:
                t = place(q_e, t)

    used = len(lines) + (1 if q_e is not None else 0)
    spare = m - used
    if spare < 0:
        raise NiceConstructionError(f"construction used {used} machines, only {m} given")
    gaps: list[Gap] = []
    if q_s is not None and max(a, third) < four3:
        gaps.append(Gap(len(lines) - 1, max(a, third), four3))
    for _ in range(spare):
        fresh()
        gaps.append(Gap(len(lines) - 1, third, four3))
    if q_e is not None:
        lines.append(q_e)
        if b > third:
            gaps.append(Gap(len(lines) - 1, third, b))

    sevens = [c for c in by[T7] if c.pieces]
    if sevens:
        seq = WrapSequence(tuple(WrapGroup(c.cls, c.setup, c.pieces) for c in sevens))
        for q, seg in wrap(seq, WrapTemplate(tuple(gaps))):
            lines[q].append(seg)
    return Schedule.from_lists(line for line in lines if line)
