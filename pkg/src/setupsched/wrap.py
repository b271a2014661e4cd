"""Batch wrapping: pour an ordered load of setups and pieces into free gaps.

Two kernels share one loop.  :func:`wrap` puts the setup for a piece that
opens a gap just below the gap, while :func:`wrap_lj` puts it at the start
of the gap and shifts the piece right by the setup length.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .schedule import Segment


class WrapOverflowError(RuntimeError):
    """The sequence did not fit into the template."""


class WrapFeasibilityWarning(UserWarning):
    """Some gap after the first has less free time below it than a setup needs."""


@dataclass(frozen=True, slots=True)
class Gap:
    machine: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not 0 <= self.a < self.b:
            raise ValueError(f"gap needs 0 <= a < b, got [{self.a}, {self.b})")


@dataclass(frozen=True)
class WrapTemplate:
    gaps: tuple[Gap, ...] = ()

    def __post_init__(self):
        for g, h in zip(self.gaps, self.gaps[1:]):
            if h.machine < g.machine:
                raise ValueError("template machines must be non-decreasing")

    @classmethod
    def of(cls, triples: Iterable[tuple[int, Fraction, Fraction]]) -> "WrapTemplate":
        return cls(tuple(Gap(u, Fraction(a), Fraction(b)) for u, a, b in triples))

    @property
    def space(self) -> Fraction:
        return sum((g.b - g.a for g in self.gaps), Fraction(0))

    def __len__(self) -> int:
        return len(self.gaps)


@dataclass(frozen=True)
class WrapGroup:
    """One setup of class ``cls`` followed by pieces ``(job, amount)``."""

    cls: int
    setup: Fraction
    pieces: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a wrap group needs at least one piece")
        if any(amount <= 0 for _, amount in self.pieces):
            raise ValueError("piece amounts must be positive")

    @property
    def load(self) -> Fraction:
        return self.setup + sum((a for _, a in self.pieces), Fraction(0))


@dataclass(frozen=True)
class WrapSequence:
    groups: tuple[WrapGroup, ...] = ()

    @property
    def load(self) -> Fraction:
        return sum((g.load for g in self.groups), Fraction(0))

    @property
    def max_setup(self) -> Fraction:
        return max((g.setup for g in self.groups), default=Fraction(0))

    def __len__(self) -> int:
        return sum(1 + len(g.pieces) for g in self.groups)


Placement = tuple[int, Segment]


def _pour(seq: WrapSequence, template: WrapTemplate, inside: bool) -> list[Placement]:
    gaps = template.gaps
    out: list[Placement] = []
    if not seq.groups:
        return out
    if not gaps:
        raise WrapOverflowError("empty template for a nonempty sequence")
    r = 0
    gap = gaps[0]
    t = gap.a
    fresh = True  # nothing placed in the current gap yet

    def advance():
        nonlocal r, gap, t, fresh
        r += 1
        if r >= len(gaps):
            raise WrapOverflowError(f"sequence of load {seq.load} exceeds template space "
                                    f"{template.space}")
        gap = gaps[r]
        t = gap.a
        fresh = True

    for grp in seq.groups:
        s, i = grp.setup, grp.cls
        if t + s >= gap.b:
            advance()  # the setup would reach the gap end: drop it
        else:
            if s:
                out.append((gap.machine, Segment(t, t + s, i)))
            t += s
            fresh = False
        for job, amount in grp.pieces:
            rest = amount
            while rest:
                if t >= gap.b:
                    advance()
                if fresh:
                    if inside:
                        if t + s >= gap.b:
                            raise WrapOverflowError(f"setup {s} does not fit gap {gap}")
                        if s:
                            out.append((gap.machine, Segment(t, t + s, i)))
                        t += s
                    elif s:
                        out.append((gap.machine, Segment(gap.a - s, gap.a, i)))
                    fresh = False
                take = min(rest, gap.b - t)
                out.append((gap.machine, Segment(t, t + take, i, job)))
                t += take
                rest -= take
    return out


def wrap(seq: WrapSequence, template: WrapTemplate) -> list[Placement]:
    """Fill gaps in order; a piece opening a gap gets its setup just below it."""
    smax = seq.max_setup
    if any(g.a < smax for g in template.gaps[1:]):
        warnings.warn("a gap after the first has less than the largest setup below it",
                      WrapFeasibilityWarning, stacklevel=2)
    return _pour(seq, template, inside=False)


def wrap_lj(seq: WrapSequence, template: WrapTemplate) -> list[Placement]:
    """Fill gaps in order; a piece opening a gap gets its setup at the gap start."""
    return _pour(seq, template, inside=True)

