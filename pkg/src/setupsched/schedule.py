"""Schedules and an independent feasibility checker."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import Instance


@dataclass(frozen=True, slots=True)
class Segment:
    """A setup (``job is None``) or a job piece occupying ``[start, end)``."""

    start: Fraction
    end: Fraction
    cls: int
    job: Optional[int] = None

    @property
    def is_setup(self) -> bool:
        return self.job is None

    @property
    def kind(self) -> str:
        return "setup" if self.job is None else "piece"

    @property
    def length(self) -> Fraction:
        return self.end - self.start


def _order(seg: Segment):
    return seg.start, seg.end


def setup(cls: int, start, length) -> Segment:
    return Segment(start, start + length, cls)


def piece(cls: int, job: int, start, length) -> Segment:
    return Segment(start, start + length, cls, job)


@dataclass(frozen=True)
class Schedule:
    machines: tuple[tuple[Segment, ...], ...] = ()

    @classmethod
    def from_lists(cls, machines: Iterable[Iterable[Segment]]) -> "Schedule":
        return cls(tuple(tuple(sorted(m, key=_order)) for m in machines))

    @property
    def num_machines(self) -> int:
        return len(self.machines)

    def segments(self):
        for q, timeline in enumerate(self.machines):
            for seg in timeline:
                yield q, seg


def makespan(schedule: Schedule) -> Fraction:
    """Latest segment end over all machines, 0 if nothing is scheduled."""
    return max((seg.end for _, seg in schedule.segments()), default=Fraction(0))


class ViolationKind(str, enum.Enum):
    MACHINE_COUNT = "machine count > m"
    OVERLAP = "machine overlap"
    BAD_SEGMENT = "malformed segment"
    PARALLEL = "job parallelization"
    INCOMPLETE = "incomplete job"
    OVERSCHEDULED = "over-scheduled job"
    MISSING_SETUP = "missing setup"
    COVERAGE_BREAK = "setup-coverage break"
    MAKESPAN = "makespan > limit"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str
    machine: Optional[int] = None
    job: Optional[int] = None

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    census: tuple[int, ...]
    makespan: Fraction

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}


def validate(schedule: Schedule, instance: Instance, limit=None) -> ValidationReport:
    """Check every feasibility rule and count setups per class.

    ``limit`` bounds the makespan when given.  This routine never raises on
    bad schedules; problems are returned as data.
    """
    out: list[Violation] = []
    add = out.append
    n, c = len(instance.jobs), instance.num_classes
    census = [0] * c
    done = [Fraction(0)] * n
    runs: dict[int, list[tuple[Fraction, Fraction, int]]] = defaultdict(list)

    if schedule.num_machines > instance.machines:
        add(Violation(ViolationKind.MACHINE_COUNT,
                      f"{schedule.num_machines} machines used, {instance.machines} available"))

    for q, timeline in enumerate(schedule.machines):
        ordered = sorted(timeline, key=lambda g: (g.start, g.end))
        prev_end = None
        current = None  # class of the setup currently in force on q
        for seg in ordered:
            if not 0 <= seg.cls < c:
                add(Violation(ViolationKind.BAD_SEGMENT, f"unknown class {seg.cls}", q))
                continue
            if seg.start < 0 or seg.end < seg.start or (seg.end == seg.start and seg.job is not None):
                add(Violation(ViolationKind.BAD_SEGMENT,
                              f"segment [{seg.start}, {seg.end}) is empty or negative", q, seg.job))
            if prev_end is not None and seg.start < prev_end:
                add(Violation(ViolationKind.OVERLAP,
                              f"segment at {seg.start} starts before {prev_end}", q, seg.job))
            prev_end = seg.end if prev_end is None else max(prev_end, seg.end)
            if seg.job is None:
                census[seg.cls] += 1
                if seg.end - seg.start != instance.setups[seg.cls]:
                    add(Violation(ViolationKind.BAD_SEGMENT,
                                  f"setup of class {seg.cls} has length {seg.end - seg.start}", q))
                current = seg.cls
                continue
            j = seg.job
            if not 0 <= j < n:
                add(Violation(ViolationKind.BAD_SEGMENT, f"unknown job {j}", q))
                continue
            if instance.jobs[j].cls != seg.cls:
                add(Violation(ViolationKind.BAD_SEGMENT,
                              f"piece of job {j} labelled with class {seg.cls}", q, j))
            if not instance.setups[seg.cls]:
                current = seg.cls  # a zero setup is implicit
            elif current is None:
                add(Violation(ViolationKind.MISSING_SETUP,
                              f"piece of job {j} at {seg.start} has no setup before it", q, j))
            elif current != seg.cls:
                add(Violation(ViolationKind.COVERAGE_BREAK,
                              f"piece of job {j} at {seg.start} runs under a class {current} setup",
                              q, j))
            done[j] += seg.end - seg.start
            runs[j].append((seg.start, seg.end, q))

    for j, job in enumerate(instance.jobs):
        if done[j] < job.p:
            add(Violation(ViolationKind.INCOMPLETE, f"job {j} has {done[j]} of {job.p}", job=j))
        elif done[j] > job.p:
            add(Violation(ViolationKind.OVERSCHEDULED, f"job {j} has {done[j]} of {job.p}", job=j))
    for j, intervals in runs.items():
        intervals.sort()
        reach, q0 = intervals[0][1], intervals[0][2]
        for s1, e1, q1 in intervals[1:]:
            if s1 < reach:
                add(Violation(ViolationKind.PARALLEL,
                              f"job {j} runs on machines {q0} and {q1} around {s1}", q1, j))
            if e1 > reach:
                reach, q0 = e1, q1

    span = makespan(schedule)
    if limit is not None and span > limit:
        add(Violation(ViolationKind.MAKESPAN, f"makespan {span} exceeds {limit}"))
    return ValidationReport(tuple(out), tuple(census), span)
