"""Dual decider: for a guess ``T`` build a ``4T/3`` schedule or prove ``T < OPT``.

Classes of types 8 and 9 are first paired one pair per machine.  What is
left decides the branch: when no type-9 class remains the type-8 and
type-10 classes are handled by :func:`branch_eight_remain`, otherwise no
type-8 class remains and :func:`branch_nine_remain` runs.  Both branches
place part of the cheap-setup (type 7) load below ``T/3`` next to the hard
classes and hand everything else to :func:`setupsched.nice.solve_nice`.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import accumulate
from typing import Optional, Sequence

from .core import (ClassType, Instance, InfeasibleGuess, Reject, TypedInstance, as_fraction,
                   lower_bound, normalize_and_type, setup_load_bound)
from .nice import NiceClass, NiceInstance, fixed_terms, machines_for, solve_nice
from .schedule import Schedule, Segment
from .wrap import Gap, WrapGroup, WrapSequence, WrapTemplate, wrap_lj

SEVEN, EIGHT, NINE, TEN = ClassType.SEVEN, ClassType.EIGHT, ClassType.NINE, ClassType.TEN


@dataclass(frozen=True)
class SevenInfo:
    """Per-guess facts about one type-7 class."""

    cls: int
    s: Fraction
    P: Fraction
    jobs: tuple[int, ...]
    sizes: tuple[Fraction, ...]
    wrappable: tuple[Fraction, ...]  # min(p, T/3 - s) per job

    @property
    def load(self) -> Fraction:
        return self.s + self.P

    @cached_property
    def wrap_total(self) -> Fraction:
        return sum(self.wrappable, Fraction(0))

    @cached_property
    def obligatory(self) -> Fraction:
        return self.P - self.wrap_total


def obligatory_split(p: Fraction, s: Fraction, T: Fraction) -> tuple[Fraction, Fraction]:
    """``(obligatory, wrappable)`` parts of a job of length ``p`` in a class with setup ``s``."""
    room = T / 3 - s
    return (p - room, room) if p > room else (Fraction(0), p)


@dataclass
class QEntry:
    """A class contributing one setup and ``amount`` of processing to a wrap sequence.

    ``mode`` is ``"whole"`` when jobs are taken in full in order and
    ``"wrap"`` when only the wrappable part of each job is taken.
    """

    cls: int
    mode: str
    amount: Fraction


@dataclass
class FillQueue:
    entries: list[QEntry] = field(default_factory=list)
    setups: dict[int, Fraction] = field(default_factory=dict)

    @property
    def load(self) -> Fraction:
        return sum((self.setups[e.cls] + e.amount for e in self.entries), Fraction(0))

    def classes(self) -> set[int]:
        return {e.cls for e in self.entries}


@dataclass
class SevenPool:
    """Type-7 classes of a typed instance with the orders the fill routine needs."""

    T: Fraction
    info: dict[int, SevenInfo]
    zero_obligatory: list[int]   # index order
    by_density: list[int]        # positive obligatory load, by s / wrappable load

    @classmethod
    def build(cls, typed: TypedInstance) -> "SevenPool":
        inst, T = typed.base, typed.T
        info = {}
        for i in typed.by_type[SEVEN]:
            s = inst.setups[i]
            jobs = inst.class_jobs[i]
            sizes = tuple(inst.jobs[j].p for j in jobs)
            room = T / 3 - s
            info[i] = SevenInfo(i, s, inst.class_totals[i], jobs, sizes,
                                tuple(p if p <= room else room for p in sizes))
        zero = [i for i, c in info.items() if c.obligatory == 0]
        dens = sorted((i for i, c in info.items() if c.obligatory > 0),
                      key=lambda i: (info[i].s / info[i].wrap_total, i))
        return cls(T, info, zero, dens)


def fill_below(queue: FillQueue, F: Fraction, lo: Fraction, hi: Fraction, pool: SevenPool,
               taken: set[int]) -> Fraction:
    """Add type-7 load with setups in ``(lo, hi]`` to ``queue`` until ``F`` is spent.

    Classes without obligatory load come first and are taken whole; then
    classes with obligatory load contribute only their wrappable parts,
    cheapest setup per unit of wrappable load first.  The last class taken
    may be cut to match ``F`` exactly; a setup may overshoot it.  A setup of
    0 counts as lying in the lowest range.  Returns the unspent budget.
    """
    def in_range(s):
        return (lo < s or (lo == 0 and s == 0)) and s <= hi

    info = pool.info
    for phase, order in (("whole", pool.zero_obligatory), ("wrap", pool.by_density)):
        for i in order:
            if F <= 0:
                return F
            c = info[i]
            if i in taken or not in_range(c.s):
                continue
            avail = c.P if phase == "whole" else c.wrap_total
            taken.add(i)
            queue.setups[i] = c.s
            if avail <= F:
                queue.entries.append(QEntry(i, phase, avail))
                F -= c.s + avail
            else:
                queue.entries.append(QEntry(i, phase, F))
                F = Fraction(0)
    return F


def entry_pieces(entry: QEntry, c: SevenInfo) -> tuple[list, list]:
    """Split a class along a queue entry into (wrapped pieces, remaining pieces)."""
    inside, outside = [], []
    left = entry.amount
    parts = c.sizes if entry.mode == "whole" else c.wrappable
    for j, p, part in zip(c.jobs, c.sizes, parts):
        take = min(part, left)
        left -= take
        if take:
            inside.append((j, take))
        if p - take:
            outside.append((j, p - take))
    return inside, outside


class DeciderState:
    """Machine timelines under construction plus class-level helpers."""

    def __init__(self, typed: TypedInstance):
        self.typed = typed
        self.inst = typed.base
        self.T = typed.T
        self.lines: list[list[Segment]] = []

    def machine(self) -> int:
        self.lines.append([])
        return len(self.lines) - 1

    def block(self, q: int, i: int, start: Fraction) -> Fraction:
        """Whole class ``i`` as one setup plus all its jobs from ``start``; returns the end."""
        inst, line = self.inst, self.lines[q]
        s = inst.setups[i]
        if s:
            line.append(Segment(start, start + s, i))
        t = start + s
        for j in inst.class_jobs[i]:
            p = inst.jobs[j].p
            line.append(Segment(t, t + p, i, j))
            t += p
        return t

    def load(self, i: int) -> Fraction:
        return self.typed.load(i)

    def place_wrapped(self, groups: list[WrapGroup], machines: Sequence[int]) -> None:
        if not groups:
            return
        third = self.T / 3
        template = WrapTemplate(tuple(Gap(q, Fraction(0), third) for q in machines))
        for q, seg in wrap_lj(WrapSequence(tuple(groups)), template):
            self.lines[q].append(seg)

    def attach(self, sched: Schedule) -> None:
        for timeline in sched.machines:
            self.lines.append(list(timeline))

    def result(self) -> Schedule:
        return Schedule.from_lists(line for line in self.lines if line)


def _nice_full_classes(typed: TypedInstance) -> list[NiceClass]:
    inst = typed.base
    return [NiceClass(i, t, inst.setups[i], tuple((j, inst.jobs[j].p) for j in inst.class_jobs[i]))
            for i, t in enumerate(typed.types) if t <= ClassType.SIX]


def _merge(pieces) -> tuple[tuple[int, Fraction], ...]:
    total: dict[int, Fraction] = {}
    for j, a in pieces:
        total[j] = total.get(j, Fraction(0)) + a
    return tuple((j, a) for j, a in total.items() if a)


def decide(instance: Instance, T, *, matching: str = "greedy") -> Schedule | Reject:
    """Schedule with makespan at most ``4T/3``, or a :class:`Reject` proving ``T < OPT``."""
    T = as_fraction(T)
    if T <= 0:
        return Reject("guess must be positive")
    lb = lower_bound(instance)
    if T < lb:
        return Reject(f"guess {T} is below the lower bound {lb}")
    try:
        typed = normalize_and_type(instance, T)
    except InfeasibleGuess as exc:
        return Reject(str(exc))
    m = instance.machines
    if setup_load_bound(typed) > m * T:
        return Reject("setups forced by the guess overload the machines")
    b = DeciderState(typed)
    eights, nines = typed.by_type[EIGHT], typed.by_type[NINE]
    k = min(len(eights), len(nines))
    if k > m:
        return Reject("not enough machines for the type 8/9 pairs")
    for x, y in zip(eights[:k], nines[:k]):
        q = b.machine()
        b.block(q, y, b.block(q, x, Fraction(0)))
    if len(nines) > k:
        return branch_nine_remain(b, nines[k:])
    return branch_eight_remain(b, eights[k:], matching=matching)


def match_eight_ten(typed: TypedInstance, eights: Sequence[int], tens: Sequence[int],
                    mode: str = "greedy") -> list[tuple[int, int]]:
    """Maximal matching of type-8 with type-10 classes whose combined load fits ``4T/3``."""
    limit = 4 * typed.T / 3
    load = typed.load
    if mode == "maximum":
        import networkx as nx

        g = nx.Graph()
        left = [("8", i) for i in eights]
        g.add_nodes_from(left)
        g.add_nodes_from(("10", i) for i in tens)
        g.add_edges_from((("8", a), ("10", c)) for a in eights for c in tens
                         if load(a) + load(c) <= limit)
        mate = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
        return sorted((a, mate[("8", a)][1]) for a in eights if ("8", a) in mate)
    if mode != "greedy":
        raise ValueError(f"unknown matching mode {mode!r}")
    free = list(tens)
    pairs = []
    for a in eights:
        for pos, c in enumerate(free):
            if load(a) + load(c) <= limit:
                pairs.append((a, c))
                del free[pos]
                break
    return pairs


@dataclass
class _EightPlan:
    rprime: int
    big1: list[int]
    big2: list[int]
    omega1: int
    q1: FillQueue
    q2: FillQueue
    r2_pairs: list[tuple[int, int]]
    star_partner: Optional[int]
    star_in_nice: bool


def branch_eight_remain(b: DeciderState, eights: Sequence[int], *, matching: str = "greedy"
                        ) -> Schedule | Reject:
    """Finish a guess when no type-9 class is left after the 8/9 pairing."""
    typed, T, m = b.typed, b.T, b.inst.machines
    third = T / 3
    tens = typed.by_type[TEN]
    pairs = match_eight_ten(typed, eights, tens, matching)
    matched8 = {a for a, _ in pairs}
    matched10 = {c for _, c in pairs}
    for a, c in pairs:
        q = b.machine()
        b.block(q, c, b.block(q, a, Fraction(0)))
    left8 = [a for a in eights if a not in matched8]
    left10 = [c for c in tens if c not in matched10]
    star = left8.pop() if len(left8) % 2 else None
    m810: list[int] = []
    for x, y in zip(left8[::2], left8[1::2]):
        q = b.machine()
        b.block(q, y, b.block(q, x, third))
        m810.append(q)
    for c in left10:
        q = b.machine()
        b.block(q, c, third)
        m810.append(q)
    if len(b.lines) > m:
        return Reject("not enough machines for the type 8/10 classes")

    pool = SevenPool.build(typed)
    info = pool.info
    big1 = sorted((i for i, c in info.items() if c.s > T / 9 and T / 6 < c.load <= third),
                  key=lambda i: (-info[i].load, i))
    big2 = sorted((i for i, c in info.items() if c.s <= T / 9 and 2 * T / 9 < c.load <= third),
                  key=lambda i: (-info[i].load, i))
    r2_candidates = [i for i, c in info.items() if T / 2 < c.load <= 5 * T / 9]
    fixed = _nice_full_classes(typed)
    count, rest = fixed_terms(fixed, T)
    seven_load = sum((c.load for c in info.values()), Fraction(0))
    star_load = typed.load(star) if star is not None else Fraction(0)
    base = len(b.lines)

    plan = None
    for rprime in range(len(m810) + 1):
        n = len(m810)
        r1 = min(rprime, len(big1))
        r2 = min(n - rprime, len(big2))
        taken = set(big1[:r1]) | set(big2[:r2])
        omega = n - r1 - r2
        rpp = rprime - r1
        F1, F2 = T / 6 * rpp, 2 * T / 9 * (omega - rpp)
        q2, q1 = FillQueue(), FillQueue()
        fill_below(q2, F2, Fraction(0), T / 9, pool, taken)
        fill_below(q1, F1, T / 9, T / 6, pool, taken)
        l1 = q1.load
        if l1 < F1:
            fill_below(q1, F1 - l1, Fraction(0), T / 9, pool, taken)
        untouched = [i for i in r2_candidates if i not in taken]
        r2_pairs = list(zip(untouched[0:len(untouched) - 1:2], untouched[1::2]))
        odd = untouched[-1] if len(untouched) % 2 else None
        partner = None
        if odd is not None and star is not None and star_load + info[odd].load > T:
            partner = odd
        placed = {i for pr in r2_pairs for i in pr} | ({partner} if partner is not None else set())
        # type-7 load that ends up in the nice part
        r7 = seven_load - sum((info[i].load for i in taken | placed), Fraction(0))
        for e in q1.entries + q2.entries:
            c = info[e.cls]
            if e.amount < c.P:
                r7 += c.s + c.P - e.amount
        star_in_nice = star is not None and partner is None
        need = machines_for(count, rest + r7 + (star_load if star_in_nice else 0), T)
        avail = m - base - len(r2_pairs) - (1 if partner is not None else 0)
        if avail >= need:
            plan = _EightPlan(rprime, big1[:r1], big2[:r2], rpp, q1, q2, r2_pairs, partner,
                              star_in_nice)
            break
    if plan is None:
        return Reject("no split of the type-7 load leaves enough machines for the nice part")

    # materialize the chosen guess
    slots = iter(m810)
    for i in plan.big1 + plan.big2:
        b.block(next(slots), i, Fraction(0))
    rest_slots = list(slots)
    outside: list[tuple[int, Fraction]] = []
    touched: set[int] = set(plan.big1) | set(plan.big2)
    for queue, machines in ((plan.q1, rest_slots[:plan.omega1]), (plan.q2, rest_slots[plan.omega1:])):
        groups = []
        entries = queue.entries[-1:] + queue.entries[:-1]
        for e in entries:
            c = info[e.cls]
            inside, out = entry_pieces(e, c)
            touched.add(e.cls)
            outside.extend(out)
            groups.append(WrapGroup(e.cls, c.s, tuple(inside)))
        b.place_wrapped(groups, machines)
    for x, y in plan.r2_pairs:
        q = b.machine()
        b.block(q, y, b.block(q, x, Fraction(0)))
        touched.update((x, y))
    if plan.star_partner is not None:
        q = b.machine()
        b.block(q, plan.star_partner, b.block(q, star, Fraction(0)))
        touched.add(plan.star_partner)
    nice_classes = list(fixed)
    if plan.star_in_nice:
        inst = b.inst
        nice_classes.append(NiceClass(star, EIGHT, inst.setups[star],
                                      tuple((j, inst.jobs[j].p) for j in inst.class_jobs[star])))
    by_class: dict[int, list] = {}
    for j, a in outside:
        by_class.setdefault(b.inst.jobs[j].cls, []).append((j, a))
    for i, c in info.items():
        if i in touched:
            pieces = _merge(by_class.get(i, ()))
        else:
            pieces = tuple(zip(c.jobs, c.sizes))
        if pieces:
            nice_classes.append(NiceClass(i, SEVEN, c.s, pieces))
    nice = NiceInstance(T, tuple(nice_classes))
    sched = solve_nice(nice, m - len(b.lines))
    if isinstance(sched, Reject):
        return sched
    b.attach(sched)
    return b.result()


@dataclass
class _NinePlan:
    patterns: list[tuple]
    pool_classes: list[int]
    entries: list[QEntry]
    e_first: bool
    split_extra: Fraction


def branch_nine_remain(b: DeciderState, nines: Sequence[int]) -> Schedule | Reject:
    """Finish a guess when type-9 classes remain, hence no type-8 class does."""
    typed, T, inst, m = b.typed, b.T, b.inst, b.inst.machines
    third, four3 = T / 3, 4 * T / 3
    hard = sorted(list(nines) + typed.by_type[TEN])
    base = len(b.lines)
    if base + len(hard) > m:
        return Reject("not enough machines for the type 9/10 classes")
    pool = SevenPool.build(typed)
    info = pool.info

    big_jobs = sorted(((c.s, i, j) for i, c in info.items() for j, p in zip(c.jobs, c.sizes)
                       if 2 * c.s + p > 2 * third), key=lambda t: (t[0], t[1], t[2]))
    J = [j for _, _, j in big_jobs]
    in_J = set(J)
    J_total: dict[int, Fraction] = {}
    for j in J:
        i = inst.jobs[j].cls
        J_total[i] = J_total.get(i, Fraction(0)) + inst.jobs[j].p

    # eligible (non-J) jobs per class with prefix sums, used by the wrap sequence
    eligible: dict[int, tuple[list[int], list[Fraction]]] = {}
    for i, c in info.items():
        js = [j for j in c.jobs if j not in in_J]
        eligible[i] = (js, list(accumulate((inst.jobs[j].p for j in js), initial=Fraction(0))))

    group1 = [i for i, c in info.items() if c.load <= third]
    group2 = sorted((i for i, c in info.items() if c.load > third and i not in J_total),
                    key=lambda i: (info[i].s, i))
    group3 = sorted((i for i, c in info.items() if c.load > third and i in J_total
                     and c.P - J_total[i] > 0),
                    key=lambda i: (info[i].s / (info[i].P - J_total[i]), i))
    priority = group1 + group2 + group3

    free = {i: T - typed.load(i) for i in hard}
    order = sorted(hard, key=lambda i: (-free[i], i))
    fixed = _nice_full_classes(typed)
    count, rest = fixed_terms(fixed, T)
    seven_load = sum((c.load for c in info.values()), Fraction(0))
    avail = m - base - len(hard)

    plan = None
    for x in range(len(order) + 1):
        head = order[:x]
        patterns = []
        k = ptr = 0
        while k + 1 < x and ptr < len(J):
            j = J[ptr]
            s_j = inst.setup_of_job(j)
            if free[head[k]] + free[head[k + 1]] < s_j + third:
                break
            patterns.append(("pair", head[k], head[k + 1], j))
            k += 2
            ptr += 1
        while k < x and ptr < len(J):
            patterns.append(("single", head[k], J[ptr]))
            k += 1
            ptr += 1
        if k < x:
            break  # further guesses leave machines of the head unused
        rest_hard = [i for i in hard if i not in set(head)]
        F = sum((free[i] for i in rest_hard), Fraction(0))

        # class-level outside-nice amounts: pattern pieces first
        placed_out: dict[int, Fraction] = {}
        for pat in patterns:
            j = pat[-1]
            i = inst.jobs[j].cls
            p = inst.jobs[j].p
            amount = p if pat[0] == "pair" else third - info[i].s
            placed_out[i] = placed_out.get(i, Fraction(0)) + amount

        entries: list[QEntry] = []
        for i in priority:
            if F <= 0:
                break
            c = info[i]
            F -= c.s
            if F <= 0:
                break
            js, pre = eligible[i]
            amount = min(pre[-1], F)
            F -= amount
            entries.append(QEntry(i, "whole", amount))
        e_first = False
        split_extra = Fraction(0)
        if entries:
            e = entries[-1]
            c = info[e.cls]
            js, pre = eligible[e.cls]
            if e.amount < pre[-1]:
                pos = bisect_left(pre, e.amount)
                if pre[pos] != e.amount:
                    # job js[pos-1] is split between the sequence and the nice part
                    p_in = e.amount - pre[pos - 1]
                    p_out = pre[pos] - e.amount
                    if c.load <= third:
                        split_extra = pre[-1] - e.amount
                    elif p_out <= third:
                        split_extra = p_out
                    else:
                        e_first = True
                    e.amount += split_extra
        for e in entries:
            placed_out[e.cls] = placed_out.get(e.cls, Fraction(0)) + e.amount
        r7 = seven_load
        for i, amount in placed_out.items():
            c = info[i]
            r7 -= c.load
            if amount < c.P:
                r7 += c.s + c.P - amount
        need = machines_for(count, rest + r7, T)
        if avail >= need:
            plan = _NinePlan(patterns, rest_hard, entries, e_first, split_extra)
            break
    if plan is None:
        return Reject("no guess of the straddling jobs leaves enough machines for the nice part")

    # materialize
    outside: dict[int, Fraction] = {}  # job -> amount placed outside the nice part
    machine_of = {}
    for pat in plan.patterns:
        j = pat[-1]
        i = inst.jobs[j].cls
        s, p = inst.setups[i], inst.jobs[j].p
        if pat[0] == "pair":
            _, c1, c2, _ = pat
            q1, q2 = b.machine(), b.machine()
            b.block(q1, c1, four3 - typed.load(c1))
            a = min(p, four3 - typed.load(c1) - s)
            if s:
                b.lines[q1].append(Segment(Fraction(0), s, i))
            b.lines[q1].append(Segment(s, s + a, i, j))
            t = b.block(q2, c2, Fraction(0))
            if p - a:
                if s:
                    b.lines[q2].append(Segment(t, t + s, i))
                b.lines[q2].append(Segment(t + s, t + s + p - a, i, j))
            outside[j] = p
        else:
            _, c1, _ = pat
            q = b.machine()
            if s:
                b.lines[q].append(Segment(Fraction(0), s, i))
            b.lines[q].append(Segment(s, third, i, j))
            b.block(q, c1, third)
            outside[j] = third - s

    gaps = []
    for r, i in enumerate(plan.pool_classes):
        q = b.machine()
        L = typed.load(i)
        if r % 2 == 0:
            b.block(q, i, four3 - L)
            gaps.append(Gap(q, Fraction(0), four3 - L))
        else:
            b.block(q, i, Fraction(0))
            gaps.append(Gap(q, L, four3))

    groups = []
    for e in plan.entries:
        js, pre = eligible[e.cls]
        left = e.amount
        pieces = []
        for j in js:
            if not left:
                break
            take = min(inst.jobs[j].p, left)
            pieces.append((j, take))
            outside[j] = outside.get(j, Fraction(0)) + take
            left -= take
        groups.append(WrapGroup(e.cls, info[e.cls].s, tuple(pieces)))
    if plan.e_first and groups:
        last = groups.pop()
        # the split job goes first so that it ends below T/3 in the first gap
        pieces = (last.pieces[-1],) + last.pieces[:-1]
        groups.insert(0, WrapGroup(last.cls, last.setup, pieces))
    if groups:
        for q, seg in wrap_lj(WrapSequence(tuple(groups)), WrapTemplate(tuple(gaps))):
            b.lines[q].append(seg)

    nice_classes = list(fixed)
    for i, c in info.items():
        pieces = tuple((j, p - outside.get(j, 0)) for j, p in zip(c.jobs, c.sizes)
                       if p - outside.get(j, 0))
        if pieces:
            nice_classes.append(NiceClass(i, SEVEN, c.s, pieces))
    sched = solve_nice(NiceInstance(T, tuple(nice_classes)), m - len(b.lines))
    if isinstance(sched, Reject):
        return sched
    b.attach(sched)
    return b.result()
