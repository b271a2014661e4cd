"""Instance generators, including instances whose optimum is known exactly."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import ClassType, Instance, Job, lower_bound
from .schedule import Schedule, Segment, validate

CERTIFICATES = ("packed", "single_class", "manual")


@dataclass(frozen=True)
class CertifiedInstance:
    instance: Instance
    opt: Fraction
    certificate: str

    def __post_init__(self):
        if self.certificate not in CERTIFICATES:
            raise ValueError(f"unknown certificate kind {self.certificate!r}")


def _split(total: int, parts: int, cap: int, rng: random.Random) -> list[int]:
    """``parts`` positive integers summing to ``total``, each at most ``cap``."""
    parts = max(parts, -(-total // cap))
    parts = min(parts, total)
    cuts = sorted(rng.sample(range(1, total), parts - 1)) if parts > 1 else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    # rebalance anything above the cap onto the smallest parts
    over = [k for k, v in enumerate(sizes) if v > cap]
    while over:
        k = over.pop()
        extra = sizes[k] - cap
        sizes[k] = cap
        for t in sorted(range(len(sizes)), key=lambda t: sizes[t]):
            room = cap - sizes[t]
            move = min(room, extra)
            sizes[t] += move
            extra -= move
            if not extra:
                break
    return sizes


def packed(m: int, opt: int, *, seed: int = 0, jobs_per_class: int = 3,
           max_setup: Optional[int] = None) -> CertifiedInstance:
    """``m`` classes, each with setup plus processing exactly ``opt``."""
    if m < 1 or opt < 2:
        raise ValueError("need m >= 1 and opt >= 2")
    rng = random.Random(seed)
    top = opt - 1 if max_setup is None else min(max_setup, opt - 1)
    setups, jobs = [], []
    for i in range(m):
        s = rng.randint(0, top)
        setups.append(s)
        k = rng.randint(1, jobs_per_class)
        for p in _split(opt - s, k, opt - s, rng):
            jobs.append((i, p))
    return CertifiedInstance(Instance.build(m, setups, jobs), Fraction(opt), "packed")


def single_class(m: int, s: int, sizes: Sequence[int]) -> CertifiedInstance:
    """One class; the optimum is ``max(s + p_max, s + P/m)``."""
    inst = Instance.build(m, [s], [(0, p) for p in sizes])
    P = sum(Fraction(p) for p in sizes)
    return CertifiedInstance(inst, max(s + Fraction(max(sizes)), s + P / m), "single_class")


def random_single_class(seed: int, *, m_max: int = 64, n_max: int = 200) -> CertifiedInstance:
    rng = random.Random(seed)
    m = rng.randint(1, m_max)
    n = rng.randint(1, n_max)
    s = rng.choice([0, rng.randint(1, 50), rng.randint(1, 2000)])
    sizes = [rng.randint(1, rng.choice([10, 100, 1000])) for _ in range(n)]
    return single_class(m, s, sizes)


# (setup range, load range) per type, as fractions of the reference makespan
_TYPE_BOXES = {
    ClassType.ONE: ((Fraction(2, 3), Fraction(1)), (Fraction(1), Fraction(3))),
    ClassType.TWO: ((Fraction(1, 3), Fraction(2, 3)), (Fraction(5, 3), Fraction(3))),
    ClassType.THREE: ((Fraction(1, 3), Fraction(2, 3)), (Fraction(4, 3), Fraction(5, 3))),
    ClassType.FOUR: ((Fraction(1, 3), Fraction(2, 3)), (Fraction(1), Fraction(4, 3))),
    ClassType.FIVE: ((Fraction(1, 3), Fraction(1, 2)), (Fraction(1, 2), Fraction(2, 3))),
    ClassType.SIX: ((Fraction(1, 3), Fraction(4, 9)), (Fraction(1, 3), Fraction(4, 9))),
    ClassType.SEVEN: ((Fraction(0), Fraction(1, 3)), (Fraction(0), Fraction(3, 2))),
    ClassType.EIGHT: ((Fraction(1, 3), Fraction(4, 9)), (Fraction(4, 9), Fraction(1, 2))),
    ClassType.NINE: ((Fraction(1, 3), Fraction(5, 6)), (Fraction(2, 3), Fraction(5, 6))),
    ClassType.TEN: ((Fraction(1, 3), Fraction(1)), (Fraction(5, 6), Fraction(1))),
}


def random_instance(seed: int, *, classes: int = 12, jobs: int = 40, scale: int = 360,
                    weights: Optional[Sequence[float]] = None,
                    machines: Optional[int] = None) -> Instance:
    """Integer instance whose classes aim at all ten types around ``T = scale``.

    ``weights`` biases the type of each class (ten entries, types 1 to 10).
    The machine count defaults to the number that makes the average load
    close to ``scale``, so that guesses near the lower bound see every type.
    """
    if classes < 1 or jobs < classes:
        raise ValueError("need at least one class and at least as many jobs as classes")
    rng = random.Random(seed)
    kinds = list(_TYPE_BOXES)
    w = list(weights) if weights is not None else [1, 1, 1, 1, 1, 1, 4, 2, 2, 2]
    setups: list[int] = []
    loads: list[int] = []
    for _ in range(classes):
        kind = rng.choices(kinds, w)[0]
        (s_lo, s_hi), (l_lo, l_hi) = _TYPE_BOXES[kind]
        s = rng.randint(int(s_lo * scale), max(int(s_lo * scale), int(s_hi * scale) - 1))
        lo = max(int(l_lo * scale) + 1, s + 1)
        hi = max(lo, int(l_hi * scale))
        setups.append(s)
        loads.append(rng.randint(lo, hi))
    # spread jobs: one per class, the rest proportional to processing time
    counts = [1] * classes
    totals = [l - s for s, l in zip(setups, loads)]
    for _ in range(jobs - classes):
        counts[rng.choices(range(classes), totals)[0]] += 1
    job_list = []
    for i in range(classes):
        cap = max(1, scale - setups[i])
        for p in _split(totals[i], counts[i], cap, rng):
            job_list.append((i, p))
    if machines is None:
        total = sum(loads)
        machines = max(1, round(total / scale))
    return Instance.build(machines, setups, job_list)


def random_nice(seed: int, *, T: int = 360, classes: int = 10, jobs: int = 30):
    """Instance that is nice at guess ``T`` (types 1 to 7 and at most one type 8)."""
    rng = random.Random(seed)
    w = [rng.random() for _ in range(7)] + [0.3, 0, 0]
    inst = random_instance(seed, classes=classes, jobs=jobs, scale=T, weights=w)
    from .core import normalize_and_type
    typed = normalize_and_type(inst, T)
    eights = typed.by_type[ClassType.EIGHT]
    if len(eights) > 1 or typed.by_type[ClassType.NINE] or typed.by_type[ClassType.TEN]:
        keep = [i for i, t in enumerate(typed.types)
                if t <= ClassType.SEVEN or (eights and i == eights[0])]
        remap = {i: k for k, i in enumerate(keep)}
        inst = Instance(inst.machines, tuple(inst.setups[i] for i in keep),
                        tuple(Job(remap[jb.cls], jb.p) for jb in inst.jobs if jb.cls in remap))
    return inst


def witness(certified: CertifiedInstance) -> Schedule:
    """A schedule reaching ``certified.opt`` exactly."""
    inst, opt = certified.instance, certified.opt
    if certified.certificate == "packed":
        lines = []
        for i, s in enumerate(inst.setups):
            line = [Segment(Fraction(0), s, i)] if s else []
            t = Fraction(s)
            for j in inst.class_jobs[i]:
                line.append(Segment(t, t + inst.jobs[j].p, i, j))
                t += inst.jobs[j].p
            lines.append(line)
        return Schedule.from_lists(lines)
    if certified.certificate == "single_class":
        s = inst.setups[0]
        lines: list[list[Segment]] = []
        t = opt
        for j in inst.class_jobs[0]:
            rest = inst.jobs[j].p
            while rest:
                if t >= opt:
                    lines.append([Segment(Fraction(0), s, 0)] if s else [])
                    t = Fraction(s)
                take = min(rest, opt - t)
                lines[-1].append(Segment(t, t + take, 0, j))
                t += take
                rest -= take
        return Schedule.from_lists(lines)
    raise ValueError("manual certificates carry no witness")


def oracle_opt(certified: CertifiedInstance) -> Fraction:
    """Exact optimum of a certified instance, after checking a witness and the bound."""
    if certified.certificate == "manual":
        raise ValueError("manual certificates carry no witness")
    inst = certified.instance
    if certified.certificate == "packed":
        if inst.num_classes != inst.machines or any(
                s + P != certified.opt for s, P in zip(inst.setups, inst.class_totals)):
            raise ValueError("packed certificate does not match the instance")
    report = validate(witness(certified), inst, certified.opt)
    if not report.ok or report.makespan != certified.opt:
        raise AssertionError(f"witness fails: {report.violations[:3]}")
    if lower_bound(inst) > certified.opt:
        raise AssertionError("lower bound exceeds the certified optimum")
    return certified.opt
