"""Acceptance criteria 1 to 8, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the summary)
or ``python3 tests/test_acceptance.py`` (lines are printed as they finish).
Every comparison is exact unless a criterion names a numeric tolerance.
"""

from __future__ import annotations

import gc
import math
import random
import statistics
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from setupsched import (ClassType, NiceInstance, Reject, SearchConfig, compute_l_nice,  # noqa: E402
                        compute_m_nice, decide, lower_bound, normalize_and_type, solve,
                        solve_nice, validate)
from setupsched.core import Instance  # noqa: E402
from setupsched.generators import (oracle_opt, packed, random_instance, random_nice,  # noqa: E402
                                   single_class)
from setupsched.wrap import WrapGroup, WrapSequence, WrapTemplate, wrap, wrap_lj  # noqa: E402
from wrapfuzz import property_five_case, property_one_case, property_three_case  # noqa: E402

# pinned tolerances
EPS = Fraction(1, 100)
RATIO = Fraction(4, 3) * (1 + EPS)
CERT_MULTIPLIERS = (Fraction(1), Fraction(101, 100), Fraction(3, 2), Fraction(2))
N_PACKED = N_SINGLE = 500
N_RANDOM = 2000
N_NICE = 1000
N_FUZZ = 100_000
R2_MIN = 0.98
DOUBLING_MAX = 4.5
BIG_N, BIG_SECONDS = 10_000, 60.0

RESULTS: dict[int, str] = {}
FALLBACKS: list[str] = []
SOLVES = [0]
CRITERION_6_SOLVES: list[str] = []  # solves whose accepted guess fell below the bound


def report(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[k] = line
    print(line, flush=True)


def timed(fn, *args):
    """Wall time of one call with the cyclic collector paused, as timeit does."""
    gc.collect()
    gc.disable()
    try:
        t0 = time.perf_counter()
        out = fn(*args)
        return time.perf_counter() - t0, out
    finally:
        gc.enable()


def run_solve(inst, tag: str):
    res = solve(inst, SearchConfig(epsilon=EPS))
    SOLVES[0] += 1
    if res.fallback:
        FALLBACKS.append(tag)
    return res


def certified_corpus():
    """500 packed and 500 single-class instances with m <= 64 and n <= 2000."""
    out = []
    for seed in range(N_PACKED):
        rng = random.Random(seed)
        m = rng.randint(1, 64)
        out.append((f"packed-{seed}", packed(m, rng.randint(2, 5000), seed=seed,
                                              jobs_per_class=rng.randint(1, 2000 // m))))
    for seed in range(N_SINGLE):
        rng = random.Random(10**6 + seed)
        m = rng.randint(1, 64)
        n = rng.choice([rng.randint(1, 50), rng.randint(1, 2000)])
        s = rng.choice([0, rng.randint(1, 30), rng.randint(1, 3000)])
        top = rng.choice([10, 100, 1000])
        out.append((f"single-{seed}", single_class(m, s, [rng.randint(1, top) for _ in range(n)])))
    for name, cert in out:
        inst = cert.instance
        assert inst.machines <= 64 and len(inst.jobs) <= 2000, name
    return out


_CORPUS = None


def corpus():
    global _CORPUS
    if _CORPUS is None:
        _CORPUS = certified_corpus()
    return _CORPUS


def test_criterion_1_ratio_on_certificates():
    t0 = time.perf_counter()
    worst, bad, below_lb = Fraction(0), [], []
    for name, cert in corpus():
        opt = oracle_opt(cert)
        res = run_solve(cert.instance, name)
        rep = validate(res.schedule, cert.instance)
        ratio = rep.makespan / opt
        worst = max(worst, ratio)
        if ratio > RATIO or not rep.ok:
            bad.append(name)
        if res.accepted_T < lower_bound(cert.instance):
            below_lb.append(name)
    secs = time.perf_counter() - t0
    ok = not bad and not below_lb
    report(1, ok, f"{len(corpus())} certified instances, worst ratio {float(worst):.6f} "
                  f"(limit {float(RATIO):.6f}), {len(bad)} over, {secs:.1f}s")
    CRITERION_6_SOLVES.extend(below_lb)
    assert ok, bad[:10]


def test_criterion_2_feasibility_on_random_instances():
    t0 = time.perf_counter()
    seen: set[ClassType] = set()
    bad, below_lb = [], []
    for seed in range(N_RANDOM):
        rng = random.Random(seed)
        inst = random_instance(seed, classes=rng.randint(1, 30), jobs=rng.randint(30, 120),
                               scale=rng.choice([18, 36, 72, 360, 720]),
                               machines=rng.choice([None, None, None, rng.randint(1, 40)]))
        res = run_solve(inst, f"random-{seed}")
        rep = validate(res.schedule, inst, Fraction(4, 3) * res.accepted_T)
        if not rep.ok:
            bad.append((seed, [str(v) for v in rep.violations[:2]]))
        if res.accepted_T < lower_bound(inst):
            below_lb.append(seed)
        for T in (lower_bound(inst), res.accepted_T):
            seen.update(normalize_and_type(inst, T).types)
    secs = time.perf_counter() - t0
    ok = not bad and len(seen) == 10 and not below_lb
    report(2, ok, f"{N_RANDOM} random instances, {len(bad)} with violations, "
                  f"{len(seen)}/10 class types seen, {secs:.1f}s")
    CRITERION_6_SOLVES.extend(f"random-{s}" for s in below_lb)
    assert ok, bad[:5]


def test_criterion_3_nice_instances():
    t0 = time.perf_counter()
    fails, over_bound, count = [], [], 0
    seed = 0
    while count < N_NICE:
        rng = random.Random(seed)
        T = rng.choice([9, 36, 360, 720])
        inst = random_nice(seed, T=T, classes=rng.randint(1, 25), jobs=rng.randint(25, 80))
        seed += 1
        typed = normalize_and_type(inst, T)
        nice = NiceInstance.from_typed(typed)
        count += 1
        m_nice = compute_m_nice(nice)
        if math.ceil(compute_l_nice(nice) / T) < m_nice:
            over_bound.append(seed - 1)
        for m in (max(m_nice, 1), m_nice + rng.randint(1, 4)):
            sched = solve_nice(nice, m)
            if isinstance(sched, Reject):
                fails.append((seed - 1, "rejected"))
                continue
            rep = validate(sched, Instance(m, inst.setups, inst.jobs), Fraction(4, 3) * T)
            low = [seg for _, seg in sched.segments() if not seg.is_setup
                   and typed.types[seg.cls] == ClassType.SEVEN and seg.start < Fraction(T, 3)]
            if not rep.ok or low:
                fails.append((seed - 1, "invalid" if not rep.ok else "cheap piece below T/3"))
        if m_nice > 1 and not isinstance(solve_nice(nice, m_nice - 1), Reject):
            fails.append((seed - 1, "accepted below m_nice"))
    secs = time.perf_counter() - t0
    ok = not fails and not over_bound
    report(3, ok, f"{count} nice instances, {len(fails)} construction failures, "
                  f"{len(over_bound)} machine-bound failures, {secs:.1f}s")
    assert ok, (fails[:5], over_bound[:5])


def _time_kernel(kernel, size: int, reps: int = 7) -> float:
    groups = tuple(WrapGroup(i, Fraction(1), ((3 * i, Fraction(2)), (3 * i + 1, Fraction(3)),
                                              (3 * i + 2, Fraction(5))))
                   for i in range(size // 4))
    seq = WrapSequence(groups)
    gaps = WrapTemplate.of((u, 1, 41) for u in range(int(seq.load // 30) + 2))
    return min(timed(kernel, seq, gaps)[0] for _ in range(reps))


def _r_squared(xs, ys) -> float:
    xs, ys = np.asarray(xs, float), np.asarray(ys, float)
    slope, icept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + icept)
    return 1 - float(resid @ resid) / float(((ys - ys.mean()) ** 2).sum())


def test_criterion_4_wrap_properties():
    t0 = time.perf_counter()
    p1 = sum(not property_one_case(s) for s in range(N_FUZZ))
    p3_runs = [property_three_case(s) for s in range(N_FUZZ)]
    p3 = sum(not ok for ok, _ in p3_runs)
    p3_held = sum(held for _, held in p3_runs)
    p5 = sum(not property_five_case(s) for s in range(N_FUZZ))
    sizes = [2000 * 2 ** k for k in range(6)]
    r2 = {}
    for name, kernel in (("wrap", wrap), ("wrap_lj", wrap_lj)):
        r2[name] = _r_squared(sizes, [_time_kernel(kernel, n) for n in sizes])
    secs = time.perf_counter() - t0
    ok = p1 == p3 == p5 == 0 and min(r2.values()) >= R2_MIN
    report(4, ok, f"{N_FUZZ} cases each: placement {p1} fails, budgeted placement {p3} fails "
                  f"({p3_held} with the budget met), stacked parallelism {p5} fails; "
                  f"linear fit R^2 wrap {r2['wrap']:.4f}, wrap_lj {r2['wrap_lj']:.4f} "
                  f"(min {R2_MIN}), {secs:.1f}s")
    assert ok


def test_criterion_5_accept_at_or_above_opt():
    t0 = time.perf_counter()
    rejected = []
    for name, cert in corpus():
        for mult in CERT_MULTIPLIERS:
            T = cert.opt * mult
            got = decide(cert.instance, T)
            if isinstance(got, Reject) or not validate(got, cert.instance,
                                                       Fraction(4, 3) * T).ok:
                rejected.append((name, str(mult), getattr(got, "reason", "invalid")))
    secs = time.perf_counter() - t0
    ok = not rejected
    report(5, ok, f"{len(corpus()) * len(CERT_MULTIPLIERS)} certified guesses, "
                  f"{len(rejected)} rejected, {secs:.1f}s")
    assert ok, rejected[:10]


def test_criterion_6_lower_bound_consistency():
    t0 = time.perf_counter()
    accepted_below = []
    cases = 0
    for seed in range(500):
        rng = random.Random(seed)
        inst = random_instance(seed, classes=rng.randint(1, 20), jobs=rng.randint(20, 60),
                               scale=rng.choice([18, 360]))
        lb = lower_bound(inst)
        for T in (lb - Fraction(1, 10**9), lb * Fraction(999, 1000), lb * Fraction(2, 3),
                  lb / 10, lb * Fraction(rng.randint(1, 999), 1000)):
            cases += 1
            if not isinstance(decide(inst, T), Reject):
                accepted_below.append((seed, T))
    for name, cert in corpus()[::10]:
        res = run_solve(cert.instance, name)
        if res.accepted_T < lower_bound(cert.instance):
            CRITERION_6_SOLVES.append(name)
    secs = time.perf_counter() - t0
    ok = not accepted_below and not CRITERION_6_SOLVES
    report(6, ok, f"{cases} guesses below the bound, {len(accepted_below)} accepted; "
                  f"{len(CRITERION_6_SOLVES)} solves accepted below the bound, {secs:.1f}s")
    assert ok


def _scaling_instance(n: int, seed: int) -> Instance:
    return random_instance(seed, classes=max(1, n // 10), jobs=n)


def test_criterion_7_runtime_scaling():
    sizes = [1250, 2500, 5000, BIG_N]
    medians = []
    for n in sizes:
        times = []
        for seed in range(3):
            inst = _scaling_instance(n, seed)
            times.append(timed(run_solve, inst, f"scale-{n}-{seed}")[0])
        medians.append(statistics.median(times))
    ratios = [b / a for a, b in zip(medians, medians[1:])]
    big = medians[-1]
    ok = max(ratios) <= DOUBLING_MAX and big <= BIG_SECONDS
    report(7, ok, "median seconds " + ", ".join(f"n={n}: {t:.2f}" for n, t in zip(sizes, medians))
           + f"; doubling ratios {', '.join(f'{r:.2f}' for r in ratios)} (max {DOUBLING_MAX}); "
           f"n={BIG_N} in {big:.2f}s (max {BIG_SECONDS:.0f})")
    assert ok


def test_criterion_8_no_fallback():
    # a batch of its own so the criterion is meaningful when run alone
    for seed in range(200):
        run_solve(random_instance(50_000 + seed, classes=12, jobs=40), f"extra-{seed}")
    ok = not FALLBACKS
    report(8, ok, f"{SOLVES[0]} solves across the suite, {len(FALLBACKS)} fell back")
    assert ok, FALLBACKS[:10]


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print(f"{8 - failed}/8 criteria passed")
    sys.exit(1 if failed else 0)
