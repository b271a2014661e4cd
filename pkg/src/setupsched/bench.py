"""Run the solver over a corpus and tabulate the outcome."""

from __future__ import annotations

import json
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .core import Instance
from .generators import CertifiedInstance
from .io import dumps, fmt, instance_to_dict, certified_to_dict
from .schedule import validate
from .search import SearchConfig, solve


class BenchValidationError(RuntimeError):
    """A solver output failed validation; ``dump`` holds the instance document."""

    def __init__(self, name: str, detail: str, dump: str):
        super().__init__(f"{name}: {detail}")
        self.name = name
        self.dump = dump


@dataclass(frozen=True)
class BenchRow:
    name: str
    epsilon: Fraction
    n: int
    machines: int
    makespan: Fraction
    accepted_T: Fraction
    opt: Optional[Fraction]
    ratio: Optional[Fraction]
    decide_calls: int
    fallback: bool
    seconds: float


Entry = Union[Instance, CertifiedInstance]


def _run(name: str, entry: Entry, eps: Fraction) -> BenchRow:
    cert = entry if isinstance(entry, CertifiedInstance) else None
    inst = cert.instance if cert else entry
    t0 = time.perf_counter()
    res = solve(inst, SearchConfig(epsilon=eps))
    seconds = time.perf_counter() - t0
    report = validate(res.schedule, inst, Fraction(4, 3) * res.accepted_T)
    if not report.ok:
        doc = certified_to_dict(cert) if cert else instance_to_dict(inst)
        raise BenchValidationError(name, "; ".join(map(str, report.violations[:5])), dumps(doc))
    opt = cert.opt if cert else None
    return BenchRow(name, eps, len(inst.jobs), inst.machines, report.makespan, res.accepted_T, opt,
                    report.makespan / opt if opt else None, res.decide_calls, res.fallback,
                    seconds)


def bench(corpus: Sequence[tuple[str, Entry]], epsilons: Sequence = (Fraction(1, 100),), *,
          workers: int = 1) -> list[BenchRow]:
    """One row per (instance, epsilon), ordered by corpus position then epsilon."""
    tasks = [(name, entry, Fraction(eps)) for name, entry in corpus for eps in epsilons]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_run, *zip(*tasks)))
    return [_run(*t) for t in tasks]


def load_corpus(directory) -> list[tuple[str, Entry]]:
    from .io import read_instance
    return [(p.stem, read_instance(p)) for p in sorted(Path(directory).glob("*.json"))]


def _cell(v) -> object:
    if isinstance(v, Fraction):
        return fmt(v)
    return v


def rows_to_json(rows: Sequence[BenchRow]) -> str:
    return json.dumps([{k: _cell(v) for k, v in asdict(r).items()} for r in rows], indent=1)


def rows_to_text(rows: Sequence[BenchRow]) -> str:
    head = f"{'instance':<24}{'eps':>8}{'n':>7}{'m':>6}{'makespan':>12}{'T':>12}{'ratio':>8}" \
           f"{'calls':>7}{'sec':>9}"
    lines = [head, "-" * len(head)]
    for r in rows:
        ratio = f"{float(r.ratio):.4f}" if r.ratio is not None else "-"
        lines.append(f"{r.name[:23]:<24}{str(r.epsilon):>8}{r.n:>7}{r.machines:>6}"
                     f"{float(r.makespan):>12.3f}{float(r.accepted_T):>12.3f}{ratio:>8}"
                     f"{r.decide_calls:>7}{r.seconds:>9.3f}")
    if rows:
        worst = max((r.ratio for r in rows if r.ratio is not None), default=None)
        lines.append(f"{len(rows)} runs, median {statistics.median(r.seconds for r in rows):.3f}s"
                     + (f", worst ratio {float(worst):.4f}" if worst is not None else ""))
    return "\n".join(lines) + "\n"
