"""JSON documents for instances and schedules.

Rationals travel as ``"p/q"`` strings so nothing is lost between tools.
Plain integers are accepted on input as well.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .core import Instance, Job
from .generators import CERTIFICATES, CertifiedInstance
from .schedule import Schedule, Segment


class MalformedInput(ValueError):
    """A document that does not describe a valid instance or schedule."""


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value: Any, what: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise MalformedInput(f"{what}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"{what}: cannot read {value!r} as a rational") from exc
    raise MalformedInput(f"{what}: expected a 'p/q' string or an integer, got {type(value).__name__}")


def instance_to_dict(instance: Instance) -> dict:
    return {
        "machines": instance.machines,
        "classes": [{"setup": fmt(s)} for s in instance.setups],
        "jobs": [{"class": j.cls, "time": fmt(j.p)} for j in instance.jobs],
    }


def instance_from_dict(doc: Any) -> Instance:
    try:
        m = doc["machines"]
        setups = tuple(parse_rational(c["setup"], f"classes[{i}].setup")
                       for i, c in enumerate(doc["classes"]))
        jobs = tuple(Job(int(j["class"]), parse_rational(j["time"], f"jobs[{k}].time"))
                     for k, j in enumerate(doc["jobs"]))
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"instance document is missing a field: {exc}") from exc
    if not isinstance(m, int) or isinstance(m, bool):
        raise MalformedInput("machines must be an integer")
    try:
        return Instance(m, setups, jobs)
    except (ValueError, TypeError) as exc:
        raise MalformedInput(str(exc)) from exc


def certified_to_dict(cert: CertifiedInstance) -> dict:
    doc = instance_to_dict(cert.instance)
    doc["opt"] = fmt(cert.opt)
    doc["certificate"] = cert.certificate
    return doc


def load_instance_doc(doc: Any) -> Union[Instance, CertifiedInstance]:
    """An instance, or a certified one when the document carries ``opt``."""
    inst = instance_from_dict(doc)
    if "opt" not in doc:
        return inst
    kind = doc.get("certificate", "manual")
    if kind not in CERTIFICATES:
        raise MalformedInput(f"unknown certificate kind {kind!r}")
    return CertifiedInstance(inst, parse_rational(doc["opt"], "opt"), kind)


def schedule_to_dict(schedule: Schedule) -> dict:
    machines = []
    for timeline in schedule.machines:
        row = []
        for seg in timeline:
            item = {"kind": seg.kind, "class": seg.cls}
            if seg.job is not None:
                item["job"] = seg.job
            item["start"] = fmt(seg.start)
            item["end"] = fmt(seg.end)
            row.append(item)
        machines.append(row)
    return {"machines": machines}


def schedule_from_dict(doc: Any) -> Schedule:
    try:
        rows = []
        for q, timeline in enumerate(doc["machines"]):
            row = []
            for k, item in enumerate(timeline):
                where = f"machines[{q}][{k}]"
                kind = item["kind"]
                job = item.get("job")
                if kind not in ("setup", "piece") or (kind == "piece") != (job is not None):
                    raise MalformedInput(f"{where}: kind {kind!r} does not match job {job!r}")
                row.append(Segment(parse_rational(item["start"], where + ".start"),
                                   parse_rational(item["end"], where + ".end"),
                                   int(item["class"]), None if job is None else int(job)))
            rows.append(tuple(row))
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInput(f"schedule document is malformed: {exc}") from exc
    return Schedule(tuple(rows))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def _read(path: Union[str, Path]) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: not JSON ({exc})") from exc


def read_instance(path) -> Union[Instance, CertifiedInstance]:
    return load_instance_doc(_read(path))


def read_schedule(path) -> Schedule:
    return schedule_from_dict(_read(path))


def write_json(path: Optional[Union[str, Path]], doc: dict) -> None:
    """Write ``doc`` to ``path``, or to stdout when ``path`` is None or ``-``."""
    text = dumps(doc)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)
