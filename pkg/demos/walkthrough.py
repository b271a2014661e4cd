"""Generate a certified instance, solve it, check it and draw it.

    python3 demos/walkthrough.py [out_dir]
"""

import sys
from fractions import Fraction
from pathlib import Path

from setupsched import SearchConfig, solve, validate
from setupsched.gantt import save_gantt
from setupsched.generators import oracle_opt, packed

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
cert = packed(6, 60, seed=11, jobs_per_class=4)
opt = oracle_opt(cert)
inst = cert.instance
print(f"{inst.machines} machines, {inst.num_classes} classes, {len(inst.jobs)} jobs, OPT = {opt}")

res = solve(inst, SearchConfig(epsilon=Fraction(1, 100)))
rep = validate(res.schedule, inst, Fraction(4, 3) * res.accepted_T)
print(f"accepted guess {res.accepted_T} after {res.decide_calls} decisions "
      f"(bracket lower end {res.lower})")
print(f"makespan {rep.makespan} = {float(rep.makespan / opt):.4f} x OPT, "
      f"{'valid' if rep.ok else rep.violations}")
print(f"setups per class: {list(rep.census)}")

save_gantt(res.schedule, out / "walkthrough.svg", res.accepted_T, title="packed instance")
print(f"chart written to {out / 'walkthrough.svg'}")
