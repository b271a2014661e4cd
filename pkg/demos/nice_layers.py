"""Show how a nice instance is laid out: cheap classes sit above a third of T.

    python3 demos/nice_layers.py [seed] [out.svg]
"""

import sys
from fractions import Fraction

from setupsched import ClassType, NiceInstance, compute_l_nice, compute_m_nice, normalize_and_type
from setupsched import solve_nice
from setupsched.gantt import save_gantt
from setupsched.generators import random_nice

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
path = sys.argv[2] if len(sys.argv) > 2 else "nice_layers.svg"
T = 360
inst = random_nice(seed, T=T, classes=10, jobs=30)
typed = normalize_and_type(inst, T)
nice = NiceInstance.from_typed(typed)
m = compute_m_nice(nice)
print("types:", " ".join(t.symbol for t in typed.types))
print(f"obligatory load {compute_l_nice(nice)} -> at least {m} machines")

sched = solve_nice(nice, m)
lowest = min((seg.start for _, seg in sched.segments()
              if not seg.is_setup and typed.types[seg.cls] == ClassType.SEVEN), default=None)
print(f"{sched.num_machines} machines used; earliest cheap piece starts at {lowest} "
      f"(T/3 = {Fraction(T, 3)})")
save_gantt(sched, path, T, title=f"nice instance, seed {seed}")
print(f"chart written to {path}")
