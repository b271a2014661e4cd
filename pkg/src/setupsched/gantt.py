"""Static SVG Gantt charts of schedules."""

from __future__ import annotations

import io
from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .schedule import Schedule, makespan  # noqa: E402

_MARKS = ((Fraction(1, 3), "T/3"), (Fraction(2, 3), "2T/3"), (Fraction(1), "T"),
          (Fraction(4, 3), "4T/3"))


def render_gantt(schedule: Schedule, T=None, *, title: Optional[str] = None) -> str:
    """SVG text with one row per machine.

    Setups are drawn hatched in a darker shade of their class colour.  When
    ``T`` is given the axis carries marks at a third, two thirds, one and
    four thirds of it.  Output is byte-identical for identical input.
    """
    rows = max(1, schedule.num_machines)
    span = makespan(schedule)
    horizon = max(float(span), float(Fraction(4, 3) * T) if T is not None else 0.0, 1.0)
    cmap = plt.get_cmap("tab20")
    with plt.rc_context({"svg.hashsalt": "setupsched", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(10, 1 + 0.4 * rows))
        for q, timeline in enumerate(schedule.machines):
            for seg in timeline:
                width = float(seg.end - seg.start)
                colour = cmap(seg.cls % 20)
                if seg.is_setup:
                    ax.add_patch(Rectangle((float(seg.start), q - 0.4), width, 0.8,
                                           facecolor=colour, edgecolor="black", hatch="///",
                                           linewidth=0.6, alpha=0.55))
                else:
                    ax.add_patch(Rectangle((float(seg.start), q - 0.4), width, 0.8,
                                           facecolor=colour, edgecolor="black", linewidth=0.6))
                    if width > horizon / 40:
                        ax.text(float(seg.start) + width / 2, q, f"{seg.cls}:{seg.job}",
                                ha="center", va="center", fontsize=6)
        if T is not None:
            for frac, label in _MARKS:
                x = float(frac * T)
                ax.axvline(x, color="grey", linestyle="--", linewidth=0.7)
                ax.text(x, 1.0, label, ha="center", va="bottom", fontsize=7,
                        transform=ax.get_xaxis_transform())
        ax.set_xlim(0, horizon * 1.02)
        ax.set_ylim(rows - 0.4, -0.6)
        ax.set_yticks(range(schedule.num_machines))
        ax.set_yticklabels([f"M{q}" for q in range(schedule.num_machines)])
        ax.set_xlabel("time")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
        plt.close(fig)
    return buf.getvalue()


def save_gantt(schedule: Schedule, path, T=None, **kwargs) -> None:
    with open(path, "w") as fh:
        fh.write(render_gantt(schedule, T, **kwargs))
