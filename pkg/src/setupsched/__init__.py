"""Preemptive makespan scheduling with class setup times on identical machines."""

from .core import (ClassType, InfeasibleGuess, Instance, Job, Reject, TypedInstance,
                   classify_class, compute_alpha, lower_bound, normalize_and_type)
from .decider import decide
from .nice import NiceInstance, compute_l_nice, compute_m_nice, solve_nice
from .schedule import Schedule, Segment, ValidationReport, makespan, validate
from .search import SearchConfig, SearchResult, solve, trivial_schedule
from .wrap import WrapGroup, WrapSequence, WrapTemplate, wrap, wrap_lj

__all__ = [
    "ClassType", "InfeasibleGuess", "Instance", "Job", "Reject", "TypedInstance",
    "classify_class", "compute_alpha", "lower_bound", "normalize_and_type", "decide",
    "NiceInstance", "compute_l_nice", "compute_m_nice", "solve_nice", "Schedule", "Segment",
    "ValidationReport", "makespan", "validate", "SearchConfig", "SearchResult", "solve",
    "trivial_schedule", "WrapGroup", "WrapSequence", "WrapTemplate", "wrap", "wrap_lj",
]
