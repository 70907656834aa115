"""Randomized structural-property harness."""

from .generators import (adjacency_safe_jitter, random_rigid_motion,
                         sample_cloud, sample_small_ball, split_parts)
from .harness import (PROPERTY_IDS, CheckRecord, PropertyCase,
                      PropertyResult, applicable_functionals, default_cases,
                      run_all, run_property, write_failures_jsonl)

__all__ = [
    "PROPERTY_IDS",
    "CheckRecord",
    "PropertyCase",
    "PropertyResult",
    "default_cases",
    "adjacency_safe_jitter",
    "applicable_functionals",
    "random_rigid_motion",
    "run_all",
    "run_property",
    "sample_cloud",
    "sample_small_ball",
    "split_parts",
    "write_failures_jsonl",
]
