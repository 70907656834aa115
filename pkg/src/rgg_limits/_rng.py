"""Counter-based substreams so parallel and serial runs draw identical numbers.

Every replication / trial / shell derives its own generator from
(master seed, *path) via SeedSequence spawn keys; streams never overlap and
never depend on scheduling order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "derive_seed"]


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Independent Generator for the given (master_seed, path) address."""
    ss = np.random.SeedSequence(int(master_seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(master_seed: int, *path: int) -> int:
    """Integer seed addressed by (master_seed, path), for APIs taking ints."""
    ss = np.random.SeedSequence(int(master_seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, np.uint64)[0])
