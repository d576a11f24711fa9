"""Deterministic derivation of independent RNG streams from one base seed.

Every source of randomness in a run (workload generation, per-flow channel
draws, the strategy-choice draw of probabilistic mixtures) gets its own
stream so that replaying a run with the same base seed is bit-identical and
so that channel draws never depend on scheduling decisions.
"""

from __future__ import annotations

import random

WORKLOAD_STREAM = 0
CHANNEL_STREAM = 1
CHOICE_STREAM = 2

_SUB_SPACE = 2**36


def stream_seed(base_seed: int, tag: int, sub: int = 0) -> int:
    """Map a (base seed, stream tag, sub-stream id) triple to a unique integer."""
    return (base_seed % 2**64) * 2**40 + tag * _SUB_SPACE + (sub % _SUB_SPACE)


def stream(base_seed: int, tag: int, sub: int = 0) -> random.Random:
    return random.Random(stream_seed(base_seed, tag, sub))
