"""Deterministic random streams.

All randomness in the package flows through :func:`stream`, which builds a
Philox counter-based generator from an integer seed and a structured path.
Philox is a named, portable 64-bit counter-based generator; the same
(seed, path) pair yields the same stream on every platform, and distinct
paths yield independent streams regardless of how much of any other stream
has been consumed.
"""

import numpy as np

__all__ = ["stream"]


def stream(seed, *path):
    """Return a ``numpy.random.Generator`` for the given seed and purpose.

    Args:
        seed: base integer seed (non-negative).
        *path: integers identifying the consumer (module constant, start
            index, trial index, ...). Different paths give independent
            streams for the same seed.
    """
    if seed is None:
        raise ValueError("seed must be an integer, not None")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(ss))
