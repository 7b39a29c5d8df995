"""Reproducible, splittable random streams.

A stream is identified by ``(master_seed, stream_id)``. The pair is turned
into a 128-bit Philox key: the low word is the master seed and the high word
is ``mix64(stream_id ^ mix64(master_seed))``. ``mix64`` is the SplitMix64
finalizer, a bijection on 64-bit integers, so distinct stream ids under one
master seed always get distinct keys. Philox is counter-based, so distinct
keys give independent sequences with period 2**256 each.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit unsigned integer."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_stream_id(*parts: int) -> int:
    """Fold integer labels into one 64-bit stream id: ``h = mix64(h ^ part)``."""
    h = 0
    for part in parts:
        h = mix64(h ^ (int(part) & MASK64))
    return h


class RandomStream:
    """Single-owner random source keyed by ``(master_seed, stream_id)``.

    Never share one instance between concurrent tasks; derive a
    :meth:`substream` per task instead.
    """

    __slots__ = ("master_seed", "stream_id", "generator")

    def __init__(self, master_seed: int, stream_id: int = 0):
        if not 0 <= master_seed <= MASK64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if not 0 <= stream_id <= MASK64:
            raise ValueError("stream_id must be an unsigned 64-bit integer")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        high = mix64(self.stream_id ^ mix64(self.master_seed))
        key = self.master_seed | (high << 64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def substream(self, *parts: int) -> RandomStream:
        """Child stream whose id is derived from this stream's id and ``parts``."""
        return RandomStream(self.master_seed, derive_stream_id(self.stream_id, *parts))

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, stream_id={self.stream_id})"
