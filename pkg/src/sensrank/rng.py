"""Deterministic substreams from a counter-based generator.

Layout: one Philox instance per (seed, stream, block) triple with

  key     = seed (low 64 bits) | stream_id (high 64 bits)
  counter = block << 128

stream_id hashes arbitrary labels (cell coordinates of a sweep, routine
names, ...) through blake2b, so adding cells to a grid or reordering the
enumeration never changes the draws any existing cell sees; block is the
replication index.  Each triple owns 2^128 counter values, far beyond any
reachable draw count.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_id(*parts) -> int:
    """Stable 64-bit hash of a label tuple.

    Floats are canonicalised through repr (shortest round-trip form) so
    equal values hash equally across runs and platforms.
    """
    text = "\x1f".join(repr(p) for p in parts)
    return int.from_bytes(
        hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")


def substream(seed: int, *labels, block: int = 0) -> np.random.Generator:
    """Generator for the given seed, label tuple, and replication block."""
    key = (int(seed) & _MASK64) | (stream_id(*labels) << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=block << 128))
