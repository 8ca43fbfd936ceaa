#!/usr/bin/env python3
"""
Named random sub-streams derived from one seed.

A stream is addressed by a path of names and integers, e.g.
``("sample", 3)`` or ``("machine", 7, "round", 12)``. The same path always
yields the same numpy Generator, whatever order streams are requested in.
"""

import hashlib
from typing import List, Tuple, Union

import numpy as np

PathPart = Union[str, int]


def _key(part: PathPart) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part)
    digest = hashlib.sha256(str(part).encode('utf-8')).digest()
    # high bit keeps names apart from small integers
    return int.from_bytes(digest[:4], 'big') | (1 << 32)


class RngStreams:
    """Factory of independent, reproducible numpy Generators."""

    def __init__(self, seed: int, prefix: Tuple[PathPart, ...] = ()):
        self.seed = int(seed)
        self.prefix = tuple(prefix)
        self.log: List[Tuple[PathPart, ...]] = []

    def generator(self, *path: PathPart) -> np.random.Generator:
        full = self.prefix + tuple(path)
        self.log.append(full)
        seq = np.random.SeedSequence(self.seed, spawn_key=tuple(_key(p) for p in full))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, *path: PathPart) -> 'RngStreams':
        """Streams under a longer prefix; the draw log is shared."""
        sub = RngStreams(self.seed, self.prefix + tuple(path))
        sub.log = self.log
        return sub
