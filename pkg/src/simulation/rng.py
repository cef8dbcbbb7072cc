"""Seeded random streams for reproducible simulation."""

import zlib

import numpy as np


class SeededStreams:
    """
    Splittable source of independent numpy generators
    - one stream per (purpose, index), derived from a single 64-bit seed
    - changing the user count never reshuffles the streams of other users
    """

    def __init__(self, seed: int):
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def stream(self, purpose: str, index: int = 0) -> np.random.Generator:
        """Generator for one purpose and user/session index"""
        tag = zlib.crc32(purpose.encode("utf-8"))
        sequence = np.random.SeedSequence([self._seed, tag, int(index)])
        return np.random.default_rng(sequence)

