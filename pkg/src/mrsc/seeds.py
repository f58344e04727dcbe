"""Deterministic per-trial random streams.

Every random draw in the package flows through a (master, trial) Seed; the
stream for a given purpose is derived by spawn-keying numpy's SeedSequence
with (trial, purpose), so adding one dimension's draws never perturbs
another's and distinct trials are independent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

# purpose tags: dimensions use their own k (1..d); auxiliary streams sit high
CENSUS_STREAM = 101
TREE_STREAM = 102
PAIR_STREAM = 103
ROOT_STREAM = 104

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Seed:
    master: int
    trial: int = 0

    def seq(self, *tags: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            entropy=self.master & _MASK64, spawn_key=(self.trial & _MASK64, *tags)
        )

    def generator(self, *tags: int) -> np.random.Generator:
        return np.random.default_rng(self.seq(*tags))

    def pyrandom(self, *tags: int) -> random.Random:
        state = self.seq(*tags).generate_state(2, dtype=np.uint64)
        return random.Random(int(state[0]) << 64 | int(state[1]))
