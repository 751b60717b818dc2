"""
Deterministic random number generation.

All randomness in the library flows through `Rng`, a thin wrapper over
numpy's counter-based Philox-4x64 bit generator. The stream for a given seed
is identical across runs and platforms; derived streams are addressed by
integer keys through `SeedSequence.spawn_key`, so independent consumers
(per-sample generation, per-layer initialization) never share state.
"""

from typing import Sequence

import numpy as np

SEED_MASK = (1 << 64) - 1


class Rng:
    """
    Seeded Philox stream.

    Example:
        rng = Rng(7)
        weights = rng.uniform(-0.5, 0.5, size=(4, 4))
        per_sample = rng.child(3)   # independent stream for sample #3
    """

    def __init__(self, seed: int, keys: Sequence[int] = ()):
        self.seed = int(seed) & SEED_MASK
        self.keys = tuple(int(k) for k in keys)
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.keys)
        self._generator = np.random.Generator(np.random.Philox(sequence))

    def child(self, *keys: int) -> "Rng":
        """Independent stream addressed by `keys` below this one."""
        return Rng(self.seed, self.keys + tuple(keys))

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._generator.uniform(low, high, size)

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        return self._generator.normal(loc, scale, size)

    def integers(self, low: int, high: int, size=None):
        """Integers in [low, high)."""
        return self._generator.integers(low, high, size)

    def choice(self, options: Sequence, p=None):
        index = int(self._generator.choice(len(options), p=p))
        return options[index]

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, keys={self.keys})"
