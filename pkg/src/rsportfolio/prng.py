"""SplitMix64 generator, bit-exact in pure Python and inside numba kernels.

Reference algorithm (all arithmetic modulo 2**64)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

``uniform_below(n)`` is normative: draw ``v`` until ``v < 2**64 - (2**64 mod n)``
and return ``v mod n``. Transcripts depend on this exact procedure.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 output finalizer applied to an already-advanced state."""
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Value-semantic generator state.

    >>> SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF
    True
    """

    __slots__ = ("state",)

    def __init__(self, seed: int = 0):
        self.state = int(seed) & MASK64

    def __repr__(self) -> str:
        return f"SplitMix64(state=0x{self.state:016x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SplitMix64) and other.state == self.state

    def copy(self) -> "SplitMix64":
        return SplitMix64(self.state)

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def uniform_below(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"uniform_below needs n >= 1, got {n}")
        rem = (1 << 64) % n
        limit = (1 << 64) - rem
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def sample_without_replacement(self, population: int, k: int) -> list[int]:
        """Partial Fisher-Yates over ``range(population)``; one draw per pick."""
        if not 0 <= k <= population:
            raise ValueError(f"cannot draw {k} distinct items from {population}")
        pool = list(range(population))
        for t in range(k):
            s = t + self.uniform_below(population - t)
            pool[t], pool[s] = pool[s], pool[t]
        return pool[:k]

    # numba kernels take the state as a one-element uint64 array they mutate
    def as_array(self) -> np.ndarray:
        return np.array([self.state], dtype=np.uint64)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "SplitMix64":
        return cls(int(arr[0]))


def seed_rng(seed: int) -> SplitMix64:
    return SplitMix64(seed)


def next_u64(rng: SplitMix64) -> int:
    return rng.next_u64()


def uniform_below(rng: SplitMix64, n: int) -> int:
    return rng.uniform_below(n)


_GAMMA = np.uint64(GAMMA)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_ZERO = np.uint64(0)


@njit(cache=True)
def nb_next_u64(rng):
    s = rng[0] + _GAMMA
    rng[0] = s
    z = (s ^ (s >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def nb_uniform_below(rng, n):
    nn = np.uint64(n)
    rem = (_ZERO - nn) % nn
    limit = _ZERO - rem
    while True:
        v = nb_next_u64(rng)
        if rem == _ZERO or v < limit:
            return np.int64(v % nn)
