"""Search points, standard bit mutation, domination and seeded randomness.

A search point of length ``n`` is stored as a Python integer bitset.  The
textual form is most-significant-first: character ``i`` of ``"110"``
corresponds to integer bit ``n - 1 - i``.  All stochastic code draws from a
:class:`RandomSource`, which wraps a numpy ``PCG64`` generator seeded through
``SeedSequence`` so that child streams for individual runs are independent and
reproducible.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from math import comb

import numpy as np

GENERATOR_IDENTITY = f"numpy.random.PCG64 via SeedSequence (numpy {np.__version__})"


@dataclass(frozen=True, slots=True)
class BitString:
    """Immutable fixed-length bit vector packed into an integer."""

    value: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"length must be positive, got {self.n}")
        if self.value < 0 or self.value >> self.n:
            raise ValueError(f"value {self.value} does not fit in {self.n} bits")

    @classmethod
    def from_str(cls, text: str) -> BitString:
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2), len(text))

    @classmethod
    def from_bits(cls, bits) -> BitString:
        bits = list(bits)
        return cls.from_str("".join("1" if b else "0" for b in bits))

    @classmethod
    def ones_vector(cls, n: int) -> BitString:
        return cls((1 << n) - 1, n)

    @classmethod
    def zeros_vector(cls, n: int) -> BitString:
        return cls(0, n)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in str(self))

    def ones(self) -> int:
        return self.value.bit_count()

    def zeros(self) -> int:
        return self.n - self.value.bit_count()

    def is_optimum(self) -> bool:
        return self.value == (1 << self.n) - 1

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not -self.n <= i < self.n:
            raise IndexError(i)
        return (self.value >> (self.n - 1 - i % self.n)) & 1

    def __str__(self) -> str:
        return format(self.value, f"0{self.n}b")


def zeros(x: BitString) -> int:
    return x.zeros()


def ones(x: BitString) -> int:
    return x.ones()


def dominates(x: BitString, y: BitString) -> bool:
    """True iff ``x[i] >= y[i]`` at every position."""
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    return y.value & ~x.value == 0


def _binomial_cdf(n: int, p: float) -> list[float]:
    # Truncated where the float cdf reaches 1.0; the dropped tail is below 2**-53.
    cdf = []
    acc = 0.0
    for k in range(n):
        acc += comb(n, k) * p**k * (1.0 - p) ** (n - k)
        if acc >= 1.0:
            break
        cdf.append(acc)
    return cdf


class RandomSource:
    """Deterministic random stream with a buffered fast path for scalar draws.

    Identical ``(seed, key)`` and call sequence give identical output.
    :meth:`child` derives an independent stream from the same seed and an
    extra spawn key, e.g. a run index.
    """

    __slots__ = ("seed", "key", "generator", "_buf", "_pos", "_block", "_cdf_key", "_cdf")

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = seed
        self.key = tuple(key)
        ss = np.random.SeedSequence(seed, spawn_key=self.key)
        self.generator = np.random.Generator(np.random.PCG64(ss))
        self._buf: list[float] = []
        self._pos = 0
        self._block = 64
        self._cdf_key = None
        self._cdf: list[float] = []

    def child(self, *key: int) -> RandomSource:
        return RandomSource(self.seed, self.key + tuple(key))

    def _refill(self):
        self._buf = self.generator.random(self._block).tolist()
        self._pos = 0
        if self._block < 8192:
            self._block *= 2

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        if self._pos == len(self._buf):
            self._refill()
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def below(self, m: int) -> int:
        """Uniform integer in ``range(m)``."""
        return int(self.random() * m)

    def binomial(self, n: int, p: float) -> int:
        if self._cdf_key != (n, p):
            self._cdf_key = (n, p)
            self._cdf = _binomial_cdf(n, p)
        return bisect_right(self._cdf, self.random())

    def subset_mask(self, n: int, k: int) -> int:
        """Bitmask of a uniformly random ``k``-subset of ``range(n)``."""
        if k > n // 2:
            return ((1 << n) - 1) ^ self.subset_mask(n, n - k)
        mask = 0
        count = 0
        buf = self._buf
        while count < k:
            if self._pos == len(buf):
                self._refill()
                buf = self._buf
            b = 1 << int(buf[self._pos] * n)
            self._pos += 1
            if not mask & b:
                mask |= b
                count += 1
        return mask

    def flip_mask(self, n: int, p: float) -> int:
        """Mask of positions flipped by standard bit mutation at rate ``p``."""
        if self._cdf_key != (n, p):
            self._cdf_key = (n, p)
            self._cdf = _binomial_cdf(n, p)
        if self._pos == len(self._buf):
            self._refill()
        k = bisect_right(self._cdf, self._buf[self._pos])
        self._pos += 1
        if k == 0:
            return 0
        if k == 1:
            if self._pos == len(self._buf):
                self._refill()
            u = self._buf[self._pos]
            self._pos += 1
            return 1 << int(u * n)
        return self.subset_mask(n, k)

    def permutation(self, n: int) -> list[int]:
        return self.generator.permutation(n).tolist()

    def integers(self, low: int, high: int, size: int) -> np.ndarray:
        """``size`` integers uniform on ``[low, high]`` inclusive."""
        return self.generator.integers(low, high, size=size, endpoint=True)


def mutate(x: BitString, p: float, rng: RandomSource) -> BitString:
    """Standard bit mutation: flip each bit independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mutation rate must lie in [0, 1], got {p}")
    return BitString(x.value ^ rng.flip_mask(x.n, float(p)), x.n)


def random_bitstring(n: int, rng: RandomSource) -> BitString:
    """Uniformly random point of {0,1}^n."""
    if n < 1:
        raise ValueError("n must be positive")
    # 32 bits per uniform draw keeps full precision of the double
    value = 0
    remaining = n
    while remaining > 0:
        take = min(32, remaining)
        value = (value << take) | int(rng.random() * (1 << 32)) >> (32 - take)
        remaining -= take
    return BitString(value, n)
