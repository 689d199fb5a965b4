"""Selection environments: static, dynamic monotone, and PO-EA selection.

Every landscape hands out one :class:`GenerationEvaluator` per generation.
The evaluator is built from the current parent and fixes a key function used
to rank all candidates of that generation.  Keys only need to compare like the
underlying fitness values, so permutation-weighted kinds use order-isomorphic
representations instead of sums of powers of two.

Weight convention: ``BinVal`` reads a point in base 2, most significant bit
first, so the leftmost position carries the largest weight.  ADBV and FDBV
move the parent's zero (resp. one) positions to the top of the weight order
and otherwise keep this BinVal order within each group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

import numpy as np

from .core import BitString, RandomSource

KINDS = ("onemax", "binval", "dbv", "noisy-linear", "adbv", "fdbv", "sdbv", "poea")
MONOTONE_KINDS = frozenset(KINDS) - {"poea"}


@dataclass(frozen=True)
class Landscape:
    """A landscape selector.

    ``cutoff`` is only used by SDBV (``None`` means ``n/2``); ``q`` and
    ``parent_wins_ties`` only by PO-EA.  ``parent_wins_ties`` is the
    ``poea-minus`` stand-in: pessimistic PO-EA whose incomparable
    ones-count ties go to the parent.
    """

    kind: str
    cutoff: Fraction | None = None
    q: float = 1.0
    parent_wins_ties: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown landscape kind {self.kind!r}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"pessimism q must lie in [0, 1], got {self.q}")
        if self.cutoff is not None:
            object.__setattr__(self, "cutoff", Fraction(self.cutoff))
            if self.cutoff < 0:
                raise ValueError("cutoff must be non-negative")

    @property
    def monotone(self) -> bool:
        return self.kind in MONOTONE_KINDS

    def resolved_cutoff(self, n: int) -> Fraction:
        c = Fraction(n, 2) if self.cutoff is None else self.cutoff
        if c > n:
            raise ValueError(f"cutoff {c} exceeds n={n}")
        return c

    def factory(self, n: int):
        """Return ``make(parent, rng) -> GenerationEvaluator`` with per-``n`` constants bound."""
        kind = self.kind
        if kind == "sdbv":
            # ADBV strictly below the cutoff, FDBV at or above it
            limit = ceil(self.resolved_cutoff(n))

            def make(parent, rng=None):
                if n - parent.bit_count() < limit:
                    return AdversarialEvaluator(parent, n)
                return FriendlyEvaluator(parent, n)

            return make
        if kind == "dbv":
            return lambda parent, rng: PermutedBinValEvaluator(parent, n, rng.permutation(n))
        if kind == "noisy-linear":
            return lambda parent, rng: LinearEvaluator(parent, n, rng.integers(1, n, n))
        if kind == "poea":
            q, ties = self.q, self.parent_wins_ties

            def make(parent, rng):
                pessimistic = q == 1.0 or rng.random() < q
                return PartialOrderEvaluator(parent, n, pessimistic, ties)

            return make
        cls = _STATIC[kind]
        return lambda parent, rng=None: cls(parent, n)

    def evaluator(self, parent: int, n: int, rng: RandomSource | None = None) -> GenerationEvaluator:
        """Build the evaluator of one generation for an integer-packed parent."""
        return self.factory(n)(parent, rng)

    def __str__(self) -> str:
        return format_landscape(self)


class GenerationEvaluator:
    """Key function of one generation, relative to the parent ``x^t``."""

    __slots__ = ("parent", "n")

    def __init__(self, parent: int, n: int):
        self.parent = parent
        self.n = n

    def key(self, v: int):
        raise NotImplementedError

    def accepts(self, v: int) -> bool:
        """Whether ``v`` survives against the parent, i.e. key(v) >= key(parent)."""
        return self.key(v) >= self.key(self.parent)

    def eval(self, candidate: BitString):
        if candidate.n != self.n:
            raise ValueError(f"candidate length {candidate.n} != parent length {self.n}")
        return self.key(candidate.value)


class OneMaxEvaluator(GenerationEvaluator):
    __slots__ = ()

    def key(self, v):
        return v.bit_count()


class BinValEvaluator(GenerationEvaluator):
    __slots__ = ()

    def key(self, v):
        return v


class AdversarialEvaluator(GenerationEvaluator):
    """ADBV: the parent's zero positions carry the largest weights."""

    __slots__ = ("zmask",)

    def __init__(self, parent, n):
        self.parent = parent
        self.n = n
        self.zmask = ((1 << n) - 1) ^ parent

    def key(self, v):
        return (v & self.zmask, v & self.parent)

    def accepts(self, v):
        return v == self.parent or v & self.zmask != 0


class FriendlyEvaluator(GenerationEvaluator):
    """FDBV: the parent's one positions carry the largest weights."""

    __slots__ = ("zmask",)

    def __init__(self, parent, n):
        self.parent = parent
        self.n = n
        self.zmask = ((1 << n) - 1) ^ parent

    def key(self, v):
        return (v & self.parent, v & self.zmask)

    def accepts(self, v):
        return self.parent & ~v == 0


def _unpack(v: int, n: int) -> np.ndarray:
    raw = np.frombuffer(v.to_bytes((n + 7) // 8, "big"), dtype=np.uint8)
    return np.unpackbits(raw)[-n:]


class PermutedBinValEvaluator(GenerationEvaluator):
    """DBV: BinVal under a fresh uniformly random assignment of weights.

    ``order[0]`` is the (textual) position carrying the largest weight.
    """

    __slots__ = ("order",)

    def __init__(self, parent, n, order):
        self.parent = parent
        self.n = n
        self.order = np.asarray(order)

    def key(self, v):
        return _unpack(v, self.n)[self.order].tobytes()


class LinearEvaluator(GenerationEvaluator):
    """Linear function with positive integer weights (NoisyLinear draws them fresh)."""

    __slots__ = ("weights",)

    def __init__(self, parent, n, weights):
        self.parent = parent
        self.n = n
        self.weights = np.asarray(weights, dtype=np.int64)

    def key(self, v):
        return int(_unpack(v, self.n) @ self.weights)


class PartialOrderEvaluator(GenerationEvaluator):
    """PO-EA selection written as a composite key.

    Class 2: dominates the parent, class 1: incomparable, class 0: strictly
    dominated.  Within class 1 the coin decides whether fewer or more ones
    rank higher.  The parent itself sits between classes 1 and 2 with its own
    ones-count, so ``key(y) >= key(parent)`` reproduces :func:`poea_select`.
    """

    __slots__ = ("sign", "parent_key")

    def __init__(self, parent, n, pessimistic, parent_wins_ties=False):
        self.parent = parent
        self.n = n
        self.sign = -1 if pessimistic else 1
        self.parent_key = (1, self.sign * parent.bit_count(), 1 if parent_wins_ties else 0)

    def key(self, v):
        x = self.parent
        if v == x:
            return self.parent_key
        if x & ~v == 0:
            return (2, 0, 0)
        if v & ~x == 0:
            return (0, 0, 0)
        return (1, self.sign * v.bit_count(), 0)


_STATIC = {
    "onemax": OneMaxEvaluator,
    "binval": BinValEvaluator,
    "adbv": AdversarialEvaluator,
    "fdbv": FriendlyEvaluator,
}


def make_evaluator(kind: Landscape, parent: BitString, rng: RandomSource | None = None) -> GenerationEvaluator:
    """Evaluator for one generation; consumes ``rng`` for DBV, NoisyLinear and PO-EA."""
    return kind.evaluator(parent.value, parent.n, rng)


def poea_select(parent: BitString, offspring: BitString, q: float, rng: RandomSource) -> BitString:
    """One PO-EA(q) selection step between a parent and its offspring."""
    if parent.n != offspring.n:
        raise ValueError("length mismatch")
    x, y = parent.value, offspring.value
    if x & ~y == 0:
        return offspring
    if y & ~x == 0:
        return parent
    pessimistic = q == 1.0 or rng.random() < q
    oy, ox = y.bit_count(), x.bit_count()
    if pessimistic:
        return offspring if oy <= ox else parent
    return offspring if oy >= ox else parent


def parse_landscape(text: str) -> Landscape:
    """Parse ``sdbv:cutoff=3.5``, ``poea:q=0.5``, ``poea-minus`` and plain kind names."""
    name, _, rest = text.strip().lower().partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"malformed landscape parameter {item!r}")
        params[key.strip()] = value.strip()
    if name == "poea-minus":
        if params:
            raise ValueError("poea-minus takes no parameters")
        return Landscape("poea", q=1.0, parent_wins_ties=True)
    if name == "sdbv":
        unknown = set(params) - {"cutoff"}
        cutoff = Fraction(params["cutoff"]) if "cutoff" in params else None
        if unknown:
            raise ValueError(f"unknown sdbv parameters {sorted(unknown)}")
        return Landscape("sdbv", cutoff=cutoff)
    if name == "poea":
        unknown = set(params) - {"q"}
        if unknown:
            raise ValueError(f"unknown poea parameters {sorted(unknown)}")
        return Landscape("poea", q=float(params.get("q", 1.0)))
    if params:
        raise ValueError(f"{name} takes no parameters")
    return Landscape(name)


def format_landscape(ls: Landscape) -> str:
    if ls.kind == "poea":
        if ls.parent_wins_ties:
            return "poea-minus"
        return "poea" if ls.q == 1.0 else f"poea:q={ls.q!r}"
    if ls.kind == "sdbv" and ls.cutoff is not None:
        c = ls.cutoff
        text = repr(float(c)) if Fraction(float(c)) == c else str(c)
        return f"sdbv:cutoff={text.removesuffix('.0')}"
    return ls.kind
