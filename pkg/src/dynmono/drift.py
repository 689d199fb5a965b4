"""Brute-force drift oracles for the (1+1)-EA on small dimensions.

An acceptance rule decides, for a reference point ``x`` and a candidate ``y``,
whether ``y`` survives selection.  Everything here enumerates the whole cube
{0,1}^n with numpy over integer-packed points, so it is only meant for small
``n`` (guards are enforced).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb

import numpy as np

from .core import BitString, RandomSource

MAX_DRIFT_N = 20
MAX_CLASS_N = 14
MAX_SUITE_N = 12
SLACK = 1e-12


def _cube(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


class AcceptanceRule:
    """Selection predicate ``accepts(x, y)`` over integer-packed points of length ``n``.

    Subclasses implement :meth:`row`, the vectorised predicate for a fixed
    reference ``x`` against every candidate of the cube.
    """

    name = "rule"

    def row(self, x: int, n: int) -> np.ndarray:
        raise NotImplementedError

    def accepts(self, x: int, y: int, n: int) -> bool:
        return bool(self.row(x, n)[y])

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class OneMaxRule(AcceptanceRule):
    name = "onemax"

    def row(self, x, n):
        return _popcount(_cube(n)) >= x.bit_count()


class BinValRule(AcceptanceRule):
    name = "binval"

    def row(self, x, n):
        return _cube(n) >= x


class AdversarialRule(AcceptanceRule):
    """ADBV: accept everything not strictly dominated by ``x``."""

    name = "adbv"

    def row(self, x, n):
        y = _cube(n)
        return ((y & ~x) != 0) | (y == x)


class FriendlyRule(AcceptanceRule):
    """FDBV: accept exactly the points dominating ``x``."""

    name = "fdbv"

    def row(self, x, n):
        return (x & ~_cube(n)) == 0


class SwitchingRule(AcceptanceRule):
    """SDBV: ADBV when ``x`` has fewer zeros than the cutoff, FDBV otherwise."""

    def __init__(self, cutoff: Fraction | None = None):
        self.cutoff = None if cutoff is None else Fraction(cutoff)
        self.name = "sdbv" if cutoff is None else f"sdbv:cutoff={self.cutoff}"

    def row(self, x, n):
        c = Fraction(n, 2) if self.cutoff is None else self.cutoff
        if n - x.bit_count() < ceil(c):
            return AdversarialRule().row(x, n)
        return FriendlyRule().row(x, n)


class LinearRule(AcceptanceRule):
    """``f(y) >= f(x)`` for ``f(y) = sum_i w_i y_i``; ``weights[i]`` sits on textual position i."""

    def __init__(self, weights, name: str = "linear"):
        self.weights = [int(w) for w in weights]
        if any(w <= 0 for w in self.weights):
            raise ValueError("linear rules need positive weights")
        self.name = name
        self._values: dict[int, np.ndarray] = {}

    def values(self, n: int) -> np.ndarray:
        if len(self.weights) != n:
            raise ValueError(f"rule has {len(self.weights)} weights, cube has dimension {n}")
        if n not in self._values:
            y = _cube(n)
            f = np.zeros(1 << n, dtype=np.int64)
            for pos, w in enumerate(self.weights):
                f += w * ((y >> (n - 1 - pos)) & 1)
            self._values[n] = f
        return self._values[n]

    def row(self, x, n):
        f = self.values(n)
        return f >= f[x]


def random_linear_rules(n: int, count: int, rng: RandomSource) -> list[LinearRule]:
    """Linear rules with independent weights uniform on {1, ..., 2^n}."""
    return [LinearRule(rng.integers(1, 2**n, n).tolist(), name=f"linear#{i}") for i in range(count)]


def standard_rules(n: int, random_count: int = 50, seed: int = 0) -> list[AcceptanceRule]:
    """ADBV, FDBV, OneMax, BinVal and ``random_count`` random positive linear rules."""
    rules = [AdversarialRule(), FriendlyRule(), OneMaxRule(), BinValRule()]
    return rules + random_linear_rules(n, random_count, RandomSource(seed, (n,)))


def _as_longdouble(p) -> np.longdouble:
    if isinstance(p, float):
        return np.longdouble(p)
    p = Fraction(p)
    return np.longdouble(p.numerator) / np.longdouble(p.denominator)


def _mutation_weights(n: int, p) -> np.ndarray:
    # probability of one specific offspring at Hamming distance d
    p = _as_longdouble(p)
    d = np.arange(n + 1)
    return p**d * (1 - p) ** (n - d)


def exact_point_drift(x: BitString, rule: AcceptanceRule, p) -> float:
    """E[(Z(x) - Z(Y)) 1{Y accepted}] for Y a standard-bit mutation of ``x``."""
    n = x.n
    if n > MAX_DRIFT_N:
        raise ValueError(f"exact_point_drift enumerates 2^n offspring; n={n} exceeds {MAX_DRIFT_N}")
    return float(_point_drift(x.value, n, rule, _mutation_weights(n, p)))


def _point_drift(x: int, n: int, rule: AcceptanceRule, weights: np.ndarray) -> np.longdouble:
    y = _cube(n)
    gain = _popcount(y) - x.bit_count()
    acc = rule.row(x, n)
    prob = weights[_popcount(y ^ x)]
    return np.sum(prob[acc] * gain[acc])


def drift_vector(rule: AcceptanceRule, n: int, p) -> np.ndarray:
    """Exact drift at every point of the cube, indexed by the packed point."""
    if n > MAX_DRIFT_N:
        raise ValueError(f"n={n} exceeds {MAX_DRIFT_N}")
    w = _mutation_weights(n, p)
    return np.array([_point_drift(x, n, rule, w) for x in range(1 << n)], dtype=np.longdouble)


def flip_class(x: BitString, i: int, j: int) -> list[BitString]:
    """A_{i,j}: points reached from ``x`` by flipping exactly i zero-bits and j one-bits."""
    n = x.n
    green, red = _green_red(x.value, n)
    members = np.flatnonzero((green == i) & (red == j))
    return [BitString(int(v), n) for v in members]


def _green_red(x: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    y = _cube(n)
    full = (1 << n) - 1
    return _popcount(y & (full ^ x)), _popcount(x & ~y)


def _check_pair(n: int, i: int, j: int):
    if n > MAX_CLASS_N:
        raise ValueError(f"n={n} exceeds {MAX_CLASS_N}")
    if not i > j > 0:
        raise ValueError(f"need i > j > 0, got i={i}, j={j}")


def class_difference_table(x: BitString, rule_f: AcceptanceRule, rule_m: AcceptanceRule) -> np.ndarray:
    """Matrix S with S[i, j] = sum over A_{i,j} of 1_f(y) - 1_m(y)."""
    n = x.n
    if n > MAX_CLASS_N:
        raise ValueError(f"n={n} exceeds {MAX_CLASS_N}")
    green, red = _green_red(x.value, n)
    diff = rule_f.row(x.value, n).astype(np.int64) - rule_m.row(x.value, n).astype(np.int64)
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(table, (green, red), diff)
    return table


def class_indicator_difference(x: BitString, rule_f: AcceptanceRule, rule_m: AcceptanceRule, i: int, j: int) -> int:
    """Class-sum difference over A_{i,j} minus over A_{j,i} of 1_f - 1_m."""
    _check_pair(x.n, i, j)
    table = class_difference_table(x, rule_f, rule_m)
    return int(table[i, j] - table[j, i])


def domination_counts(x: BitString, i: int, j: int) -> tuple[dict[BitString, int], dict[BitString, int]]:
    """Per-element domination counts between A_{i,j} and A_{j,i}.

    Returns ``(down, up)``: ``down[a]`` is the number of b in A_{j,i} with
    a >= b, ``up[b]`` the number of a in A_{i,j} dominating b.
    """
    _check_pair(x.n, i, j)
    a_cls = np.array([a.value for a in flip_class(x, i, j)], dtype=np.int64)
    b_cls = np.array([b.value for b in flip_class(x, j, i)], dtype=np.int64)
    if a_cls.size == 0 or b_cls.size == 0:
        dom = np.zeros((a_cls.size, b_cls.size), dtype=bool)
    else:
        dom = (b_cls[None, :] & ~a_cls[:, None]) == 0
    n = x.n
    down = {BitString(int(a), n): int(c) for a, c in zip(a_cls, dom.sum(axis=1))}
    up = {BitString(int(b), n): int(c) for b, c in zip(b_cls, dom.sum(axis=0))}
    return down, up


def domination_count_formulas(n: int, z: int, i: int, j: int) -> tuple[int, int]:
    """Closed-form counts: each a dominates C(i, i-j) C(n-z-j, i-j) elements,
    each b is dominated by C(i, i-j) C(z-j, i-j) elements."""
    def c(a, b):
        return comb(a, b) if 0 <= b <= a else 0
    return c(i, i - j) * c(n - z - j, i - j), c(i, i - j) * c(z - j, i - j)


@dataclass
class Violation:
    rule: str
    x: BitString
    reference_drift: float
    rule_drift: float


@dataclass
class MinimalityReport:
    n: int
    rate: object
    rules: list[str]
    points_checked: int = 0
    comparisons: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def minimality_suite(n: int, p, comparison_rules: list[AcceptanceRule],
                     reference: AcceptanceRule | None = None, slack: float = SLACK) -> MinimalityReport:
    """Check drift(reference) <= drift(f) + slack at every x for every rule f.

    The reference defaults to SDBV with cutoff n/2.
    """
    if n > MAX_SUITE_N:
        raise ValueError(f"n={n} exceeds {MAX_SUITE_N}")
    reference = reference or SwitchingRule()
    ref = drift_vector(reference, n, p)
    report = MinimalityReport(n, p, [r.name for r in comparison_rules], points_checked=1 << n)
    for rule in comparison_rules:
        other = drift_vector(rule, n, p)
        report.comparisons += 1 << n
        for x in np.flatnonzero(ref > other + slack):
            report.violations.append(Violation(rule.name, BitString(int(x), n), float(ref[x]), float(other[x])))
    return report


@dataclass
class CertificateReport:
    n: int
    differences_checked: int = 0
    difference_failures: list[tuple[str, BitString, int, int, int]] = field(default_factory=list)
    counts_checked: int = 0
    count_failures: list[tuple[BitString, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.difference_failures and not self.count_failures


def certificate_suite(n: int, comparison_rules: list[AcceptanceRule],
                      reference: AcceptanceRule | None = None) -> CertificateReport:
    """Non-negativity of the class-sum difference against SDBV, and the
    domination-count identities, for every x and every i > j > 0."""
    if n > MAX_CLASS_N:
        raise ValueError(f"n={n} exceeds {MAX_CLASS_N}")
    reference = reference or SwitchingRule()
    report = CertificateReport(n)
    pairs = [(i, j) for i in range(2, n + 1) for j in range(1, i)]
    for xv in range(1 << n):
        x = BitString(xv, n)
        z = x.zeros()
        for rule in comparison_rules:
            table = class_difference_table(x, rule, reference)
            for i, j in pairs:
                report.differences_checked += 1
                q = int(table[i, j] - table[j, i])
                if q < 0:
                    report.difference_failures.append((rule.name, x, i, j, q))
        for i, j in pairs:
            down, up = domination_counts(x, i, j)
            want_down, want_up = domination_count_formulas(n, z, i, j)
            report.counts_checked += 1
            if any(c != want_down for c in down.values()) or any(c != want_up for c in up.values()):
                report.count_failures.append((x, i, j))
    return report
