"""Exact absorbing chain of the (1+1)-EA on SDBV, reduced to the number of zeros.

State ``s`` is the number of zero-bits of the parent.  Below the cutoff the
parent is ranked by ADBV (any offspring flipping a zero-bit survives), at or
above it by FDBV (only offspring that flip no one-bit survive).  Every
quantity is a :class:`fractions.Fraction`; nothing is rounded until
:func:`decimal_string` renders it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, lcm

DEFAULT_MAX_N = 60


class SingularSystemError(ArithmeticError):
    """The hitting-time system has no unique solution (e.g. mutation rate 0)."""


def binomial(a: int, b: int) -> int:
    """C(a, b), zero outside ``0 <= b <= a``."""
    if a < 0:
        raise ValueError("a must be non-negative")
    if b < 0 or b > a:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class ChainSpec:
    n: int
    cutoff: Fraction | None = None
    rate: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        c = Fraction(self.n, 2) if self.cutoff is None else Fraction(self.cutoff)
        p = Fraction(1, self.n) if self.rate is None else Fraction(self.rate)
        if not 0 <= c <= self.n:
            raise ValueError(f"cutoff must lie in [0, {self.n}], got {c}")
        if not 0 <= p <= 1:
            raise ValueError(f"mutation rate must lie in [0, 1], got {p}")
        object.__setattr__(self, "cutoff", c)
        object.__setattr__(self, "rate", p)

    def friendly(self, s: int) -> bool:
        """Whether state ``s`` selects by FDBV (s >= cutoff)."""
        return s >= self.cutoff

    @cached_property
    def _powers(self):
        p, q = self.rate, 1 - self.rate
        return ([p**i for i in range(2 * self.n + 1)], [q**i for i in range(2 * self.n + 1)])


def transition_probability(spec: ChainSpec, s: int, k: int) -> Fraction:
    """Pr[next state k | state s]."""
    n = spec.n
    if not (0 <= s <= n and 0 <= k <= n):
        raise ValueError(f"states must lie in [0, {n}]")
    if s == 0:
        return Fraction(int(k == 0))
    if k == s:
        return 1 - sum(transition_probability(spec, s, j) for j in range(n + 1) if j != s)
    pw, qw = spec._powers
    if spec.friendly(s):
        if k > s:
            return Fraction(0)
        return binomial(s, s - k) * pw[s - k] * qw[n - s + k]
    # i green flips, i - (s - k) red flips, at least one green flip
    total = Fraction(0)
    for i in range(1, s + 1):
        red = i - s + k
        if 0 <= red <= n - s:
            total += binomial(s, i) * binomial(n - s, red) * pw[2 * i - s + k] * qw[n - 2 * i + s - k]
    return total


def transition_row(spec: ChainSpec, s: int) -> list[Fraction]:
    n = spec.n
    row = [Fraction(0)] * (n + 1)
    if s == 0:
        row[0] = Fraction(1)
        return row
    for k in range(n + 1):
        if k != s:
            row[k] = transition_probability(spec, s, k)
    row[s] = 1 - sum(row)
    return row


def transition_matrix(spec: ChainSpec) -> list[list[Fraction]]:
    return [transition_row(spec, s) for s in range(spec.n + 1)]


def state_drift(spec: ChainSpec, s: int) -> Fraction:
    """Expected one-step decrease of the number of zeros from state ``s``."""
    row = transition_row(spec, s)
    return sum((s - k) * pk for k, pk in enumerate(row))


def closed_form_drift(spec: ChainSpec, s: int) -> Fraction:
    """Drift without building the row: s p (1-p)^(n-s) for FDBV states,
    s p - (n-s) p (1 - (1-p)^s) for ADBV states."""
    n, p = spec.n, spec.rate
    if not 0 <= s <= n:
        raise ValueError(f"state must lie in [0, {n}]")
    if spec.friendly(s):
        return s * p * (1 - p) ** (n - s)
    return s * p - (n - s) * p * (1 - (1 - p) ** s)


def solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve ``a x = b`` by Gaussian elimination over the rationals.

    Pivots are chosen by largest absolute value in the column.  ``a`` and
    ``b`` are not modified.
    """
    m = len(a)
    rows = [list(r) + [rhs] for r, rhs in zip(a, b)]
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(rows[r][col]))
        if rows[piv][col] == 0:
            raise SingularSystemError(f"matrix is singular at column {col}")
        rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        inv = 1 / prow[col]
        for r in range(col + 1, m):
            f = rows[r][col]
            if f:
                f *= inv
                row = rows[r]
                for j in range(col, m + 1):
                    if prow[j]:
                        row[j] -= f * prow[j]
    x = [Fraction(0)] * m
    for i in range(m - 1, -1, -1):
        acc = rows[i][m]
        for j in range(i + 1, m):
            if rows[i][j]:
                acc -= rows[i][j] * x[j]
        x[i] = acc / rows[i][i]
    return x


def solve_fraction_free(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve ``a x = b`` exactly via Bareiss elimination on integers.

    Each row is scaled by the lcm of its denominators, so elimination runs on
    integers with exact divisions; only back-substitution uses fractions.
    """
    m = len(a)
    rows = []
    for r, rhs in zip(a, b):
        full = [Fraction(v) for v in r] + [Fraction(rhs)]
        d = lcm(*(v.denominator for v in full))
        rows.append([v.numerator * (d // v.denominator) for v in full])
    prev = 1
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(rows[r][col]))
        if rows[piv][col] == 0:
            raise SingularSystemError(f"matrix is singular at column {col}")
        rows[col], rows[piv] = rows[piv], rows[col]
        prow = rows[col]
        pk = prow[col]
        for r in range(col + 1, m):
            row = rows[r]
            f = row[col]
            for j in range(col + 1, m + 1):
                row[j] = (row[j] * pk - f * prow[j]) // prev
            row[col] = 0
        prev = pk
    # the last pivot is the determinant, so det * x is integral (Cramer)
    det = prev
    y = [0] * m
    for i in range(m - 1, -1, -1):
        row = rows[i]
        acc = det * row[m] - sum(row[j] * y[j] for j in range(i + 1, m))
        q, r = divmod(acc, row[i])
        assert r == 0
        y[i] = q
    return [Fraction(v, det) for v in y]


SOLVERS = {"bareiss": solve_fraction_free, "gauss": solve_exact}


def hitting_times(spec: ChainSpec, method: str = "bareiss") -> list[Fraction]:
    """Expected generations to reach state 0, indexed by start state.

    Solves (P - I) t = -1 over the transient states 1..n with t_0 = 0.
    ``method`` picks the exact solver; both give identical fractions.
    """
    if spec.rate == 0:
        raise SingularSystemError("mutation rate 0: state 0 is unreachable")
    n = spec.n
    P = transition_matrix(spec)
    a = [[P[s][k] - (s == k) for k in range(1, n + 1)] for s in range(1, n + 1)]
    return [Fraction(0)] + SOLVERS[method](a, [Fraction(-1)] * n)


def expected_total_time(spec: ChainSpec, times: list[Fraction] | None = None) -> Fraction:
    """Expected optimisation time from a uniformly random start."""
    if times is None:
        times = hitting_times(spec)
    n = spec.n
    return sum(t * binomial(n, k) for k, t in enumerate(times)) / 2**n


def decimal_string(x: Fraction, digits: int) -> str:
    """Round half-to-even at ``digits`` decimals and render without exponent."""
    scaled = round(Fraction(x) * 10**digits)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}" + (f".{frac:0{digits}d}" if digits else "")


def fraction_string(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
