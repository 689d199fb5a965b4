"""The (1+1), (1+λ), (1,λ) EAs and their self-adjusting variants.

All loops run until the all-ones optimum or the generation cap.  Only offspring
count as fitness evaluations; re-ranking the parent under the fresh
generation's function is free.  An offspring identical to its parent has the
parent's key under every landscape, so generations in which no bit flips
skip building the evaluator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import floor

from .core import BitString, RandomSource, random_bitstring
from .landscapes import Landscape

ALGORITHMS = ("1+1", "1+lambda", "1,lambda", "sa-1+lambda", "sa-1,lambda")
LAMBDA_ROUNDING = "round-half-up, minimum lambda_min"
EVALUATION_COUNTING = "offspring only; parent re-evaluation is free"


def default_lambda(n: int) -> int:
    return max(1, math.ceil(2 * math.log(n)))


@dataclass(frozen=True)
class EAConfig:
    """Algorithm identity and parameters.

    ``None`` fields resolve per problem size: ``rate`` to 1/n, ``lam`` to
    ceil(2 ln n), ``lambda_max`` to n and ``generation_cap`` to 10^4 n^1.5.
    """

    algorithm: str = "1+1"
    rate: float | None = None
    lam: float | None = None
    F: float = 1.15
    success_ratio: float = 0.25
    lambda_init: float = 1.0
    lambda_min: float = 1.0
    lambda_max: float | None = None
    generation_cap: int | None = None
    record_trajectory: bool = False
    poea_extension: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if not self.F > 1:
            raise ValueError(f"update strength F must exceed 1, got {self.F}")
        if not self.success_ratio > 0:
            raise ValueError("success_ratio must be positive")
        if not 1 <= self.lambda_min <= self.lambda_init:
            raise ValueError("need 1 <= lambda_min <= lambda_init")
        if self.lambda_max is not None and self.lambda_max < self.lambda_init:
            raise ValueError("need lambda_init <= lambda_max")
        if self.lam is not None and self.lam < 1:
            raise ValueError("lambda must be at least 1")
        if self.rate is not None and not 0 <= self.rate <= 1:
            raise ValueError("mutation rate must lie in [0, 1]")

    def resolved_rate(self, n: int) -> float:
        return 1.0 / n if self.rate is None else float(self.rate)

    def resolved_lambda(self, n: int) -> float:
        return float(default_lambda(n)) if self.lam is None else float(self.lam)

    def resolved_lambda_max(self, n: int) -> float:
        return float(n) if self.lambda_max is None else float(self.lambda_max)

    def resolved_cap(self, n: int) -> int:
        if self.generation_cap is not None:
            return self.generation_cap
        return math.ceil(10_000 * n**1.5)


@dataclass
class RunResult:
    generations: int
    evaluations: int
    hit_optimum: bool
    final: BitString
    trajectory: list[tuple[int, int, float]] | None = field(default=None, repr=False)


def _start(n: int, rng: RandomSource, x_init: BitString | None) -> int:
    if x_init is None:
        return random_bitstring(n, rng).value
    if x_init.n != n:
        raise ValueError("initial point has the wrong length")
    return x_init.value


def run_one_plus_one(kind: Landscape, n: int, cfg: EAConfig, rng: RandomSource,
                     x_init: BitString | None = None) -> RunResult:
    p = cfg.resolved_rate(n)
    cap = cfg.resolved_cap(n)
    make = kind.factory(n)
    flip = rng.flip_mask
    full = (1 << n) - 1
    x = _start(n, rng, x_init)
    traj = [(0, n - x.bit_count(), 1.0)] if cfg.record_trajectory else None
    gens = 0
    while x != full and gens < cap:
        m = flip(n, p)
        gens += 1
        if m:
            y = x ^ m
            if make(x, rng).accepts(y):
                x = y
        if traj is not None:
            traj.append((gens, n - x.bit_count(), 1.0))
    return RunResult(gens, gens, x == full, BitString(x, n), traj)


def _round_lambda(lam: float, lo: float, hi: float) -> int:
    return int(min(max(floor(lam + 0.5), lo, 1), hi))


def _run_population(kind: Landscape, n: int, cfg: EAConfig, rng: RandomSource,
                    x_init: BitString | None, elitist: bool, adaptive: bool) -> RunResult:
    if kind.kind == "poea" and not cfg.poea_extension:
        raise ValueError("PO-EA selection is only defined for the (1+1)-EA; set poea_extension to rank offspring")
    p = cfg.resolved_rate(n)
    cap = cfg.resolved_cap(n)
    make = kind.factory(n)
    flip = rng.flip_mask
    full = (1 << n) - 1
    if adaptive:
        lam = cfg.lambda_init
        lo, hi = cfg.lambda_min, cfg.resolved_lambda_max(n)
        grow = cfg.F ** (1.0 / cfg.success_ratio)
        shrink = cfg.F
    else:
        lam = cfg.resolved_lambda(n)
        lo, hi = 1, math.inf
    x = _start(n, rng, x_init)
    traj = [(0, n - x.bit_count(), lam)] if cfg.record_trajectory else None
    gens = evals = 0
    while x != full and gens < cap:
        count = _round_lambda(lam, lo, hi)
        masks = [flip(n, p) for _ in range(count)]
        gens += 1
        evals += count
        success = False
        if any(masks):
            ev = make(x, rng)
            key = ev.key
            parent_key = key(x)
            best, best_key = None, None
            for m in masks:
                k = parent_key if m == 0 else key(x ^ m)
                if best_key is None or k > best_key:
                    best, best_key = x ^ m, k
            # ">=" keeps the offspring on ties with the parent, as in the (1+1)-EA
            if not elitist or best_key >= parent_key:
                success = best_key > parent_key
                x = best
        if adaptive:
            lam = lam / shrink if success else lam * grow
            lam = min(max(lam, lo), hi)
        if traj is not None:
            traj.append((gens, n - x.bit_count(), lam))
    return RunResult(gens, evals, x == full, BitString(x, n), traj)


def run_one_plus_lambda(kind, n, cfg, rng, x_init=None) -> RunResult:
    return _run_population(kind, n, cfg, rng, x_init, elitist=True, adaptive=False)


def run_one_comma_lambda(kind, n, cfg, rng, x_init=None) -> RunResult:
    return _run_population(kind, n, cfg, rng, x_init, elitist=False, adaptive=False)


def run_self_adjusting(kind, n, cfg, rng, x_init=None) -> RunResult:
    """SA-(1+λ) or SA-(1,λ) depending on ``cfg.algorithm``.

    λ is kept as a real number; a generation spawns round(λ) offspring,
    clamped to [λ_min, λ_max].  Success means the new parent has a strictly
    larger key than the old one under that generation's function; it divides
    λ by F, failure multiplies it by F^(1/success_ratio).
    """
    elitist = cfg.algorithm == "sa-1+lambda"
    return _run_population(kind, n, cfg, rng, x_init, elitist=elitist, adaptive=True)


def run(kind: Landscape, n: int, cfg: EAConfig, rng: RandomSource,
        x_init: BitString | None = None) -> RunResult:
    algo = cfg.algorithm
    if algo == "1+1":
        return run_one_plus_one(kind, n, cfg, rng, x_init)
    if algo == "1+lambda":
        return run_one_plus_lambda(kind, n, cfg, rng, x_init)
    if algo == "1,lambda":
        return run_one_comma_lambda(kind, n, cfg, rng, x_init)
    return run_self_adjusting(kind, n, cfg, rng, x_init)
