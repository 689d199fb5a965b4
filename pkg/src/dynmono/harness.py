"""Experiment orchestration, aggregation and CSV emission.

Run ``i`` at problem size ``n`` always draws from the child stream
``(master seed, n, i)``, and results are sorted by ``(n, i)`` before
aggregation, so output does not depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import markov
from .algorithms import EVALUATION_COUNTING, LAMBDA_ROUNDING, EAConfig, run
from .core import GENERATOR_IDENTITY, RandomSource
from .landscapes import parse_landscape

SCHEMA_VERSION = 1
AGGREGATE_FIELDS = ["n", "algo", "landscape", "runs", "failures", "mean_generations", "std_generations",
                    "mean_evaluations", "std_evaluations", "seed", "schema_version"]
RAW_FIELDS = ["n", "run_index", "generations", "evaluations", "hit_optimum"]
EXACT_FIELDS = ["state", "p_absorb_row_check", "drift_exact", "drift_decimal",
                "hitting_time_fraction", "hitting_time_decimal"]


class SolverBoundError(ValueError):
    """Requested exact computation exceeds the configured dimension bound."""


@dataclass
class ExperimentSpec:
    algorithm: str = "1+1"
    landscape: str = "sdbv"
    n_values: list[int] = field(default_factory=lambda: [20])
    runs: int = 500
    seed: int = 0
    jobs: int = 1
    ea: EAConfig | None = None
    exclude_failures: bool = False

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n values must be strictly increasing")
        if not self.n_values or self.n_values[0] < 1:
            raise ValueError("need at least one positive n")
        parse_landscape(self.landscape)
        if self.ea is None:
            self.ea = EAConfig(algorithm=self.algorithm)
        elif self.ea.algorithm != self.algorithm:
            raise ValueError("EAConfig algorithm disagrees with the experiment algorithm")

    def metadata(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "generator": GENERATOR_IDENTITY,
            "child_seed": "SeedSequence(master_seed, spawn_key=(n, run_index))",
            "lambda_rounding": LAMBDA_ROUNDING,
            "evaluation_counting": EVALUATION_COUNTING,
            "failures_in_means": not self.exclude_failures,
            "algorithm": self.algorithm,
            "landscape": self.landscape,
            "n_values": list(self.n_values),
            "runs": self.runs,
            "seed": self.seed,
            "ea_config": {k: v for k, v in asdict(self.ea).items() if k != "record_trajectory"},
        }


@dataclass(frozen=True)
class RawRun:
    n: int
    run_index: int
    generations: int
    evaluations: int
    hit_optimum: bool


@dataclass(frozen=True)
class AggregateRow:
    n: int
    algo: str
    landscape: str
    runs: int
    failures: int
    mean_generations: float
    std_generations: float
    mean_evaluations: float
    std_evaluations: float
    seed: int
    schema_version: int = SCHEMA_VERSION


def _one_run(task) -> RawRun:
    landscape, ea, seed, n, i = task
    res = run(parse_landscape(landscape), n, ea, RandomSource(seed, (n, i)))
    return RawRun(n, i, res.generations, res.evaluations, res.hit_optimum)


def run_tasks(spec: ExperimentSpec) -> list[RawRun]:
    tasks = [(spec.landscape, spec.ea, spec.seed, n, i) for n in spec.n_values for i in range(spec.runs)]
    if spec.jobs <= 1:
        results = [_one_run(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (spec.jobs * 16))
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_one_run, tasks, chunksize=chunk))
    return sorted(results, key=lambda r: (r.n, r.run_index))


def _mean_std(values: list[int]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else math.nan
    return mean, std


def aggregate(spec: ExperimentSpec, raw: list[RawRun]) -> list[AggregateRow]:
    rows = []
    for n in spec.n_values:
        runs = sorted((r for r in raw if r.n == n), key=lambda r: r.run_index)
        failures = sum(not r.hit_optimum for r in runs)
        kept = [r for r in runs if r.hit_optimum] if spec.exclude_failures else runs
        mg, sg = _mean_std([r.generations for r in kept])
        me, se = _mean_std([r.evaluations for r in kept])
        rows.append(AggregateRow(n, spec.algorithm, spec.landscape, len(runs), failures, mg, sg, me, se, spec.seed))
    return rows


def simulate(spec: ExperimentSpec) -> tuple[list[AggregateRow], list[RawRun]]:
    raw = run_tasks(spec)
    return aggregate(spec, raw), raw


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(fields: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def aggregate_csv(rows: list[AggregateRow]) -> str:
    return write_csv(AGGREGATE_FIELDS, [[getattr(r, f) for f in AGGREGATE_FIELDS] for r in rows])


def raw_csv(raw: list[RawRun]) -> str:
    return write_csv(RAW_FIELDS, [[getattr(r, f) for f in RAW_FIELDS] for r in raw])


def read_aggregate_csv(text: str) -> list[AggregateRow]:
    rows = []
    for d in csv.DictReader(io.StringIO(text)):
        rows.append(AggregateRow(
            int(d["n"]), d["algo"], d["landscape"], int(d["runs"]), int(d["failures"]),
            float(d["mean_generations"]), float(d["std_generations"]),
            float(d["mean_evaluations"]), float(d["std_evaluations"]),
            int(d["seed"]), int(d["schema_version"])))
    return rows


def read_raw_csv(text: str) -> list[RawRun]:
    return [RawRun(int(d["n"]), int(d["run_index"]), int(d["generations"]), int(d["evaluations"]),
                   d["hit_optimum"] == "1")
            for d in csv.DictReader(io.StringIO(text))]


def metadata_json(spec: ExperimentSpec) -> str:
    return json.dumps(spec.metadata(), indent=2, sort_keys=True, default=str) + "\n"


# exact chain tables

def _check_bound(n: int, max_n: int):
    if n > max_n:
        raise SolverBoundError(f"n={n} exceeds the exact-solver bound of {max_n}")


def exact_table(n: int, cutoff=None, rate=None, max_n: int = markov.DEFAULT_MAX_N) -> list[list[str]]:
    """Rows of per-state drift and hitting time, followed by an E[T] footer row."""
    _check_bound(n, max_n)
    spec = markov.ChainSpec(n, cutoff, rate)
    P = markov.transition_matrix(spec)
    times = markov.hitting_times(spec)
    rows = []
    for s in range(n + 1):
        d = markov.state_drift(spec, s)
        rows.append([str(s), markov.fraction_string(sum(P[s])), markov.fraction_string(d),
                     markov.decimal_string(d, 5), markov.fraction_string(times[s]),
                     markov.decimal_string(times[s], 4)])
    total = markov.expected_total_time(spec, times)
    rows.append(["E[T]", "", "", "", markov.fraction_string(total), markov.decimal_string(total, 4)])
    return rows


def exact_csv(n: int, cutoff=None, rate=None, max_n: int = markov.DEFAULT_MAX_N) -> str:
    return write_csv(EXACT_FIELDS, exact_table(n, cutoff, rate, max_n))


@dataclass(frozen=True)
class SweepRow:
    n: int
    offset: int
    cutoff: Fraction
    expected_time: Fraction
    difference: Fraction


def cutoff_sweep(n_values: list[int], offsets=(0, 1, 2), rate=None,
                 max_n: int = markov.DEFAULT_MAX_N) -> list[SweepRow]:
    """E[T] at cutoffs n/2 - offset, with differences against cutoff n/2."""
    rows = []
    for n in n_values:
        _check_bound(n, max_n)
        r = None if rate is None else Fraction(rate)
        base = markov.expected_total_time(markov.ChainSpec(n, Fraction(n, 2), r))
        for off in offsets:
            c = Fraction(n, 2) - off
            if c < 0:
                continue
            e = base if off == 0 else markov.expected_total_time(markov.ChainSpec(n, c, r))
            rows.append(SweepRow(n, off, c, e, e - base))
    return rows


def sweep_csv(rows: list[SweepRow], fractions: bool = False) -> str:
    fields = ["n", "cutoff", "expected_time", "difference"]
    if fractions:
        fields += ["expected_time_fraction", "difference_fraction"]
    out = []
    for r in rows:
        line = [r.n, markov.decimal_string(r.cutoff, 1), markov.decimal_string(r.expected_time, 10),
                markov.decimal_string(r.difference, 10)]
        if fractions:
            line += [markov.fraction_string(r.expected_time), markov.fraction_string(r.difference)]
        out.append(line)
    return write_csv(fields, out)


def drift_table_csv(n: int, cutoffs: list, rate=None, quantity: str = "drift",
                    max_n: int = markov.DEFAULT_MAX_N) -> str:
    """Side-by-side per-state drift (5 decimals) or hitting times (4 decimals) for several cutoffs."""
    _check_bound(n, max_n)
    specs = [markov.ChainSpec(n, c, rate) for c in cutoffs]
    if quantity == "drift":
        cols = [[markov.state_drift(sp, s) for s in range(n + 1)] for sp in specs]
        digits = 5
    elif quantity == "hitting":
        cols = [markov.hitting_times(sp) for sp in specs]
        digits = 4
    else:
        raise ValueError(f"unknown quantity {quantity!r}")
    header = ["state"] + [f"cutoff={markov.decimal_string(sp.cutoff, 1)}" for sp in specs]
    rows = [[s] + [markov.decimal_string(col[s], digits) for col in cols] for s in range(n + 1)]
    if quantity == "hitting":
        rows.append(["E[T]"] + [markov.decimal_string(markov.expected_total_time(sp, col), digits)
                                for sp, col in zip(specs, cols)])
    return write_csv(header, rows)


# scaling fits

@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    points: int


def fit_exponent(rows, metric: str = "mean_generations") -> FitResult:
    """Least-squares line through (ln n, ln mean); ``rows`` are AggregateRows or (n, mean) pairs.

    ``residual`` is the root-mean-square deviation in log space.
    """
    pts = [(r.n, getattr(r, metric)) if isinstance(r, AggregateRow) else (r[0], r[1]) for r in rows]
    if len({n for n, _ in pts}) < 4:
        raise ValueError("need at least 4 distinct problem sizes")
    if any(not m > 0 for _, m in pts):
        raise ValueError("all means must be positive")
    x = np.log(np.array([n for n, _ in pts], dtype=float))
    y = np.log(np.array([m for _, m in pts], dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(np.sqrt(np.mean(resid**2))), len(pts))
