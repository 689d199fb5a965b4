"""Mean generations of the (1+1)-EA across landscapes, including PO-EA and its tie-to-parent stand-in.

Note: ``poea-minus`` is a stand-in (pessimistic PO-EA with incomparable
ones-count ties kept by the parent), not the exact variant from the literature.

    python scripts/landscape_comparison.py --n-range 20:420:20 --runs 500 --out results/landscapes.csv
"""

import argparse
from dataclasses import dataclass, field

from dynmono import harness
from dynmono.cli import parse_n_range

DEFAULT_LANDSCAPES = ["onemax", "dbv", "noisy-linear", "adbv", "sdbv", "poea", "poea-minus"]


@dataclass
class ComparisonConfig:
    landscapes: list[str] = field(default_factory=lambda: list(DEFAULT_LANDSCAPES))
    n_values: list[int] = field(default_factory=lambda: list(range(20, 421, 20)))
    runs: int = 500
    seed: int = 0
    jobs: int = 1
    out: str | None = None


def main(cfg: ComparisonConfig):
    blocks = []
    for ls in cfg.landscapes:
        rows, _ = harness.simulate(harness.ExperimentSpec("1+1", ls, cfg.n_values, cfg.runs, cfg.seed, cfg.jobs))
        blocks.append(harness.aggregate_csv(rows))
        print(f"{ls}: " + ", ".join(f"n={r.n} {r.mean_generations:.0f}" for r in rows[-3:]))
    text = blocks[0] + "".join(b.split("\n", 1)[1] for b in blocks[1:])
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--landscapes", default=",".join(DEFAULT_LANDSCAPES))
    ap.add_argument("--n-range", type=parse_n_range, default="20:420:20")
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    a = ap.parse_args()
    main(ComparisonConfig(a.landscapes.split(","), a.n_range, a.runs, a.seed, a.jobs, a.out))
