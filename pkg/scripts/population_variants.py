"""Mean fitness evaluations of the population EAs on SDBV (and optionally other landscapes).

    python scripts/population_variants.py --algos 1+lambda sa-1,lambda --runs 500 --out results/population.csv
"""

import argparse
from dataclasses import dataclass, field

from dynmono import harness
from dynmono.algorithms import EAConfig
from dynmono.cli import parse_n_range

ALGORITHMS = ["1+1", "1+lambda", "1,lambda", "sa-1+lambda", "sa-1,lambda"]


@dataclass
class PopulationConfig:
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    landscape: str = "sdbv"
    n_values: list[int] = field(default_factory=lambda: list(range(20, 421, 40)))
    runs: int = 500
    F: float = 1.15
    success_ratio: float = 0.25
    seed: int = 0
    jobs: int = 1
    out: str | None = None


def main(cfg: PopulationConfig):
    blocks = []
    for algo in cfg.algorithms:
        ea = EAConfig(algorithm=algo, F=cfg.F, success_ratio=cfg.success_ratio)
        spec = harness.ExperimentSpec(algo, cfg.landscape, cfg.n_values, cfg.runs, cfg.seed, cfg.jobs, ea)
        rows, _ = harness.simulate(spec)
        blocks.append(harness.aggregate_csv(rows))
        fit = harness.fit_exponent(rows, "mean_evaluations") if len(rows) >= 4 else None
        slope = f", evaluation slope {fit.slope:.3f}" if fit else ""
        print(f"{algo}: largest n mean evaluations {rows[-1].mean_evaluations:.0f}{slope}")
    text = blocks[0] + "".join(b.split("\n", 1)[1] for b in blocks[1:])
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--algos", nargs="+", default=ALGORITHMS, help="space-separated selectors")
    ap.add_argument("--landscape", default="sdbv")
    ap.add_argument("--n-range", type=parse_n_range, default="20:420:40")
    ap.add_argument("--runs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    a = ap.parse_args()
    main(PopulationConfig(a.algos, a.landscape, a.n_range, a.runs, seed=a.seed, jobs=a.jobs, out=a.out))
