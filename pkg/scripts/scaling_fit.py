"""Simulate the (1+1)-EA over a range of n and fit the log-log runtime exponent.

    python scripts/scaling_fit.py --landscapes sdbv,onemax --n-range 20:420:40 --runs 200
"""

import argparse
from dataclasses import dataclass, field
from pathlib import Path

from dynmono import harness
from dynmono.cli import parse_n_range


@dataclass
class ScalingConfig:
    landscapes: list[str] = field(default_factory=lambda: ["sdbv", "onemax"])
    algorithm: str = "1+1"
    n_values: list[int] = field(default_factory=lambda: list(range(20, 421, 40)))
    runs: int = 200
    seed: int = 0
    jobs: int = 1
    out_dir: Path | None = None


def main(cfg: ScalingConfig):
    for ls in cfg.landscapes:
        spec = harness.ExperimentSpec(cfg.algorithm, ls, cfg.n_values, cfg.runs, cfg.seed, cfg.jobs)
        rows, _ = harness.simulate(spec)
        fit = harness.fit_exponent(rows)
        if cfg.out_dir:
            cfg.out_dir.mkdir(parents=True, exist_ok=True)
            (cfg.out_dir / f"{cfg.algorithm}_{ls}.csv").write_text(harness.aggregate_csv(rows))
        print(f"{ls}: slope {fit.slope:.4f}, intercept {fit.intercept:.4f}, rms residual {fit.residual:.4f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--landscapes", default="sdbv,onemax")
    ap.add_argument("--algo", default="1+1")
    ap.add_argument("--n-range", type=parse_n_range, default="20:420:40")
    ap.add_argument("--runs", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out-dir", type=Path)
    a = ap.parse_args()
    main(ScalingConfig(a.landscapes.split(","), a.algo, a.n_range, a.runs, a.seed, a.jobs, a.out_dir))
