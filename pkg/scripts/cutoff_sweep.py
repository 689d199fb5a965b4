"""Exact E[T] at cutoffs n/2, n/2-1, n/2-2 for a range of n, with differences to n/2.

    python scripts/cutoff_sweep.py --n-range 9:45:2 --out sweep.csv
"""

import argparse
from dataclasses import dataclass, field

from dynmono import harness
from dynmono.cli import parse_n_range


@dataclass
class SweepConfig:
    n_values: list[int] = field(default_factory=lambda: list(range(9, 46, 2)))
    offsets: tuple[int, ...] = (0, 1, 2)
    fractions: bool = False
    out: str | None = None


def main(cfg: SweepConfig):
    rows = harness.cutoff_sweep(cfg.n_values, cfg.offsets)
    text = harness.sweep_csv(rows, cfg.fractions)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")
    worse = [r.n for r in rows if r.offset == 1 and r.difference > 0]
    print(f"# cutoff n/2-1 slower than n/2 at {len(worse)} of {len(cfg.n_values)} sizes")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-range", type=parse_n_range, default="9:45:2")
    ap.add_argument("--fractions", action="store_true")
    ap.add_argument("--out")
    a = ap.parse_args()
    main(SweepConfig(n_values=a.n_range, fractions=a.fractions, out=a.out))
