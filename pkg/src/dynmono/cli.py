"""Command-line entry point: ``dynmono <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 verification violation,
3 exact-solver bound refused.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import drift, harness, markov
from .algorithms import ALGORITHMS, EAConfig
from .landscapes import Landscape, parse_landscape

log = logging.getLogger("dynmono")

EXIT_USAGE, EXIT_VIOLATION, EXIT_BOUND = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from e


def parse_n_range(text: str) -> list[int]:
    """``A:B:STEP`` inclusive of B when reachable."""
    try:
        parts = [int(p) for p in text.split(":")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from e
    if len(parts) == 2:
        parts.append(1)
    if len(parts) != 3 or parts[2] < 1 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError(f"expected A:B:STEP with A <= B and STEP >= 1, got {text!r}")
    a, b, step = parts
    return list(range(a, b + 1, step))


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from e


def load_config(path: str) -> dict:
    """Flat ``key=value`` lines or a single JSON object; keys use flag names."""
    text = Path(path).read_text()
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
    else:
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            data[key.strip()] = value.strip()
    return {k.replace("-", "_"): v for k, v in data.items()}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value or JSON file with defaults for these flags")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dynmono", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="Monte-Carlo runtimes, one aggregate row per n")
    _add_common(sim)
    sim.add_argument("--algo", default="1+1", choices=ALGORITHMS)
    sim.add_argument("--landscape", default="sdbv")
    sim.add_argument("--n", type=parse_int_list, help="comma-separated sizes")
    sim.add_argument("--n-range", type=parse_n_range, help="A:B:STEP, inclusive")
    sim.add_argument("--runs", type=int, default=500)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--jobs", type=int, default=1)
    sim.add_argument("--raw-out", help="per-run CSV path")
    sim.add_argument("--meta-out", help="metadata JSON path (default: <out>.meta.json when --out is set)")
    sim.add_argument("--cutoff", type=parse_fraction, help="SDBV cutoff, overrides the landscape selector")
    sim.add_argument("--rate", type=parse_fraction, help="mutation rate NUM/DEN (default 1/n)")
    sim.add_argument("--lambda", dest="lam", type=float, help="offspring count (default ceil(2 ln n))")
    sim.add_argument("--F", dest="F", type=float, default=1.15)
    sim.add_argument("--success-ratio", type=float, default=0.25)
    sim.add_argument("--lambda-init", type=float, default=1.0)
    sim.add_argument("--lambda-min", type=float, default=1.0)
    sim.add_argument("--lambda-max", type=float)
    sim.add_argument("--cap", type=int, help="generation cap (default 10^4 n^1.5)")
    sim.add_argument("--poea-extension", action="store_true", help="allow PO-EA ranking with lambda > 1")
    sim.add_argument("--exclude-failures", action="store_true", help="drop capped runs from the means")

    ex = sub.add_parser("exact", help="exact drift and hitting-time table for SDBV")
    _add_common(ex)
    ex.add_argument("--n", type=int, required=True)
    ex.add_argument("--cutoff", type=parse_fraction)
    ex.add_argument("--rate", type=parse_fraction)
    ex.add_argument("--max-n", type=int, default=markov.DEFAULT_MAX_N)

    sw = sub.add_parser("cutoff-sweep", help="E[T] at cutoffs n/2, n/2-1, n/2-2")
    _add_common(sw)
    sw.add_argument("--n", type=parse_int_list)
    sw.add_argument("--n-range", type=parse_n_range)
    sw.add_argument("--offsets", type=parse_int_list, default=[0, 1, 2])
    sw.add_argument("--rate", type=parse_fraction)
    sw.add_argument("--fractions", action="store_true", help="add exact fraction columns")
    sw.add_argument("--max-n", type=int, default=markov.DEFAULT_MAX_N)

    dt = sub.add_parser("drift-table", help="per-state drift or hitting times for several cutoffs")
    _add_common(dt)
    dt.add_argument("--n", type=int, required=True)
    dt.add_argument("--cutoff", type=lambda s: [parse_fraction(c) for c in s.split(",")],
                    help="comma-separated cutoffs (default n/2, n/2-1, n/2-2)")
    dt.add_argument("--rate", type=parse_fraction)
    dt.add_argument("--quantity", choices=["drift", "hitting"], default="drift")
    dt.add_argument("--max-n", type=int, default=markov.DEFAULT_MAX_N)

    ve = sub.add_parser("verify", help="brute-force drift minimality and class-count certificates")
    _add_common(ve)
    ve.add_argument("--n", type=parse_int_list, default=[6, 8])
    ve.add_argument("--rates", type=lambda s: [parse_fraction(r) for r in s.split(",")],
                    help="comma-separated rates (default 1/n, 1/2, 9/10)")
    ve.add_argument("--random-rules", type=int, default=50)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--certificate-max-n", type=int, default=8)
    ve.add_argument("--witness-out", help="CSV of violating points")

    fi = sub.add_parser("fit", help="log-log slope of an aggregate CSV")
    _add_common(fi)
    fi.add_argument("input", help="aggregate CSV produced by simulate")
    fi.add_argument("--metric", choices=["mean_generations", "mean_evaluations"], default="mean_generations")
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(cfg) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        # config values become defaults; explicit flags still win
        defaults = {}
        for a in sub._actions:
            if a.dest in cfg:
                v = cfg[a.dest]
                if a.type is not None and isinstance(v, str):
                    v = a.type(v)
                elif isinstance(a, argparse._StoreTrueAction) and isinstance(v, str):
                    v = v.lower() in ("1", "true", "yes")
                defaults[a.dest] = v
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _sizes(args) -> list[int]:
    if args.n and args.n_range:
        raise UsageError("give either --n or --n-range, not both")
    sizes = args.n or args.n_range
    if not sizes:
        raise UsageError("no problem sizes given (--n or --n-range)")
    return sizes


def cmd_simulate(args):
    landscape = parse_landscape(args.landscape)
    if args.cutoff is not None:
        if landscape.kind != "sdbv":
            raise UsageError("--cutoff only applies to the sdbv landscape")
        landscape = Landscape("sdbv", cutoff=args.cutoff)
    ea = EAConfig(algorithm=args.algo, rate=None if args.rate is None else float(args.rate), lam=args.lam,
                  F=args.F, success_ratio=args.success_ratio, lambda_init=args.lambda_init,
                  lambda_min=args.lambda_min, lambda_max=args.lambda_max, generation_cap=args.cap,
                  poea_extension=args.poea_extension)
    if landscape.kind == "poea" and args.algo != "1+1" and not args.poea_extension:
        raise UsageError("PO-EA landscapes need --poea-extension with population algorithms")
    spec = harness.ExperimentSpec(args.algo, str(landscape), sorted(_sizes(args)), args.runs, args.seed,
                                  args.jobs, ea, args.exclude_failures)
    rows, raw = harness.simulate(spec)
    for r in rows:
        log.info("n=%d mean_generations=%.2f failures=%d", r.n, r.mean_generations, r.failures)
    _emit(harness.aggregate_csv(rows), args.out)
    if args.raw_out:
        Path(args.raw_out).write_text(harness.raw_csv(raw))
    meta = args.meta_out or (args.out + ".meta.json" if args.out else None)
    if meta:
        Path(meta).write_text(harness.metadata_json(spec))
    return 0


def cmd_exact(args):
    _emit(harness.exact_csv(args.n, args.cutoff, args.rate, args.max_n), args.out)
    return 0


def cmd_cutoff_sweep(args):
    rows = harness.cutoff_sweep(_sizes(args), tuple(args.offsets), args.rate, args.max_n)
    _emit(harness.sweep_csv(rows, args.fractions), args.out)
    return 0


def cmd_drift_table(args):
    n = args.n
    cutoffs = args.cutoff or [Fraction(n, 2) - k for k in range(3) if Fraction(n, 2) - k >= 0]
    _emit(harness.drift_table_csv(n, cutoffs, args.rate, args.quantity, args.max_n), args.out)
    return 0


def cmd_verify(args):
    lines = []
    witnesses = []
    failed = False
    for n in args.n:
        rules = drift.standard_rules(n, args.random_rules, args.seed)
        rates = args.rates or [Fraction(1, n), Fraction(1, 2), Fraction(9, 10)]
        for p in rates:
            rep = drift.minimality_suite(n, p, rules)
            status = "PASS" if rep.ok else "FAIL"
            failed |= not rep.ok
            lines.append(f"{status} drift-minimality n={n} p={p} rules={len(rules)} points={rep.points_checked} "
                         f"violations={len(rep.violations)}")
            witnesses += [("drift-minimality", n, p, v.rule, str(v.x),
                           f"reference={v.reference_drift!r} rule={v.rule_drift!r}") for v in rep.violations]
        if n <= args.certificate_max_n:
            cert = drift.certificate_suite(n, rules)
            failed |= not cert.ok
            lines.append(f"{'FAIL' if cert.difference_failures else 'PASS'} class-differences n={n} "
                         f"checked={cert.differences_checked} negative={len(cert.difference_failures)}")
            lines.append(f"{'FAIL' if cert.count_failures else 'PASS'} domination-counts n={n} "
                         f"checked={cert.counts_checked} mismatches={len(cert.count_failures)}")
            witnesses += [("class-difference", n, "", name, str(x), f"i={i} j={j} value={q}")
                          for name, x, i, j, q in cert.difference_failures]
            witnesses += [("domination-count", n, "", "", str(x), f"i={i} j={j}") for x, i, j in cert.count_failures]
    _emit("\n".join(lines) + "\n", args.out)
    if args.witness_out:
        Path(args.witness_out).write_text(harness.write_csv(["check", "n", "rate", "rule", "x", "detail"], witnesses))
    return EXIT_VIOLATION if failed else 0


def cmd_fit(args):
    rows = harness.read_aggregate_csv(Path(args.input).read_text())
    groups = {}
    for r in rows:
        groups.setdefault((r.algo, r.landscape), []).append(r)
    out = ["algo,landscape,metric,slope,intercept,residual,points"]
    for (algo, ls), grp in groups.items():
        f = harness.fit_exponent(grp, args.metric)
        out.append(f"{algo},{ls},{args.metric},{f.slope!r},{f.intercept!r},{f.residual!r},{f.points}")
    _emit("\n".join(out) + "\n", args.out)
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "exact": cmd_exact,
    "cutoff-sweep": cmd_cutoff_sweep,
    "drift-table": cmd_drift_table,
    "verify": cmd_verify,
    "fit": cmd_fit,
}


def main(argv=None) -> int:
    try:
        args = _parse(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(message)s")
        return COMMANDS[args.command](args)
    except harness.SolverBoundError as e:
        print(f"dynmono: refused: {e}", file=sys.stderr)
        return EXIT_BOUND
    except (UsageError, ValueError, argparse.ArgumentTypeError, OSError) as e:
        print(f"dynmono: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
