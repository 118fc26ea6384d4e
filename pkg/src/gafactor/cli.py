"""Command-line interface: ``gafactor <subcommand> [flags]``.

Every randomized subcommand takes a seed; the documented default is 0.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import digits as digit_stats
from . import harness
from .errors import GaFactorError
from .ga_core import GaConfig
from .numtheory import build_problem
from .sieve import SieveForm, run_sieve, tune_sieve_form
from .simple_ga import run_simple_ga

log = logging.getLogger("gafactor")


def _digit_range(text: str) -> tuple[int, int]:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    return int(text), int(text)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gafactor",
                                     description="Factor balanced semiprimes with genetic algorithms.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-datasets", help="generate balanced-semiprime datasets")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--digits", type=_digit_range, default=harness.DEFAULT_DIGITS,
                   help="digit length or range, e.g. 8-23 (default 8-23)")
    p.add_argument("--seed", type=_positive_int, default=0)
    p.add_argument("--out-dir", type=Path, default=Path("."))

    p = sub.add_parser("factor", help="factor one number")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--algorithm", choices=harness.ALGORITHMS, default="sieve")
    p.add_argument("--seed", type=_positive_int, default=0)
    p.add_argument("--max-generations", type=int, default=2000)
    p.add_argument("--population", type=int, default=1500)
    p.add_argument("--crossover", type=float, default=None, help="default 0.5")
    p.add_argument("--mutation", type=float, default=None,
                   help="default 1.0 (simple-ga) or 0.95 (sieve)")
    p.add_argument("--a", type=int, default=None, help="sieve modulus a (default: 6, tuned at 19+ digits)")
    p.add_argument("--d", type=int, default=None, help="sieve offset d (default 1)")

    p = sub.add_parser("bench", help="run a seeded batch and write a KPI report")
    p.add_argument("--dataset", type=Path, action="append", required=True,
                   help="dataset CSV (M,p,q); repeat to pool several")
    p.add_argument("--algorithm", choices=harness.ALGORITHMS, default="sieve")
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--base-seed", type=_positive_int, default=0)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default $GAFACTOR_JOBS or 1)")
    p.add_argument("--report", type=Path, default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--runs", type=Path, default=None,
                   help="raw per-run CSV (default <report>.runs.csv when --report is given)")
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--population", type=int, default=None)
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("sss", help="search-space shrinkage per number, with odd/even medians")
    p.add_argument("--dataset", type=Path, action="append", required=True)

    p = sub.add_parser("digits", help="digit distribution of primes below 10^n")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--out", type=Path, default=None, help="CSV path (default stdout)")
    return parser


def _cmd_gen_datasets(args) -> int:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for ds in harness.make_datasets(args.count, args.digits, args.seed):
        path = args.out_dir / f"{ds.name}.csv"
        harness.save_dataset(ds, path)
        print(f"{path}: {len(ds.records)} records")
    return 0


def _form_from_args(args, default: tuple[int, int] | None) -> tuple[int, int] | None:
    if args.a is None and args.d is None:
        return default
    return SieveForm(args.a if args.a is not None else 6,
                     args.d if args.d is not None else 1).as_tuple()


def _cmd_factor(args) -> int:
    problem = build_problem(args.m)
    overrides = dict(seed=args.seed, population=args.population,
                     max_generations=args.max_generations)
    if args.crossover is not None:
        overrides["crossover_rate"] = args.crossover
    if args.mutation is not None:
        overrides["mutation_rate"] = args.mutation
    if args.algorithm == "simple-ga":
        report = run_simple_ga(problem, GaConfig.simple_defaults(**overrides))
    else:
        form = _form_from_args(args, None)
        form = SieveForm(*form) if form else tune_sieve_form(args.m, args.seed)
        log.info("sieve form %dn +/- %d", form.a, form.d)
        report = run_sieve(problem, form, GaConfig.sieve_defaults(**overrides))
    if not report.success:
        print(f"no factor found after {report.generations} generations", file=sys.stderr)
        return 1
    print(f"{report.factor} x {report.cofactor}")
    log.info("generation %d, %.3f s", report.generations, report.elapsed)
    return 0


def _cmd_bench(args) -> int:
    records = []
    for path in args.dataset:
        records.extend(harness.load_dataset(path).records)
    config = {}
    if args.max_generations is not None:
        config["max_generations"] = args.max_generations
    if args.population is not None:
        config["population"] = args.population
    jobs = args.jobs if args.jobs is not None else harness.default_jobs()
    form = _form_from_args(args, None) if args.algorithm == "sieve" else None
    report, runs = harness.run_batch(records, args.algorithm, args.instances, args.base_seed,
                                     jobs, config, form)
    text = harness.report_to_csv(report) if args.format == "csv" else harness.report_to_json(report)
    if args.report is None:
        sys.stdout.write(text)
    else:
        args.report.write_text(text, encoding="utf-8")
    runs_path = args.runs or (args.report.with_name(args.report.name + ".runs.csv")
                              if args.report else None)
    if runs_path is not None:
        runs_path.write_text(harness.runs_to_csv(runs), encoding="utf-8")
    return 0


def _cmd_sss(args) -> int:
    datasets = [harness.load_dataset(p) for p in args.dataset]
    rows = harness.sss_table(datasets)
    print(f"{'dataset':<10} {'digits':>6} {'sss_pct':>8}  M")
    for r in rows:
        print(f"{r.dataset:<10} {r.digits:>6} {r.sss:8.2f}  {r.M}")
    medians = harness.sss_medians(rows)
    for key in ("all", "odd", "even"):
        if key in medians:
            print(f"median {key}: {medians[key]:.2f}")
    return 0


def _cmd_digits(args) -> int:
    rows = digit_stats.convergence_report(args.n_max)
    if args.out is None:
        print("n,digit,probability,deviation")
        for n, d, p, dev in rows:
            print(f"{n},{d},{p:.10f},{dev:.10f}")
    else:
        digit_stats.write_convergence_csv(rows, args.out)
    return 0


COMMANDS = {
    "gen-datasets": _cmd_gen_datasets,
    "factor": _cmd_factor,
    "bench": _cmd_bench,
    "sss": _cmd_sss,
    "digits": _cmd_digits,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (GaFactorError, ValueError, OSError) as exc:
        print(f"gafactor {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
