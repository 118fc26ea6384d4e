"""Datasets, batch experiments and KPI reports."""

from __future__ import annotations

import csv
import json
import logging
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import GaFactorError, ParseError, VerificationError
from .ga_core import GaConfig
from .numtheory import (
    SemiprimeRecord,
    build_problem,
    digit_count,
    generate_semiprime,
    is_prime,
    sss,
)
from .sieve import SieveForm, derive_seed, run_sieve, tune_sieve_form
from .simple_ga import RunReport, run_simple_ga

logger = logging.getLogger(__name__)

ALGORITHMS = ("simple-ga", "sieve")
DEFAULT_DIGITS = (8, 23)
REPORT_COLUMNS = (
    "digits",
    "success_rate_pct",
    "min_generation",
    "max_generation",
    "avg_generation",
    "total_time_s",
    "avg_time_per_iter_s",
)
TIME_COLUMNS = ("total_time_s", "avg_time_per_iter_s")
RUN_COLUMNS = ("M", "instance", "seed", "a", "d", "success", "factor", "cofactor",
               "generations", "elapsed_s", "error")


@dataclass
class Dataset:
    name: str
    records: list[SemiprimeRecord]


def _parse_int(text: str, what: str, row: int) -> int:
    text = text.strip()
    if not text.isdigit():
        raise ParseError(f"{what} is not a decimal integer: {text!r}", row)
    return int(text)


def verify_record(M: int, p: int, q: int, row: int | None = None) -> SemiprimeRecord:
    if p > q:
        p, q = q, p
    if p * q != M:
        raise VerificationError(f"{p} x {q} != {M}", row)
    for f in (p, q):
        if not is_prime(f):
            raise VerificationError(f"{f} is not prime", row)
    if digit_count(p) != digit_count(q):
        raise VerificationError(f"{p} and {q} differ in length (unbalanced)", row)
    return SemiprimeRecord(M=M, p=p, q=q, digits=digit_count(M))


def load_dataset(path: str | Path) -> Dataset:
    """Read an ``M,p,q`` CSV, verifying every row. Row numbers count the header as 1."""
    path = Path(path)
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["M", "p", "q"]:
            raise ParseError(f"expected header M,p,q, got {header}", 1)
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", row_no)
            M, p, q = (_parse_int(v, name, row_no) for v, name in zip(row, "Mpq"))
            records.append(verify_record(M, p, q, row_no))
    return Dataset(name=path.stem, records=records)


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["M", "p", "q"])
        for r in dataset.records:
            writer.writerow([r.M, r.p, r.q])


def make_datasets(count: int, digits_range: tuple[int, int] = DEFAULT_DIGITS,
                  seed: int = 0) -> list[Dataset]:
    lo, hi = digits_range
    if lo > hi:
        raise ValueError(f"empty digit range {lo}..{hi}")
    datasets = []
    for i in range(1, count + 1):
        records = [generate_semiprime(d, derive_seed("dataset", seed, i, d))
                   for d in range(lo, hi + 1)]
        datasets.append(Dataset(name=f"d{i}", records=records))
    return datasets


# Batch execution.

@dataclass(frozen=True)
class RunTask:
    M: int
    instance: int
    seed: int
    algorithm: str
    config: dict
    form: tuple[int, int] | None


@dataclass
class RunRecord:
    M: int
    instance: int
    seed: int
    success: bool
    generations: int | None
    elapsed: float
    factor: int | None = None
    cofactor: int | None = None
    form: tuple[int, int] | None = None
    error: str = ""

    @property
    def digits(self) -> int:
        return digit_count(self.M)


def instance_seed(base_seed: int, M: int, instance: int) -> int:
    return base_seed ^ derive_seed(M, instance)


def _execute(task: RunTask) -> RunRecord:
    started = time.perf_counter()
    try:
        problem = build_problem(task.M)
        if task.algorithm == "simple-ga":
            cfg = GaConfig.simple_defaults(seed=task.seed, **task.config)
            report = run_simple_ga(problem, cfg)
        else:
            cfg = GaConfig.sieve_defaults(seed=task.seed, **task.config)
            report = run_sieve(problem, SieveForm(*task.form), cfg)
    except (GaFactorError, ValueError) as exc:
        logger.warning("run M=%d instance=%d failed: %s", task.M, task.instance, exc)
        return RunRecord(M=task.M, instance=task.instance, seed=task.seed, success=False,
                         generations=None, elapsed=round(time.perf_counter() - started, 6),
                         form=task.form, error=f"{type(exc).__name__}: {exc}")
    return _record_from_report(task, report)


def _record_from_report(task: RunTask, report: RunReport) -> RunRecord:
    return RunRecord(M=task.M, instance=task.instance, seed=task.seed,
                     success=report.success, generations=report.generations,
                     elapsed=round(report.elapsed, 6), factor=report.factor,
                     cofactor=report.cofactor, form=task.form)


def _tune(args: tuple[int, int]) -> tuple[int, int]:
    M, seed = args
    try:
        return tune_sieve_form(M, seed).as_tuple()
    except (GaFactorError, ValueError) as exc:
        logger.warning("tuning M=%d failed (%s); using 6n+/-1", M, exc)
        return (6, 1)


def _map(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=1))


def default_jobs() -> int:
    return int(os.environ.get("GAFACTOR_JOBS", "1"))


def execute_batch(records: Iterable[SemiprimeRecord], algorithm: str, instances: int = 30,
                  base_seed: int = 0, jobs: int = 1, config: dict | None = None,
                  form: tuple[int, int] | None = None) -> list[RunRecord]:
    """Run every (record, instance) pair and return raw records sorted by (M, instance).

    ``form`` pins the sieve form for every record; otherwise records of 19+
    digits are tuned once each and the rest use 6n +/- 1.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    numbers = sorted({r.M for r in records})
    config = dict(config or {})

    forms: dict[int, tuple[int, int] | None] = {M: None for M in numbers}
    if algorithm == "sieve":
        if form is not None:
            forms = {M: form for M in numbers}
        else:
            tuned = _map(_tune, [(M, derive_seed("tune", base_seed, M)) for M in numbers], jobs)
            forms = dict(zip(numbers, tuned))

    tasks = [RunTask(M=M, instance=i, seed=instance_seed(base_seed, M, i),
                     algorithm=algorithm, config=config, form=forms[M])
             for M in numbers for i in range(instances)]
    results = _map(_execute, tasks, jobs)
    return sorted(results, key=lambda r: (r.M, r.instance))


@dataclass
class DigitRow:
    digits: int
    success_rate_pct: float
    min_generation: int | None
    max_generation: int | None
    avg_generation: float | None
    total_time_s: float
    avg_time_per_iter_s: float


@dataclass
class BatchReport:
    algorithm: str
    instances: int
    rows: list[DigitRow] = field(default_factory=list)

    def row(self, digits: int) -> DigitRow:
        for r in self.rows:
            if r.digits == digits:
                return r
        raise KeyError(digits)


def aggregate(runs: Sequence[RunRecord], algorithm: str, instances: int) -> BatchReport:
    """Per-digit KPIs. Generation statistics cover successful runs only.

    Times are summed over each number's instances and averaged across the
    numbers of that length, so ``total_time_s`` reads as "time for the
    ``instances`` iterations" regardless of how many numbers share a length.
    """
    for r in runs:
        if r.success and (r.factor is None or r.cofactor is None or r.factor * r.cofactor != r.M):
            raise VerificationError(f"run M={r.M} instance={r.instance} reports a bad factor pair")
    by_digits: dict[int, list[RunRecord]] = {}
    for r in runs:
        by_digits.setdefault(r.digits, []).append(r)

    rows = []
    for digits in sorted(by_digits):
        group = by_digits[digits]
        wins = [r.generations for r in group if r.success]
        numbers = len({r.M for r in group})
        total = sum(r.elapsed for r in group) / numbers
        rows.append(DigitRow(
            digits=digits,
            success_rate_pct=round(100.0 * len(wins) / len(group), 2),
            min_generation=min(wins) if wins else None,
            max_generation=max(wins) if wins else None,
            avg_generation=round(statistics.fmean(wins), 2) if wins else None,
            total_time_s=round(total, 4),
            avg_time_per_iter_s=round(sum(r.elapsed for r in group) / len(group), 4),
        ))
    return BatchReport(algorithm=algorithm, instances=instances, rows=rows)


def run_batch(dataset: Dataset | Sequence[SemiprimeRecord], algorithm: str, instances: int = 30,
              base_seed: int = 0, parallelism: int = 1, config: dict | None = None,
              form: tuple[int, int] | None = None) -> tuple[BatchReport, list[RunRecord]]:
    records = dataset.records if isinstance(dataset, Dataset) else list(dataset)
    runs = execute_batch(records, algorithm, instances, base_seed, parallelism, config, form)
    return aggregate(runs, algorithm, instances), runs


# Serialization.

def _format_row(row: DigitRow, include_time: bool) -> list[str]:
    cells = []
    for col in REPORT_COLUMNS:
        if col in TIME_COLUMNS and not include_time:
            continue
        value = getattr(row, col)
        if value is None:
            cells.append("")
        elif col in ("success_rate_pct", "avg_generation"):
            cells.append(f"{value:.2f}")
        elif col in TIME_COLUMNS:
            cells.append(f"{value:.4f}")
        else:
            cells.append(str(value))
    return cells


def report_to_csv(report: BatchReport, include_time: bool = True) -> str:
    cols = [c for c in REPORT_COLUMNS if include_time or c not in TIME_COLUMNS]
    lines = [",".join(cols)]
    lines += [",".join(_format_row(r, include_time)) for r in report.rows]
    return "\n".join(lines) + "\n"


def report_to_json(report: BatchReport) -> str:
    return json.dumps(asdict(report), indent=2) + "\n"


def report_from_json(text: str) -> BatchReport:
    data = json.loads(text)
    return BatchReport(algorithm=data["algorithm"], instances=data["instances"],
                       rows=[DigitRow(**row) for row in data["rows"]])


def report_from_csv(text: str, algorithm: str = "", instances: int = 0) -> BatchReport:
    reader = csv.DictReader(text.splitlines())
    if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
        raise ParseError(f"unexpected report columns {reader.fieldnames}")
    rows = []
    for rec in reader:
        def opt(name, conv):
            return conv(rec[name]) if rec[name] != "" else None
        rows.append(DigitRow(
            digits=int(rec["digits"]),
            success_rate_pct=float(rec["success_rate_pct"]),
            min_generation=opt("min_generation", int),
            max_generation=opt("max_generation", int),
            avg_generation=opt("avg_generation", float),
            total_time_s=float(rec["total_time_s"]),
            avg_time_per_iter_s=float(rec["avg_time_per_iter_s"]),
        ))
    return BatchReport(algorithm=algorithm, instances=instances, rows=rows)


def emit_report(report: BatchReport, fmt: str, path: str | Path) -> None:
    if fmt == "csv":
        text = report_to_csv(report)
    elif fmt == "json":
        text = report_to_json(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def runs_to_csv(runs: Sequence[RunRecord]) -> str:
    lines = [",".join(RUN_COLUMNS)]
    for r in runs:
        a, d = r.form if r.form else ("", "")
        cells = [r.M, r.instance, r.seed, a, d, int(r.success),
                 "" if r.factor is None else r.factor,
                 "" if r.cofactor is None else r.cofactor,
                 "" if r.generations is None else r.generations,
                 f"{r.elapsed:.6f}", r.error.replace(",", ";")]
        lines.append(",".join(str(c) for c in cells))
    return "\n".join(lines) + "\n"


def runs_from_csv(text: str) -> list[RunRecord]:
    runs = []
    for rec in csv.DictReader(text.splitlines()):
        def opt(name):
            return int(rec[name]) if rec[name] != "" else None
        form = (int(rec["a"]), int(rec["d"])) if rec["a"] else None
        runs.append(RunRecord(M=int(rec["M"]), instance=int(rec["instance"]),
                              seed=int(rec["seed"]), success=rec["success"] == "1",
                              generations=opt("generations"), elapsed=float(rec["elapsed_s"]),
                              factor=opt("factor"), cofactor=opt("cofactor"), form=form,
                              error=rec["error"]))
    return runs


# Search-space shrinkage over datasets.

@dataclass(frozen=True)
class SssRow:
    dataset: str
    M: int
    digits: int
    sss: float


def sss_table(datasets: Sequence[Dataset]) -> list[SssRow]:
    return [SssRow(ds.name, r.M, r.digits, sss(build_problem(r.M)))
            for ds in datasets for r in ds.records]


def sss_medians(rows: Sequence[SssRow]) -> dict[str, float]:
    """Median SSS overall and for odd- and even-length numbers."""
    out = {"all": statistics.median(r.sss for r in rows)}
    for parity, rem in (("odd", 1), ("even", 0)):
        group = [r.sss for r in rows if r.digits % 2 == rem]
        if group:
            out[parity] = statistics.median(group)
    return out
