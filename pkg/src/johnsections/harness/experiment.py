"""Trial scheduling, sweeps over (n, k) and report output."""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from ..errors import GeometryError, NotConverged
from .checkers import CHECKERS, Checker, Trial
from .generators import BODY_CLASSES, NAMED
from .records import CSV_COLUMNS, CheckReport, ExperimentConfig, Record

THREADS_ENV = "JOHNSECTIONS_THREADS"


def dimension_pool(checker: Checker, max_n: int) -> list[tuple[int, int]]:
    pairs = [(n, k) for n in range(2, max_n + 1) for k in range(1, n)]
    if checker.pool == "k|n":
        pairs = [(n, k) for n, k in pairs if n % k == 0]
    elif checker.pool == "k>=2":
        pairs = [(n, k) for n, k in pairs if k >= 2]
    return pairs


def make_trial(config: ExperimentConfig, index: int) -> Trial:
    """Derive everything random about one trial from (seed, index) alone."""
    checker = CHECKERS[config.theorem]
    body_seed, sub_seed, mc_seed, pick_seed = (
        int(s) for s in np.random.SeedSequence([config.seed, index]).generate_state(4, dtype=np.uint32))
    pick = np.random.default_rng(pick_seed)
    if config.n is None:
        pool = dimension_pool(checker, config.max_n)
        n, k = pool[pick.integers(len(pool))]
    else:
        n, k = config.n, config.k
    body_class = config.body_class or checker.body_class
    lo = 2 * n
    m = int(pick.integers(lo, 4 * n + 1))
    if body_class == "symmetric" and m % 2:
        m -= 1
    if checker.needs_distance:
        d = config.d if config.d is not None else float(pick.uniform(0.0, math.sqrt(n)))
    else:
        d = 0.0
    return Trial(config=config, theorem=checker.id, index=index, n=int(n), k=int(k), m=m, d=d,
                 body_class=body_class, body_seed=body_seed, sub_seed=sub_seed,
                 mc_seed=mc_seed, pick_seed=pick_seed)


def run_trial(config: ExperimentConfig, index: int) -> list[Record]:
    trial = make_trial(config, index)
    checker = CHECKERS[config.theorem]
    if checker.pool == "k|n" and trial.n % trial.k:
        trial.skip("k does not divide n")
        return trial.records
    try:
        checker.run(trial)
    except (GeometryError, NotConverged) as exc:
        trial.records = []
        trial.skip(f"{type(exc).__name__}: {exc}", d=trial.d if checker.needs_distance else None)
    return trial.records


SYMMETRIC_CLASSES = ("symmetric", "cube", "cross")


def validate_for_checker(config: ExperimentConfig) -> None:
    """Reject overrides that the chosen checker cannot honour."""
    checker = CHECKERS.get(config.theorem)
    if checker is None:
        raise ValueError(f"unknown theorem id {config.theorem!r}")
    if config.position is not None and config.position != checker.position:
        raise ValueError(f"{checker.id} works in {checker.position} position, not {config.position}")
    cls = config.body_class
    if cls is None or cls == checker.body_class:
        return
    if checker.body_class in NAMED:
        raise ValueError(f"{checker.id} is defined for the {checker.body_class} only")
    if cls not in BODY_CLASSES:
        raise ValueError(f"unknown body class {cls!r}")
    if checker.body_class == "symmetric" and cls not in SYMMETRIC_CLASSES:
        raise ValueError(f"{checker.id} needs a centrally symmetric body class")


def _run_indexed(args):
    return run_trial(*args)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def run_experiment(config: ExperimentConfig, threads: int | None = None) -> CheckReport:
    """Run ``config.trials`` trials. Results do not depend on the worker count."""
    validate_for_checker(config)
    threads = thread_count() if threads is None else threads
    jobs = [(config, i) for i in range(config.trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_indexed, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        chunks = [_run_indexed(j) for j in jobs]
    records = [r for chunk in chunks for r in chunk]
    return CheckReport(config.theorem, config, records)


def run_all(base: ExperimentConfig, threads: int | None = None) -> list[CheckReport]:
    reports = []
    for tid in CHECKERS:
        cfg = ExperimentConfig(**{**base.to_dict(), "theorem": tid, "body_class": None})
        reports.append(run_experiment(cfg, threads))
    return reports


def emit_report(report: CheckReport, out_dir) -> tuple[Path, Path]:
    """Write ``<id>.json`` and ``<id>.csv``; an empty report still gets the CSV header."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    js = out / f"{report.theorem}.json"
    cs = out / f"{report.theorem}.csv"
    js.write_text(report.to_json())
    with cs.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in report.records:
            w.writerow(r.csv_row())
    return js, cs
