"""Experiment sweeps: seeded trial grids over graph families, CSV
serialization, aggregation, and scaling analysis of the results.

A sweep is fully determined by its spec: per-trial seeds come from the
SplitMix64 derivation in the process module, trials may run in parallel,
and rows are always assembled in (n, trial) order so serial and parallel
runs produce identical files.
"""

from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .generators import generate
from .process import DEFAULT_MAX_ROUNDS, ProcessConfig, ProcessKind, trial_seed
from .process import run_to_convergence

__all__ = [
    "ExperimentSpec",
    "TrialRow",
    "AggregateRow",
    "ROWS_CSV_HEADER",
    "AGGREGATES_CSV_HEADER",
    "run_sweep",
    "aggregate_rows",
    "rows_to_csv",
    "rows_from_csv",
    "aggregates_to_csv",
    "scaling_report",
]

ROWS_CSV_HEADER = "family,n,process,trial,seed,rounds,capped"
AGGREGATES_CSV_HEADER = (
    "family,n,process,trials,mean,median,p05,p95,"
    "per_n_log_n,per_n_log2_n,per_n_sq,capped_trials"
)


@dataclass
class ExperimentSpec:
    """One sweep: a family, a process, a size list, and seeded trials."""

    family: str
    kind: ProcessKind
    sizes: list[int]
    trials: int
    master_seed: int
    max_rounds: int = DEFAULT_MAX_ROUNDS
    p: float | None = None
    clique_frac: float | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.sizes:
            raise ValueError("sizes must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass(frozen=True)
class TrialRow:
    family: str
    n: int
    process: str
    trial: int
    seed: int
    rounds: int
    capped: bool


@dataclass(frozen=True)
class AggregateRow:
    family: str
    n: int
    process: str
    trials: int
    mean: float
    median: float
    p05: float
    p95: float
    per_n_log_n: float
    per_n_log2_n: float
    per_n_sq: float
    capped_trials: int


def _run_one(args: tuple) -> tuple[int, int, bool]:
    index, family, n, kind_value, seed, max_rounds, p, clique_frac = args
    g = generate(family, n, seed, p=p, clique_frac=clique_frac)
    config = ProcessConfig(
        kind=ProcessKind(kind_value), seed=seed, max_rounds=max_rounds
    )
    rounds, capped = run_to_convergence(g, config)
    return index, rounds, capped


def run_sweep(spec: ExperimentSpec) -> list[TrialRow]:
    """Execute every (size, trial) cell; rows come back in (n, trial) order.

    The per-trial seed is ``trial_seed(master_seed, row_index)`` where
    ``row_index`` enumerates (size, trial) cells over ascending sizes;
    generator randomness (the random family) reuses the same seed.
    """
    sizes = sorted(spec.sizes)
    tasks = []
    index = 0
    for n in sizes:
        for _trial in range(spec.trials):
            seed = trial_seed(spec.master_seed, index)
            tasks.append(
                (
                    index,
                    spec.family,
                    n,
                    spec.kind.value,
                    seed,
                    spec.max_rounds,
                    spec.p,
                    spec.clique_frac,
                )
            )
            index += 1
    if spec.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=8))
        outcomes.sort(key=lambda r: r[0])
    else:
        outcomes = [_run_one(t) for t in tasks]
    rows = []
    for task, (_, rounds, capped) in zip(tasks, outcomes):
        index, family, n, kind_value, seed = task[:5]
        rows.append(
            TrialRow(
                family=family,
                n=n,
                process=kind_value,
                trial=index % spec.trials,
                seed=seed,
                rounds=rounds,
                capped=capped,
            )
        )
    return rows


def _quantile(sorted_vals: list[float], q: float) -> float:
    # linear interpolation between closest ranks (numpy's default scheme)
    if not sorted_vals:
        raise ValueError("empty sample")
    if len(sorted_vals) == 1:
        return float(sorted_vals[0])
    pos = q * (len(sorted_vals) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return sorted_vals[lo] * (1 - frac) + sorted_vals[hi] * frac


def aggregate_rows(rows: list[TrialRow]) -> list[AggregateRow]:
    """Per-(family, process, n) statistics, recomputable from the rows."""
    groups: dict[tuple[str, str, int], list[TrialRow]] = {}
    for row in rows:
        groups.setdefault((row.family, row.process, row.n), []).append(row)
    out = []
    for (family, process, n), members in sorted(groups.items()):
        values = sorted(float(r.rounds) for r in members)
        med = statistics.median(values)
        log_n = math.log(n)
        out.append(
            AggregateRow(
                family=family,
                n=n,
                process=process,
                trials=len(values),
                mean=statistics.fmean(values),
                median=med,
                p05=_quantile(values, 0.05),
                p95=_quantile(values, 0.95),
                per_n_log_n=med / (n * log_n),
                per_n_log2_n=med / (n * log_n * log_n),
                per_n_sq=med / (n * n),
                capped_trials=sum(1 for r in members if r.capped),
            )
        )
    return out


def rows_to_csv(rows: list[TrialRow]) -> str:
    lines = [ROWS_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.family},{r.n},{r.process},{r.trial},{r.seed},{r.rounds},"
            f"{1 if r.capped else 0}"
        )
    return "\n".join(lines) + "\n"


def rows_from_csv(text: str) -> list[TrialRow]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != ROWS_CSV_HEADER:
        raise ValueError(f"expected header {ROWS_CSV_HEADER!r}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 7:
            raise ValueError(f"bad row {ln!r}")
        family, n, process, trial, seed, rounds, capped = parts
        rows.append(
            TrialRow(
                family=family,
                n=int(n),
                process=process,
                trial=int(trial),
                seed=int(seed),
                rounds=int(rounds),
                capped=capped == "1",
            )
        )
    return rows


def _fmt(x: float) -> str:
    return repr(round(x, 9))


def aggregates_to_csv(aggs: list[AggregateRow]) -> str:
    lines = [AGGREGATES_CSV_HEADER]
    for a in aggs:
        lines.append(
            f"{a.family},{a.n},{a.process},{a.trials},{_fmt(a.mean)},"
            f"{_fmt(a.median)},{_fmt(a.p05)},{_fmt(a.p95)},"
            f"{_fmt(a.per_n_log_n)},{_fmt(a.per_n_log2_n)},{_fmt(a.per_n_sq)},"
            f"{a.capped_trials}"
        )
    return "\n".join(lines) + "\n"


def _trend(values: list[float]) -> str:
    nondecreasing = all(b >= a for a, b in zip(values, values[1:]))
    nonincreasing = all(b <= a for a, b in zip(values, values[1:]))
    if nondecreasing and nonincreasing:
        return "constant"
    if nondecreasing:
        return "nondecreasing"
    if nonincreasing:
        return "nonincreasing"
    return "mixed"


def scaling_report(rows: list[TrialRow]) -> dict:
    """Normalized-median table plus a monotonic trend verdict per ratio.

    The three normalizations target the known growth orders: n log n
    (undirected lower bound), n log^2 n (undirected upper bound), and
    n^2 (directed bounds).
    """
    aggs = aggregate_rows(rows)
    report: dict = {}
    groups: dict[tuple[str, str], list[AggregateRow]] = {}
    for a in aggs:
        groups.setdefault((a.family, a.process), []).append(a)
    for (family, process), members in sorted(groups.items()):
        members.sort(key=lambda a: a.n)
        entry = {
            "sizes": [a.n for a in members],
            "median": [a.median for a in members],
            "per_n_log_n": [a.per_n_log_n for a in members],
            "per_n_log2_n": [a.per_n_log2_n for a in members],
            "per_n_sq": [a.per_n_sq for a in members],
        }
        entry["trend"] = {
            key: _trend(entry[key])
            for key in ("per_n_log_n", "per_n_log2_n", "per_n_sq")
        }
        report[f"{family}/{process}"] = entry
    return report
