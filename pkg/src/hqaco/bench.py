"""Report rows and the benchmark sweep over the TSPLIB instances of the study.

CSV column order is fixed (see ``CSV_COLUMNS``).  ``elapsed`` is only written
when ``timing=True`` so that reruns with the same seeds are byte-identical.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .graph_io import ProblemInstance, KNOWN_OPTIMA, load_instance
from .oracle import HELD_KARP_MAX_NODES, held_karp
from .solver import RunResult, SolverConfig, error_in_estimation, run

log = logging.getLogger(__name__)

__all__ = [
    "ReportRow",
    "CSV_COLUMNS",
    "BENCH_INSTANCES",
    "reference_cost",
    "solve_report",
    "run_bench",
    "rows_to_csv",
    "rows_to_json",
]

BENCH_INSTANCES = tuple(KNOWN_OPTIMA)

CSV_COLUMNS = (
    "instance",
    "nodes",
    "reference",
    "found_cost",
    "error_percent",
    "qubits_start",
    "qubits_step",
    "seed",
    "status",
    "found_path",
)


@dataclass
class ReportRow:
    instance: str
    nodes: int
    reference: float | None
    found_cost: float | None
    found_path: list[int]
    error_percent: float | None
    qubits_start: int
    qubits_step: int
    seed: int
    elapsed: float = 0.0
    status: str = "ok"

    @classmethod
    def from_result(
        cls, instance: ProblemInstance, result: RunResult, reference: float | None, seed: int
    ) -> "ReportRow":
        found = result.best_cost if result.best_cycle else None
        error = None
        if found is not None and reference:
            error = round(error_in_estimation(found, reference), 2)
        return cls(
            instance=result.instance,
            nodes=instance.dimension,
            reference=reference,
            found_cost=found,
            found_path=list(result.best_cycle),
            error_percent=error,
            qubits_start=result.qubits[0],
            qubits_step=result.qubits[1],
            seed=seed,
            elapsed=result.elapsed,
            status=result.status,
        )

    def as_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("elapsed")
        return d


def _num(x):
    if x is None:
        return ""
    return int(x) if float(x).is_integer() else x


def rows_to_csv(rows, timing: bool = False) -> str:
    cols = CSV_COLUMNS + (("elapsed",) if timing else ())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        d = row.as_dict(timing=True)
        d["found_path"] = " ".join(str(n) for n in row.found_path)
        for k in ("reference", "found_cost"):
            d[k] = _num(d[k])
        d["error_percent"] = "" if row.error_percent is None else f"{row.error_percent:.2f}"
        if timing:
            d["elapsed"] = f"{row.elapsed:.3f}"
        w.writerow([d[c] for c in cols])
    return buf.getvalue()


def rows_to_json(rows, timing: bool = False) -> str:
    """One JSON object per line."""
    lines = []
    for row in rows:
        d = row.as_dict(timing)
        for k in ("reference", "found_cost"):
            if d[k] is not None:
                d[k] = _num(d[k])
        lines.append(json.dumps(d) + "\n")
    return "".join(lines)


def reference_cost(instance: ProblemInstance) -> float | None:
    """Known optimum for the instance, else Held-Karp when small enough, else None."""
    if instance.lower_bound:
        return float(instance.lower_bound)
    if instance.dimension <= HELD_KARP_MAX_NODES:
        try:
            return held_karp(instance).optimal_cost
        except ValueError:
            return None
    return None


def solve_report(
    instance: ProblemInstance,
    config: SolverConfig,
    seeds=None,
    reference: float | None = None,
) -> ReportRow:
    """Run once per seed and report the best run (first seed wins ties)."""
    seeds = list(seeds) if seeds is not None else [config.seed]
    if reference is None:
        reference = reference_cost(instance)
    best: ReportRow | None = None
    total = 0.0
    for seed in seeds:
        result = run(instance, replace(config, seed=seed))
        row = ReportRow.from_result(instance, result, reference, seed)
        total += row.elapsed
        log.info("%s seed=%d cost=%s", instance.name, seed, row.found_cost)
        if best is None or (
            row.found_cost is not None
            and (best.found_cost is None or row.found_cost < best.found_cost)
        ):
            best = row
    best.elapsed = total
    return best


def run_bench(directory, config: SolverConfig, seeds=None, names=BENCH_INSTANCES):
    """Solve each ``<name>.tsp`` found in ``directory``.

    Returns ``(rows, skipped)``; rows are sorted by error ascending, rows
    without an error value last.
    """
    directory = Path(directory)
    rows, skipped = [], []
    for name in names:
        path = directory / f"{name}.tsp"
        if not path.is_file():
            skipped.append(name)
            continue
        instance = load_instance(path)
        rows.append(solve_report(instance, config, seeds))
    rows.sort(key=lambda r: (r.error_percent is None, r.error_percent or 0.0, r.instance))
    return rows, skipped
