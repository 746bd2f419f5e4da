"""Experiment harness: seeded grids, instance comparisons, law pipeline.

Cell seeds derive from the config seed alone (never from scheduling), so
the emitted tables are byte-identical across runs and safe to parallelise
per cell. By default the same sampled instance is reused across every
fleet size and algorithm of a cell row, which keeps the consecutive-m
distance increments paired; ``shared_instances=False`` switches to
independent draws per (algorithm, m).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import heuristics
from .distlaw import (
    PowerFit,
    SummaryRow,
    delta_estimate,
    fit_power_law,
    predict_mtsp_distance,
)
from .exact import ExactResult, brute_force_oracle, build_model, solve_exact
from .instance import GridSpec, Instance, RoutePlan, derive_seed, generate_uniform_instance

_DATA_DIR = Path(__file__).parent / "data"
REFERENCE_GRID_CSV = _DATA_DIR / "heuristic_grid_means.csv"

SUMMARY_COLUMNS = ("t", "m", "algorithm", "mean", "std", "samples")


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...] = tuple(range(50, 501, 50))
    m_values: tuple[int, ...] = tuple(range(2, 8))
    samples: int = 30
    grid_max: int = 100
    base_seed: int = 1
    algorithms: tuple[str, ...] = ("nearest", "closest")
    shared_instances: bool = True

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 samples per cell")
        if not self.sizes:
            raise ValueError("need at least one instance size")
        if not self.m_values:
            raise ValueError("need at least one fleet size")
        unknown = set(self.algorithms) - set(heuristics.ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


def run_experiment(config: ExperimentConfig) -> list[SummaryRow]:
    """Sample the configured grid and aggregate per-cell statistics.

    Cell (t, sample) reuses one instance across all m and algorithms when
    ``shared_instances`` is set; otherwise each (algorithm, m) redraws with
    a seed derived from (t, sample, algorithm index, m). Standard deviation
    is the sample (n-1) estimator.
    """
    totals: dict[tuple[int, int, str], list[float]] = {
        (t, m, alg): []
        for t in config.sizes
        for m in config.m_values
        for alg in config.algorithms
    }
    for t in config.sizes:
        for sample in range(config.samples):
            shared = None
            if config.shared_instances:
                shared = generate_uniform_instance(
                    GridSpec(t, config.grid_max, derive_seed(config.base_seed, t, sample))
                )
            for alg_idx, alg in enumerate(config.algorithms):
                solver = heuristics.ALGORITHMS[alg]
                for m in config.m_values:
                    inst = shared
                    if inst is None:
                        seed = derive_seed(config.base_seed, t, sample, alg_idx, m)
                        inst = generate_uniform_instance(GridSpec(t, config.grid_max, seed))
                    totals[t, m, alg].append(solver(inst, m).total_distance)
    rows = []
    for t in config.sizes:
        for alg in config.algorithms:
            for m in config.m_values:
                values = np.asarray(totals[t, m, alg])
                rows.append(
                    SummaryRow(
                        t, m, alg,
                        float(values.mean()), float(values.std(ddof=1)),
                        config.samples,
                    )
                )
    return rows


def summary_to_csv(rows: list[SummaryRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for r in rows:
        writer.writerow([r.t, r.m, r.algorithm, repr(r.mean), repr(r.std), r.samples])
    return out.getvalue()


def summary_from_csv(text: str) -> list[SummaryRow]:
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        rows.append(
            SummaryRow(
                int(rec["t"]), int(rec["m"]), rec["algorithm"],
                float(rec["mean"]), float(rec["std"]), int(rec["samples"]),
            )
        )
    if not rows:
        raise ValueError("summary CSV holds no rows")
    return rows


def load_reference_grid() -> list[SummaryRow]:
    """The transcribed reference grid shipped with the package."""
    return summary_from_csv(REFERENCE_GRID_CSV.read_text())


def summary_to_markdown(rows: list[SummaryRow]) -> str:
    sizes = sorted({r.t for r in rows})
    ms = sorted({r.m for r in rows})
    algs = list(dict.fromkeys(r.algorithm for r in rows))
    cells = {(r.t, r.m, r.algorithm): r for r in rows}
    head = "| nodes | algorithm | " + " | ".join(f"m={m}" for m in ms) + " |"
    sep = "|" + "---|" * (len(ms) + 2)
    lines = [head, sep]
    for t in sizes:
        for alg in algs:
            bits = []
            for m in ms:
                row = cells.get((t, m, alg))
                bits.append("" if row is None else f"{row.mean:,.1f} ± {row.std:.1f}")
            lines.append(f"| {t} | {alg} | " + " | ".join(bits) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# named-instance comparison (exact vs heuristics)

@dataclass(frozen=True)
class ComparisonRow:
    instance: str
    m: int
    distances: dict[str, float]
    gaps: dict[str, float]
    statuses: dict[str, str] = field(default_factory=dict)


def default_window(n: int, m: int) -> tuple[int, int]:
    """Route-size window used for exact runs unless overridden:
    the tightest balanced one, ``L = ceil((n-1)/m)`` and ``K = max(L-1, 1)``."""
    upper = -((n - 1) // -m)
    return max(upper - 1, 1), upper


def compare_instances(
    instances: list[Instance],
    m_values: list[int],
    algorithms: list[str],
    time_limit: float | None = None,
    window: tuple[int, int] | None = None,
) -> list[ComparisonRow]:
    """Distance per algorithm and pairwise percentage gaps per (instance, m).

    The gap for an ordered pair (A, B) of the algorithm list is
    ``100 * (dist_B - dist_A) / dist_A``. Exact runs warm-start from the
    nearest-node plan.
    """
    rows = []
    for inst in instances:
        for m in m_values:
            distances: dict[str, float] = {}
            statuses: dict[str, str] = {}
            for alg in algorithms:
                if alg in heuristics.ALGORITHMS:
                    distances[alg] = heuristics.ALGORITHMS[alg](inst, m).total_distance
                    continue
                kmin, kmax = window if window else default_window(inst.n, m)
                if alg == "exact":
                    model = build_model(
                        inst, m, kmin, kmax, warm_start=heuristics.nearest_node(inst, m)
                    )
                    result = solve_exact(model, time_limit)
                elif alg == "oracle":
                    result = brute_force_oracle(inst, m, kmin, kmax)
                else:
                    raise ValueError(f"unknown algorithm {alg!r}")
                distances[alg] = result.objective
                statuses[alg] = result.status.value
            gaps = {}
            for i, a in enumerate(algorithms):
                for b in algorithms[i + 1 :]:
                    gaps[f"{a}_vs_{b}"] = 100.0 * (distances[b] - distances[a]) / distances[a]
            rows.append(ComparisonRow(inst.name, m, distances, gaps, statuses))
    return rows


def comparison_to_csv(rows: list[ComparisonRow]) -> str:
    if not rows:
        return ""
    algs = list(rows[0].distances)
    gap_keys = list(rows[0].gaps)
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["instance", "m"]
        + [f"dist_{a}" for a in algs]
        + [f"gap_pct_{g}" for g in gap_keys]
    )
    for r in rows:
        writer.writerow(
            [r.instance, r.m]
            + [repr(r.distances[a]) for a in algs]
            + [repr(r.gaps[g]) for g in gap_keys]
        )
    return out.getvalue()


def comparison_to_markdown(rows: list[ComparisonRow]) -> str:
    if not rows:
        return ""
    algs = list(rows[0].distances)
    gap_keys = list(rows[0].gaps)
    head = (
        "| instance | m | "
        + " | ".join(algs)
        + (" | " if gap_keys else "")
        + " | ".join(f"%{g}" for g in gap_keys)
        + " |"
    )
    lines = [head, "|" + "---|" * (2 + len(algs) + len(gap_keys))]
    for r in rows:
        bits = [f"{r.distances[a]:,.1f}" for a in algs]
        bits += [f"{r.gaps[g]:.1f}" for g in gap_keys]
        lines.append(f"| {r.instance} | {r.m} | " + " | ".join(bits) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# distance-law pipeline

@dataclass(frozen=True)
class PredictionRow:
    t: int
    m: int
    algorithm: str
    observed: float
    predicted: float
    deviation_pct: float


@dataclass(frozen=True)
class LawReport:
    deltas: dict[str, tuple[float, float]]
    fits: dict[str, PowerFit]
    predictions: tuple[PredictionRow, ...]
    max_deviation_pct: dict[str, float]


def law_pipeline(rows: list[SummaryRow]) -> LawReport:
    """Distance-law summary over an experiment grid.

    Per algorithm: the consecutive-m increment statistics, a power-law fit
    of the m = 2 column (both reported against the published constants),
    and the deviation of the published closed-form prediction from every
    observed cell mean.
    """
    algorithms = list(dict.fromkeys(r.algorithm for r in rows))
    deltas = {}
    fits = {}
    predictions = []
    max_dev = {}
    for alg in algorithms:
        sub = [r for r in rows if r.algorithm == alg]
        deltas[alg] = delta_estimate(sub)
        base_col = sorted((r.t, r.mean) for r in sub if r.m == 2)
        fits[alg] = fit_power_law(base_col)
        worst = 0.0
        for r in sorted(sub, key=lambda r: (r.t, r.m)):
            predicted = predict_mtsp_distance(r.t, r.m)
            deviation = 100.0 * (predicted - r.mean) / r.mean
            worst = max(worst, abs(deviation))
            predictions.append(
                PredictionRow(r.t, r.m, alg, r.mean, predicted, deviation)
            )
        max_dev[alg] = worst
    return LawReport(deltas, fits, tuple(predictions), max_dev)


def law_report_to_csv(report: LawReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", "m", "algorithm", "observed", "predicted", "deviation_pct"])
    for p in report.predictions:
        writer.writerow(
            [p.t, p.m, p.algorithm, repr(p.observed), repr(p.predicted),
             repr(p.deviation_pct)]
        )
    return out.getvalue()


def law_report_to_markdown(report: LawReport) -> str:
    lines = []
    for alg, (delta, std) in report.deltas.items():
        fit = report.fits[alg]
        lines.append(
            f"* {alg}: increment per salesman = {delta:.2f} (std {std:.1f}); "
            f"m=2 fit s = {fit.c:.1f} t^{fit.p:.3f}; "
            f"max |deviation| = {report.max_deviation_pct[alg]:.2f}%"
        )
    lines.append("")
    lines.append("| t | m | algorithm | observed | predicted | deviation % |")
    lines.append("|---|---|---|---|---|---|")
    for p in report.predictions:
        lines.append(
            f"| {p.t} | {p.m} | {p.algorithm} | {p.observed:,.1f} "
            f"| {p.predicted:,.1f} | {p.deviation_pct:+.2f} |"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# plan records (JSON lines)

def plan_record(
    instance_name: str,
    m: int,
    algorithm: str,
    plan: RoutePlan,
    result: ExactResult | None = None,
) -> dict:
    rec = {
        "instance": instance_name,
        "m": m,
        "algorithm": algorithm,
        "routes": [list(r) for r in plan.routes],
        "per_route_distance": list(plan.per_route_distance),
        "total_distance": plan.total_distance,
    }
    if result is not None:
        rec.update(
            status=result.status.value,
            objective=result.objective,
            lower_bound=result.lower_bound,
            nodes_explored=result.nodes_explored,
            wall_time=result.wall_time,
        )
    return rec


def plan_to_jsonl(records: list[dict]) -> str:
    return "".join(json.dumps(rec) + "\n" for rec in records)
