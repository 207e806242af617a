"""Synthetic tables and actual plan execution.

Stands in for benchmark-dataset experiments: generate a table with
independent columns, estimate selectivity intervals from histograms built on
that table, plan with the competing methods, then execute each plan by
sequential filtering and count real predicate evaluations.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import estimate, heuristic
from .engine import optimal_plan
from .estimate import RangePredicate
from .heuristic import HeuristicConfig
from .model import Instance, Operator, Plan, Scenario, SelectivityInterval

__all__ = [
    "ColumnSpec",
    "TableSpec",
    "ColumnPredicate",
    "ExecutionTrace",
    "MethodOutcome",
    "ComparisonReport",
    "generate_table",
    "empirical_scenario",
    "execute_plan",
    "compare_methods",
    "load_table_spec",
    "load_predicates",
]


@dataclass(frozen=True)
class ColumnSpec:
    """One column: uniform(lo, hi) reals or zipf(n_values, exponent) ranks."""

    name: str
    dist: str  # "uniform" or "zipf"
    params: tuple[float, ...]

    def __post_init__(self):
        if self.dist == "uniform":
            if len(self.params) != 2 or not self.params[0] < self.params[1]:
                raise ValueError(f"uniform needs (lo, hi) with lo < hi, got {self.params}")
        elif self.dist == "zipf":
            if len(self.params) != 2 or int(self.params[0]) < 1 or self.params[1] <= 0:
                raise ValueError(
                    f"zipf needs (n_values >= 1, exponent > 0), got {self.params}"
                )
        else:
            raise ValueError(f"unknown distribution {self.dist!r}")


@dataclass(frozen=True)
class TableSpec:
    row_count: int
    columns: tuple[ColumnSpec, ...]
    seed: int = 0

    def __post_init__(self):
        if self.row_count < 1:
            raise ValueError(f"row_count must be >= 1, got {self.row_count}")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names in {names}")


@dataclass(frozen=True)
class ColumnPredicate:
    """A range predicate bound to a table column."""

    column: str
    pred: RangePredicate


@dataclass(frozen=True)
class ExecutionTrace:
    """Observed work of one sequential plan execution.

    ``evaluations_per_position[k]`` is the number of rows reaching the k-th
    predicate in plan order; the total is the unit-cost actual cost.
    """

    evaluations_per_position: tuple[int, ...]
    total_evaluations: int
    survivors: int


def generate_table(spec: TableSpec) -> dict[str, np.ndarray]:
    """Columnar table, deterministic per seed, columns drawn independently."""
    rng = np.random.default_rng(spec.seed)
    table: dict[str, np.ndarray] = {}
    for col in spec.columns:
        if col.dist == "uniform":
            lo, hi = col.params
            table[col.name] = rng.uniform(lo, hi, size=spec.row_count)
        else:
            n_values, exponent = int(col.params[0]), col.params[1]
            ranks = np.arange(1, n_values + 1, dtype=np.float64)
            probs = ranks ** -exponent
            probs /= probs.sum()
            table[col.name] = rng.choice(ranks, size=spec.row_count, p=probs)
    return table


def _mask(table: dict[str, np.ndarray], cp: ColumnPredicate) -> np.ndarray:
    if cp.column not in table:
        raise ValueError(f"unknown column {cp.column!r}; table has {sorted(table)}")
    col = table[cp.column]
    return col < cp.pred.value if cp.pred.op == "lt" else col > cp.pred.value


def empirical_scenario(table: dict[str, np.ndarray],
                       predicates: Sequence[ColumnPredicate]) -> Scenario:
    """Exact selectivity of each predicate on this table."""
    rows = len(next(iter(table.values())))
    return Scenario([float(_mask(table, cp).sum()) / rows for cp in predicates])


def execute_plan(plan: Plan, table: dict[str, np.ndarray],
                 predicates: Sequence[ColumnPredicate]) -> ExecutionTrace:
    """Filter rows sequentially in plan order, counting real evaluations."""
    if len(plan.order) != len(predicates):
        raise ValueError(f"plan has {len(plan.order)} positions for"
                         f" {len(predicates)} predicates")
    if not predicates:
        return ExecutionTrace((), 0, 0)
    rows = len(next(iter(table.values())))
    alive = np.ones(rows, dtype=bool)
    evals = []
    for pos in plan.order:
        evals.append(int(alive.sum()))
        alive &= _mask(table, predicates[pos])
    return ExecutionTrace(tuple(evals), int(sum(evals)), int(alive.sum()))


@dataclass(frozen=True)
class MethodOutcome:
    method: str
    plan: Plan
    total_evaluations: int
    diff_to_optimal: int
    survivors: int
    wall_ms: float  # reported, never asserted: evaluation counts are the cost


@dataclass(frozen=True)
class ComparisonReport:
    outcomes: tuple[MethodOutcome, ...]
    empirical: Scenario
    intervals: tuple[SelectivityInterval, ...]
    point_estimates: tuple[float, ...]

    def outcome(self, method: str) -> MethodOutcome:
        for o in self.outcomes:
            if o.method == method:
                return o
        raise KeyError(method)


# plan-producing methods compared against the true-optimal order
COMPARED_METHODS = ("optimal", "maxmin_heuristic", "midpoint", "meanvalue")


def compare_methods(spec: TableSpec, predicates: Sequence[ColumnPredicate],
                    bucket_count: int = estimate.DEFAULT_BUCKETS) -> ComparisonReport:
    """Interval-based vs point-based planning on one generated table.

    Builds per-column histograms from the table, derives intervals and point
    estimates, plans with the max-min heuristic (dominant-chain initial plan,
    width-ascending queue), the midpoint and mean-value baselines, and the
    true-optimal plan from the exact selectivities; executes all plans and
    reports actual evaluation counts against the optimal plan's.
    """
    table = generate_table(spec)
    hists = {cp.column: estimate.build_histogram(table[cp.column], bucket_count)
             for cp in predicates}
    intervals = tuple(estimate.interval_for_range(hists[cp.column], cp.pred)
                      for cp in predicates)
    points = tuple(estimate.point_for_range(hists[cp.column], cp.pred)
                   for cp in predicates)
    instance = Instance(
        [Operator(name=f"p{i}", sel=iv, cost=1.0) for i, iv in enumerate(intervals)],
        omega=spec.row_count,
    )
    emp = empirical_scenario(table, predicates)
    plans = {
        "optimal": optimal_plan(emp, instance),
        "maxmin_heuristic": heuristic.run_pipeline(
            instance, HeuristicConfig(initial="dcw", phases=("w+",))
        ),
        "midpoint": heuristic.midpoint_plan(instance),
        "meanvalue": heuristic.point_estimate_plan(instance, points),
    }
    optimal_total = execute_plan(plans["optimal"], table, predicates).total_evaluations
    outcomes = []
    for method in COMPARED_METHODS:
        t0 = time.perf_counter()
        trace = execute_plan(plans[method], table, predicates)
        wall_ms = (time.perf_counter() - t0) * 1e3
        outcomes.append(MethodOutcome(
            method=method,
            plan=plans[method],
            total_evaluations=trace.total_evaluations,
            diff_to_optimal=trace.total_evaluations - optimal_total,
            survivors=trace.survivors,
            wall_ms=wall_ms,
        ))
    return ComparisonReport(outcomes=tuple(outcomes), empirical=emp,
                            intervals=intervals, point_estimates=points)


def load_table_spec(path: str) -> TableSpec:
    """Read ``{"rows": int, "seed": int, "columns": [{"name", "dist",
    "params"}, ...]}``."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        columns = tuple(
            ColumnSpec(name=c["name"], dist=c["dist"], params=tuple(c["params"]))
            for c in data["columns"]
        )
        return TableSpec(row_count=int(data["rows"]), columns=columns,
                         seed=int(data.get("seed", 0)))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed table spec {path}: {exc}") from exc


def load_predicates(path: str) -> list[ColumnPredicate]:
    """Read ``[{"column": str, "op": "lt"|"gt", "value": number}, ...]``."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"malformed predicates file {path}: expected a list")
    out = []
    for i, p in enumerate(data):
        try:
            out.append(ColumnPredicate(column=p["column"],
                                       pred=RangePredicate(op=p["op"],
                                                           value=float(p["value"]))))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"predicates[{i}]: {exc}") from exc
    return out
