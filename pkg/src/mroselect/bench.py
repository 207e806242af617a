"""Instance generators, the regret-ratio metric and the experiment runner.

``run_experiment`` pits named planning methods against the brute-force
oracle over batches of seeded random instances and emits one CSV row per
(instance, method) with the regret ratio lambda = method regret / optimal
regret (defined as 1 when the optimal regret is 0).
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import exact, heuristic
from .engine import max_regret_extreme
from .model import Instance, Operator, Plan, SelectivityInterval

__all__ = [
    "ExperimentConfig",
    "gen_uniform_instance",
    "gen_midpoint_adversarial",
    "regret_ratio",
    "make_method",
    "run_experiment",
    "write_csv",
    "summarize",
    "instance_seed",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("n", "method", "instance_id", "seed", "lambda", "exact",
               "max_regret", "optimal_regret", "plan", "time_ms")

# exact == 1 when the method's regret is within this of the optimum
EXACT_TOL = 1e-9


@dataclass(frozen=True)
class ExperimentConfig:
    n_range: tuple[int, ...]
    instances_per_n: int
    seed: int = 0
    methods: tuple[str, ...] = ("dcw:w+,w+", "midpoint")
    exact_reference: bool = True

    def __post_init__(self):
        if not self.n_range or min(self.n_range) < 1:
            raise ValueError(f"n_range must contain positive sizes, got {self.n_range}")
        if self.instances_per_n < 1:
            raise ValueError("instances_per_n must be >= 1")
        if self.exact_reference and max(self.n_range) > exact.DEFAULT_MAX_N:
            raise ValueError(
                f"exact_reference requires max(n_range) <= {exact.DEFAULT_MAX_N}"
            )
        for m in self.methods:
            make_method(m)  # fail fast on unknown method specs


def gen_uniform_instance(n: int, seed: int) -> Instance:
    """n unit-cost operators; each interval is two sorted uniform draws."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    draws = rng.uniform(0.0, 1.0, size=(n, 2))
    draws.sort(axis=1)
    ops = [
        Operator(name=f"s{i + 1}", sel=SelectivityInterval(float(a), float(b)))
        for i, (a, b) in enumerate(draws)
    ]
    return Instance(ops, omega=1.0)


def gen_midpoint_adversarial(n: int, eps: float) -> Instance:
    """Family on which the midpoint ordering's regret grows without bound.

    2n+1 unit-cost operators: n full-range intervals [0, 1], n constants at
    0.5 + eps, and one constant 1 pinned to the last position.  The midpoint
    ordering keeps construction order and pays at least n * (0.5 - eps)
    regret when the full-range operators all hit selectivity 1.
    """
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must be in (0, 0.5), got {eps}")
    ops = [Operator(name=f"w{i + 1}", sel=SelectivityInterval(0.0, 1.0))
           for i in range(n)]
    ops += [Operator(name=f"c{i + 1}", sel=SelectivityInterval(0.5 + eps, 0.5 + eps))
            for i in range(n)]
    ops.append(Operator(name="z", sel=SelectivityInterval(1.0, 1.0)))
    return Instance(ops, omega=1.0)


def regret_ratio(instance: Instance, plan: Plan, optimal_regret: float) -> float:
    """lambda = max regret of ``plan`` / ``optimal_regret``; 1 when the
    optimum is 0 (the strictly-dominant zero-regret convention)."""
    if optimal_regret < 0:
        raise ValueError(f"optimal_regret must be >= 0, got {optimal_regret}")
    if optimal_regret == 0.0:
        return 1.0
    return max_regret_extreme(plan, instance).max_regret / optimal_regret


def make_method(spec: str) -> Callable[[Instance, int], Plan]:
    """Build a plan-producing method from its name.

    ``"midpoint"``, ``"meanvalue"`` and ``"exact"`` are baselines; anything
    else is ``<initial>:<phase>,<phase>,...`` for the max-min heuristic,
    e.g. ``"dcw:w+,w+"`` or ``"empty:u"``.
    """
    if spec == "midpoint":
        return lambda inst, seed: heuristic.midpoint_plan(inst)
    if spec == "meanvalue":
        return lambda inst, seed: heuristic.point_estimate_plan(
            inst, (inst.lows() + inst.highs()) / 2.0
        )
    if spec == "exact":
        return lambda inst, seed: exact.brute_force_mro(inst).plan
    if ":" not in spec:
        raise ValueError(
            f"unknown method {spec!r}; use midpoint, meanvalue, exact or"
            f" <initial>:<phases>"
        )
    initial, phase_list = spec.split(":", 1)
    phases = tuple(p for p in phase_list.split(",") if p)
    config = heuristic.HeuristicConfig(initial=initial, phases=phases)  # validates

    def run(inst: Instance, seed: int) -> Plan:
        return heuristic.run_pipeline(
            inst, heuristic.HeuristicConfig(initial=config.initial,
                                            phases=config.phases, seed=seed)
        )

    return run


def instance_seed(base_seed: int, n: int, instance_id: int) -> int:
    """Deterministic per-instance seed, decorrelated across (n, id)."""
    return int(np.random.SeedSequence((base_seed, n, instance_id)).generate_state(1)[0])


def run_experiment(config: ExperimentConfig) -> list[dict]:
    """One CSV-ready row per (n, instance, method).

    Rows are sorted by (n, method, instance_id) and deterministic for a fixed
    seed except for the ``time_ms`` column.
    """
    methods = [(name, make_method(name)) for name in config.methods]
    rows: list[dict] = []
    for n in config.n_range:
        for instance_id in range(config.instances_per_n):
            seed = instance_seed(config.seed, n, instance_id)
            inst = gen_uniform_instance(n, seed)
            if config.exact_reference:
                optimal_regret = exact.brute_force_mro(inst).max_regret
            else:
                optimal_regret = None
            for name, method in methods:
                t0 = time.perf_counter()
                plan = method(inst, seed)
                elapsed_ms = (time.perf_counter() - t0) * 1e3
                max_regret = max_regret_extreme(plan, inst).max_regret
                row = {
                    "n": n,
                    "method": name,
                    "instance_id": instance_id,
                    "seed": seed,
                    "lambda": "",
                    "exact": "",
                    "max_regret": repr(max_regret),
                    "optimal_regret": "",
                    "plan": " ".join(str(i + 1) for i in plan.order),
                    "time_ms": f"{elapsed_ms:.3f}",
                }
                if optimal_regret is not None:
                    lam = regret_ratio(inst, plan, optimal_regret)
                    row["lambda"] = repr(lam)
                    row["exact"] = int(max_regret <= optimal_regret + EXACT_TOL)
                    row["optimal_regret"] = repr(optimal_regret)
                rows.append(row)
    rows.sort(key=lambda r: (r["n"], r["method"], r["instance_id"]))
    return rows


def write_csv(rows: Sequence[dict], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def summarize(rows: Sequence[dict]) -> list[dict]:
    """Per-(n, method) aggregates: % exact, average/worst lambda, average
    time, and the count of missed zero-optimum instances (optimal regret 0
    but the method's regret positive) kept out of the averages."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        groups.setdefault((row["n"], row["method"]), []).append(row)
    out = []
    for (n, method), grp in sorted(groups.items()):
        lams = [float(r["lambda"]) for r in grp if r["lambda"] != ""]
        exacts = [int(r["exact"]) for r in grp if r["exact"] != ""]
        missed = sum(
            1 for r in grp
            if r["optimal_regret"] != "" and float(r["optimal_regret"]) == 0.0
            and float(r["max_regret"]) > EXACT_TOL
        )
        out.append({
            "n": n,
            "method": method,
            "instances": len(grp),
            "pct_exact": 100.0 * sum(exacts) / len(exacts) if exacts else None,
            "avg_lambda": float(np.mean(lams)) if lams else None,
            "worst_lambda": float(np.max(lams)) if lams else None,
            "avg_time_ms": float(np.mean([float(r["time_ms"]) for r in grp])),
            "missed_zero": missed,
        })
    return out
