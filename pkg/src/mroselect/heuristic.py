"""Max-min insertion heuristic and the ordering baselines.

The core template takes a (possibly empty) starting plan and a queue of
operators; each queued operator is removed from the plan if present, then
re-inserted at the position minimizing the plan's maximum regret over its
max-min scenarios.  Phases chain the template: each later phase re-processes
every operator, using the previous output as its starting plan.

Two insertion evaluators exist: ``"naive"`` scores every (position,
scenario) pair independently, ``"incremental"`` (the default) shares prefix
products and optimal-plan costs across positions for an O(n^3 log n) total;
both make identical choices and the equivalence is covered by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exact
from .backends import kernels
from .engine import rank
from .model import Instance, Plan

__all__ = [
    "HeuristicConfig",
    "PipelineRun",
    "order_queue",
    "insert_best",
    "run_H",
    "run_pipeline",
    "run_pipeline_detailed",
    "midpoint_plan",
    "point_estimate_plan",
    "CRITERIA",
    "INITIALS",
]

CRITERIA = ("u", "m+", "m-", "w+", "w-")
INITIALS = ("empty", "dc", "dw", "dcw")
_CHAIN_TIE_BREAK = {"dc": "C", "dw": "W", "dcw": "CW"}
_EVALUATORS = ("incremental", "naive")


@dataclass(frozen=True)
class HeuristicConfig:
    """Initial-plan strategy, per-phase ordering criteria, and the U seed."""

    initial: str = "empty"
    phases: tuple[str, ...] = ("w+",)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "initial", self.initial.lower())
        object.__setattr__(self, "phases", tuple(p.lower() for p in self.phases))
        if self.initial not in INITIALS:
            raise ValueError(f"initial must be one of {INITIALS}, got {self.initial!r}")
        if not self.phases:
            raise ValueError("at least one phase is required")
        for p in self.phases:
            if p not in CRITERIA:
                raise ValueError(f"unknown ordering criterion {p!r}; choose from {CRITERIA}")


@dataclass(frozen=True)
class PipelineRun:
    """Result of a pipeline run plus how the initial plan was obtained."""

    plan: Plan
    config: HeuristicConfig
    initial_chain: tuple[int, ...] = ()
    chain_fallback: bool = field(default=False)  # dominant chain disabled (unequal costs)


def order_queue(instance: Instance, criterion: str, *, seed: int = 0) -> list[int]:
    """All operator indices ordered by the criterion.

    ``m+``/``m-``: interval midpoint non-decreasing/non-increasing;
    ``w+``/``w-``: interval width likewise; ``u``: seeded uniform shuffle.
    Non-random criteria break ties by ascending index.
    """
    criterion = criterion.lower()
    if criterion not in CRITERIA:
        raise ValueError(f"unknown ordering criterion {criterion!r}")
    if criterion == "u":
        rng = np.random.default_rng(seed)
        return [int(i) for i in rng.permutation(instance.n)]
    lo, hi = instance.lows(), instance.highs()
    key = (lo + hi) / 2.0 if criterion.startswith("m") else hi - lo
    if criterion.endswith("-"):
        key = -key
    return [int(i) for i in np.argsort(key, kind="stable")]


def _insert_scan(evaluator: str):
    if evaluator not in _EVALUATORS:
        raise ValueError(f"evaluator must be one of {_EVALUATORS}, got {evaluator!r}")
    return (kernels.insert_scan_incremental if evaluator == "incremental"
            else kernels.insert_scan_naive)


def insert_best(partial: Plan, op: int, instance: Instance,
                evaluator: str = "incremental") -> Plan:
    """Insert ``op`` into ``partial`` at the position minimizing the max-min
    regret of the resulting sub-plan; earliest position on ties."""
    if op in partial.order:
        raise ValueError(f"operator {op} already in partial plan {partial.order}")
    scan = _insert_scan(evaluator)
    p_order = np.array(partial.order, dtype=np.int64)
    j, _ = scan(p_order, op, instance.lows(), instance.highs(), instance.costs(),
                instance.omega)
    new_order = list(partial.order)
    new_order.insert(int(j), op)
    return Plan(new_order)


def run_H(initial: Plan, queue: list[int], instance: Instance,
          evaluator: str = "incremental") -> Plan:
    """One pass of the insertion template over ``queue``.

    Each queued operator is removed from the current plan if present, then
    re-inserted at its best position.  The union of ``initial`` and ``queue``
    must cover all operators.
    """
    covered = set(initial.order) | set(queue)
    if covered != set(range(instance.n)):
        missing = sorted(set(range(instance.n)) - covered)
        raise ValueError(f"coverage violation: operators {missing} in neither"
                         f" initial plan nor queue")
    scan = _insert_scan(evaluator)
    lo, hi, costs = instance.lows(), instance.highs(), instance.costs()
    current = list(initial.order)
    for t in queue:
        if t in current:
            current.remove(t)
        j, _ = scan(np.array(current, dtype=np.int64), t, lo, hi, costs, instance.omega)
        current.insert(int(j), t)
    return Plan(current)


def run_pipeline_detailed(instance: Instance, config: HeuristicConfig,
                          evaluator: str = "incremental") -> PipelineRun:
    """Multi-phase heuristic run, reporting how the initial plan was built.

    Phase 1 inserts the operators missing from the initial plan, in the
    phase-1 criterion order; every later phase re-inserts all operators (the
    removal branch moves them), its queue re-ordered by that phase's
    criterion.  The U criterion reshuffles per phase from (seed, phase).
    """
    if instance.n == 0:
        raise ValueError("instance has no operators")
    chain: tuple[int, ...] = ()
    fallback = False
    if config.initial != "empty":
        if len({op.cost for op in instance.operators}) == 1:
            chain = exact.dominance_chains(instance, _CHAIN_TIE_BREAK[config.initial])
        else:
            fallback = True  # chain ordering is only justified for equal costs
    current = Plan(chain)
    for phase, criterion in enumerate(config.phases):
        seed = int(np.random.SeedSequence((config.seed, phase)).generate_state(1)[0])
        queue = order_queue(instance, criterion, seed=seed)
        if phase == 0:
            placed = set(current.order)
            queue = [t for t in queue if t not in placed]
        current = run_H(current, queue, instance, evaluator=evaluator)
    return PipelineRun(plan=current, config=config, initial_chain=chain,
                       chain_fallback=fallback)


def run_pipeline(instance: Instance, config: HeuristicConfig,
                 evaluator: str = "incremental") -> Plan:
    """Multi-phase heuristic run; see :func:`run_pipeline_detailed`."""
    return run_pipeline_detailed(instance, config, evaluator=evaluator).plan


def midpoint_plan(instance: Instance) -> Plan:
    """Operators sorted by non-decreasing interval midpoint (no max-min
    evaluation); unbounded regret in the worst case."""
    mids = (instance.lows() + instance.highs()) / 2.0
    return Plan(np.argsort(mids, kind="stable"))


def point_estimate_plan(instance: Instance, estimates) -> Plan:
    """Mean-value baseline: sort by the rank of a point estimate."""
    estimates = np.asarray(estimates, dtype=np.float64)
    if estimates.shape != (instance.n,):
        raise ValueError(
            f"expected {instance.n} estimates, got shape {estimates.shape}"
        )
    keys = [rank(float(estimates[i]), op.cost) for i, op in enumerate(instance.operators)]
    return Plan(np.argsort(np.array(keys), kind="stable"))
