"""Cost, rank and regret calculus for plans under interval selectivities.

The pipelined cost of a plan under a scenario is
``omega * sum_i (prod_{j<i} s_pi(j)) * c_pi(i)``; the optimal plan for a
known scenario sorts operators by non-decreasing rank ``(s - 1) / c``; the
regret of a plan under a scenario is its cost minus the optimal plan's cost.
The maximum regret of a plan over the whole scenario box is always attained
at an extreme scenario, so :func:`max_regret_extreme` only enumerates those.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .backends import ACTIVE_BACKEND, REGRET_EPS, kernels
from .model import CapacityLimitError, Instance, Plan, RegretReport, Scenario

__all__ = [
    "CostBreakdown",
    "rank",
    "plan_cost",
    "optimal_plan",
    "regret",
    "extreme_scenarios",
    "max_min_scenarios",
    "max_regret_extreme",
    "max_regret_maxmin",
    "ACTIVE_BACKEND",
]

# 2^K extreme-scenario streams refuse instances beyond this many
# non-degenerate intervals
MAX_EXTREME_BITS = 30


@dataclass(frozen=True)
class CostBreakdown:
    """Total plan cost plus the prefix selectivity products behind it.

    ``prefix_products[k]`` is the product of the first ``k`` selectivities in
    plan order (so ``prefix_products[0] == 1``); the total is
    ``omega * sum_k prefix_products[k] * cost_of_position_k``.
    """

    total: float
    prefix_products: tuple[float, ...]


def rank(s: float, c: float) -> float:
    """Ordering key ``(s - 1) / c``; requires ``c > 0``."""
    if c <= 0:
        raise ValueError(f"cost must be positive, got {c}")
    return (s - 1.0) / c


def _check_plan(plan: Plan, instance: Instance) -> None:
    if not plan.is_permutation_of(instance.n):
        raise ValueError(f"plan {plan.order} is not a permutation of 0..{instance.n - 1}")


def _check_scenario(scenario: Scenario, instance: Instance) -> None:
    if len(scenario) != instance.n:
        raise ValueError(
            f"scenario has {len(scenario)} values, instance has {instance.n} operators"
        )


def plan_cost(plan: Plan, scenario: Scenario, instance: Instance) -> CostBreakdown:
    """Pipelined cost of ``plan`` under ``scenario``."""
    _check_plan(plan, instance)
    _check_scenario(scenario, instance)
    sel = scenario.as_array()[list(plan.order)]
    costs = instance.costs()[list(plan.order)]
    pp = np.ones(instance.n, dtype=np.float64)
    if instance.n > 1:
        pp[1:] = np.cumprod(sel[:-1])
    total = instance.omega * float(pp @ costs)
    return CostBreakdown(total=total, prefix_products=tuple(pp))


def optimal_plan(scenario: Scenario, instance: Instance) -> Plan:
    """Rank-sorted plan for a known scenario; ties keep ascending index."""
    _check_scenario(scenario, instance)
    ranks = (scenario.as_array() - 1.0) / instance.costs()
    return Plan(np.argsort(ranks, kind="stable"))


def regret(plan: Plan, scenario: Scenario, instance: Instance) -> float:
    """Cost of ``plan`` minus the optimal plan's cost, clamped near zero."""
    r = (plan_cost(plan, scenario, instance).total
         - plan_cost(optimal_plan(scenario, instance), scenario, instance).total)
    return 0.0 if abs(r) < REGRET_EPS else r


def _scenario_bits(instance: Instance) -> tuple[np.ndarray, int]:
    """Bit positions for the non-degenerate intervals (operator 0 = MSB)."""
    lo, hi = instance.lows(), instance.highs()
    nondeg = np.nonzero(hi > lo)[0]
    k_bits = len(nondeg)
    shifts = np.full(instance.n, -1, dtype=np.int64)
    for t, i in enumerate(nondeg):
        shifts[i] = k_bits - 1 - t
    return shifts, k_bits


def _guard_bits(k_bits: int) -> None:
    if k_bits > MAX_EXTREME_BITS:
        raise CapacityLimitError(
            f"{k_bits} non-degenerate intervals would enumerate 2^{k_bits} extreme"
            f" scenarios; limit is 2^{MAX_EXTREME_BITS}"
        )


def extreme_scenarios(instance: Instance) -> Iterator[Scenario]:
    """All extreme scenarios, in binary-counting order.

    Every operator takes an interval endpoint; degenerate intervals
    contribute a single value, so the stream has ``2^K`` elements for ``K``
    non-degenerate intervals.  The last non-degenerate operator toggles
    fastest.
    """
    shifts, k_bits = _scenario_bits(instance)
    _guard_bits(k_bits)
    lo, hi = instance.lows(), instance.highs()
    for m in range(1 << k_bits):
        values = [
            hi[i] if shifts[i] >= 0 and (m >> shifts[i]) & 1 else lo[i]
            for i in range(instance.n)
        ]
        yield Scenario(values)


def max_min_scenarios(plan: Plan, instance: Instance) -> list[Scenario]:
    """The ``n+1`` max-min scenarios of ``plan``: the first ``k`` plan
    positions at their upper bound, the rest at their lower bound, for
    ``k = 0..n``.  Duplicates from degenerate intervals are kept."""
    _check_plan(plan, instance)
    lo, hi = instance.lows(), instance.highs()
    values = lo.copy()
    out = [Scenario(values)]
    for pos in plan.order:
        values = values.copy()
        values[pos] = hi[pos]
        out.append(Scenario(values))
    return out


def max_regret_extreme(plan: Plan, instance: Instance) -> RegretReport:
    """Maximum regret of ``plan`` over all extreme scenarios.

    Equals the maximum over the whole continuous scenario box.  The witness
    is the earliest extreme scenario within ``1e-12`` of the maximum.
    """
    _check_plan(plan, instance)
    shifts, k_bits = _scenario_bits(instance)
    _guard_bits(k_bits)
    lo, hi, costs = instance.lows(), instance.highs(), instance.costs()
    optc = kernels.extreme_opt_costs(lo, hi, costs, instance.omega, shifts, k_bits)
    order = np.array(plan.order, dtype=np.int64)
    max_r, witness_m = kernels.extreme_plan_regret(
        order, lo, hi, costs, instance.omega, shifts, k_bits, optc
    )
    witness = [
        hi[i] if shifts[i] >= 0 and (witness_m >> shifts[i]) & 1 else lo[i]
        for i in range(instance.n)
    ]
    return RegretReport(plan=plan, max_regret=float(max_r), witness=Scenario(witness),
                        scenario_class="extreme")


def max_regret_maxmin(plan: Plan, instance: Instance) -> RegretReport:
    """Maximum regret of ``plan`` over its ``n+1`` max-min scenarios.

    Max-min scenarios are a subset of the extreme scenarios, so this never
    exceeds :func:`max_regret_extreme`.
    """
    _check_plan(plan, instance)
    lo, hi, costs = instance.lows(), instance.highs(), instance.costs()
    order = np.array(plan.order, dtype=np.int64)
    max_r, witness_k = kernels.maxmin_plan_regret(order, lo, hi, costs, instance.omega)
    witness = max_min_scenarios(plan, instance)[witness_k]
    return RegretReport(plan=plan, max_regret=float(max_r), witness=witness,
                        scenario_class="maxmin")
