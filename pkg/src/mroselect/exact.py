"""Exact minmax-regret solvers and the polynomial special cases.

The general solver enumerates plans against all extreme scenarios.  With
dominance pruning it only walks linear extensions of the dominance partial
order (an operator whose interval is endpoint-wise below another's may be
placed first without losing optimality); pruning edges are restricted to
equal-cost pairs, which is the scope of the underlying exchange argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine
from .backends import kernels
from .model import (
    CapacityLimitError,
    Instance,
    Plan,
    RegretReport,
    dominates,
    is_nested,
    strictly_dominates,
)

__all__ = [
    "SolveOptions",
    "brute_force_mro",
    "dominant_sort",
    "strict_dominant_with_constant",
    "dominance_chains",
    "dominance_predecessors",
    "DEFAULT_MAX_N",
]

DEFAULT_MAX_N = 12


@dataclass(frozen=True)
class SolveOptions:
    prune_dominance: bool = True
    max_n: int = DEFAULT_MAX_N

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError(f"max_n must be >= 1, got {self.max_n}")


def dominance_predecessors(instance: Instance) -> np.ndarray:
    """Bitmask per operator of the operators forced to precede it.

    An edge a -> b needs: equal costs, a dominates b, and (to break the
    equal-interval two-way case acyclically) not b dominates a, or a < b.
    """
    n = instance.n
    preds = np.zeros(n, dtype=np.int64)
    ops = instance.operators
    for a in range(n):
        for b in range(n):
            if a == b or ops[a].cost != ops[b].cost:
                continue
            if dominates(ops[a], ops[b]) and (not dominates(ops[b], ops[a]) or a < b):
                preds[b] |= np.int64(1) << a
    return preds


def brute_force_mro(instance: Instance, opts: SolveOptions | None = None) -> RegretReport:
    """Plan minimizing the maximum extreme-scenario regret.

    Exhausts all permutations (or the dominance-consistent ones when pruning
    is on); ties go to the lexicographically smallest enumerated plan.
    """
    opts = opts or SolveOptions()
    n = instance.n
    if n < 1:
        raise ValueError("instance has no operators")
    if n > opts.max_n:
        raise CapacityLimitError(
            f"brute force refused: {n} operators exceeds the cap of {opts.max_n}"
            f" ({n}! plans x 2^{n} scenarios); raise max_n explicitly or use the heuristic"
        )
    shifts, k_bits = engine._scenario_bits(instance)
    engine._guard_bits(k_bits)
    lo, hi, costs = instance.lows(), instance.highs(), instance.costs()
    optc = kernels.extreme_opt_costs(lo, hi, costs, instance.omega, shifts, k_bits)
    if opts.prune_dominance:
        preds = dominance_predecessors(instance)
    else:
        preds = np.zeros(n, dtype=np.int64)
    best_order, _ = kernels.brute_force(lo, hi, costs, instance.omega, shifts,
                                        k_bits, optc, preds)
    # canonical re-evaluation supplies the witness scenario
    return engine.max_regret_extreme(Plan(best_order), instance)


def _require_equal_costs(instance: Instance, what: str) -> None:
    costs = {op.cost for op in instance.operators}
    if len(costs) > 1:
        raise ValueError(f"{what} requires all operator costs equal, got {sorted(costs)}")


def dominant_sort(instance: Instance) -> Plan | None:
    """Optimal plan for a dominant set: sort by non-decreasing lower bound.

    Returns ``None`` when the set is not dominant, i.e. some pair is nested.
    Requires equal costs.
    """
    _require_equal_costs(instance, "dominant_sort")
    ops = instance.operators
    for a in range(instance.n):
        for b in range(a + 1, instance.n):
            if not (dominates(ops[a], ops[b]) or dominates(ops[b], ops[a])):
                return None
    order = np.lexsort((instance.highs(), instance.lows()))
    return Plan(order)


def strict_dominant_with_constant(instance: Instance, constant_index: int) -> Plan:
    """Optimal plan for a strictly dominant set plus one constant operator.

    The constant goes immediately before the operator whose interval contains
    it when its selectivity is at most the interval midpoint, immediately
    after otherwise (before, at the exact midpoint).  Preconditions are
    checked and violations raise ``ValueError`` naming the failing one.
    """
    _require_equal_costs(instance, "strict_dominant_with_constant")
    ops = instance.operators
    n = instance.n
    if not 0 <= constant_index < n:
        raise ValueError(f"constant_index {constant_index} out of range 0..{n - 1}")
    const = ops[constant_index]
    if not const.sel.is_constant():
        raise ValueError(
            f"operator {constant_index} is not constant: [{const.sel.s_lo}, {const.sel.s_hi}]"
        )
    rest = [i for i in range(n) if i != constant_index]
    for x, a in enumerate(rest):
        for b in rest[x + 1:]:
            if not (strictly_dominates(ops[a], ops[b]) or strictly_dominates(ops[b], ops[a])):
                raise ValueError(
                    f"operators {a} and {b} are not strictly dominant"
                    f" (intervals overlap)"
                )
    s_c = const.sel.s_lo
    hosts = [i for i in rest if ops[i].sel.contains(s_c)]
    if len(hosts) != 1:
        raise ValueError(
            f"constant selectivity {s_c} lies inside {len(hosts)} non-constant"
            f" intervals; exactly one is required"
        )
    host = hosts[0]
    rest.sort(key=lambda i: (ops[i].sel.s_lo, ops[i].sel.s_hi, i))
    pos = rest.index(host)
    if s_c <= ops[host].sel.midpoint():
        rest.insert(pos, constant_index)
    else:
        rest.insert(pos + 1, constant_index)
    return Plan(rest)


def dominance_chains(instance: Instance, tie_break: str = "CW") -> tuple[int, ...]:
    """A maximum chain of the dominance partial order, as an ordered fragment.

    ``tie_break``: "C" maximizes cardinality, "W" total interval width, "CW"
    cardinality with width as tie-breaker.  Dynamic programming over the
    operators sorted by (s_lo, s_hi); among equal-valued chains the earliest
    in that order wins, making the result deterministic.  Requires equal
    costs, the only case where chain ordering is justified.
    """
    tie_break = tie_break.upper()
    if tie_break not in ("C", "W", "CW"):
        raise ValueError(f"tie_break must be C, W or CW, got {tie_break!r}")
    _require_equal_costs(instance, "dominance_chains")
    if instance.n == 0:
        return ()
    lo, hi = instance.lows(), instance.highs()
    order = np.lexsort((hi, lo))
    n = instance.n
    widths = hi - lo

    def key(length: int, width: float) -> tuple:
        if tie_break == "C":
            return (length,)
        if tie_break == "W":
            return (width,)
        return (length, width)

    best_len = np.ones(n, dtype=np.int64)
    best_width = widths[order].copy()
    parent = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        oi = order[i]
        for j in range(i):
            oj = order[j]
            if hi[oj] > hi[oi]:  # lo is non-decreasing along `order` already
                continue
            cand = key(best_len[j] + 1, best_width[j] + widths[oi])
            if cand > key(best_len[i], best_width[i]):
                best_len[i] = best_len[j] + 1
                best_width[i] = best_width[j] + widths[oi]
                parent[i] = j
    end = 0
    for i in range(1, n):
        if key(best_len[i], best_width[i]) > key(best_len[end], best_width[end]):
            end = i
    chain: list[int] = []
    while end >= 0:
        chain.append(int(order[end]))
        end = int(parent[end])
    chain.reverse()
    return tuple(chain)
