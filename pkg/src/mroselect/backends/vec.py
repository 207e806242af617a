"""Vectorized numpy backend for the hot kernels.

This is the fallback path selected by ``MROSELECT_NUMBA=0`` (and the
correctness reference for the numba backend).  Scenario evaluation is
vectorized; search loops run in plain Python, so large brute-force or
insertion workloads are much slower here than under the JIT backend.

Kernel contracts shared with :mod:`mroselect.backends.jit`:

* Extreme scenarios are indexed by an integer ``m``: operator ``i`` takes its
  upper bound iff ``shifts[i] >= 0`` and bit ``shifts[i]`` of ``m`` is set,
  else its lower bound.  ``shifts`` maps operators to bit positions so that
  operator 0 is the most significant bit and degenerate intervals
  (``lo == hi``) carry no bit (``shifts[i] == -1``).
* Regrets within ``REGRET_EPS`` of zero are clamped to zero.
* Witnesses are the earliest scenario whose regret is within ``REGRET_EPS``
  of the maximum.
* Ties between equally good plans/positions keep the earliest candidate in
  enumeration order.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

REGRET_EPS = 1e-12

# scenario rows materialized per chunk; bounds memory for large 2^K scans
_CHUNK = 1 << 14


def batch_plan_costs(order: np.ndarray, sels: np.ndarray, costs: np.ndarray,
                     omega: float) -> np.ndarray:
    """Eq.-style pipelined cost of one plan under many scenarios (rows)."""
    s = sels[:, order]
    c = costs[order]
    pp = np.ones_like(s)
    if s.shape[1] > 1:
        pp[:, 1:] = np.cumprod(s[:, :-1], axis=1)
    return omega * (pp * c).sum(axis=1)


def batch_opt_costs(sels: np.ndarray, costs: np.ndarray, omega: float) -> np.ndarray:
    """Cost of the rank-optimal plan for each scenario row."""
    ranks = (sels - 1.0) / costs
    order = np.argsort(ranks, axis=1, kind="stable")
    s = np.take_along_axis(sels, order, axis=1)
    c = costs[order]
    pp = np.ones_like(s)
    if s.shape[1] > 1:
        pp[:, 1:] = np.cumprod(s[:, :-1], axis=1)
    return omega * (pp * c).sum(axis=1)


def _clamp(regrets: np.ndarray) -> np.ndarray:
    regrets[np.abs(regrets) < REGRET_EPS] = 0.0
    return regrets


def extreme_scenario_rows(lo: np.ndarray, hi: np.ndarray, shifts: np.ndarray,
                          start: int, stop: int) -> np.ndarray:
    """Materialize extreme scenarios ``start..stop-1`` as one row each."""
    ms = np.arange(start, stop, dtype=np.int64)
    sels = np.tile(lo, (ms.size, 1))
    for i in range(lo.size):
        if shifts[i] >= 0:
            sels[((ms >> shifts[i]) & 1) == 1, i] = hi[i]
    return sels


def extreme_opt_costs(lo: np.ndarray, hi: np.ndarray, costs: np.ndarray, omega: float,
                      shifts: np.ndarray, k_bits: int) -> np.ndarray:
    """Optimal-plan cost for every extreme scenario, in ``m`` order."""
    total = 1 << k_bits
    out = np.empty(total, dtype=np.float64)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        rows = extreme_scenario_rows(lo, hi, shifts, start, stop)
        out[start:stop] = batch_opt_costs(rows, costs, omega)
    return out


def _extreme_regret_chunks(order, lo, hi, costs, omega, shifts, k_bits, optc):
    total = 1 << k_bits
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        rows = extreme_scenario_rows(lo, hi, shifts, start, stop)
        regrets = _clamp(batch_plan_costs(order, rows, costs, omega) - optc[start:stop])
        yield start, regrets


def extreme_plan_regret(order: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                        costs: np.ndarray, omega: float, shifts: np.ndarray,
                        k_bits: int, optc: np.ndarray) -> tuple[float, int]:
    """Maximum regret of ``order`` over all extreme scenarios.

    Returns ``(max_regret, witness_m)`` with the earliest witness within
    ``REGRET_EPS`` of the maximum.
    """
    best = 0.0
    for _, regrets in _extreme_regret_chunks(order, lo, hi, costs, omega, shifts,
                                             k_bits, optc):
        best = max(best, float(regrets.max()))
    for start, regrets in _extreme_regret_chunks(order, lo, hi, costs, omega, shifts,
                                                 k_bits, optc):
        hits = np.nonzero(regrets >= best - REGRET_EPS)[0]
        if hits.size:
            return best, start + int(hits[0])
    return best, 0  # unreachable: the max is attained in some chunk


def iter_linear_extensions(preds: np.ndarray) -> Iterator[tuple[int, ...]]:
    """All linear extensions of the precedence masks, lexicographically.

    ``preds[i]`` is a bitmask of operators that must precede operator ``i``.
    With all-zero masks this enumerates every permutation.
    """
    n = len(preds)
    order: list[int] = []
    used = 0

    def rec():
        nonlocal used
        if len(order) == n:
            yield tuple(order)
            return
        for i in range(n):
            bit = 1 << i
            if used & bit or (int(preds[i]) & ~used):
                continue
            order.append(i)
            used |= bit
            yield from rec()
            order.pop()
            used &= ~bit

    yield from rec()


def brute_force(lo: np.ndarray, hi: np.ndarray, costs: np.ndarray, omega: float,
                shifts: np.ndarray, k_bits: int, optc: np.ndarray,
                preds: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimize maximum extreme-scenario regret over the admissible plans.

    Returns the first plan (in lexicographic enumeration order) attaining the
    minimum; strict improvement is required to replace the incumbent.
    """
    n = lo.size
    rows = extreme_scenario_rows(lo, hi, shifts, 0, 1 << k_bits)
    best_r = np.inf
    best_order: np.ndarray | None = None
    for perm in iter_linear_extensions(preds):
        order = np.array(perm, dtype=np.int64)
        regrets = _clamp(batch_plan_costs(order, rows, costs, omega) - optc)
        r = max(0.0, float(regrets.max()))
        if r < best_r:
            best_r = r
            best_order = order
    assert best_order is not None
    return best_order, best_r


def maxmin_scenario_rows(order: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """The ``n+1`` max-min scenario rows of a plan, k = 0..n, in index space."""
    n = order.size
    rows = np.tile(lo, (n + 1, 1))
    for k in range(1, n + 1):
        rows[k] = rows[k - 1]
        rows[k, order[k - 1]] = hi[order[k - 1]]
    return rows


def maxmin_plan_regret(order: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                       costs: np.ndarray, omega: float) -> tuple[float, int]:
    """Maximum regret of ``order`` over its max-min scenarios.

    Returns ``(max_regret, witness_k)``; earliest ``k`` within ``REGRET_EPS``.
    """
    rows = maxmin_scenario_rows(order, lo, hi)
    regrets = _clamp(batch_plan_costs(order, rows, costs, omega)
                     - batch_opt_costs(rows, costs, omega))
    best = max(0.0, float(regrets.max()))
    witness = int(np.nonzero(regrets >= best - REGRET_EPS)[0][0])
    return best, witness


def _maxmin_rows_for(qlo: np.ndarray, qhi: np.ndarray) -> np.ndarray:
    m = qlo.size
    return np.where(np.arange(m)[None, :] < np.arange(m + 1)[:, None], qhi, qlo)


def insert_scan_naive(p_order: np.ndarray, t: int, lo: np.ndarray, hi: np.ndarray,
                      costs: np.ndarray, omega: float) -> tuple[int, float]:
    """Best insertion position for operator ``t`` into partial plan ``p_order``.

    Evaluates every position independently: max-min regret of the candidate
    sub-plan, earliest position on ties.  This is the semantic reference for
    :func:`insert_scan_incremental`.
    """
    i = p_order.size
    best_j, best_r = 0, np.inf
    ident = np.arange(i + 1)
    for j in range(i + 1):
        q = np.concatenate([p_order[:j], [t], p_order[j:]]).astype(np.int64)
        qlo, qhi, qc = lo[q], hi[q], costs[q]
        rows = _maxmin_rows_for(qlo, qhi)
        regrets = _clamp(batch_plan_costs(ident, rows, qc, omega)
                         - batch_opt_costs(rows, qc, omega))
        r = max(0.0, float(regrets.max()))
        if r < best_r:
            best_j, best_r = j, r
    return best_j, best_r


def insert_scan_incremental(p_order: np.ndarray, t: int, lo: np.ndarray, hi: np.ndarray,
                            costs: np.ndarray, omega: float) -> tuple[int, float]:
    """Best insertion position, sharing work across positions and scenarios.

    Per candidate position the scenario costs come from prefix/suffix
    recurrences, and the optimal-plan costs are shared across positions: the
    max-min scenarios of all candidates form one family indexed by (number of
    partial-plan operators at their upper bound, inserted operator at upper
    bound or not).  O(m^2 log m) per call instead of O(m^3 log m).
    """
    i = p_order.size
    m = i + 1
    plo, phi, pc = lo[p_order], hi[p_order], costs[p_order]
    tlo, thi, tc = lo[t], hi[t], costs[t]

    # optimal costs for scenarios S(a, b): a partial-plan ops high, t low/high
    base = np.where(np.arange(i)[None, :] < np.arange(i + 1)[:, None], phi, plo)
    qc = np.concatenate([pc, [tc]])
    oc0 = batch_opt_costs(np.hstack([base, np.full((i + 1, 1), tlo)]), qc, omega)
    oc1 = batch_opt_costs(np.hstack([base, np.full((i + 1, 1), thi)]), qc, omega)

    best_j, best_r = 0, np.inf
    for j in range(i + 1):
        qlo = np.concatenate([plo[:j], [tlo], plo[j:]])
        qhi = np.concatenate([phi[:j], [thi], phi[j:]])
        qcst = np.concatenate([pc[:j], [tc], pc[j:]])
        prefix_hi = np.empty(m + 1)
        prefix_hi[0] = 1.0
        prefix_hi[1:] = np.cumprod(qhi)
        head = np.empty(m + 1)
        head[0] = 0.0
        head[1:] = np.cumsum(prefix_hi[:m] * qcst)
        tail = np.empty(m + 1)
        tail[m] = 0.0
        for r_pos in range(m - 1, -1, -1):
            tail[r_pos] = qcst[r_pos] + qlo[r_pos] * tail[r_pos + 1]
        cand = omega * (head + prefix_hi * tail)
        oc = np.concatenate([oc0[: j + 1], oc1[j:m]])
        regrets = _clamp(cand - oc)
        r = max(0.0, float(regrets.max()))
        if r < best_r:
            best_j, best_r = j, r
    return best_j, best_r
