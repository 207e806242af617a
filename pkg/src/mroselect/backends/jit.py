"""Numba-compiled backend for the hot kernels.

Same contracts as :mod:`mroselect.backends.vec` (scenario bit encoding,
regret clamping, earliest-witness and earliest-candidate tie rules); see
that module's docstring.  Compiled lazily with on-disk caching, so the first
call in a fresh environment pays the JIT cost once.
"""

from __future__ import annotations

import numpy as np
from numba import njit

REGRET_EPS = 1e-12


@njit(cache=True)
def _opt_cost(sel, costs, omega):
    # rank = (s - 1) / c; stable sort keeps ascending-index tie-breaks
    ranks = (sel - 1.0) / costs
    idx = np.argsort(ranks, kind="mergesort")
    total = 0.0
    prod = 1.0
    for a in idx:
        total += prod * costs[a]
        prod *= sel[a]
    return omega * total


@njit(cache=True)
def _scenario_sel(out, m, lo, hi, shifts):
    for i in range(lo.size):
        sh = shifts[i]
        if sh >= 0 and ((m >> sh) & 1) == 1:
            out[i] = hi[i]
        else:
            out[i] = lo[i]


@njit(cache=True)
def _plan_cost_for_m(order, m, lo, hi, costs, omega, shifts):
    total = 0.0
    prod = 1.0
    for j in range(order.size):
        op = order[j]
        sh = shifts[op]
        if sh >= 0 and ((m >> sh) & 1) == 1:
            s = hi[op]
        else:
            s = lo[op]
        total += prod * costs[op]
        prod *= s
    return omega * total


@njit(cache=True)
def extreme_opt_costs(lo, hi, costs, omega, shifts, k_bits):
    total = 1 << k_bits
    out = np.empty(total, dtype=np.float64)
    sel = np.empty(lo.size, dtype=np.float64)
    for m in range(total):
        _scenario_sel(sel, m, lo, hi, shifts)
        out[m] = _opt_cost(sel, costs, omega)
    return out


@njit(cache=True)
def extreme_plan_regret(order, lo, hi, costs, omega, shifts, k_bits, optc):
    total = 1 << k_bits
    best = 0.0
    for m in range(total):
        r = _plan_cost_for_m(order, m, lo, hi, costs, omega, shifts) - optc[m]
        if -REGRET_EPS < r < REGRET_EPS:
            r = 0.0
        if r > best:
            best = r
    for m in range(total):
        r = _plan_cost_for_m(order, m, lo, hi, costs, omega, shifts) - optc[m]
        if -REGRET_EPS < r < REGRET_EPS:
            r = 0.0
        if r >= best - REGRET_EPS:
            return best, m
    return best, 0


@njit(cache=True)
def _plan_max_regret_bounded(order, lo, hi, costs, omega, shifts, k_bits, optc, bound):
    # short-circuit: once the running max reaches `bound` the plan cannot
    # strictly improve on the incumbent, so stop scanning scenarios
    best = 0.0
    for m in range(1 << k_bits):
        r = _plan_cost_for_m(order, m, lo, hi, costs, omega, shifts) - optc[m]
        if -REGRET_EPS < r < REGRET_EPS:
            r = 0.0
        if r > best:
            best = r
            if best >= bound:
                return best
    return best


@njit(cache=True)
def brute_force(lo, hi, costs, omega, shifts, k_bits, optc, preds):
    n = lo.size
    order = np.empty(n, dtype=np.int64)
    cand = np.empty(n, dtype=np.int64)
    best_order = np.arange(n)
    best_r = np.inf
    used = np.int64(0)
    depth = 0
    cand[0] = -1
    while depth >= 0:
        nxt = -1
        for i in range(cand[depth] + 1, n):
            bit = np.int64(1) << i
            if used & bit:
                continue
            if preds[i] & ~used:
                continue
            nxt = i
            break
        if nxt == -1:
            depth -= 1
            if depth >= 0:
                used &= ~(np.int64(1) << order[depth])
            continue
        cand[depth] = nxt
        order[depth] = nxt
        if depth == n - 1:
            r = _plan_max_regret_bounded(order, lo, hi, costs, omega, shifts,
                                         k_bits, optc, best_r)
            if r < best_r:
                best_r = r
                best_order[:] = order
        else:
            used |= np.int64(1) << nxt
            depth += 1
            cand[depth] = -1
    return best_order, best_r


@njit(cache=True)
def maxmin_plan_regret(order, lo, hi, costs, omega):
    n = order.size
    sel = lo.copy()
    regrets = np.empty(n + 1, dtype=np.float64)
    for k in range(n + 1):
        if k > 0:
            sel[order[k - 1]] = hi[order[k - 1]]
        total = 0.0
        prod = 1.0
        for j in range(n):
            op = order[j]
            total += prod * costs[op]
            prod *= sel[op]
        r = omega * total - _opt_cost(sel, costs, omega)
        if -REGRET_EPS < r < REGRET_EPS:
            r = 0.0
        regrets[k] = r
    best = 0.0
    for k in range(n + 1):
        if regrets[k] > best:
            best = regrets[k]
    for k in range(n + 1):
        if regrets[k] >= best - REGRET_EPS:
            return best, k
    return best, 0


@njit(cache=True)
def insert_scan_naive(p_order, t, lo, hi, costs, omega):
    i = p_order.size
    m = i + 1
    q = np.empty(m, dtype=np.int64)
    sel = np.empty(m, dtype=np.float64)
    qc = np.empty(m, dtype=np.float64)
    best_j = 0
    best_r = np.inf
    for j in range(i + 1):
        for r_pos in range(j):
            q[r_pos] = p_order[r_pos]
        q[j] = t
        for r_pos in range(j, i):
            q[r_pos + 1] = p_order[r_pos]
        for r_pos in range(m):
            qc[r_pos] = costs[q[r_pos]]
        rmax = 0.0
        for k in range(m + 1):
            for r_pos in range(m):
                sel[r_pos] = hi[q[r_pos]] if r_pos < k else lo[q[r_pos]]
            total = 0.0
            prod = 1.0
            for r_pos in range(m):
                total += prod * qc[r_pos]
                prod *= sel[r_pos]
            r = omega * total - _opt_cost(sel, qc, omega)
            if -REGRET_EPS < r < REGRET_EPS:
                r = 0.0
            if r > rmax:
                rmax = r
        if rmax < best_r:
            best_j = j
            best_r = rmax
    return best_j, best_r


@njit(cache=True)
def insert_scan_incremental(p_order, t, lo, hi, costs, omega):
    i = p_order.size
    m = i + 1
    plo = lo[p_order]
    phi = hi[p_order]
    pc = costs[p_order]
    tlo, thi, tc = lo[t], hi[t], costs[t]

    # optimal costs for the shared scenario family S(a, b): the candidate
    # position only decides which (a, b) each max-min index k maps to
    qc = np.empty(m, dtype=np.float64)
    qc[:i] = pc
    qc[i] = tc
    sel = np.empty(m, dtype=np.float64)
    oc0 = np.empty(i + 1, dtype=np.float64)
    oc1 = np.empty(i + 1, dtype=np.float64)
    for a in range(i + 1):
        for r_pos in range(i):
            sel[r_pos] = phi[r_pos] if r_pos < a else plo[r_pos]
        sel[i] = tlo
        oc0[a] = _opt_cost(sel, qc, omega)
        sel[i] = thi
        oc1[a] = _opt_cost(sel, qc, omega)

    qlo = np.empty(m, dtype=np.float64)
    qhi = np.empty(m, dtype=np.float64)
    qcst = np.empty(m, dtype=np.float64)
    prefix_hi = np.empty(m + 1, dtype=np.float64)
    head = np.empty(m + 1, dtype=np.float64)
    tail = np.empty(m + 1, dtype=np.float64)
    best_j = 0
    best_r = np.inf
    for j in range(i + 1):
        for r_pos in range(j):
            qlo[r_pos] = plo[r_pos]
            qhi[r_pos] = phi[r_pos]
            qcst[r_pos] = pc[r_pos]
        qlo[j] = tlo
        qhi[j] = thi
        qcst[j] = tc
        for r_pos in range(j, i):
            qlo[r_pos + 1] = plo[r_pos]
            qhi[r_pos + 1] = phi[r_pos]
            qcst[r_pos + 1] = pc[r_pos]
        prefix_hi[0] = 1.0
        head[0] = 0.0
        for r_pos in range(m):
            prefix_hi[r_pos + 1] = prefix_hi[r_pos] * qhi[r_pos]
            head[r_pos + 1] = head[r_pos] + prefix_hi[r_pos] * qcst[r_pos]
        tail[m] = 0.0
        for r_pos in range(m - 1, -1, -1):
            tail[r_pos] = qcst[r_pos] + qlo[r_pos] * tail[r_pos + 1]
        rmax = 0.0
        for k in range(m + 1):
            cand = omega * (head[k] + prefix_hi[k] * tail[k])
            oc = oc0[k] if k <= j else oc1[k - 1]
            r = cand - oc
            if -REGRET_EPS < r < REGRET_EPS:
                r = 0.0
            if r > rmax:
                rmax = r
        if rmax < best_r:
            best_j = j
            best_r = rmax
    return best_j, best_r
