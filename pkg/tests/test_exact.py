import numpy as np
import pytest

from conftest import random_instance
from mroselect.backends.vec import iter_linear_extensions
from mroselect.engine import max_regret_extreme, max_regret_maxmin, max_min_scenarios
from mroselect.exact import (
    SolveOptions,
    brute_force_mro,
    dominance_chains,
    dominance_predecessors,
    dominant_sort,
    strict_dominant_with_constant,
)
from mroselect.model import (
    CapacityLimitError,
    Instance,
    Operator,
    Plan,
    SelectivityInterval,
)

TOL = 1e-9


def op(lo, hi, name, cost=1.0):
    return Operator(name, SelectivityInterval(lo, hi), cost)


def make_strict_dominant_plus_constant(n, rng):
    """n operators: n-1 disjoint intervals plus one constant strictly inside
    exactly one of them (away from endpoints and midpoint)."""
    cuts = np.sort(rng.uniform(0.0, 1.0, 2 * (n - 1)))
    intervals = [(cuts[2 * i], cuts[2 * i + 1]) for i in range(n - 1)]
    host = int(rng.integers(n - 1))
    lo, hi = intervals[host]
    u = rng.uniform(0.05, 0.45)
    if rng.random() < 0.5:
        u += 0.5
    s_c = lo + u * (hi - lo)
    ops = [op(a, b, f"d{i}") for i, (a, b) in enumerate(intervals)]
    ops.append(op(s_c, s_c, "const"))
    return Instance(ops), len(ops) - 1


class TestBruteForce:
    def test_reference_instance(self, ref_instance):
        rep = brute_force_mro(ref_instance)
        assert rep.plan.order == (2, 0, 1)
        assert rep.max_regret == pytest.approx(0.3, abs=TOL)

    def test_email_example(self, email_instance):
        rep = brute_force_mro(email_instance)
        assert rep.plan.names(email_instance) == ("U", "A", "L")

    def test_single_operator(self):
        inst = Instance([op(0.2, 0.9, "only")])
        rep = brute_force_mro(inst)
        assert rep.plan.order == (0,)
        assert rep.max_regret == 0.0

    def test_capacity_refusal(self):
        inst = random_instance(7, seed=1)
        with pytest.raises(CapacityLimitError, match="exceeds the cap"):
            brute_force_mro(inst, SolveOptions(max_n=6))
        brute_force_mro(inst, SolveOptions(max_n=7))  # explicit override works

    def test_default_cap_is_twelve(self):
        with pytest.raises(CapacityLimitError):
            brute_force_mro(random_instance(13, seed=2))

    def test_prune_matches_full_search(self):
        for i in range(30):
            inst = random_instance(3 + i % 4, seed=400 + i)
            pruned = brute_force_mro(inst, SolveOptions(prune_dominance=True))
            full = brute_force_mro(inst, SolveOptions(prune_dominance=False))
            assert pruned.max_regret == pytest.approx(full.max_regret, abs=1e-12)

    def test_equal_operators_tie_break_lexicographic(self):
        inst = Instance([op(0.2, 0.6, "a"), op(0.2, 0.6, "b"), op(0.2, 0.6, "c")])
        for prune in (True, False):
            rep = brute_force_mro(inst, SolveOptions(prune_dominance=prune))
            assert rep.plan.order == (0, 1, 2)

    def test_exhaustive_lower_bound(self):
        # the reported optimum is <= the max regret of every enumerated plan
        inst = random_instance(5, seed=11)
        rep = brute_force_mro(inst, SolveOptions(prune_dominance=False))
        for perm in iter_linear_extensions(np.zeros(5, dtype=np.int64)):
            assert rep.max_regret <= max_regret_extreme(Plan(perm), inst).max_regret + TOL

    def test_pruning_respects_dominance_edges(self):
        inst = random_instance(6, seed=12)
        preds = dominance_predecessors(inst)
        rep = brute_force_mro(inst)
        pos = {opi: k for k, opi in enumerate(rep.plan.order)}
        for b in range(6):
            for a in range(6):
                if preds[b] & (1 << a):
                    assert pos[a] < pos[b]

    def test_invalid_options(self):
        with pytest.raises(ValueError):
            SolveOptions(max_n=0)


class TestDominantSort:
    def test_strictly_dominant_sorted_zero_regret(self):
        inst = Instance([op(0.3, 0.5, "b"), op(0.1, 0.2, "a"), op(0.6, 0.9, "c")])
        plan = dominant_sort(inst)
        assert plan.order == (1, 0, 2)
        assert max_regret_extreme(plan, inst).max_regret == 0.0

    def test_nested_pair_not_dominant(self, ref_instance):
        assert dominant_sort(ref_instance) is None

    def test_constant_operators_sort_by_selectivity(self):
        inst = Instance([op(0.7, 0.7, "x"), op(0.2, 0.2, "y"), op(0.5, 0.5, "z")])
        assert dominant_sort(inst).order == (1, 2, 0)

    def test_dominant_sort_attains_brute_force_optimum(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            lows = np.sort(rng.uniform(0, 1, n))
            his = np.minimum(1.0, lows + rng.uniform(0, 0.3, n))
            his = np.maximum.accumulate(his)  # force pairwise dominance
            inst = Instance([op(lows[i], his[i], f"g{i}") for i in range(n)])
            plan = dominant_sort(inst)
            assert plan is not None
            assert max_regret_extreme(plan, inst).max_regret == \
                pytest.approx(brute_force_mro(inst).max_regret, abs=1e-12)

    def test_requires_equal_costs(self):
        inst = Instance([op(0.1, 0.2, "a", cost=1.0), op(0.3, 0.4, "b", cost=2.0)])
        with pytest.raises(ValueError, match="costs equal"):
            dominant_sort(inst)


class TestStrictDominantWithConstant:
    def test_constant_below_midpoint_goes_before_host(self):
        inst = Instance([op(0.1, 0.2, "a"), op(0.4, 0.8, "b"), op(0.5, 0.5, "c")])
        assert strict_dominant_with_constant(inst, 2).order == (0, 2, 1)

    def test_constant_above_midpoint_goes_after_host(self):
        inst = Instance([op(0.1, 0.2, "a"), op(0.4, 0.8, "b"), op(0.7, 0.7, "c")])
        assert strict_dominant_with_constant(inst, 2).order == (0, 1, 2)

    def test_exact_midpoint_goes_before(self):
        inst = Instance([op(0.1, 0.2, "a"), op(0.4, 0.8, "b"), op(0.6, 0.6, "c")])
        assert strict_dominant_with_constant(inst, 2).order == (0, 2, 1)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            inst, ci = make_strict_dominant_plus_constant(int(rng.integers(3, 7)), rng)
            plan = strict_dominant_with_constant(inst, ci)
            assert max_regret_extreme(plan, inst).max_regret == \
                pytest.approx(brute_force_mro(inst).max_regret, abs=1e-12)

    def test_precondition_failures_are_named(self):
        with pytest.raises(ValueError, match="not constant"):
            strict_dominant_with_constant(
                Instance([op(0.1, 0.2, "a"), op(0.4, 0.8, "b")]), 1)
        with pytest.raises(ValueError, match="not strictly dominant"):
            strict_dominant_with_constant(
                Instance([op(0.1, 0.5, "a"), op(0.4, 0.8, "b"), op(0.45, 0.45, "c")]), 2)
        with pytest.raises(ValueError, match="inside 0"):
            strict_dominant_with_constant(
                Instance([op(0.1, 0.2, "a"), op(0.6, 0.8, "b"), op(0.4, 0.4, "c")]), 2)
        with pytest.raises(ValueError, match="costs equal"):
            strict_dominant_with_constant(
                Instance([op(0.1, 0.2, "a", cost=2.0), op(0.4, 0.8, "b"),
                          op(0.5, 0.5, "c")]), 2)


class TestDominanceChains:
    def test_reference_instance_prefers_wider_chain(self, ref_instance):
        assert dominance_chains(ref_instance, "CW") == (2, 0)
        assert dominance_chains(ref_instance, "W") == (2, 0)  # width 0.9 beats 0.5
        assert dominance_chains(ref_instance, "C") == (2, 0)  # earliest of the size-2 ties

    def test_fully_dominant_set_returns_everything(self):
        inst = Instance([op(0.3, 0.5, "b"), op(0.1, 0.2, "a"), op(0.6, 0.9, "c")])
        assert dominance_chains(inst, "CW") == (1, 0, 2)

    def test_onion_antichain(self):
        # pairwise nested: every chain is a single operator
        inst = Instance([op(0.4, 0.6, "inner"), op(0.3, 0.7, "mid"), op(0.2, 0.9, "outer")])
        assert len(dominance_chains(inst, "C")) == 1
        assert dominance_chains(inst, "W") == (2,)  # widest single operator

    def test_chain_is_a_chain(self):
        from mroselect.model import dominates
        rng = np.random.default_rng(31)
        for i in range(30):
            inst = random_instance(int(rng.integers(2, 10)), seed=500 + i)
            for tb in ("C", "W", "CW"):
                chain = dominance_chains(inst, tb)
                for a, b in zip(chain, chain[1:]):
                    assert dominates(inst.operators[a], inst.operators[b])

    def test_unknown_tie_break(self, ref_instance):
        with pytest.raises(ValueError):
            dominance_chains(ref_instance, "X")

    def test_requires_equal_costs(self):
        inst = Instance([op(0.1, 0.2, "a", cost=1.0), op(0.3, 0.4, "b", cost=2.0)])
        with pytest.raises(ValueError, match="costs equal"):
            dominance_chains(inst)


class TestIndependentOracle:
    def test_brute_force_against_pure_python_enumeration(self):
        # oracle shares no code with the kernels: itertools permutations,
        # endpoint products, and the engine-level cost/regret arithmetic
        import itertools

        from mroselect.engine import regret

        rng = np.random.default_rng(77)
        for trial in range(15):
            n = int(rng.integers(2, 6))
            inst = random_instance(n, seed=900 + trial, unit_costs=trial % 2 == 0)
            endpoints = [(o.sel.s_lo, o.sel.s_hi) for o in inst.operators]
            best = None
            for perm in itertools.permutations(range(n)):
                worst = max(
                    regret(Plan(perm), inst.scenario(values), inst)
                    for values in itertools.product(*endpoints)
                )
                if best is None or worst < best:
                    best = worst
            rep = brute_force_mro(inst)
            assert rep.max_regret == pytest.approx(best, abs=1e-9)


class TestWorstCaseWitness:
    def test_witness_is_maxmin_scenario(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            inst, _ = make_strict_dominant_plus_constant(int(rng.integers(3, 6)), rng)
            rep = brute_force_mro(inst)
            maxmin = {s.values for s in max_min_scenarios(rep.plan, inst)}
            assert rep.witness.values in maxmin
            # and the max-min evaluation sees the same maximum
            assert max_regret_maxmin(rep.plan, inst).max_regret == \
                pytest.approx(rep.max_regret, abs=1e-12)
