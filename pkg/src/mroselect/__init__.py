"""Minmax-regret ordering of pipelined selection operators.

Selectivities are known only as closed intervals; a plan is judged by its
worst-case regret (cost above the optimal plan's cost) over all scenarios,
and the library finds or approximates the plan minimizing that regret.
"""

from .backends import ACTIVE_BACKEND
from .bench import gen_midpoint_adversarial, gen_uniform_instance, regret_ratio
from .engine import (
    CostBreakdown,
    max_min_scenarios,
    max_regret_extreme,
    max_regret_maxmin,
    extreme_scenarios,
    optimal_plan,
    plan_cost,
    rank,
    regret,
)
from .exact import SolveOptions, brute_force_mro, dominance_chains, dominant_sort
from .heuristic import (
    HeuristicConfig,
    insert_best,
    midpoint_plan,
    order_queue,
    point_estimate_plan,
    run_H,
    run_pipeline,
)
from .model import (
    CapacityLimitError,
    Instance,
    InvalidInstanceError,
    Operator,
    Plan,
    RegretReport,
    Scenario,
    SelectivityInterval,
    dominates,
    is_nested,
    load_instance,
    strictly_dominates,
    validate,
)

__version__ = "0.1.0"
