import numpy as np
import pytest

from mroselect.model import Instance, Operator, SelectivityInterval

# Regret of each of the 6 plans under each of the 8 extreme scenarios of the
# reference 3-operator instance (s1=[.2,.8], s2=[.3,.5], s3=[.1,.4], unit
# costs, omega=1), 2-decimal rounded.  Scenario columns count in binary with
# s3 toggling fastest; plan rows are in lexicographic order.
REGRET_TABLE = {
    (0, 1, 2): (0.14, 0.00, 0.18, 0.02, 0.91, 0.62, 1.05, 0.60),
    (0, 2, 1): (0.10, 0.02, 0.10, 0.00, 0.75, 0.70, 0.73, 0.52),
    (1, 0, 2): (0.24, 0.10, 0.48, 0.32, 0.41, 0.12, 0.75, 0.30),
    (1, 2, 0): (0.21, 0.16, 0.43, 0.42, 0.20, 0.00, 0.40, 0.10),
    (2, 0, 1): (0.00, 0.22, 0.00, 0.20, 0.05, 0.30, 0.03, 0.12),
    (2, 1, 0): (0.01, 0.26, 0.03, 0.32, 0.00, 0.10, 0.00, 0.00),
}
REGRET_TABLE_ROW_MAX = {
    (0, 1, 2): 1.05,
    (0, 2, 1): 0.75,
    (1, 0, 2): 0.75,
    (1, 2, 0): 0.43,
    (2, 0, 1): 0.30,
    (2, 1, 0): 0.32,
}


@pytest.fixture
def ref_instance():
    """The running 3-operator example instance."""
    return Instance([
        Operator("s1", SelectivityInterval(0.2, 0.8)),
        Operator("s2", SelectivityInterval(0.3, 0.5)),
        Operator("s3", SelectivityInterval(0.1, 0.4)),
    ])


@pytest.fixture
def email_instance():
    """Substring-predicate intervals for the three-keyword email query (A, L, U)."""
    return Instance([
        Operator("A", SelectivityInterval(0.03, 0.68)),
        Operator("L", SelectivityInterval(0.17, 0.27)),
        Operator("U", SelectivityInterval(0.0008, 0.06)),
    ])


def random_instance(n, seed, unit_costs=True, omega=1.0):
    """Random instance with sorted-uniform intervals (and optional costs)."""
    rng = np.random.default_rng(seed)
    draws = np.sort(rng.uniform(0.0, 1.0, size=(n, 2)), axis=1)
    costs = np.ones(n) if unit_costs else rng.uniform(0.1, 5.0, size=n)
    return Instance(
        [Operator(f"o{i}", SelectivityInterval(float(a), float(b)), float(c))
         for i, (a, b), c in zip(range(n), draws, costs)],
        omega=omega,
    )


def random_scenario(instance, rng):
    lo, hi = instance.lows(), instance.highs()
    return instance.scenario(lo + (hi - lo) * rng.random(instance.n))
