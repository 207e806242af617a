"""Domain types for selection ordering under interval selectivities.

An :class:`Instance` is a set of selection (filter) operators, each with a
per-tuple cost and a closed selectivity interval ``[s_lo, s_hi]``.  A
:class:`Plan` is an execution order, a :class:`Scenario` pins one concrete
selectivity per operator.  All types are immutable and safe to share across
threads.  Plan orders and scenario values are index-aligned with
``Instance.operators`` and use 0-based positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SelectivityInterval",
    "Operator",
    "Instance",
    "Plan",
    "Scenario",
    "RegretReport",
    "InvalidInstanceError",
    "CapacityLimitError",
    "validate",
    "validation_errors",
    "dominates",
    "strictly_dominates",
    "is_nested",
    "load_instance",
    "dump_instance",
]


class InvalidInstanceError(ValueError):
    """Raised when an instance violates a type invariant.

    ``errors`` lists every violated invariant, each with the position of the
    offending operator where applicable.
    """

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class CapacityLimitError(RuntimeError):
    """Raised when an input exceeds an enumeration capacity guard."""


@dataclass(frozen=True)
class SelectivityInterval:
    """Closed interval ``[s_lo, s_hi]`` within ``[0, 1]``."""

    s_lo: float
    s_hi: float

    def width(self) -> float:
        return self.s_hi - self.s_lo

    def midpoint(self) -> float:
        return (self.s_lo + self.s_hi) / 2.0

    def is_constant(self) -> bool:
        return self.s_lo == self.s_hi

    def contains(self, value: float) -> bool:
        return self.s_lo <= value <= self.s_hi


@dataclass(frozen=True)
class Operator:
    """One selection operator: a name, a selectivity interval and a cost."""

    name: str
    sel: SelectivityInterval
    cost: float = 1.0


@dataclass(frozen=True)
class Instance:
    """An ordered set of operators plus the input cardinality ``omega``.

    Operator identity is positional; names are I/O labels only.
    """

    operators: tuple[Operator, ...]
    omega: float = 1.0

    def __init__(self, operators: Iterable[Operator], omega: float = 1.0):
        object.__setattr__(self, "operators", tuple(operators))
        object.__setattr__(self, "omega", float(omega))

    @property
    def n(self) -> int:
        return len(self.operators)

    def lows(self) -> np.ndarray:
        return np.array([op.sel.s_lo for op in self.operators], dtype=np.float64)

    def highs(self) -> np.ndarray:
        return np.array([op.sel.s_hi for op in self.operators], dtype=np.float64)

    def costs(self) -> np.ndarray:
        return np.array([op.cost for op in self.operators], dtype=np.float64)

    def names(self) -> tuple[str, ...]:
        return tuple(op.name for op in self.operators)

    def scenario(self, values: Sequence[float]) -> "Scenario":
        """Build a scenario, checking feasibility against the intervals."""
        values = tuple(float(v) for v in values)
        if len(values) != self.n:
            raise ValueError(f"scenario has {len(values)} values, instance has {self.n} operators")
        for i, (v, op) in enumerate(zip(values, self.operators)):
            if not op.sel.contains(v):
                raise ValueError(
                    f"scenario[{i}]={v} outside interval [{op.sel.s_lo}, {op.sel.s_hi}]"
                    f" of operator {op.name!r}"
                )
        return Scenario(values)

    def is_feasible(self, scenario: "Scenario") -> bool:
        if len(scenario.values) != self.n:
            return False
        return all(op.sel.contains(v) for v, op in zip(scenario.values, self.operators))


@dataclass(frozen=True)
class Plan:
    """An execution order: a permutation of ``0..n-1`` operator positions."""

    order: tuple[int, ...]

    def __init__(self, order: Iterable[int]):
        object.__setattr__(self, "order", tuple(int(i) for i in order))

    def __len__(self) -> int:
        return len(self.order)

    def is_permutation_of(self, n: int) -> bool:
        return sorted(self.order) == list(range(n))

    def names(self, instance: Instance) -> tuple[str, ...]:
        return tuple(instance.operators[i].name for i in self.order)


@dataclass(frozen=True)
class Scenario:
    """One concrete selectivity per operator, index-aligned with the instance."""

    values: tuple[float, ...]

    def __init__(self, values: Iterable[float]):
        object.__setattr__(self, "values", tuple(float(v) for v in values))

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)


@dataclass(frozen=True)
class RegretReport:
    """A plan, its maximum regret, and the scenario achieving it."""

    plan: Plan
    max_regret: float
    witness: Scenario
    scenario_class: str = field(default="extreme")  # "extreme" or "maxmin"


def dominates(a: Operator, b: Operator) -> bool:
    """True iff ``a``'s interval is endpoint-wise <= ``b``'s."""
    return a.sel.s_lo <= b.sel.s_lo and a.sel.s_hi <= b.sel.s_hi


def strictly_dominates(a: Operator, b: Operator) -> bool:
    """True iff ``a``'s upper bound is <= ``b``'s lower bound."""
    return a.sel.s_hi <= b.sel.s_lo


def is_nested(a: Operator, b: Operator) -> bool:
    """True iff ``a``'s interval lies strictly inside ``b``'s."""
    return b.sel.s_lo < a.sel.s_lo and a.sel.s_hi < b.sel.s_hi


def validation_errors(instance: Instance) -> list[str]:
    """Every violated invariant of ``instance``, with operator positions."""
    errors: list[str] = []
    if instance.n == 0:
        errors.append("operators: must not be empty")
    if not np.isfinite(instance.omega) or instance.omega < 0:
        errors.append(f"omega: must be a non-negative real, got {instance.omega}")
    seen: dict[str, int] = {}
    for i, op in enumerate(instance.operators):
        lo, hi = op.sel.s_lo, op.sel.s_hi
        if not (np.isfinite(lo) and np.isfinite(hi)):
            errors.append(f"operators[{i}].sel: bounds must be finite")
            continue
        if lo < 0.0 or hi > 1.0:
            errors.append(f"operators[{i}].sel: interval [{lo}, {hi}] outside [0, 1]")
        if lo > hi:
            errors.append(f"operators[{i}].sel: inverted interval [{lo}, {hi}]")
        if not (np.isfinite(op.cost) and op.cost > 0.0):
            errors.append(f"operators[{i}].cost: must be > 0, got {op.cost}")
        if op.name in seen:
            errors.append(
                f"operators[{i}].name: duplicate name {op.name!r} (first at {seen[op.name]})"
            )
        else:
            seen[op.name] = i
    return errors


def validate(instance: Instance) -> None:
    """Raise :class:`InvalidInstanceError` listing all violations, if any."""
    errors = validation_errors(instance)
    if errors:
        raise InvalidInstanceError(errors)


def _parse_operator(obj: object, pos: int) -> Operator:
    prefix = f"operators[{pos}]"
    if not isinstance(obj, dict):
        raise InvalidInstanceError([f"{prefix}: expected an object"])
    errors = []
    name = obj.get("name")
    if not isinstance(name, str) or not name:
        errors.append(f"{prefix}.name: expected a non-empty string")
    fields = {}
    for key in ("cost", "s_lo", "s_hi"):
        val = obj.get(key)
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            errors.append(f"{prefix}.{key}: expected a number, got {val!r}")
        else:
            fields[key] = float(val)
    if errors:
        raise InvalidInstanceError(errors)
    return Operator(
        name=name, sel=SelectivityInterval(fields["s_lo"], fields["s_hi"]), cost=fields["cost"]
    )


def load_instance(path: str) -> Instance:
    """Read an instance file and validate it.

    Format: ``{"omega": number, "operators": [{"name", "cost", "s_lo",
    "s_hi"}, ...]}``.  ``omega`` defaults to 1 when absent.  Invariant
    violations raise :class:`InvalidInstanceError` with positional messages.
    """
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInstanceError([f"not valid JSON: {exc}"]) from exc
    if not isinstance(data, dict):
        raise InvalidInstanceError(["top level: expected an object"])
    raw_ops = data.get("operators")
    if not isinstance(raw_ops, list):
        raise InvalidInstanceError(["operators: expected a list"])
    omega = data.get("omega", 1.0)
    if not isinstance(omega, (int, float)) or isinstance(omega, bool):
        raise InvalidInstanceError([f"omega: expected a number, got {omega!r}"])
    ops = [_parse_operator(o, i) for i, o in enumerate(raw_ops)]
    instance = Instance(ops, omega=float(omega))
    validate(instance)
    return instance


def dump_instance(instance: Instance, path: str) -> None:
    """Write an instance in the format accepted by :func:`load_instance`."""
    data = {
        "omega": instance.omega,
        "operators": [
            {"name": op.name, "cost": op.cost, "s_lo": op.sel.s_lo, "s_hi": op.sel.s_hi}
            for op in instance.operators
        ],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
