"""Solver-agnostic LP/MILP container and solution types.

A MilpModel is a plain list of bounded variables (some binary), sparse linear
constraints, and a sparse linear objective. Builders elsewhere in the package
construct these; engines in this subpackage (or an external backend) solve
them. Tolerances used across the solver live here so every component agrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

Sense = Literal["<=", "=", ">="]
LpStatus = Literal["optimal", "infeasible", "unbounded", "breakdown"]
MilpStatus = Literal["optimal", "infeasible", "unbounded", "node_limit", "time_limit", "breakdown"]

FEAS_TOL = 1e-7      # primal feasibility residual, on scaled rows
INT_TOL = 1e-6       # integrality tolerance on binaries
OPT_TOL = 1e-9       # dual feasibility (reduced cost) tolerance, relative
DEFAULT_REL_GAP = 1e-9   # branch-and-bound relative optimality gap

INF = math.inf


class ModelError(Exception):
    """Malformed model (bad bounds, unknown indices, bad sense)."""


@dataclass
class Variable:
    name: str
    lb: float = 0.0
    ub: float = INF
    binary: bool = False


@dataclass
class Constraint:
    name: str
    coeffs: dict[int, float]
    sense: Sense
    rhs: float


@dataclass
class MilpModel:
    """Mutable while building; engines treat it as read-only."""

    name: str = ""
    sense: Literal["min", "max"] = "min"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: dict[int, float] = field(default_factory=dict)
    obj_constant: float = 0.0

    def add_var(self, name: str, lb: float = 0.0, ub: float = INF,
                binary: bool = False, obj: float = 0.0) -> int:
        if binary:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        self.variables.append(Variable(name, lb, ub, binary))
        j = len(self.variables) - 1
        if obj:
            self.objective[j] = self.objective.get(j, 0.0) + obj
        return j

    def add_constraint(self, name: str, coeffs: dict[int, float] | Iterable[tuple[int, float]],
                       sense: Sense, rhs: float) -> int:
        if not isinstance(coeffs, dict):
            merged: dict[int, float] = {}
            for j, a in coeffs:
                merged[j] = merged.get(j, 0.0) + a
            coeffs = merged
        self.constraints.append(Constraint(name, dict(coeffs), sense, rhs))
        return len(self.constraints) - 1

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    @property
    def binary_indices(self) -> list[int]:
        return [j for j, v in enumerate(self.variables) if v.binary]

    def validate(self) -> None:
        n = self.n_vars
        for j, v in enumerate(self.variables):
            if v.lb > v.ub:
                raise ModelError(f"variable {v.name} has lb {v.lb} > ub {v.ub}")
            if math.isnan(v.lb) or math.isnan(v.ub):
                raise ModelError(f"variable {v.name} has NaN bound")
            if v.binary and (v.lb < -0.0 or v.ub > 1.0):
                raise ModelError(f"binary variable {v.name} bounds outside [0, 1]")
        for c in self.constraints:
            if c.sense not in ("<=", "=", ">="):
                raise ModelError(f"constraint {c.name} has bad sense {c.sense!r}")
            if not math.isfinite(c.rhs):
                raise ModelError(f"constraint {c.name} has non-finite rhs {c.rhs}")
            for j, a in c.coeffs.items():
                if not (0 <= j < n):
                    raise ModelError(f"constraint {c.name} references unknown variable {j}")
                if not math.isfinite(a):
                    raise ModelError(f"constraint {c.name} has non-finite coefficient {a}")
        for j, a in self.objective.items():
            if not (0 <= j < n):
                raise ModelError(f"objective references unknown variable {j}")
            if not math.isfinite(a):
                raise ModelError(f"objective has non-finite coefficient {a}")

    def objective_value(self, x: np.ndarray) -> float:
        return self.obj_constant + sum(a * x[j] for j, a in self.objective.items())


@dataclass
class ModelSize:
    binaries: int
    continuous: int
    equations: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.binaries, self.continuous, self.equations)


def model_size(model: MilpModel) -> ModelSize:
    nb = sum(1 for v in model.variables if v.binary)
    return ModelSize(binaries=nb, continuous=model.n_vars - nb,
                     equations=model.n_constraints)


@dataclass
class LpSolution:
    status: LpStatus
    objective: float | None = None
    x: np.ndarray | None = None
    duals: np.ndarray | None = None          # shadow prices d(obj)/d(rhs), one per row
    reduced_costs: np.ndarray | None = None  # one per variable
    iterations: int = 0


@dataclass
class MilpSolution:
    status: MilpStatus
    objective: float | None = None     # incumbent value
    x: np.ndarray | None = None
    best_bound: float | None = None
    node_count: int = 0


@dataclass
class SolverParams:
    rel_gap: float = DEFAULT_REL_GAP
    node_limit: int | None = None
    time_limit: float | None = None          # seconds
    initial_solution: np.ndarray | None = None   # feasible warm incumbent, optional
