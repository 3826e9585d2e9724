"""Self-contained LP/MILP engine with a pluggable backend seam.

The builtin backend is a bounded revised simplex plus branch-and-bound; the
"external" backend routes the same models through scipy's HiGHS bindings.
Backends are engine objects with solve_lp/solve_milp; register_backend lets
callers plug their own. All engine code is free of global mutable state, so
concurrent solves of distinct models are safe.
"""

from __future__ import annotations

import os

from . import branch_bound, external, simplex
from .model import (DEFAULT_REL_GAP, FEAS_TOL, INF, INT_TOL, OPT_TOL,
                    Constraint, LpSolution, MilpModel, MilpSolution,
                    ModelError, ModelSize, SolverParams, Variable, model_size)
from .simplex import scaled_row_residuals

ENV_BACKEND = "ROB_TNEP_SOLVER"


class BuiltinBackend:
    name = "builtin"

    def solve_lp(self, model: MilpModel) -> LpSolution:
        return simplex.solve_lp(model)

    def solve_milp(self, model: MilpModel, params: SolverParams | None = None) -> MilpSolution:
        return branch_bound.solve_milp(model, params)


class ExternalBackend:
    name = "external"

    def solve_lp(self, model: MilpModel) -> LpSolution:
        return external.solve_lp(model)

    def solve_milp(self, model: MilpModel, params: SolverParams | None = None) -> MilpSolution:
        return external.solve_milp(model, params)


_BACKENDS: dict[str, object] = {"builtin": BuiltinBackend(), "external": ExternalBackend()}


def register_backend(name: str, backend: object) -> None:
    """Plug in an object with solve_lp(model) and solve_milp(model, params)."""
    _BACKENDS[name] = backend


def get_backend(name: str | None = None):
    """Resolve a backend by name, falling back to $ROB_TNEP_SOLVER, then builtin."""
    if name is None:
        name = os.environ.get(ENV_BACKEND, "builtin")
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ModelError(f"unknown solver backend {name!r}; have {sorted(_BACKENDS)}") from None


def solve_lp(model: MilpModel, backend=None) -> LpSolution:
    return (backend or get_backend()).solve_lp(model)


def solve_milp(model: MilpModel, params: SolverParams | None = None, backend=None) -> MilpSolution:
    return (backend or get_backend()).solve_milp(model, params)


__all__ = [
    "BuiltinBackend", "ExternalBackend", "Constraint", "LpSolution", "MilpModel",
    "MilpSolution", "ModelError", "ModelSize", "SolverParams", "Variable",
    "DEFAULT_REL_GAP", "FEAS_TOL", "INT_TOL", "OPT_TOL", "ENV_BACKEND",
    "get_backend", "register_backend", "model_size", "solve_lp", "solve_milp",
    "scaled_row_residuals",
]
