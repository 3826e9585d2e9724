"""Branch-and-bound over binary variables on top of the simplex engine.

Deterministic search: best-bound node selection (FIFO among equal bounds),
branching on the most fractional binary with lowest-index tie-breaks, the
down-branch enqueued first. Each node re-solves its LP from scratch against a
standard form that is built and scaled once.
"""

from __future__ import annotations

import heapq
import time

import numpy as np

from .model import (DEFAULT_REL_GAP, INF, INT_TOL, MilpModel, MilpSolution,
                    ModelError, SolverParams)
from . import simplex


def solve_milp(model: MilpModel, params: SolverParams | None = None) -> MilpSolution:
    """Solve a mixed-binary model to proven relative gap params.rel_gap.

    For min problems best_bound <= objective; for max problems the reported
    bound is >= objective. An unbounded LP relaxation is reported as status
    "unbounded" (with binaries present this means "unbounded or infeasible" --
    in this package it always signals a modeling error such as a missing
    linearization bound).
    """
    params = params or SolverParams()
    model.validate()
    binaries = model.binary_indices
    if not binaries:
        lp = simplex.solve_lp(model)
        return MilpSolution(status=lp.status, objective=lp.objective, x=lp.x,
                           best_bound=lp.objective, node_count=1)

    S = simplex.build_standard(model, relax_binaries=True)
    negate = -1.0 if S.negated else 1.0

    def internal_obj(user_obj: float) -> float:
        return negate * (user_obj - model.obj_constant)

    started = time.monotonic()
    inc_x: np.ndarray | None = None
    inc_obj = INF            # internal (min) objective of the incumbent
    if params.initial_solution is not None:
        ok, val = _check_feasible(model, params.initial_solution)
        if ok:
            inc_x = np.asarray(params.initial_solution, dtype=float).copy()
            inc_obj = internal_obj(val)

    counter = 0
    root: dict[int, tuple[float, float]] = {}
    heap: list[tuple[float, int, dict[int, tuple[float, float]]]] = [(-INF, counter, root)]
    nodes = 0
    saw_limit: str | None = None

    def margin() -> float:
        return params.rel_gap * max(1.0, abs(inc_obj)) if inc_obj < INF else 0.0

    while heap:
        if params.node_limit is not None and nodes >= params.node_limit:
            saw_limit = "node_limit"
            break
        if params.time_limit is not None and time.monotonic() - started > params.time_limit:
            saw_limit = "time_limit"
            break
        bound, _, fixes = heapq.heappop(heap)
        if inc_obj < INF and bound >= inc_obj - margin():
            heap.clear()
            break

        lo, up = simplex.patch_bounds(S, fixes)
        res = simplex.solve_core(S, lo, up)
        if res.status == "breakdown":
            res = simplex.solve_core(S, lo, up, careful=True)
        nodes += 1
        if res.status == "infeasible":
            continue
        if res.status == "unbounded":
            return MilpSolution(status="unbounded", node_count=nodes)
        if res.status == "breakdown":
            return MilpSolution(status="breakdown", node_count=nodes)

        x_user = res.x[: S.n] * S.col_scale
        node_obj = internal_obj(model.objective_value(x_user))
        if inc_obj < INF and node_obj >= inc_obj - margin():
            continue

        frac = np.array([abs(x_user[j] - round(x_user[j])) for j in binaries])
        if frac.max() <= INT_TOL:
            cand_obj, cand_x = _polish(model, S, fixes, x_user, binaries, frac)
            cand_int = internal_obj(cand_obj)
            if inc_obj == INF or cand_int < inc_obj:
                inc_obj, inc_x = cand_int, cand_x
            continue

        j = binaries[int(np.argmax(frac))]
        for branch_up in (False, True):
            child = dict(fixes)
            child[j] = (1.0, 1.0) if branch_up else (0.0, 0.0)
            counter += 1
            heapq.heappush(heap, (node_obj, counter, child))

    best_bound_int = inc_obj
    if heap:
        best_bound_int = min(inc_obj, min(b for b, _, _ in heap))
    if saw_limit is not None:
        status = saw_limit
    elif inc_x is None:
        return MilpSolution(status="infeasible", node_count=nodes)
    else:
        status = "optimal"
    objective = None if inc_x is None else model.objective_value(inc_x)
    best_bound = None
    if best_bound_int > -INF:
        best_bound = negate * best_bound_int + model.obj_constant
    elif inc_x is None and saw_limit is not None:
        best_bound = None
    return MilpSolution(status=status, objective=objective, x=inc_x,
                        best_bound=best_bound, node_count=nodes)


def _polish(model: MilpModel, S, fixes: dict, x_user: np.ndarray,
            binaries: list[int], frac: np.ndarray):
    """Fix binaries at their rounded values and re-solve for the exact point."""
    if frac.max() <= 1e-12:
        return model.objective_value(x_user), x_user.copy()
    pinned = dict(fixes)
    for j in binaries:
        v = float(round(x_user[j]))
        pinned[j] = (v, v)
    lo, up = simplex.patch_bounds(S, pinned)
    res = simplex.solve_core(S, lo, up)
    if res.status != "optimal":
        return model.objective_value(x_user), x_user.copy()
    x2 = res.x[: S.n] * S.col_scale
    return model.objective_value(x2), x2


def _check_feasible(model: MilpModel, x: np.ndarray) -> tuple[bool, float]:
    """Cheap feasibility screen for warm-start incumbents."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.n_vars,):
        return False, 0.0
    for j, v in enumerate(model.variables):
        tol = 1e-6 * (1.0 + abs(x[j]))
        if x[j] < v.lb - tol or x[j] > v.ub + tol:
            return False, 0.0
        if v.binary and abs(x[j] - round(x[j])) > INT_TOL:
            return False, 0.0
    resid = simplex.scaled_row_residuals(model, x)
    if model.n_constraints and resid.max() > 1e-6:
        return False, 0.0
    return True, model.objective_value(x)


def solve_lp(model: MilpModel) -> "simplex.LpSolution":
    if model.binary_indices:
        raise ModelError("solve_lp requires an all-continuous model")
    return simplex.solve_lp(model)
