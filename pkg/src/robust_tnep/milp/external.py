"""Optional external backend: scipy's HiGHS wrappers behind the same API.

Used to cross-check the builtin engine and as an escape hatch for big models.
scipy is imported lazily so the package works without it.
"""

from __future__ import annotations

import numpy as np

from .model import (DEFAULT_REL_GAP, INF, LpSolution, MilpModel, MilpSolution,
                    ModelError, SolverParams)


def available() -> bool:
    try:
        import scipy.optimize  # noqa: F401
        return True
    except ImportError:
        return False


def _split(model: MilpModel):
    n = model.n_vars
    c = np.zeros(n)
    for j, a in model.objective.items():
        c[j] += a
    sign = -1.0 if model.sense == "max" else 1.0
    c *= sign
    rows_ub, rhs_ub, map_ub = [], [], []   # map entries: (row index, flip)
    rows_eq, rhs_eq, map_eq = [], [], []
    for i, con in enumerate(model.constraints):
        row = np.zeros(n)
        for j, a in con.coeffs.items():
            row[j] += a
        if con.sense == "=":
            rows_eq.append(row)
            rhs_eq.append(con.rhs)
            map_eq.append(i)
        elif con.sense == "<=":
            rows_ub.append(row)
            rhs_ub.append(con.rhs)
            map_ub.append((i, 1.0))
        else:
            rows_ub.append(-row)
            rhs_ub.append(-con.rhs)
            map_ub.append((i, -1.0))
    bounds = [(v.lb if np.isfinite(v.lb) else -np.inf,
               v.ub if np.isfinite(v.ub) else np.inf) for v in model.variables]
    return c, sign, rows_ub, rhs_ub, map_ub, rows_eq, rhs_eq, map_eq, bounds


def solve_lp(model: MilpModel) -> LpSolution:
    from scipy.optimize import linprog

    model.validate()
    if model.binary_indices:
        raise ModelError("LP solve requires all-continuous variables")
    c, sign, rows_ub, rhs_ub, map_ub, rows_eq, rhs_eq, map_eq, bounds = _split(model)
    res = linprog(c,
                  A_ub=np.array(rows_ub) if rows_ub else None,
                  b_ub=np.array(rhs_ub) if rhs_ub else None,
                  A_eq=np.array(rows_eq) if rows_eq else None,
                  b_eq=np.array(rhs_eq) if rhs_eq else None,
                  bounds=bounds, method="highs")
    if res.status == 2:
        return LpSolution(status="infeasible")
    if res.status == 3:
        return LpSolution(status="unbounded")
    if res.status != 0:
        return LpSolution(status="breakdown")
    duals = np.zeros(model.n_constraints)
    for k, (i, flip) in enumerate(map_ub):
        duals[i] = flip * res.ineqlin.marginals[k]
    for k, i in enumerate(map_eq):
        duals[i] = res.eqlin.marginals[k]
    rc = res.lower.marginals + res.upper.marginals
    return LpSolution(status="optimal",
                      objective=model.objective_value(res.x),
                      x=res.x,
                      duals=sign * duals,
                      reduced_costs=sign * rc,
                      iterations=int(getattr(res, "nit", 0)))


def solve_milp(model: MilpModel, params: SolverParams | None = None) -> MilpSolution:
    from scipy.optimize import Bounds, LinearConstraint, milp

    params = params or SolverParams()
    model.validate()
    n = model.n_vars
    c = np.zeros(n)
    for j, a in model.objective.items():
        c[j] += a
    sign = -1.0 if model.sense == "max" else 1.0
    c *= sign
    constraints = []
    if model.n_constraints:
        A = np.zeros((model.n_constraints, n))
        lb = np.full(model.n_constraints, -np.inf)
        ub = np.full(model.n_constraints, np.inf)
        for i, con in enumerate(model.constraints):
            for j, a in con.coeffs.items():
                A[i, j] += a
            if con.sense in ("=", ">="):
                lb[i] = con.rhs
            if con.sense in ("=", "<="):
                ub[i] = con.rhs
        constraints = [LinearConstraint(A, lb, ub)]
    integrality = np.zeros(n)
    for j in model.binary_indices:
        integrality[j] = 1
    bounds = Bounds([v.lb for v in model.variables], [v.ub for v in model.variables])
    options: dict = {"mip_rel_gap": params.rel_gap if params.rel_gap else DEFAULT_REL_GAP}
    if params.time_limit is not None:
        options["time_limit"] = params.time_limit
    res = milp(c, constraints=constraints, integrality=integrality,
               bounds=bounds, options=options)
    if res.status == 2:
        return MilpSolution(status="infeasible")
    if res.status == 3:
        return MilpSolution(status="unbounded")
    if res.status == 1:
        return MilpSolution(status="time_limit",
                            objective=None if res.x is None else model.objective_value(res.x),
                            x=res.x)
    if res.status != 0 or res.x is None:
        return MilpSolution(status="breakdown")
    bb = getattr(res, "mip_dual_bound", None)
    return MilpSolution(status="optimal",
                        objective=model.objective_value(res.x),
                        x=res.x,
                        best_bound=None if bb is None else sign * bb,
                        node_count=int(getattr(res, "mip_node_count", 0) or 0))
