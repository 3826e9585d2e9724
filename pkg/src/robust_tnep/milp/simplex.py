"""Bounded-variable revised simplex with a two-phase start.

Dense numpy implementation aimed at models up to a few thousand rows/columns.
Computational form is min c.v s.t. A.v = b, lo <= v <= up over structural
variables, one slack per row, and phase-1 artificials. The basis inverse is
kept explicitly and eta-updated each pivot, with periodic refactorization.

Determinism: Dantzig pricing with lowest-index tie-breaks, switching to
Bland's rule after 1000 degenerate pivots. No randomization, no timers in the
pivot path, so identical inputs give identical pivot sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (FEAS_TOL, INF, OPT_TOL, LpSolution, MilpModel, ModelError)

AT_LO, AT_UP, FREE, BASIC = 0, 1, 2, 3

REFACTOR_EVERY = 64
BLAND_AFTER = 1000          # degenerate pivots before switching pivot rule
DEGEN_STEP = 1e-10
PIV_TOL = 1e-9
TIE_TOL = 1e-9


def _pow2_scale(m: float) -> float:
    """Power-of-two scalar s with s*m near 1; exact in floating point."""
    if m <= 0.0 or not np.isfinite(m):
        return 1.0
    e = int(np.round(np.log2(m)))
    e = max(-60, min(60, e))
    return 2.0 ** (-e)


@dataclass
class _Standard:
    """Scaled computational form shared by every node of a search tree."""

    A: np.ndarray            # m x (n + m + m): structurals, slacks, artificial space
    b: np.ndarray
    cost: np.ndarray         # length n + m + m, phase-2 objective (min sense)
    lo: np.ndarray           # default scaled bounds, structurals + slacks only
    up: np.ndarray
    n: int                   # structural count
    m: int
    row_scale: np.ndarray
    col_scale: np.ndarray    # length n
    negated: bool            # True when the user model is a max problem


def build_standard(model: MilpModel, relax_binaries: bool = False) -> _Standard:
    """Scale and arrange a model once; per-solve bounds may be patched later."""
    model.validate()
    if not relax_binaries and model.binary_indices:
        raise ModelError("LP solve requires all-continuous variables")
    n, m = model.n_vars, model.n_constraints
    width = n + 2 * m                      # reserve artificial columns up front
    A = np.zeros((m, width))
    b = np.empty(m)
    lo = np.empty(n + m)
    up = np.empty(n + m)
    for j, v in enumerate(model.variables):
        lo[j], up[j] = v.lb, v.ub
    for i, con in enumerate(model.constraints):
        for j, a in con.coeffs.items():
            A[i, j] += a
        b[i] = con.rhs
        s = n + i
        if con.sense == "<=":
            lo[s], up[s] = 0.0, INF
        elif con.sense == ">=":
            lo[s], up[s] = -INF, 0.0
        else:
            lo[s], up[s] = 0.0, 0.0

    row_scale = np.ones(m)
    for i in range(m):
        mx = np.max(np.abs(A[i, :n])) if n else 0.0
        row_scale[i] = _pow2_scale(mx)
    A[:, :n] *= row_scale[:, None]
    b *= row_scale
    col_scale = np.ones(n)
    for j in range(n):
        mx = np.max(np.abs(A[:, j])) if m else 0.0
        col_scale[j] = _pow2_scale(mx)
    A[:, :n] *= col_scale[None, :]
    with np.errstate(invalid="ignore"):
        lo[:n] = lo[:n] / col_scale
        up[:n] = up[:n] / col_scale
    for i in range(m):
        A[i, n + i] = 1.0

    negated = model.sense == "max"
    cost = np.zeros(width)
    for j, a in model.objective.items():
        cost[j] += (-a if negated else a) * col_scale[j]
    return _Standard(A=A, b=b, cost=cost, lo=lo, up=up, n=n, m=m,
                     row_scale=row_scale, col_scale=col_scale, negated=negated)


def patch_bounds(S: _Standard, overrides: dict[int, tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    """Scaled (lo, up) copies with user-unit per-variable overrides applied."""
    lo, up = S.lo.copy(), S.up.copy()
    for j, (lj, uj) in overrides.items():
        lo[j] = lj / S.col_scale[j]
        up[j] = uj / S.col_scale[j]
    return lo, up


@dataclass
class CoreResult:
    status: str              # optimal | infeasible | unbounded | breakdown
    x: np.ndarray | None = None       # scaled values, structurals + slacks
    duals: np.ndarray | None = None   # scaled-row shadow prices
    rc: np.ndarray | None = None      # scaled reduced costs, structurals only
    objective: float | None = None    # scaled == unscaled objective (no constant)
    iterations: int = 0


class _Breakdown(Exception):
    pass


def solve_core(S: _Standard, lo: np.ndarray | None = None, up: np.ndarray | None = None,
               careful: bool = False) -> CoreResult:
    """Two-phase bounded simplex on a prepared standard form."""
    n, m = S.n, S.m
    if lo is None:
        lo, up = S.lo, S.up
    lo_full = np.full(S.A.shape[1], 0.0)
    up_full = np.full(S.A.shape[1], 0.0)
    lo_full[: n + m] = lo
    up_full[: n + m] = up

    # initial point: structurals at the finite bound nearest zero
    x = np.zeros(S.A.shape[1])
    vstat = np.full(S.A.shape[1], AT_LO, dtype=np.int8)
    for j in range(n):
        lj, uj = lo_full[j], up_full[j]
        if lj == -INF and uj == INF:
            x[j], vstat[j] = 0.0, FREE
        elif lj == -INF:
            x[j], vstat[j] = uj, AT_UP
        elif uj == INF:
            x[j], vstat[j] = lj, AT_LO
        else:
            x[j], vstat[j] = (lj, AT_LO) if abs(lj) <= abs(uj) else (uj, AT_UP)

    resid = S.b - S.A[:, :n] @ x[:n]
    basis = np.empty(m, dtype=np.int64)
    art_rows: list[int] = []
    n_art = 0
    for i in range(m):
        s = n + i
        sl, su = lo_full[s], up_full[s]
        r = resid[i]
        if sl - FEAS_TOL <= r <= su + FEAS_TOL:
            x[s] = min(max(r, sl), su)
            vstat[s] = BASIC
            basis[i] = s
        else:
            beta = min(max(r, sl), su)
            x[s] = beta
            vstat[s] = AT_LO if beta == sl else AT_UP
            a = n + m + n_art
            sign = 1.0 if r > beta else -1.0
            S.A[i, a] = sign
            lo_full[a], up_full[a] = 0.0, INF
            x[a] = abs(r - beta)
            vstat[a] = BASIC
            basis[i] = a
            art_rows.append(i)
            n_art += 1

    width = n + m + n_art
    A = S.A[:, :width]
    arts = np.arange(n + m, width)
    phase1_cost = np.zeros(width)
    phase1_cost[arts] = 1.0

    state = _State(A=A, b=S.b, lo=lo_full[:width], up=up_full[:width],
                   basis=basis, vstat=vstat[:width], x=x[:width],
                   careful=careful)
    try:
        if n_art:
            state.run(phase1_cost, phase=1)
            infeas = float(phase1_cost @ state.x)
            if infeas > FEAS_TOL * max(1.0, float(np.max(np.abs(S.b))) if m else 1.0):
                return CoreResult(status="infeasible", iterations=state.iters)
            state.lo[arts] = 0.0
            state.up[arts] = 0.0
        status = state.run(S.cost[:width], phase=2)
        state.refactor()
        y = state.binv.T @ S.cost[:width][state.basis] if m else np.zeros(0)
        rc = S.cost[:width] - A.T @ y
        return CoreResult(status=status,
                          x=state.x[: n + m].copy(),
                          duals=y.copy(),
                          rc=rc[:n].copy(),
                          objective=float(S.cost[:width] @ state.x),
                          iterations=state.iters)
    except _Breakdown:
        return CoreResult(status="breakdown", iterations=state.iters)
    finally:
        _clear_artificials(S, art_rows, n, m)


def _clear_artificials(S: _Standard, art_rows: list[int], n: int, m: int) -> None:
    for k, i in enumerate(art_rows):
        S.A[i, n + m + k] = 0.0


class _State:
    """Mutable simplex state: basis, statuses, values, basis inverse."""

    def __init__(self, A, b, lo, up, basis, vstat, x, careful=False):
        self.A, self.b, self.lo, self.up = A, b, lo, up
        self.basis, self.vstat, self.x = basis, vstat, x
        self.m = A.shape[0]
        self.iters = 0
        self.degen = 0
        self.bland = False
        self.careful = careful
        self.refactor()

    def refactor(self) -> None:
        if self.m == 0:
            self.binv = np.zeros((0, 0))
            return
        B = self.A[:, self.basis]
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError as e:
            raise _Breakdown(f"singular basis: {e}") from None
        nonbasic = self.vstat != BASIC
        rhs = self.b - self.A[:, nonbasic] @ self.x[nonbasic]
        self.x[self.basis] = self.binv @ rhs

    def run(self, cost: np.ndarray, phase: int) -> str:
        A, lo, up = self.A, self.lo, self.up
        m = self.m
        maxiter = 20000 + 50 * A.shape[1]
        rc_tol = OPT_TOL * max(1.0, float(np.max(np.abs(cost))) if cost.size else 1.0)
        refactor_every = 1 if self.careful else REFACTOR_EVERY
        since_refactor = 0
        fixed = lo == up

        while True:
            self.iters += 1
            if self.iters > maxiter:
                raise _Breakdown("iteration limit")
            y = self.binv.T @ cost[self.basis] if m else np.zeros(0)
            rc = cost - A.T @ y
            nb = self.vstat != BASIC
            elig_inc = nb & ~fixed & (rc < -rc_tol) & ((self.vstat == AT_LO) | (self.vstat == FREE))
            elig_dec = nb & ~fixed & (rc > rc_tol) & ((self.vstat == AT_UP) | (self.vstat == FREE))
            elig = elig_inc | elig_dec
            if not elig.any():
                return "optimal"
            if self.bland:
                q = int(np.nonzero(elig)[0][0])
            else:
                score = np.where(elig, np.abs(rc), 0.0)
                q = int(np.argmax(score))
            direction = 1.0 if rc[q] < 0 else -1.0

            w = self.binv @ A[:, q] if m else np.zeros(0)
            dw = direction * w
            xb = self.x[self.basis] if m else np.zeros(0)
            t_best = INF
            if m:
                with np.errstate(divide="ignore", invalid="ignore"):
                    t_lo = np.where(dw > PIV_TOL, (xb - lo[self.basis]) / dw, INF)
                    t_up = np.where(dw < -PIV_TOL, (xb - up[self.basis]) / dw, INF)
                t_rows = np.minimum(t_lo, t_up)
                t_rows = np.where(np.isnan(t_rows), INF, t_rows)
                np.maximum(t_rows, 0.0, out=t_rows)
                t_best = float(np.min(t_rows)) if m else INF
            span = up[q] - lo[q]
            t_own = span if np.isfinite(span) else INF

            if t_own <= t_best + TIE_TOL:
                if not np.isfinite(t_own):
                    if phase == 1:
                        raise _Breakdown("phase-1 unbounded ray")
                    return "unbounded"
                # bound flip, no basis change
                if m:
                    self.x[self.basis] = xb - t_own * dw
                self.x[q] = up[q] if self.vstat[q] == AT_LO else lo[q]
                self.vstat[q] = AT_UP if self.vstat[q] == AT_LO else AT_LO
                if t_own < DEGEN_STEP:
                    self._note_degenerate()
                continue
            if not np.isfinite(t_best):
                if phase == 1:
                    raise _Breakdown("phase-1 unbounded ray")
                return "unbounded"

            tied = np.nonzero(t_rows <= t_best + TIE_TOL)[0]
            if self.bland:
                r = int(tied[np.argmin(self.basis[tied])])
            else:
                wt = np.abs(w[tied])
                best = np.nonzero(wt >= wt.max() - 1e-12)[0]
                r = int(tied[best[np.argmin(self.basis[tied[best]])]])
            t = max(float(t_rows[r]), 0.0)

            leave = self.basis[r]
            self.x[self.basis] = xb - t * dw
            self.x[q] = self.x[q] + direction * t
            self.x[leave] = lo[leave] if dw[r] > 0 else up[leave]
            self.vstat[leave] = AT_LO if dw[r] > 0 else AT_UP
            self.vstat[q] = BASIC
            self.basis[r] = q

            piv = w[r]
            if abs(piv) < PIV_TOL:
                raise _Breakdown("tiny pivot")
            self.binv[r, :] /= piv
            w2 = w.copy()
            w2[r] = 0.0
            self.binv -= np.outer(w2, self.binv[r, :])

            if t < DEGEN_STEP:
                self._note_degenerate()
            since_refactor += 1
            if since_refactor >= refactor_every:
                self.refactor()
                since_refactor = 0

    def _note_degenerate(self) -> None:
        self.degen += 1
        if self.degen > BLAND_AFTER:
            self.bland = True


def solve_lp(model: MilpModel, *, relax_binaries: bool = False) -> LpSolution:
    """Solve an LP: status, optimal point, shadow-price duals, reduced costs.

    Duals follow the shadow-price convention d(objective)/d(rhs); for a max
    problem both duals and reduced costs are reported for the max objective.
    """
    S = build_standard(model, relax_binaries=relax_binaries)
    res = solve_core(S)
    if res.status == "breakdown":
        res = solve_core(S, careful=True)
    return finish_solution(model, S, res)


def finish_solution(model: MilpModel, S: _Standard, res: CoreResult) -> LpSolution:
    if res.status != "optimal":
        return LpSolution(status=res.status, iterations=res.iterations)  # type: ignore[arg-type]
    x_user = res.x[: S.n] * S.col_scale
    sign = -1.0 if S.negated else 1.0
    duals = sign * res.duals * S.row_scale
    rcs = sign * res.rc / S.col_scale
    obj = model.objective_value(x_user)
    return LpSolution(status="optimal", objective=obj, x=x_user,
                      duals=duals, reduced_costs=rcs, iterations=res.iterations)


def scaled_row_residuals(model: MilpModel, x: np.ndarray) -> np.ndarray:
    """Signed violation of each constraint after power-of-two row scaling.

    Positive entries are violations; equalities contribute |residual|. This is
    the quantity the engine's feasibility tolerance is defined on.
    """
    out = np.zeros(model.n_constraints)
    for i, con in enumerate(model.constraints):
        acts = sum(a * x[j] for j, a in con.coeffs.items())
        mx = max((abs(a) for a in con.coeffs.values()), default=0.0)
        s = _pow2_scale(mx)
        r = (acts - con.rhs) * s
        if con.sense == "<=":
            out[i] = r
        elif con.sense == ">=":
            out[i] = -r
        else:
            out[i] = abs(r)
    return out
