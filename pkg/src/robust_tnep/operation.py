"""Operating-level problems: dispatch, deterministic planning, exact oracle.

Three layers on top of the MILP engine:

* solve_operation_lp: the third-level DC dispatch LP for a fixed plan and a
  fixed uncertainty realization.
* solve_deterministic_tnep: the no-uncertainty planning MILP (build variables
  plus one nominal operating block).
* enumerate_exact: brute force over (plan, uncertainty vertex) pairs. Slow by
  design; it is the ground truth the decomposition algorithm is tested
  against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from . import milp
from .milp import INF, MilpModel, SolverParams
from .model import Line, Network, TnepError

ANGLE_MAX = math.pi


class OperationInfeasible(TnepError):
    """Dispatch LP has no feasible point (possible only when some demand has
    shed_fraction < 1)."""


@dataclass(frozen=True)
class Scenario:
    """One realization of the uncertain data, always a box vertex."""

    gen_caps: tuple[float, ...]   # available capacity per generator
    dem_loads: tuple[float, ...]  # realized load per demand
    z_gen: tuple[int, ...]        # 1 = capacity swung down
    z_dem: tuple[int, ...]        # 1 = load swung up

    @staticmethod
    def nominal(network: Network) -> "Scenario":
        return Scenario.from_z(network, (0,) * network.n_gens, (0,) * network.n_dems)

    @staticmethod
    def from_z(network: Network, z_gen: Sequence[int], z_dem: Sequence[int]) -> "Scenario":
        if len(z_gen) != network.n_gens or len(z_dem) != network.n_dems:
            raise ValueError("z vector lengths do not match the network")
        caps = tuple(g.cap_nominal - g.cap_deviation * z for g, z in zip(network.generators, z_gen))
        loads = tuple(d.load_nominal + d.load_deviation * z for d, z in zip(network.demands, z_dem))
        return Scenario(caps, loads, tuple(int(z) for z in z_gen), tuple(int(z) for z in z_dem))

    def key(self) -> tuple:
        return (self.z_gen, self.z_dem)

    def budget_feasible(self, network: Network) -> bool:
        for r in network.regions:
            gsum = sum(z for g, z in zip(network.generators, self.z_gen)
                       if network.gen_region(g) == r)
            if gsum > network.uncertainty.gamma_gen.get(r, 0):
                return False
            dsum = sum(z for d, z in zip(network.demands, self.z_dem)
                       if network.dem_region(d) == r)
            if dsum > network.uncertainty.gamma_dem.get(r, 0):
                return False
        return True


@dataclass(frozen=True)
class Dispatch:
    g: tuple[float, ...]      # MW per generator
    r: tuple[float, ...]      # MW shed per demand
    d: tuple[float, ...]      # MW consumed per demand
    f: tuple[float, ...]      # MW per line (0 for unbuilt candidates)
    theta: tuple[float, ...]  # rad per bus
    cost: float               # sigma-weighted operating cost


def _active_lines(network: Network, build: Sequence[bool] | None) -> list[Line]:
    cands = network.candidate_lines
    if build is None:
        build = (False,) * len(cands)
    if len(build) != len(cands):
        raise ValueError(f"plan has {len(build)} entries for {len(cands)} candidate lines")
    chosen = {ln.id for ln, b in zip(cands, build) if b}
    return [ln for ln in network.lines if not ln.is_candidate or ln.id in chosen]


def solve_operation_lp(network: Network, build: Sequence[bool] | None,
                       scenario: Scenario) -> Dispatch:
    """Minimum-cost DC dispatch for a fixed plan under a fixed scenario.

    Unbuilt candidate lines are dropped entirely (f = 0, no flow row).
    """
    active = _active_lines(network, build)
    m = MilpModel(name="dispatch", sense="min")
    gv = [m.add_var(f"g{i}", lb=0.0, ub=sc_cap, obj=network.config.sigma * g.cost)
          for i, (g, sc_cap) in enumerate(zip(network.generators, scenario.gen_caps))]
    rv = [m.add_var(f"r{j}", lb=0.0, ub=d.shed_fraction * load,
                    obj=network.config.sigma * d.shed_cost)
          for j, (d, load) in enumerate(zip(network.demands, scenario.dem_loads))]
    fv = {ln.id: m.add_var(f"f{ln.id}", lb=-ln.capacity, ub=ln.capacity) for ln in active}
    slack = network.slack_bus
    tv = [m.add_var(f"th{b}", lb=0.0, ub=0.0) if b == slack
          else m.add_var(f"th{b}", lb=-ANGLE_MAX, ub=ANGLE_MAX)
          for b in range(network.n_buses)]

    balance: list[dict[int, float]] = [dict() for _ in range(network.n_buses)]
    rhs = [0.0] * network.n_buses
    for g, vi in zip(network.generators, gv):
        balance[g.bus][vi] = balance[g.bus].get(vi, 0.0) + 1.0
    for d, vj, load in zip(network.demands, rv, scenario.dem_loads):
        balance[d.bus][vj] = balance[d.bus].get(vj, 0.0) + 1.0
        rhs[d.bus] += load
    for ln in active:
        vi = fv[ln.id]
        balance[ln.from_bus][vi] = balance[ln.from_bus].get(vi, 0.0) - 1.0
        balance[ln.to_bus][vi] = balance[ln.to_bus].get(vi, 0.0) + 1.0
    for b in range(network.n_buses):
        m.add_constraint(f"bal{b}", balance[b], "=", rhs[b])
    for ln in active:
        # f_k = b_k (theta_o - theta_r)
        m.add_constraint(f"flow{ln.id}",
                         {fv[ln.id]: 1.0, tv[ln.from_bus]: -ln.susceptance,
                          tv[ln.to_bus]: ln.susceptance}, "=", 0.0)

    sol = milp.solve_lp(m)
    if sol.status == "infeasible":
        raise OperationInfeasible(
            "dispatch infeasible for this plan/scenario (shed_fraction < 1 somewhere)")
    if sol.status != "optimal":
        raise TnepError(f"dispatch LP ended with status {sol.status}")
    x = sol.x
    f_all = [0.0] * network.n_lines
    for ln in active:
        f_all[ln.id] = x[fv[ln.id]]
    return Dispatch(
        g=tuple(x[i] for i in gv),
        r=tuple(x[j] for j in rv),
        d=tuple(scenario.dem_loads),
        f=tuple(f_all),
        theta=tuple(x[t] for t in tv),
        cost=sol.objective,
    )


def append_dispatch_block(m: MilpModel, network: Network, scenario: Scenario,
                          x_vars: Mapping[int, int], tag: str) -> dict[int, float]:
    """Add one full operating block (g, r, f, theta and their rows) to a model
    whose candidate build variables are given by x_vars (line id -> column).

    Candidate flow definitions are linearized disjunctively with
    M_k = |b_k| * 2*pi, exact under the +-pi angle bounds. Returns the block's
    sigma-weighted cost as a sparse objective row.
    """
    cost: dict[int, float] = {}
    gv = []
    for i, (g, cap) in enumerate(zip(network.generators, scenario.gen_caps)):
        vi = m.add_var(f"{tag}g{i}", lb=0.0, ub=cap)
        cost[vi] = network.config.sigma * g.cost
        gv.append(vi)
    rv = []
    for j, (d, load) in enumerate(zip(network.demands, scenario.dem_loads)):
        vj = m.add_var(f"{tag}r{j}", lb=0.0, ub=d.shed_fraction * load)
        cost[vj] = network.config.sigma * d.shed_cost
        rv.append(vj)
    fv = {ln.id: m.add_var(f"{tag}f{ln.id}", lb=-ln.capacity, ub=ln.capacity)
          for ln in network.lines}
    slack = network.slack_bus
    tv = [m.add_var(f"{tag}th{b}", lb=0.0, ub=0.0) if b == slack
          else m.add_var(f"{tag}th{b}", lb=-ANGLE_MAX, ub=ANGLE_MAX)
          for b in range(network.n_buses)]

    balance: list[dict[int, float]] = [dict() for _ in range(network.n_buses)]
    rhs = [0.0] * network.n_buses
    for g, vi in zip(network.generators, gv):
        balance[g.bus][vi] = balance[g.bus].get(vi, 0.0) + 1.0
    for d, vj, load in zip(network.demands, rv, scenario.dem_loads):
        balance[d.bus][vj] = balance[d.bus].get(vj, 0.0) + 1.0
        rhs[d.bus] += load
    for ln in network.lines:
        vi = fv[ln.id]
        balance[ln.from_bus][vi] = balance[ln.from_bus].get(vi, 0.0) - 1.0
        balance[ln.to_bus][vi] = balance[ln.to_bus].get(vi, 0.0) + 1.0
    for b in range(network.n_buses):
        m.add_constraint(f"{tag}bal{b}", balance[b], "=", rhs[b])

    for ln in network.lines:
        flow = {fv[ln.id]: 1.0, tv[ln.from_bus]: -ln.susceptance,
                tv[ln.to_bus]: ln.susceptance}
        if not ln.is_candidate:
            m.add_constraint(f"{tag}flow{ln.id}", flow, "=", 0.0)
            continue
        xk = x_vars[ln.id]
        mk = abs(ln.susceptance) * 2.0 * ANGLE_MAX
        m.add_constraint(f"{tag}flowu{ln.id}", {**flow, xk: mk}, "<=", mk)
        m.add_constraint(f"{tag}flowl{ln.id}", {**flow, xk: -mk}, ">=", -mk)
        m.add_constraint(f"{tag}capu{ln.id}", {fv[ln.id]: 1.0, xk: -ln.capacity}, "<=", 0.0)
        m.add_constraint(f"{tag}capl{ln.id}", {fv[ln.id]: 1.0, xk: ln.capacity}, ">=", 0.0)
    return cost


def investment_objective(network: Network) -> tuple[list[float], float]:
    """Per-candidate annualized build costs and the annualization factor."""
    crf = network.crf()
    return [crf * ln.build_cost for ln in network.candidate_lines], crf


def solve_deterministic_tnep(network: Network,
                             params: SolverParams | None = None) -> tuple[tuple[bool, ...], float]:
    """Plan against nominal data only (the no-uncertainty planning MILP)."""
    m = MilpModel(name="det-tnep", sense="min")
    cands = network.candidate_lines
    ann, _ = investment_objective(network)
    xv = {ln.id: m.add_var(f"x{k}", binary=True, obj=ann[k])
          for k, ln in enumerate(cands)}
    if cands:
        m.add_constraint("budget", {xv[ln.id]: ln.build_cost for ln in cands},
                         "<=", network.config.budget)
    cost = append_dispatch_block(m, network, Scenario.nominal(network), xv, "s0.")
    for vi, c in cost.items():
        m.objective[vi] = m.objective.get(vi, 0.0) + c

    sol = milp.solve_milp(m, params or SolverParams())
    if sol.status != "optimal":
        raise TnepError(f"deterministic planning MILP ended with status {sol.status}")
    build = tuple(sol.x[xv[ln.id]] > 0.5 for ln in cands)
    return build, sol.objective


class OracleGuardError(TnepError):
    """Instance too large for brute-force enumeration."""


@dataclass(frozen=True)
class OracleResult:
    build: tuple[bool, ...]
    objective: float
    worst_scenario: Scenario | None
    plans_examined: int
    vertices_examined: int


def _region_subsets(indices: list[int], budget: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for k in range(min(budget, len(indices)) + 1):
        out.extend(itertools.combinations(indices, k))
    return out


def count_vertices(network: Network) -> int:
    total = 1
    for r in network.regions:
        gidx = [i for i, g in enumerate(network.generators) if network.gen_region(g) == r]
        didx = [j for j, d in enumerate(network.demands) if network.dem_region(d) == r]
        gb = network.uncertainty.gamma_gen.get(r, 0)
        db = network.uncertainty.gamma_dem.get(r, 0)
        total *= sum(math.comb(len(gidx), k) for k in range(min(gb, len(gidx)) + 1))
        total *= sum(math.comb(len(didx), k) for k in range(min(db, len(didx)) + 1))
    return total


def iter_vertices(network: Network) -> Iterator[Scenario]:
    """All budget-feasible box vertices, deterministic order."""
    per_region: list[list[tuple[int, ...]]] = []
    for r in network.regions:
        gidx = [i for i, g in enumerate(network.generators) if network.gen_region(g) == r]
        didx = [j for j, d in enumerate(network.demands) if network.dem_region(d) == r]
        per_region.append(_region_subsets(gidx, network.uncertainty.gamma_gen.get(r, 0)))
        per_region.append(_region_subsets(didx, network.uncertainty.gamma_dem.get(r, 0)))
    for combo in itertools.product(*per_region):
        z_gen = [0] * network.n_gens
        z_dem = [0] * network.n_dems
        for which, chosen in enumerate(combo):
            target = z_gen if which % 2 == 0 else z_dem
            for idx in chosen:
                target[idx] = 1
        yield Scenario.from_z(network, z_gen, z_dem)


def worst_case_cost(network: Network, build: Sequence[bool]) -> tuple[float, Scenario | None]:
    """Exact inner max by vertex enumeration; +inf if any vertex is unservable."""
    worst = -INF
    worst_sc: Scenario | None = None
    for sc in iter_vertices(network):
        try:
            cost = solve_operation_lp(network, build, sc).cost
        except OperationInfeasible:
            return INF, sc
        if worst_sc is None or cost > worst + 1e-12 * max(1.0, abs(worst)):
            worst = cost
            worst_sc = sc
    return worst, worst_sc


def enumerate_exact(network: Network) -> OracleResult:
    """Ground-truth robust optimum by full enumeration (guarded)."""
    cands = network.candidate_lines
    if len(cands) > 12:
        raise OracleGuardError(f"{len(cands)} candidate lines exceeds the oracle cap of 12")
    nv = count_vertices(network)
    if nv > 4096:
        raise OracleGuardError(f"{nv} uncertainty vertices exceed the oracle cap of 4096")

    ann, _ = investment_objective(network)
    best_obj = INF
    best_build: tuple[bool, ...] | None = None
    best_sc: Scenario | None = None
    plans = 0
    for bits in itertools.product((False, True), repeat=len(cands)):
        raw = sum(ln.build_cost for ln, b in zip(cands, bits) if b)
        if raw > network.config.budget + 1e-9 * max(1.0, network.config.budget):
            continue
        plans += 1
        invest = sum(a for a, b in zip(ann, bits) if b)
        w, wsc = worst_case_cost(network, bits)
        total = invest + w
        # strict improvement only: ties keep the lexicographically smallest plan
        if total < INF and total < best_obj - 1e-9 * max(1.0, abs(total)):
            best_obj, best_build, best_sc = total, bits, wsc
    if best_build is None:
        raise TnepError("every budget-feasible plan is unservable at some vertex")
    return OracleResult(
        build=best_build,
        objective=best_obj,
        worst_scenario=best_sc,
        plans_examined=plans,
        vertices_examined=nv,
    )
