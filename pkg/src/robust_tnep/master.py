"""CCG master problem over accumulated worst-case scenarios.

The master decides the build vector x and a worst-operation-cost variable
gamma, lower-bounded by one full dispatch block per scenario seen so far.
Variable layout in the built model: x (one binary per candidate line) first,
then gamma, then per-scenario block variables; extract_plan relies on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import milp
from .milp import MilpModel, MilpSolution, SolverParams
from .model import Network, TnepError
from .operation import Scenario, append_dispatch_block, investment_objective


@dataclass
class MasterState:
    """Scenario pool plus the latest master outcome, carried across iterations."""

    scenarios: list[Scenario] = field(default_factory=list)
    plan: "ExpansionPlan | None" = None

    def has(self, scenario: Scenario) -> bool:
        return any(s.key() == scenario.key() for s in self.scenarios)

    def add(self, scenario: Scenario) -> None:
        if self.has(scenario):
            raise TnepError("duplicate scenario added to master state")
        self.scenarios.append(scenario)


@dataclass(frozen=True)
class ExpansionPlan:
    build: tuple[bool, ...]
    investment_cost: float      # raw sum of build costs, not annualized
    gamma: float

    @property
    def n_built(self) -> int:
        return sum(self.build)


def build_master(network: Network, scenarios: list[Scenario]) -> MilpModel:
    m = MilpModel(name="ccg-master", sense="min")
    cands = network.candidate_lines
    ann, _ = investment_objective(network)
    xv = {ln.id: m.add_var(f"x{k}", binary=True, obj=ann[k])
          for k, ln in enumerate(cands)}
    gv = m.add_var("gamma", lb=0.0, obj=1.0)
    if cands:
        m.add_constraint("budget", {xv[ln.id]: ln.build_cost for ln in cands},
                         "<=", network.config.budget)
    for i, sc in enumerate(scenarios):
        cost = append_dispatch_block(m, network, sc, xv, f"s{i}.")
        # gamma - sigma*(gen + shed cost of block i) >= 0
        row = {v: -c for v, c in cost.items()}
        row[gv] = 1.0
        m.add_constraint(f"cut{i}", row, ">=", 0.0)
    return m


def extract_plan(solution: MilpSolution, network: Network) -> ExpansionPlan:
    if solution.status != "optimal" or solution.x is None:
        raise TnepError(f"master solution has status {solution.status}")
    cands = network.candidate_lines
    build = []
    for k in range(len(cands)):
        v = float(solution.x[k])
        if abs(v - round(v)) > 1e-6:
            raise TnepError(f"master x{k} = {v} is not integral")
        build.append(round(v) == 1)
    invest = sum(ln.build_cost for ln, b in zip(cands, build) if b)
    budget = network.config.budget
    if invest > budget + 1e-6 * max(1.0, budget):
        raise TnepError(f"plan investment {invest} exceeds budget {budget}")
    gamma = float(solution.x[len(cands)])
    return ExpansionPlan(build=tuple(build), investment_cost=invest, gamma=gamma)


def solve_master(network: Network, scenarios: list[Scenario],
                 params: SolverParams | None = None) -> tuple[ExpansionPlan, float]:
    """Build, solve, and extract; returns (plan, master objective z_lo)."""
    m = build_master(network, scenarios)
    sol = milp.solve_milp(m, params or SolverParams())
    if sol.status != "optimal":
        raise TnepError(f"master MILP ended with status {sol.status}")
    return extract_plan(sol, network), float(sol.objective)
