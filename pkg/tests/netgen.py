"""Hand-built toys and seeded random instances shared across the test suite."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from robust_tnep.model import (Bus, Demand, Generator, Line, Network,
                               PlanningConfig, UncertaintyModel)
from robust_tnep.milp import MilpModel

INF = math.inf


def two_bus(line_cap: float = 100.0, load: float = 80.0, gen_cost: float = 10.0,
            shed_cost: float = 100.0, sigma: float = 1.0,
            susceptance: float = 100.0) -> Network:
    """One generator feeds one load across a single existing line.

    With cap 100 every MW flows (cost 800 at defaults); with cap 50 the line
    limits service to 50 MW and 30 MW is shed (cost 3500).
    """
    return Network(
        buses=(Bus(0, is_slack=True), Bus(1)),
        generators=(Generator(0, bus=0, cap_nominal=100.0, cap_deviation=0.0, cost=gen_cost),),
        demands=(Demand(0, bus=1, load_nominal=load, load_deviation=0.0, shed_cost=shed_cost),),
        lines=(Line(0, 0, 1, susceptance=susceptance, capacity=line_cap),),
        uncertainty=UncertaintyModel({"all": 0}, {"all": 0}),
        config=PlanningConfig(budget=0.0, sigma=sigma, interest_rate=0.10,
                              horizon_years=10),
        name="two-bus",
    )


def two_bus_expandable() -> Network:
    """Expansion toy with one candidate circuit and one uncertain demand.

    Existing line cap 50, candidate twin costs 1000, demand 80 +- 16 with one
    deviation allowed. Hand-solved worst cases: no build 5100 (serve 50, shed
    46 at the d=96 vertex), build 1960 (gen 96 plus annualized 1000). The
    interest rate 1e-9 over one year makes the annualization factor 1 + 1e-9,
    so the hand numbers hold to ~1e-9 relative.
    """
    return Network(
        buses=(Bus(0, is_slack=True), Bus(1)),
        generators=(Generator(0, bus=0, cap_nominal=100.0, cap_deviation=0.0, cost=10.0),),
        demands=(Demand(0, bus=1, load_nominal=80.0, load_deviation=16.0, shed_cost=100.0),),
        lines=(Line(0, 0, 1, susceptance=100.0, capacity=50.0),
               Line(1, 0, 1, susceptance=100.0, capacity=50.0, build_cost=1000.0,
                    status="candidate")),
        uncertainty=UncertaintyModel({"all": 0}, {"all": 1}),
        config=PlanningConfig(budget=1000.0, sigma=1.0, interest_rate=1e-9,
                              horizon_years=1),
        name="two-bus-expandable",
    )


def random_network(rng: np.random.Generator, max_buses: int = 5,
                   allow_shed_fraction: bool = False) -> Network:
    """Small random instance inside the brute-force oracle's guard rails."""
    n_b = int(rng.integers(2, max_buses + 1))
    buses = tuple(Bus(i, is_slack=(i == 0)) for i in range(n_b))

    lines: list[Line] = []
    for i in range(1, n_b):
        parent = int(rng.integers(0, i))
        lines.append(Line(len(lines), parent, i,
                          susceptance=float(rng.uniform(50, 300)),
                          capacity=float(rng.uniform(40, 150))))
    if n_b > 2 and rng.random() < 0.4:
        a, c = rng.choice(n_b, size=2, replace=False)
        lines.append(Line(len(lines), int(a), int(c),
                          susceptance=float(rng.uniform(50, 300)),
                          capacity=float(rng.uniform(40, 150))))

    n_g = int(rng.integers(1, 4))
    gens = []
    for g in range(n_g):
        cap = float(rng.uniform(30, 200))
        gens.append(Generator(g, bus=int(rng.integers(0, n_b)), cap_nominal=cap,
                              cap_deviation=float(cap * rng.uniform(0, 0.6)),
                              cost=float(rng.uniform(1, 50))))
    n_d = int(rng.integers(1, 4))
    dems = []
    for d in range(n_d):
        load = float(rng.uniform(10, 100))
        frac = 1.0
        if allow_shed_fraction and rng.random() < 0.3:
            frac = float(rng.uniform(0.5, 1.0))
        dems.append(Demand(d, bus=int(rng.integers(0, n_b)), load_nominal=load,
                           load_deviation=float(load * rng.uniform(0, 0.5)),
                           shed_cost=float(rng.uniform(60, 200)),
                           shed_fraction=frac))

    n_c = int(rng.integers(0, 5))
    for _ in range(n_c):
        a, c = rng.choice(n_b, size=2, replace=False) if n_b > 1 else (0, 1)
        lines.append(Line(len(lines), int(a), int(c),
                          susceptance=float(rng.uniform(50, 300)),
                          capacity=float(rng.uniform(40, 150)),
                          build_cost=float(rng.uniform(100, 5000)),
                          status="candidate"))

    total_build = sum(ln.build_cost for ln in lines if ln.is_candidate)
    budget = float(rng.choice([0.0, total_build * float(rng.uniform(0.3, 1.1)),
                               total_build + 1.0]))
    return Network(
        buses=buses,
        generators=tuple(gens),
        demands=tuple(dems),
        lines=tuple(lines),
        uncertainty=UncertaintyModel({"all": int(rng.integers(0, n_g + 1))},
                                     {"all": int(rng.integers(0, n_d + 1))}),
        config=PlanningConfig(budget=budget, sigma=1.0, interest_rate=0.1,
                              horizon_years=10),
        name=f"random-{rng.integers(1 << 30)}",
    )


def replace_config(net: Network, **kw) -> Network:
    return replace(net, config=replace(net.config, **kw))


def with_demand(net: Network, idx: int, **kw) -> Network:
    dems = list(net.demands)
    dems[idx] = replace(dems[idx], **kw)
    return replace(net, demands=tuple(dems))


def with_lines(net: Network, lines) -> Network:
    return replace(net, lines=tuple(lines))


def with_generators(net: Network, gens) -> Network:
    return replace(net, generators=tuple(gens))


def clone_candidate(line: Line, **kw) -> Line:
    return replace(line, status="candidate", **kw)


def clone_generator(gen: Generator, **kw) -> Generator:
    return replace(gen, **kw)


def random_plan(rng: np.random.Generator, net: Network) -> tuple[bool, ...]:
    """Random budget-feasible build decision over the candidate lines."""
    cands = net.candidate_lines
    order = list(rng.permutation(len(cands)))
    left = net.config.budget
    chosen = [False] * len(cands)
    for k in order:
        if rng.random() < 0.5 and cands[k].build_cost <= left:
            chosen[k] = True
            left -= cands[k].build_cost
    return tuple(chosen)


def random_z(rng: np.random.Generator, net: Network) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Random uncertainty picks respecting the per-region budgets."""
    zg = [0] * net.n_gens
    zd = [0] * net.n_dems
    for region in net.regions:
        gs = [i for i, g in enumerate(net.generators) if net.gen_region(g) == region]
        k = min(net.uncertainty.gamma_gen.get(region, 0), len(gs))
        if k:
            take = int(rng.integers(0, k + 1))
            for i in rng.choice(gs, size=take, replace=False):
                zg[int(i)] = 1
        ds = [j for j, d in enumerate(net.demands) if net.dem_region(d) == region]
        k = min(net.uncertainty.gamma_dem.get(region, 0), len(ds))
        if k:
            take = int(rng.integers(0, k + 1))
            for j in rng.choice(ds, size=take, replace=False):
                zd[int(j)] = 1
    return tuple(zg), tuple(zd)


def random_lp(rng: np.random.Generator, max_vars: int = 8, max_rows: int = 6) -> MilpModel:
    """Feasible bounded LP built around a known interior point."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(0, max_rows + 1))
    model = MilpModel(name="random-lp")
    x0 = []
    for j in range(n):
        lb = float(rng.uniform(-10, 5))
        ub = lb + float(rng.uniform(0.5, 12))
        model.add_var(f"x{j}", lb, ub, obj=float(np.round(rng.uniform(-9, 9), 3)))
        x0.append(lb + (ub - lb) * float(rng.uniform(0.2, 0.8)))
    for i in range(m):
        coeffs = {}
        for j in range(n):
            if rng.random() < 0.7:
                coeffs[j] = float(np.round(rng.uniform(-5, 5), 3))
        if not coeffs:
            coeffs[int(rng.integers(0, n))] = 1.0
        acts = sum(a * x0[j] for j, a in coeffs.items())
        sense = rng.choice(["<=", ">=", "="])
        if sense == "<=":
            model.add_constraint(f"c{i}", coeffs, "<=", acts + float(rng.uniform(0, 4)))
        elif sense == ">=":
            model.add_constraint(f"c{i}", coeffs, ">=", acts - float(rng.uniform(0, 4)))
        else:
            model.add_constraint(f"c{i}", coeffs, "=", acts)
    if rng.random() < 0.3:
        model.sense = "max"
    return model


def random_milp(rng: np.random.Generator, max_bin: int = 6) -> MilpModel:
    """Feasible mixed-binary model with bounded continuous part."""
    model = random_lp(rng, max_vars=5, max_rows=4)
    nb = int(rng.integers(1, max_bin + 1))
    zs = [model.add_var(f"z{k}", binary=True,
                        obj=float(np.round(rng.uniform(-9, 9), 3))) for k in range(nb)]
    # couple binaries to the continuous part; all-zero z stays feasible
    for i in range(int(rng.integers(1, 4))):
        coeffs = {}
        for j in range(model.n_vars):
            if rng.random() < 0.4:
                coeffs[j] = float(np.round(rng.uniform(-4, 4), 3))
        lo_val = sum(min(a * model.variables[j].lb, a * model.variables[j].ub)
                     for j, a in coeffs.items() if not model.variables[j].binary)
        lo_val += sum(min(a, 0.0) for j, a in coeffs.items() if model.variables[j].binary)
        model.add_constraint(f"mix{i}", coeffs, "<=",
                             lo_val + float(rng.uniform(1.0, 20.0)))
    k = int(rng.integers(0, nb + 1))
    model.add_constraint("card", {z: 1.0 for z in zs}, "<=", float(k))
    return model
