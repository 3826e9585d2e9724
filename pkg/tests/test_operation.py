"""Dispatch LP, deterministic planning, and oracle tests."""

import itertools
import math

import numpy as np
import pytest

import lpref
import netgen
from netgen import replace_config
from robust_tnep.milp import INF
from robust_tnep.operation import (
    OperationInfeasible,
    OracleGuardError,
    Scenario,
    count_vertices,
    enumerate_exact,
    iter_vertices,
    solve_deterministic_tnep,
    solve_operation_lp,
    worst_case_cost,
)


def residuals(network, build, sc, dp):
    """Max violation of balance and flow-definition equations."""
    worst = 0.0
    for b in range(network.n_buses):
        acc = 0.0
        for g, gi in zip(network.generators, dp.g):
            if g.bus == b:
                acc += gi
        for d, rj, load in zip(network.demands, dp.r, sc.dem_loads):
            if d.bus == b:
                acc += rj - load
        for ln, fk in zip(network.lines, dp.f):
            if ln.from_bus == b:
                acc -= fk
            if ln.to_bus == b:
                acc += fk
        worst = max(worst, abs(acc))
    chosen = {ln.id for ln, bb in zip(network.candidate_lines, build) if bb}
    for ln, fk in zip(network.lines, dp.f):
        if ln.is_candidate and ln.id not in chosen:
            worst = max(worst, abs(fk))
            continue
        worst = max(worst, abs(fk - ln.susceptance * (dp.theta[ln.from_bus] - dp.theta[ln.to_bus])))
    return worst


class TestScenario:
    def test_nominal(self):
        n = netgen.two_bus_expandable()
        sc = Scenario.nominal(n)
        assert sc.gen_caps == (100.0,) and sc.dem_loads == (80.0,)
        assert sc.budget_feasible(n)

    def test_from_z_swings(self):
        n = netgen.two_bus_expandable()
        sc = Scenario.from_z(n, [0], [1])
        assert sc.dem_loads == (96.0,)
        assert sc.key() == ((0,), (1,))

    def test_budget_check(self):
        n = netgen.two_bus_expandable()  # gamma_dem = 1, gamma_gen = 0
        assert Scenario.from_z(n, [0], [1]).budget_feasible(n)
        assert not Scenario.from_z(n, [1], [0]).budget_feasible(n)

    def test_vertex_enumeration_counts(self):
        n = netgen.two_bus_expandable()
        vs = list(iter_vertices(n))
        assert count_vertices(n) == len(vs) == 2
        assert {v.key() for v in vs} == {((0,), (0,)), ((0,), (1,))}


class TestDispatch:
    def test_toy_served(self):
        n = netgen.two_bus()
        dp = solve_operation_lp(n, None, Scenario.nominal(n))
        assert dp.cost == pytest.approx(800.0)
        assert dp.f[0] == pytest.approx(80.0)
        assert dp.r[0] == pytest.approx(0.0)

    def test_toy_capacity_binds(self):
        n = netgen.two_bus(line_cap=50)
        dp = solve_operation_lp(n, None, Scenario.nominal(n))
        assert dp.cost == pytest.approx(3500.0)
        assert dp.f[0] == pytest.approx(50.0)
        assert dp.r[0] == pytest.approx(30.0)

    def test_zero_demand(self):
        n = netgen.two_bus(load=0.0)
        dp = solve_operation_lp(n, None, Scenario.nominal(n))
        assert dp.cost == pytest.approx(0.0)
        assert all(abs(v) < 1e-9 for v in dp.g + dp.r + dp.f)

    def test_unbuilt_candidate_carries_nothing(self):
        n = netgen.two_bus_expandable()
        dp = solve_operation_lp(n, [False], Scenario.nominal(n))
        assert dp.f[1] == 0.0
        assert dp.cost == pytest.approx(50 * 10 + 30 * 100)

    def test_built_candidate_doubles_capacity(self):
        n = netgen.two_bus_expandable()
        dp = solve_operation_lp(n, [True], Scenario.from_z(n, [0], [1]))
        assert dp.cost == pytest.approx(960.0)  # 96 MW served at cost 10

    def test_shed_fraction_infeasible(self):
        n = netgen.two_bus(line_cap=30.0)
        d0 = n.demands[0]
        n = netgen.with_demand(n, 0, shed_fraction=0.5)
        assert n.demands[0].shed_fraction == 0.5 and d0.shed_fraction == 1.0
        with pytest.raises(OperationInfeasible):
            solve_operation_lp(n, None, Scenario.nominal(n))

    def test_matches_reference_lp(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            n = netgen.random_network(rng)
            build = netgen.random_plan(rng, n)
            zg, zd = netgen.random_z(rng, n)
            sc = Scenario.from_z(n, zg, zd)
            try:
                dp = solve_operation_lp(n, build, sc)
            except OperationInfeasible:
                continue
            assert residuals(n, build, sc, dp) < 1e-6, seed
            status, obj = lpref.solve_dispatch_reference(n, build, sc)
            assert status == "optimal"
            assert dp.cost == pytest.approx(obj, rel=1e-7, abs=1e-7), seed


class TestDeterministic:
    def test_toy_builds_when_worth_it(self):
        n = netgen.two_bus_expandable()
        build, cost = solve_deterministic_tnep(n)
        assert build == (True,)
        assert cost == pytest.approx(1000 + 800, rel=1e-6)

    def test_budget_zero_blocks_build(self):
        n = netgen.two_bus_expandable()
        n = replace_config(n, budget=0.0)
        build, cost = solve_deterministic_tnep(n)
        assert build == (False,)
        assert cost == pytest.approx(3500.0, rel=1e-9)

    def test_matches_plan_enumeration(self):
        r = n_skipped = 0
        for seed in range(25):
            rng = np.random.default_rng(1000 + seed)
            n = netgen.random_network(rng)
            cands = n.candidate_lines
            crf = n.crf()
            best = INF
            for bits in itertools.product((False, True), repeat=len(cands)):
                raw = sum(ln.build_cost for ln, b in zip(cands, bits) if b)
                if raw > n.config.budget:
                    continue
                try:
                    dp = solve_operation_lp(n, bits, Scenario.nominal(n))
                except OperationInfeasible:
                    continue
                best = min(best, crf * raw + dp.cost)
            if best == INF:
                n_skipped += 1
                continue
            _, cost = solve_deterministic_tnep(n)
            assert cost == pytest.approx(best, rel=1e-6), seed
            r += 1
        assert r >= 20 and n_skipped <= 5


class TestOracle:
    def test_robust_toy(self):
        n = netgen.two_bus_expandable()
        res = enumerate_exact(n)
        assert res.build == (True,)
        assert res.objective == pytest.approx(1960.0, rel=1e-6)
        assert res.worst_scenario.dem_loads == (96.0,)
        assert res.plans_examined == 2 and res.vertices_examined == 2

    def test_no_build_when_shed_cheap(self):
        n = netgen.two_bus_expandable()
        n = netgen.with_demand(n, 0, shed_cost=5.0)  # cheaper than generating
        res = enumerate_exact(n)
        assert res.build == (False,)
        # shedding undercuts generation, so the whole 96 MW vertex is shed
        assert res.objective == pytest.approx(96 * 5, rel=1e-6)

    def test_gamma_zero_equals_deterministic(self):
        for seed in range(8):
            rng = np.random.default_rng(2000 + seed)
            n = netgen.random_network(rng)
            n = n.with_budgets({r: 0 for r in n.regions}, {r: 0 for r in n.regions})
            try:
                _, det = solve_deterministic_tnep(n)
            except Exception:
                continue
            res = enumerate_exact(n)
            assert res.objective == pytest.approx(det, rel=1e-6), seed

    def test_worst_case_monotone_in_gamma(self):
        grown = 0
        for seed in range(12):
            rng = np.random.default_rng(3000 + seed)
            n = netgen.random_network(rng)
            build = netgen.random_plan(rng, n)
            small = n.with_budgets({r: 0 for r in n.regions}, {r: 0 for r in n.regions})
            big = n.with_budgets({r: n.n_gens for r in n.regions},
                                 {r: n.n_dems for r in n.regions})
            lo, _ = worst_case_cost(small, build)
            mid, _ = worst_case_cost(n, build)
            hi, _ = worst_case_cost(big, build)
            assert lo <= mid * (1 + 1e-9) + 1e-9
            assert mid <= hi * (1 + 1e-9) + 1e-9
            if hi > lo + 1e-6:
                grown += 1
        assert grown >= 6  # uncertainty actually bites in most draws

    def test_guard_candidates(self):
        n = netgen.two_bus_expandable()
        lines = list(n.lines)
        for k in range(13):
            lines.append(netgen.clone_candidate(lines[1], id=len(lines)))
        n = netgen.with_lines(n, lines)
        with pytest.raises(OracleGuardError, match="candidate"):
            enumerate_exact(n)

    def test_guard_vertices(self):
        rng = np.random.default_rng(7)
        n = netgen.random_network(rng, max_buses=4)
        gens = [netgen.clone_generator(n.generators[0], id=i, bus=0) for i in range(13)]
        n = netgen.with_generators(n, gens)
        n = n.with_budgets({r: 13 for r in n.regions}, {r: 0 for r in n.regions})
        assert count_vertices(n) > 4096
        with pytest.raises(OracleGuardError, match="vertices"):
            enumerate_exact(n)
