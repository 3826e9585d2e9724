"""CCG master construction and extraction tests."""

import numpy as np
import pytest

import netgen
from robust_tnep import milp
from robust_tnep.master import (MasterState, build_master, extract_plan,
                                solve_master)
from robust_tnep.model import TnepError
from robust_tnep.operation import Scenario, enumerate_exact, iter_vertices


class TestState:
    def test_duplicate_rejected(self):
        n = netgen.two_bus_expandable()
        st = MasterState()
        st.add(Scenario.nominal(n))
        assert st.has(Scenario.nominal(n))
        with pytest.raises(TnepError, match="duplicate"):
            st.add(Scenario.nominal(n))


class TestMaster:
    def test_empty_scenarios_builds_nothing(self):
        n = netgen.two_bus_expandable()
        plan, z_lo = solve_master(n, [])
        assert plan.build == (False,)
        assert plan.gamma == 0.0 and plan.investment_cost == 0.0
        assert z_lo == 0.0

    def test_single_worst_scenario(self):
        n = netgen.two_bus_expandable()
        plan, z_lo = solve_master(n, [Scenario.from_z(n, [0], [1])])
        assert plan.build == (True,)
        assert plan.investment_cost == pytest.approx(1000.0)
        assert plan.gamma == pytest.approx(960.0)
        assert z_lo == pytest.approx(1960.0, rel=1e-6)

    def test_duplicate_block_changes_nothing(self):
        n = netgen.two_bus_expandable()
        sc = Scenario.from_z(n, [0], [1])
        _, once = solve_master(n, [sc])
        _, twice = solve_master(n, [sc, sc])
        assert twice == pytest.approx(once, rel=1e-9)

    def test_objective_monotone_in_scenarios(self):
        for seed in range(10):
            rng = np.random.default_rng(4000 + seed)
            n = netgen.random_network(rng)
            vs = list(iter_vertices(n))
            rng.shuffle(vs)
            prev = -1.0
            try:
                for upto in range(min(len(vs), 4) + 1):
                    _, z_lo = solve_master(n, vs[:upto])
                    assert z_lo >= prev - 1e-7 * max(1.0, abs(prev)), seed
                    prev = z_lo
            except TnepError:
                continue  # some vertex unservable under every affordable plan

    def test_full_vertex_set_equals_oracle(self):
        hits = 0
        for seed in range(12):
            rng = np.random.default_rng(5000 + seed)
            n = netgen.random_network(rng, max_buses=4)
            if len(n.candidate_lines) > 4:
                continue
            try:
                res = enumerate_exact(n)
            except TnepError:
                continue
            _, z_lo = solve_master(n, list(iter_vertices(n)))
            assert z_lo == pytest.approx(res.objective, rel=1e-6), seed
            hits += 1
        assert hits >= 6


class TestExtract:
    def test_budget_violation_flagged(self):
        n = netgen.two_bus_expandable()
        m = build_master(n, [])
        sol = milp.solve_milp(m)
        sol.x[0] = 1.0  # forge a build the budget row would never allow at budget 0
        small = netgen.replace_config(n, budget=10.0)
        with pytest.raises(TnepError, match="budget"):
            extract_plan(sol, small)

    def test_fractional_x_flagged(self):
        n = netgen.two_bus_expandable()
        m = build_master(n, [])
        sol = milp.solve_milp(m)
        sol.x[0] = 0.37
        with pytest.raises(TnepError, match="integral"):
            extract_plan(sol, n)

    def test_investment_recomputed_from_data(self):
        n = netgen.two_bus_expandable()
        plan, _ = solve_master(n, [Scenario.from_z(n, [0], [1])])
        assert plan.investment_cost == 1000.0  # exact, straight from line data
        assert plan.n_built == 1
