"""Domain types for adaptive robust transmission expansion planning.

A planning instance is a Network: buses, generators, demands, lines (existing
and candidate), a budgeted-uncertainty description, and economic/config
parameters. Everything is immutable after construction; validation returns a
list of human-readable problems instead of raising on the first one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Literal

LineStatus = Literal["existing", "candidate"]


class TnepError(Exception):
    """Base class for package errors."""


class InvalidNetworkError(TnepError):
    """Raised when a Network fails validation; carries all messages."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid network:\n" + "\n".join(f"- {p}" for p in problems))


@dataclass(frozen=True)
class Bus:
    id: int                 # 0-based, contiguous
    region: str = "all"     # uncertainty-budget region label
    is_slack: bool = False


@dataclass(frozen=True)
class Generator:
    id: int
    bus: int
    cap_nominal: float      # MW
    cap_deviation: float    # MW, worst-case downward swing
    cost: float             # currency/MWh


@dataclass(frozen=True)
class Demand:
    id: int
    bus: int
    load_nominal: float     # MW
    load_deviation: float   # MW, worst-case upward swing
    shed_cost: float        # currency/MWh
    shed_fraction: float = 1.0   # sheddable share e_j in [0, 1]


@dataclass(frozen=True)
class Line:
    id: int
    from_bus: int
    to_bus: int
    susceptance: float      # MW/rad (b_k > 0)
    capacity: float         # MW thermal limit
    build_cost: float = 0.0  # currency, ignored for existing lines
    status: LineStatus = "existing"

    @property
    def is_candidate(self) -> bool:
        return self.status == "candidate"


@dataclass(frozen=True)
class UncertaintyModel:
    """Budgeted box uncertainty: per region, at most gamma_gen generators drop
    to cap_nominal - cap_deviation and at most gamma_dem demands rise to
    load_nominal + load_deviation."""

    gamma_gen: dict[str, int] = field(default_factory=dict)
    gamma_dem: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class PlanningConfig:
    budget: float            # currency cap on total (un-annualized) build cost
    sigma: float = 8760.0    # hours/year weighting of operating cost
    interest_rate: float = 0.10
    horizon_years: int = 25
    epsilon: float = 1e-6    # relative convergence tolerance of the outer loop
    big_m: float | str = "auto"


@dataclass(frozen=True)
class Network:
    buses: tuple[Bus, ...]
    generators: tuple[Generator, ...]
    demands: tuple[Demand, ...]
    lines: tuple[Line, ...]
    uncertainty: UncertaintyModel
    config: PlanningConfig
    name: str = ""
    metadata: tuple[tuple[str, str], ...] = ()  # free-form (key, value) notes, e.g. data provenance

    # -- derived views (cached, do not mutate) --

    @cached_property
    def slack_bus(self) -> int:
        for b in self.buses:
            if b.is_slack:
                return b.id
        raise InvalidNetworkError(["no slack bus"])

    @cached_property
    def candidate_lines(self) -> tuple[Line, ...]:
        return tuple(ln for ln in self.lines if ln.is_candidate)

    @cached_property
    def existing_lines(self) -> tuple[Line, ...]:
        return tuple(ln for ln in self.lines if not ln.is_candidate)

    @cached_property
    def regions(self) -> tuple[str, ...]:
        return tuple(sorted({b.region for b in self.buses}))

    def gen_region(self, g: Generator) -> str:
        return self.buses[g.bus].region

    def dem_region(self, d: Demand) -> str:
        return self.buses[d.bus].region

    @property
    def n_buses(self) -> int:
        return len(self.buses)

    @property
    def n_gens(self) -> int:
        return len(self.generators)

    @property
    def n_dems(self) -> int:
        return len(self.demands)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def crf(self) -> float:
        """Capital recovery factor for this network's economic parameters."""
        return capital_recovery_factor(self.config.interest_rate, self.config.horizon_years)

    def with_budgets(self, gamma_gen: dict[str, int], gamma_dem: dict[str, int]) -> "Network":
        return replace(self, uncertainty=UncertaintyModel(dict(gamma_gen), dict(gamma_dem)))


def capital_recovery_factor(interest_rate: float, horizon_years: int) -> float:
    """Annualization factor R = r(1+r)^n / ((1+r)^n - 1).

    Multiplying a one-off build cost by R gives the equivalent constant annual
    payment over horizon_years at the given interest rate.
    """
    r, n = interest_rate, horizon_years
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"horizon_years must be an integer >= 1, got {n!r}")
    if not (math.isfinite(r) and r > 0):
        raise ValueError(f"interest_rate must be finite and > 0, got {r!r}")
    q = (1.0 + r) ** n
    return r * q / (q - 1.0)


def resolve_big_m(network: Network) -> float:
    """Linearization constant for the worst-case subproblems.

    "auto" resolves to 10 * sigma * max shed cost: dispatch-LP duals are
    bounded by the marginal cost of shedding, sigma-weighted; the factor 10
    is slack. Doubling it must not change any result (tested).
    """
    m = network.config.big_m
    if m == "auto":
        if not network.demands:
            return 10.0 * network.config.sigma
        return 10.0 * network.config.sigma * max(d.shed_cost for d in network.demands)
    return float(m)


def validate(network: Network) -> list[str]:
    """Return all modeling problems found (empty list = valid). Idempotent."""
    p: list[str] = []
    nb = len(network.buses)

    for i, b in enumerate(network.buses):
        if b.id != i:
            p.append(f"bus ids must be 0-based and contiguous; position {i} has id {b.id}")
            break
    slacks = [b.id for b in network.buses if b.is_slack]
    if len(slacks) != 1:
        p.append(f"exactly one slack bus required, found {len(slacks)}")

    seen_g: set[int] = set()
    for g in network.generators:
        if g.id in seen_g:
            p.append(f"duplicate generator id {g.id}")
        seen_g.add(g.id)
        if not (0 <= g.bus < nb):
            p.append(f"generator {g.id} references unknown bus {g.bus}")
        if g.cap_nominal < 0:
            p.append(f"generator {g.id} has negative capacity {g.cap_nominal}")
        if not (0 <= g.cap_deviation <= g.cap_nominal):
            p.append(f"generator {g.id} deviation {g.cap_deviation} outside [0, nominal]")
        if g.cost < 0:
            p.append(f"generator {g.id} has negative cost {g.cost}")

    seen_d: set[int] = set()
    for d in network.demands:
        if d.id in seen_d:
            p.append(f"duplicate demand id {d.id}")
        seen_d.add(d.id)
        if not (0 <= d.bus < nb):
            p.append(f"demand {d.id} references unknown bus {d.bus}")
        if d.load_nominal < 0:
            p.append(f"demand {d.id} has negative load {d.load_nominal}")
        if not (0 <= d.load_deviation <= d.load_nominal):
            p.append(f"demand {d.id} deviation {d.load_deviation} outside [0, nominal]")
        if d.shed_cost < 0:
            p.append(f"demand {d.id} has negative shed cost {d.shed_cost}")
        if not (0.0 <= d.shed_fraction <= 1.0):
            p.append(f"demand {d.id} shed fraction {d.shed_fraction} outside [0, 1]")

    seen_l: set[int] = set()
    for ln in network.lines:
        if ln.id in seen_l:
            p.append(f"duplicate line id {ln.id}")
        seen_l.add(ln.id)
        if not (0 <= ln.from_bus < nb) or not (0 <= ln.to_bus < nb):
            p.append(f"line {ln.id} references unknown bus ({ln.from_bus}, {ln.to_bus})")
        elif ln.from_bus == ln.to_bus:
            p.append(f"line {ln.id} is a self-loop at bus {ln.from_bus}")
        if ln.susceptance <= 0:
            p.append(f"line {ln.id} susceptance must be > 0, got {ln.susceptance}")
        if ln.capacity <= 0:
            p.append(f"line {ln.id} capacity must be > 0, got {ln.capacity}")
        if ln.is_candidate and ln.build_cost < 0:
            p.append(f"candidate line {ln.id} has negative build cost {ln.build_cost}")

    regions = set(b.region for b in network.buses)
    for label, budgets, count in (
        ("gamma_gen", network.uncertainty.gamma_gen,
         lambda r: sum(1 for g in network.generators
                       if 0 <= g.bus < nb and network.buses[g.bus].region == r)),
        ("gamma_dem", network.uncertainty.gamma_dem,
         lambda r: sum(1 for d in network.demands
                       if 0 <= d.bus < nb and network.buses[d.bus].region == r)),
    ):
        for r, k in budgets.items():
            if r not in regions:
                p.append(f"{label} names unknown region {r!r}")
                continue
            if not (isinstance(k, int) and k >= 0):
                p.append(f"{label}[{r!r}] must be an integer >= 0, got {k!r}")
            elif k > count(r):
                p.append(f"{label}[{r!r}] = {k} exceeds the {count(r)} elements in that region")

    c = network.config
    if c.budget < 0:
        p.append(f"budget must be >= 0, got {c.budget}")
    if c.sigma <= 0:
        p.append(f"sigma must be > 0, got {c.sigma}")
    if not (0 < c.epsilon < 1):
        p.append(f"epsilon must be in (0, 1), got {c.epsilon}")
    if not (math.isfinite(c.interest_rate) and c.interest_rate > 0):
        p.append(f"interest_rate must be finite and > 0, got {c.interest_rate}")
    if not (isinstance(c.horizon_years, int) and c.horizon_years >= 1):
        p.append(f"horizon_years must be an integer >= 1, got {c.horizon_years}")
    if c.big_m != "auto":
        try:
            ok = float(c.big_m) > 0
        except (TypeError, ValueError):
            ok = False
        if not ok:
            p.append(f"big_m must be 'auto' or a positive number, got {c.big_m!r}")

    return p


def require_valid(network: Network) -> Network:
    problems = validate(network)
    if problems:
        raise InvalidNetworkError(problems)
    return network
