"""Case-file parsing and the bundled test systems.

The on-disk format is a small versioned JSON document (``"schema": 1``):

.. code-block:: json

    {
      "schema": 1,
      "name": "example",
      "base_mva": 100,
      "buses":      [{"id": 1, "slack": true, "region": "all"}, {"id": 2}],
      "generators": [{"bus": 1, "cap_nominal": 100, "cost": 10}],
      "demands":    [{"bus": 2, "load_nominal": 80, "shed_cost": 1000}],
      "lines":      [{"from": 1, "to": 2, "reactance": 0.4, "capacity": 100},
                     {"from": 1, "to": 2, "reactance": 0.4, "capacity": 100,
                      "status": "candidate", "build_cost": 40000, "count": 3}],
      "uncertainty": {"gen_dev_fraction": 0.5, "dem_dev_fraction": 0.2,
                      "gamma_gen": {"all": 1}, "gamma_dem": {"all": 1}},
      "config": {"budget": 1e6}
    }

Conventions:

* Bus ids in files are arbitrary unique integers (1-based in the bundled
  cases); they are mapped to 0-based contiguous internal ids in file order.
* Each line carries either ``susceptance`` (MW/rad) directly or ``reactance``
  (p.u. on ``base_mva``), in which case b = base_mva / x.
* A line entry with ``count: n`` expands into n identical Line records, so a
  corridor admitting three circuits is one entry, not three.
* Deviations are given either per element (``cap_deviation`` /
  ``load_deviation``, MW) or globally as fractions of nominal
  (``uncertainty.gen_dev_fraction`` / ``dem_dev_fraction``); exactly one of
  the two forms must apply to every element.
* ``config`` keys mirror PlanningConfig; only ``budget`` is required.

parse_system accepts a path or raw bytes and returns a validated Network.
serialize_system inverts it (canonical form: absolute deviations, explicit
susceptances, no count compression).
"""

from __future__ import annotations

import json
import os
from typing import Any

from .model import (
    Bus,
    Demand,
    Generator,
    Line,
    Network,
    PlanningConfig,
    TnepError,
    UncertaintyModel,
    require_valid,
)

SCHEMA_VERSION = 1
BUILTIN_CASES = ("garver6", "ieee24", "ieee118")

_CONFIG_KEYS = ("budget", "sigma", "interest_rate", "horizon_years", "epsilon", "big_m")


class CaseError(TnepError):
    """Malformed case file; the message names the offending field."""


def _fail(where: str, msg: str) -> None:
    raise CaseError(f"{where}: {msg}")


def _get(obj: dict, key: str, where: str, kind=None, required: bool = True, default=None):
    if key not in obj:
        if required:
            _fail(where, f"missing required key '{key}'")
        return default
    val = obj[key]
    if kind is not None:
        # bool is an int subclass; keep the two apart
        if kind is float:
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                _fail(f"{where}.{key}", f"expected a number, got {type(val).__name__}")
            return float(val)
        if kind is int:
            if isinstance(val, bool) or not isinstance(val, int):
                _fail(f"{where}.{key}", f"expected an integer, got {type(val).__name__}")
            return val
        if not isinstance(val, kind):
            _fail(f"{where}.{key}", f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def parse_system(source: str | os.PathLike | bytes | bytearray) -> Network:
    """Parse a case file (path, or raw JSON bytes) into a validated Network."""
    if isinstance(source, (bytes, bytearray)):
        text = bytes(source).decode("utf-8")
        label = "<bytes>"
    else:
        label = os.fspath(source)
        with open(label, "rb") as fh:
            text = fh.read().decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseError(
            f"{label}: syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_dict(doc)


def parse_dict(doc: Any) -> Network:
    """Parse an already-decoded case document."""
    if not isinstance(doc, dict):
        _fail("document", f"expected a JSON object, got {type(doc).__name__}")
    version = _get(doc, "schema", "document", int)
    if version != SCHEMA_VERSION:
        _fail("document.schema", f"unsupported schema version {version} (supported: {SCHEMA_VERSION})")
    name = _get(doc, "name", "document", str, required=False, default="")
    base_mva = _get(doc, "base_mva", "document", float, required=False, default=100.0)
    if base_mva <= 0:
        _fail("document.base_mva", f"must be > 0, got {base_mva}")

    raw_buses = _get(doc, "buses", "document", list)
    if not raw_buses:
        _fail("document.buses", "must be a non-empty array")
    buses: list[Bus] = []
    ext_to_int: dict[int, int] = {}
    for i, rb in enumerate(raw_buses):
        where = f"buses[{i}]"
        if not isinstance(rb, dict):
            _fail(where, "expected an object")
        ext = _get(rb, "id", where, int)
        if ext in ext_to_int:
            _fail(where, f"duplicate bus id {ext}")
        ext_to_int[ext] = i
        region = _get(rb, "region", where, str, required=False, default="all")
        slack = _get(rb, "slack", where, bool, required=False, default=False)
        buses.append(Bus(id=i, region=region, is_slack=slack))

    def bus_ref(obj: dict, key: str, where: str) -> int:
        ext = _get(obj, key, where, int)
        if ext not in ext_to_int:
            _fail(f"{where}.{key}", f"references unknown bus {ext}")
        return ext_to_int[ext]

    unc = _get(doc, "uncertainty", "document", dict, required=False, default={})
    gen_frac = _get(unc, "gen_dev_fraction", "uncertainty", float, required=False)
    dem_frac = _get(unc, "dem_dev_fraction", "uncertainty", float, required=False)
    for label_, frac in (("gen_dev_fraction", gen_frac), ("dem_dev_fraction", dem_frac)):
        if frac is not None and not (0.0 <= frac <= 1.0):
            _fail(f"uncertainty.{label_}", f"must be in [0, 1], got {frac}")

    def gamma_map(key: str) -> dict[str, int]:
        raw = _get(unc, key, "uncertainty", dict, required=False, default={})
        out = {}
        for region, g in raw.items():
            if isinstance(g, bool) or not isinstance(g, int):
                _fail(f"uncertainty.{key}[{region!r}]", "budget must be an integer")
            out[str(region)] = g
        return out

    uncertainty = UncertaintyModel(gamma_gen=gamma_map("gamma_gen"), gamma_dem=gamma_map("gamma_dem"))

    def deviation(obj: dict, field: str, frac, frac_name: str, nominal: float, where: str) -> float:
        has_field = field in obj
        if has_field and frac is not None:
            _fail(where, f"'{field}' conflicts with uncertainty.{frac_name}; give one or the other")
        if has_field:
            return _get(obj, field, where, float)
        if frac is None:
            _fail(where, f"no '{field}' and no global uncertainty.{frac_name}")
        return frac * nominal

    generators: list[Generator] = []
    for i, rg in enumerate(_get(doc, "generators", "document", list)):
        where = f"generators[{i}]"
        if not isinstance(rg, dict):
            _fail(where, "expected an object")
        cap = _get(rg, "cap_nominal", where, float)
        generators.append(Generator(
            id=i,
            bus=bus_ref(rg, "bus", where),
            cap_nominal=cap,
            cap_deviation=deviation(rg, "cap_deviation", gen_frac, "gen_dev_fraction", cap, where),
            cost=_get(rg, "cost", where, float),
        ))

    demands: list[Demand] = []
    for i, rd in enumerate(_get(doc, "demands", "document", list)):
        where = f"demands[{i}]"
        if not isinstance(rd, dict):
            _fail(where, "expected an object")
        load = _get(rd, "load_nominal", where, float)
        demands.append(Demand(
            id=i,
            bus=bus_ref(rd, "bus", where),
            load_nominal=load,
            load_deviation=deviation(rd, "load_deviation", dem_frac, "dem_dev_fraction", load, where),
            shed_cost=_get(rd, "shed_cost", where, float),
            shed_fraction=_get(rd, "shed_fraction", where, float, required=False, default=1.0),
        ))

    lines: list[Line] = []
    for i, rl in enumerate(_get(doc, "lines", "document", list)):
        where = f"lines[{i}]"
        if not isinstance(rl, dict):
            _fail(where, "expected an object")
        has_b = "susceptance" in rl
        has_x = "reactance" in rl
        if has_b == has_x:
            _fail(where, "give exactly one of 'susceptance' or 'reactance'")
        if has_b:
            b = _get(rl, "susceptance", where, float)
        else:
            x = _get(rl, "reactance", where, float)
            if x <= 0:
                _fail(f"{where}.reactance", f"must be > 0, got {x}")
            b = base_mva / x
        status = _get(rl, "status", where, str, required=False, default="existing")
        if status not in ("existing", "candidate"):
            _fail(f"{where}.status", f"must be 'existing' or 'candidate', got {status!r}")
        count = _get(rl, "count", where, int, required=False, default=1)
        if count < 1:
            _fail(f"{where}.count", f"must be >= 1, got {count}")
        frm = bus_ref(rl, "from", where)
        to = bus_ref(rl, "to", where)
        cost = _get(rl, "build_cost", where, float,
                    required=(status == "candidate"), default=0.0)
        cap = _get(rl, "capacity", where, float)
        for _ in range(count):
            lines.append(Line(
                id=len(lines), from_bus=frm, to_bus=to, susceptance=b,
                capacity=cap, build_cost=cost, status=status,
            ))

    raw_cfg = _get(doc, "config", "document", dict)
    for key in raw_cfg:
        if key not in _CONFIG_KEYS:
            _fail(f"config.{key}", f"unknown key (known: {', '.join(_CONFIG_KEYS)})")
    cfg_kwargs: dict[str, Any] = {"budget": _get(raw_cfg, "budget", "config", float)}
    if "sigma" in raw_cfg:
        cfg_kwargs["sigma"] = _get(raw_cfg, "sigma", "config", float)
    if "interest_rate" in raw_cfg:
        cfg_kwargs["interest_rate"] = _get(raw_cfg, "interest_rate", "config", float)
    if "horizon_years" in raw_cfg:
        cfg_kwargs["horizon_years"] = _get(raw_cfg, "horizon_years", "config", int)
    if "epsilon" in raw_cfg:
        cfg_kwargs["epsilon"] = _get(raw_cfg, "epsilon", "config", float)
    if "big_m" in raw_cfg:
        m = raw_cfg["big_m"]
        if m != "auto" and (isinstance(m, bool) or not isinstance(m, (int, float))):
            _fail("config.big_m", f"expected a number or 'auto', got {m!r}")
        cfg_kwargs["big_m"] = m if m == "auto" else float(m)
    config = PlanningConfig(**cfg_kwargs)

    raw_meta = _get(doc, "metadata", "document", dict, required=False, default={})
    metadata = tuple(sorted((str(k), str(v)) for k, v in raw_meta.items()))

    network = Network(
        buses=tuple(buses),
        generators=tuple(generators),
        demands=tuple(demands),
        lines=tuple(lines),
        uncertainty=uncertainty,
        config=config,
        name=name,
        metadata=metadata,
    )
    require_valid(network)
    return network


def serialize_system(network: Network) -> dict:
    """Canonical JSON-ready form; parse_dict(serialize_system(n)) == n."""
    doc: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "name": network.name,
        "buses": [],
        "generators": [],
        "demands": [],
        "lines": [],
        "uncertainty": {
            "gamma_gen": dict(network.uncertainty.gamma_gen),
            "gamma_dem": dict(network.uncertainty.gamma_dem),
        },
        "config": {
            "budget": network.config.budget,
            "sigma": network.config.sigma,
            "interest_rate": network.config.interest_rate,
            "horizon_years": network.config.horizon_years,
            "epsilon": network.config.epsilon,
            "big_m": network.config.big_m,
        },
    }
    if network.metadata:
        doc["metadata"] = {k: v for k, v in network.metadata}
    for b in network.buses:
        rb: dict[str, Any] = {"id": b.id + 1}
        if b.region != "all":
            rb["region"] = b.region
        if b.is_slack:
            rb["slack"] = True
        doc["buses"].append(rb)
    for g in network.generators:
        doc["generators"].append({
            "bus": g.bus + 1, "cap_nominal": g.cap_nominal,
            "cap_deviation": g.cap_deviation, "cost": g.cost,
        })
    for d in network.demands:
        rd = {
            "bus": d.bus + 1, "load_nominal": d.load_nominal,
            "load_deviation": d.load_deviation, "shed_cost": d.shed_cost,
        }
        if d.shed_fraction != 1.0:
            rd["shed_fraction"] = d.shed_fraction
        doc["demands"].append(rd)
    for ln in network.lines:
        rl: dict[str, Any] = {
            "from": ln.from_bus + 1, "to": ln.to_bus + 1,
            "susceptance": ln.susceptance, "capacity": ln.capacity,
        }
        if ln.is_candidate:
            rl["status"] = "candidate"
            rl["build_cost"] = ln.build_cost
        doc["lines"].append(rl)
    return doc


def write_case(network: Network, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_system(network), fh, indent=1)
        fh.write("\n")


def builtin_case(name: str) -> Network:
    """Load one of the bundled systems: garver6, ieee24, ieee118."""
    if name not in BUILTIN_CASES:
        raise CaseError(f"unknown built-in case {name!r} (known: {', '.join(BUILTIN_CASES)})")
    from importlib.resources import files

    data = files("robust_tnep").joinpath("cases", f"{name}.json").read_bytes()
    return parse_system(data)
