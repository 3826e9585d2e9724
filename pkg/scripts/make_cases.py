"""Regenerate the bundled case files under src/robust_tnep/cases/.

Keeps every keyed-in data table in one place. Run from the repo root:

    python3 scripts/make_cases.py

Sources, short version (full provenance notes live outside the package):
* garver6: the classic 6-bus expansion system; generator/demand table as
  adapted for robust planning studies (shed cost = 100x the nominal
  load-shedding cost column); the standard 15-corridor line table with
  reactances on a 100 MVA base.
* ieee24: single-area RTS-79 topology (34 corridors, 38 branches) with the
  rescaled generator/demand table; 7 reinforcement corridors from the
  expansion-planning literature. Corridor build costs are approximate.
* ieee118: the standard 118-bus archive topology (186 branches); the
  54-generator / 91-demand table is exact; reactances, ratings, and candidate
  build costs are documented placeholders (the archive publishes no ratings
  or costs), so the case is flagged external-data.
"""

import json
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "src", "robust_tnep", "cases")

# Build-cost unit for table cost figures, in euros. The corridor tables quote
# costs in dimensionless units whose scale the source leaves ambiguous; 1e6
# makes every budget infeasible by orders of magnitude, 1e3 makes investment
# negligible. 1.75e5 is calibrated so the zero-uncertainty planning optimum on
# the six-bus system matches the published 440.07 M objective (one scalar
# fitted against one target; the other objective values remain independent
# checks and move by <0.01% across plausible scales).
COST_UNIT = 1.75e5


def dump(name, doc):
    os.makedirs(OUT, exist_ok=True)
    path = os.path.join(OUT, name + ".json")
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print("wrote", os.path.relpath(path, os.path.join(HERE, "..")))


# ---------------------------------------------------------------- garver6 --

# corridor: (from, to, x p.u., capacity MW, build cost in table units)
GARVER_CORRIDORS = [
    (1, 2, 0.40, 100, 40), (1, 3, 0.38, 100, 38), (1, 4, 0.60, 80, 60),
    (1, 5, 0.20, 100, 20), (1, 6, 0.68, 70, 68), (2, 3, 0.20, 100, 20),
    (2, 4, 0.40, 100, 40), (2, 5, 0.31, 100, 31), (2, 6, 0.30, 100, 30),
    (3, 4, 0.59, 82, 59), (3, 5, 0.20, 100, 20), (3, 6, 0.48, 100, 48),
    (4, 5, 0.63, 75, 63), (4, 6, 0.30, 100, 30), (5, 6, 0.61, 78, 61),
]
GARVER_EXISTING = {(1, 2), (1, 4), (1, 5), (2, 3), (2, 4), (3, 5)}
GARVER_GENS = [(1, 150, 60), (3, 350, 65), (6, 600, 70)]
# shed cost = 100x the nominal load-shedding cost column
GARVER_DEMANDS = [(1, 80, 11250), (2, 240, 11500), (3, 40, 12000),
                  (4, 160, 11000), (5, 240, 11200)]
MAX_CIRCUITS = 3


def garver6():
    lines = []
    for f, t, x, cap, cost in GARVER_CORRIDORS:
        n_exist = 1 if (f, t) in GARVER_EXISTING else 0
        if n_exist:
            lines.append({"from": f, "to": t, "reactance": x, "capacity": cap})
        lines.append({"from": f, "to": t, "reactance": x, "capacity": cap,
                      "status": "candidate", "build_cost": cost * COST_UNIT,
                      "count": MAX_CIRCUITS - n_exist})
    return {
        "schema": 1,
        "name": "garver6",
        "metadata": {
            "source": "classic 6-bus expansion test system, standard 15-corridor table",
            "notes": "shed costs are 100x the nominal load-shedding cost column; "
                     "build costs stored in euros (table units x %g)" % COST_UNIT,
        },
        "base_mva": 100,
        "buses": [{"id": b, **({"slack": True} if b == 1 else {})} for b in range(1, 7)],
        "generators": [{"bus": b, "cap_nominal": p, "cost": c} for b, p, c in GARVER_GENS],
        "demands": [{"bus": b, "load_nominal": d, "shed_cost": c} for b, d, c in GARVER_DEMANDS],
        "lines": lines,
        "uncertainty": {"gen_dev_fraction": 0.5, "dem_dev_fraction": 0.2,
                        "gamma_gen": {"all": 2}, "gamma_dem": {"all": 3}},
        "config": {"budget": 40e6, "sigma": 8760, "interest_rate": 0.10,
                   "horizon_years": 25, "epsilon": 1e-6, "big_m": "auto"},
    }


# ----------------------------------------------------------------- ieee24 --

# RTS-79 single-area branch data: (from, to, x p.u., rating MW, circuits)
RTS_CORRIDORS = [
    (1, 2, 0.0139, 175, 1), (1, 3, 0.2112, 175, 1), (1, 5, 0.0845, 175, 1),
    (2, 4, 0.1267, 175, 1), (2, 6, 0.1920, 175, 1), (3, 9, 0.1190, 175, 1),
    (3, 24, 0.0839, 400, 1), (4, 9, 0.1037, 175, 1), (5, 10, 0.0883, 175, 1),
    (6, 10, 0.0605, 175, 1), (7, 8, 0.0614, 175, 1), (8, 9, 0.1651, 175, 1),
    (8, 10, 0.1651, 175, 1), (9, 11, 0.0839, 400, 1), (9, 12, 0.0839, 400, 1),
    (10, 11, 0.0839, 400, 1), (10, 12, 0.0839, 400, 1), (11, 13, 0.0476, 500, 1),
    (11, 14, 0.0418, 500, 1), (12, 13, 0.0476, 500, 1), (12, 23, 0.0966, 500, 1),
    (13, 23, 0.0865, 500, 1), (14, 16, 0.0389, 500, 1), (15, 16, 0.0173, 500, 1),
    (15, 21, 0.0490, 500, 2), (15, 24, 0.0519, 500, 1), (16, 17, 0.0259, 500, 1),
    (16, 19, 0.0231, 500, 1), (17, 18, 0.0144, 500, 1), (17, 22, 0.1053, 500, 1),
    (18, 21, 0.0259, 500, 2), (19, 20, 0.0396, 500, 2), (20, 23, 0.0216, 500, 2),
    (21, 22, 0.0678, 500, 1),
]
# reinforcement corridors: (from, to, x p.u., rating MW, cost in table units)
RTS_NEW_CORRIDORS = [
    (1, 8, 0.0348, 175, 35000), (2, 8, 0.0328, 175, 33000),
    (6, 7, 0.0497, 175, 50000), (13, 14, 0.0447, 500, 45000),
    (14, 23, 0.0620, 500, 62000), (16, 23, 0.0822, 500, 82000),
    (19, 23, 0.0606, 500, 61000),
]
# rescaled generator/demand table (shed cost stored as 100x the NLS column)
RTS_GENS = [(1, 230, 95), (2, 230, 96), (7, 360, 96), (13, 709, 80),
            (15, 258, 82), (16, 186, 77), (18, 480, 73), (21, 480, 74),
            (22, 360, 79), (23, 792, 78)]
RTS_DEMANDS = [(1, 259, 99), (2, 233, 98), (3, 432, 100), (4, 178, 99),
               (5, 171, 100), (6, 326, 99), (7, 300, 100), (8, 411, 93),
               (9, 420, 99), (10, 468, 100), (13, 636, 92), (14, 466, 90),
               (15, 761, 87), (16, 240, 84), (18, 799, 91), (19, 435, 94),
               (20, 307, 95)]


def rts_candidate_cost(x):
    # no published costs for extra circuits in existing corridors; use a
    # reactance-proportional surrogate on the same unit scale as the
    # reinforcement table
    return round(1000 * x) * 1000.0


def ieee24():
    lines = []
    for f, t, x, cap, circ in RTS_CORRIDORS:
        lines.append({"from": f, "to": t, "reactance": x, "capacity": cap,
                      **({"count": circ} if circ > 1 else {})})
        lines.append({"from": f, "to": t, "reactance": x, "capacity": cap,
                      "status": "candidate",
                      "build_cost": rts_candidate_cost(x) * (COST_UNIT / 1e3),
                      "count": MAX_CIRCUITS - circ})
    for f, t, x, cap, cost in RTS_NEW_CORRIDORS:
        lines.append({"from": f, "to": t, "reactance": x, "capacity": cap,
                      "status": "candidate", "build_cost": cost * (COST_UNIT / 1e3),
                      "count": MAX_CIRCUITS})
    return {
        "schema": 1,
        "name": "ieee24",
        "metadata": {
            "source": "IEEE RTS-79 single-area topology; rescaled generation/load table",
            "notes": "seven reinforcement corridors from the expansion literature; "
                     "corridor build costs approximate; shed costs are 100x the "
                     "nominal load-shedding cost column",
        },
        "base_mva": 100,
        "buses": [{"id": b, **({"slack": True} if b == 13 else {})} for b in range(1, 25)],
        "generators": [{"bus": b, "cap_nominal": p, "cost": c} for b, p, c in RTS_GENS],
        "demands": [{"bus": b, "load_nominal": d, "shed_cost": 100.0 * c}
                    for b, d, c in RTS_DEMANDS],
        "lines": lines,
        "uncertainty": {"gen_dev_fraction": 0.5, "dem_dev_fraction": 0.2,
                        "gamma_gen": {"all": 3}, "gamma_dem": {"all": 5}},
        "config": {"budget": 20e6, "sigma": 8760, "interest_rate": 0.10,
                   "horizon_years": 25, "epsilon": 1e-6, "big_m": "auto"},
    }


# ---------------------------------------------------------------- ieee118 --

# standard archive topology, 186 branches, 1-based positions matter (the
# candidate list below indexes into this order)
I118_BRANCHES = [
    (1, 2), (1, 3), (4, 5), (3, 5), (5, 6), (6, 7), (8, 9), (8, 5), (9, 10),
    (4, 11), (5, 11), (11, 12), (2, 12), (3, 12), (7, 12), (11, 13), (12, 14),
    (13, 15), (14, 15), (12, 16), (15, 17), (16, 17), (17, 18), (18, 19),
    (19, 20), (15, 19), (20, 21), (21, 22), (22, 23), (23, 24), (23, 25),
    (26, 25), (25, 27), (27, 28), (28, 29), (30, 17), (8, 30), (26, 30),
    (17, 31), (29, 31), (23, 32), (31, 32), (27, 32), (15, 33), (19, 34),
    (35, 36), (35, 37), (33, 37), (34, 36), (34, 37), (38, 37), (37, 39),
    (37, 40), (30, 38), (39, 40), (40, 41), (40, 42), (41, 42), (43, 44),
    (34, 43), (44, 45), (45, 46), (46, 47), (46, 48), (47, 49), (42, 49),
    (42, 49), (45, 49), (48, 49), (49, 50), (49, 51), (51, 52), (52, 53),
    (53, 54), (49, 54), (49, 54), (54, 55), (54, 56), (55, 56), (56, 57),
    (50, 57), (56, 58), (51, 58), (54, 59), (56, 59), (56, 59), (55, 59),
    (59, 60), (59, 61), (60, 61), (60, 62), (61, 62), (63, 59), (63, 64),
    (64, 61), (38, 65), (64, 65), (49, 66), (49, 66), (62, 66), (62, 67),
    (65, 66), (66, 67), (65, 68), (47, 69), (49, 69), (68, 69), (69, 70),
    (24, 70), (70, 71), (24, 72), (71, 72), (71, 73), (70, 74), (70, 75),
    (69, 75), (74, 75), (76, 77), (69, 77), (75, 77), (77, 78), (78, 79),
    (77, 80), (77, 80), (79, 80), (68, 81), (81, 80), (77, 82), (82, 83),
    (83, 84), (83, 85), (84, 85), (85, 86), (86, 87), (85, 88), (85, 89),
    (88, 89), (89, 90), (89, 90), (90, 91), (89, 92), (89, 92), (91, 92),
    (92, 93), (92, 94), (93, 94), (94, 95), (80, 96), (82, 96), (94, 96),
    (80, 97), (80, 98), (80, 99), (92, 100), (94, 100), (95, 96), (96, 97),
    (98, 100), (99, 100), (100, 101), (92, 102), (101, 102), (100, 103),
    (100, 104), (103, 104), (103, 105), (100, 106), (104, 105), (105, 106),
    (105, 107), (105, 108), (106, 107), (108, 109), (103, 110), (109, 110),
    (110, 111), (110, 112), (17, 113), (32, 113), (32, 114), (27, 115),
    (114, 115), (68, 116), (12, 117), (75, 118), (76, 118),
]
# transformer branches (1-based positions) get a shorter placeholder reactance
I118_TRANSFORMERS = {8, 32, 36, 51, 93, 95, 102, 107, 127}
# 1-based positions of the 61 duplicable branches
I118_CANDIDATE_IDX = [
    8, 12, 23, 32, 38, 41, 51, 68, 78, 96, 104, 118, 119, 121, 125, 129, 134,
    159, 7, 9, 36, 117, 71, 131, 133, 147, 103, 65, 144, 168, 4, 13, 132, 69,
    66, 67, 5, 89, 29, 167, 145, 70, 42, 90, 16, 174, 98, 99, 185, 93, 94,
    128, 164, 97, 153, 146, 116, 163, 31, 92, 130,
]
I118_GENS = [
    (4, 150, 27), (6, 150, 27), (8, 150, 27), (10, 1500, 14), (12, 1500, 14),
    (15, 150, 27), (18, 500, 18), (19, 150, 27), (24, 150, 27), (25, 1500, 14),
    (26, 1750, 11), (27, 150, 27), (31, 150, 27), (32, 500, 18), (34, 150, 27),
    (36, 500, 18), (40, 150, 27), (42, 150, 27), (46, 500, 18), (49, 1250, 13),
    (54, 1250, 13), (55, 500, 18), (56, 500, 18), (59, 1000, 14), (61, 1000, 14),
    (62, 500, 18), (65, 2100, 10), (66, 2100, 10), (69, 1500, 14), (70, 400, 17),
    (72, 150, 27), (73, 150, 27), (74, 100, 38), (76, 500, 18), (77, 500, 18),
    (80, 1500, 14), (82, 500, 18), (85, 150, 27), (87, 1500, 11), (89, 1000, 14),
    (90, 100, 38), (91, 250, 23), (92, 1500, 14), (99, 1500, 14), (100, 1500, 14),
    (103, 100, 38), (104, 500, 18), (105, 500, 18), (107, 100, 38), (110, 250, 23),
    (111, 500, 18), (112, 500, 18), (113, 500, 18), (116, 250, 23),
]
# (bus, load); NLSC is 50 for every demand, shed cost = 1.2x that
I118_DEMANDS = [
    (1, 689), (2, 270), (3, 527), (4, 405), (6, 702), (7, 257), (11, 945),
    (12, 635), (13, 459), (14, 189), (15, 1215), (16, 338), (17, 149),
    (18, 810), (19, 608), (20, 243), (21, 189), (22, 135), (23, 95),
    (27, 837), (28, 230), (29, 324), (31, 581), (32, 797), (33, 311),
    (34, 797), (35, 446), (36, 419), (39, 365), (40, 270), (41, 500),
    (42, 500), (43, 243), (44, 216), (45, 716), (46, 378), (47, 459),
    (48, 270), (49, 1175), (50, 230), (51, 230), (52, 243), (53, 311),
    (54, 1526), (55, 851), (56, 1134), (57, 162), (58, 162), (59, 3739),
    (60, 1053), (62, 1040), (66, 527), (67, 378), (70, 891), (74, 918),
    (75, 635), (76, 918), (77, 824), (78, 959), (79, 527), (80, 1755),
    (82, 729), (83, 270), (84, 149), (85, 324), (86, 284), (88, 648),
    (90, 1053), (92, 878), (93, 162), (94, 405), (95, 567), (96, 513),
    (97, 203), (98, 459), (100, 500), (101, 297), (102, 68), (103, 311),
    (104, 513), (105, 419), (106, 581), (107, 378), (108, 27), (109, 108),
    (110, 527), (112, 338), (114, 108), (115, 297), (117, 270), (118, 446),
]


def ieee118():
    lines = []
    for pos, (f, t) in enumerate(I118_BRANCHES, start=1):
        x = 0.03 if pos in I118_TRANSFORMERS else 0.10
        lines.append({"from": f, "to": t, "reactance": x, "capacity": 1000})
    for pos in I118_CANDIDATE_IDX:
        f, t = I118_BRANCHES[pos - 1]
        x = 0.03 if pos in I118_TRANSFORMERS else 0.10
        lines.append({"from": f, "to": t, "reactance": x, "capacity": 1000,
                      "status": "candidate",
                      "build_cost": round(1000 * x) * COST_UNIT})
    return {
        "schema": 1,
        "name": "ieee118",
        "metadata": {
            "source": "standard 118-bus archive topology (186 branches)",
            "external-data": "reactances, ratings, and candidate build costs are "
                             "documented placeholders (0.10 p.u. lines / 0.03 p.u. "
                             "transformers, 1000 MW, reactance-proportional cost); "
                             "the generator/demand table is exact",
        },
        "base_mva": 100,
        "buses": [{"id": b, **({"slack": True} if b == 69 else {})} for b in range(1, 119)],
        "generators": [{"bus": b, "cap_nominal": p, "cost": c} for b, p, c in I118_GENS],
        "demands": [{"bus": b, "load_nominal": d, "shed_cost": 60.0} for b, d in I118_DEMANDS],
        "lines": lines,
        "uncertainty": {"gen_dev_fraction": 0.5, "dem_dev_fraction": 0.5,
                        "gamma_gen": {"all": 15}, "gamma_dem": {"all": 20}},
        "config": {"budget": 100e6, "sigma": 8760, "interest_rate": 0.10,
                   "horizon_years": 25, "epsilon": 1e-6, "big_m": "auto"},
    }


def main():
    g = garver6()
    assert len(g["buses"]) == 6 and len(g["generators"]) == 3 and len(g["demands"]) == 5
    assert sum(l.get("count", 1) for l in g["lines"]) == 45

    r = ieee24()
    assert len(r["buses"]) == 24 and len(r["generators"]) == 10 and len(r["demands"]) == 17
    assert sum(l.get("count", 1) for l in r["lines"]) == 123

    h = ieee118()
    assert len(h["buses"]) == 118 and len(h["generators"]) == 54 and len(h["demands"]) == 91
    assert len(I118_BRANCHES) == 186 and len(I118_CANDIDATE_IDX) == 61
    assert sum(l.get("count", 1) for l in h["lines"]) == 247

    dump("garver6", g)
    dump("ieee24", r)
    dump("ieee118", h)
    return 0


if __name__ == "__main__":
    sys.exit(main())
