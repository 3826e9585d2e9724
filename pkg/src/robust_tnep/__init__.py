"""Adaptive robust transmission network expansion planning.

Two-stage robust planning under budgeted generation/demand uncertainty:
a column-and-constraint-generation outer loop around MILP master and
worst-case subproblems, all solved by a self-contained LP/MILP engine.
"""

__version__ = "0.1.0"
