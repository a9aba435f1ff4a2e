"""Greedy prefix baselines: cheapest-first (gd-c) and most-reliable-first (gd-p)."""
from __future__ import annotations

import time

import numpy as np

from .exact import SolveReport, Status, _require_feasible, selected_ids
from .model import TOL_FEAS, Instance, evaluate, to_linear_form


def _prefix(inst, order, label):
    t0 = time.perf_counter()
    lf = to_linear_form(inst)
    _require_feasible(inst, lf)
    z = np.zeros(inst.K, dtype=np.int8)
    margin = 0.0
    for k in order:
        if margin >= lf.b - TOL_FEAS:
            break
        z[k] = 1
        margin += lf.a[k]
    sel = evaluate(inst, z, lf)
    wall = time.perf_counter() - t0
    return SolveReport(
        algorithm=label,
        selection=sel,
        selected_ids=selected_ids(inst, z),
        objective=sel.cost,
        status=Status.HEURISTIC,
        wall_time=wall,
    )


def solve_gd_c(inst: Instance) -> SolveReport:
    # sites are already stored cost-ascending with stable ties
    return _prefix(inst, range(inst.K), "gd-c")


def solve_gd_p(inst: Instance) -> SolveReport:
    order = sorted(
        range(inst.K),
        key=lambda k: (inst.sites[k].outage_probability, inst.sites[k].cost, inst.original_order[k]),
    )
    return _prefix(inst, order, "gd-p")
