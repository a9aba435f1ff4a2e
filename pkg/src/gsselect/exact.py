"""Exact solvers: the cost-indexed DP with backtracking, and exhaustive search."""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import Infeasible, NoQualifyingColumn, TooLargeForExhaustive
from .model import (
    TOL_FEAS,
    Instance,
    LinearForm,
    Selection,
    check_feasible,
    evaluate,
    gcd_reduce,
    to_linear_form,
)

MAX_EXHAUSTIVE_K = 30


class Status(enum.Enum):
    OPTIMAL = "Optimal"
    APPROXIMATE = "Approximate"
    HEURISTIC = "Heuristic"


@dataclass(frozen=True)
class DpTable:
    """Margin table ``values[i, j]`` plus bit-packed take flags.

    ``take(i, j)`` is true when the best margin for sites ``1..i`` at cost ``j``
    includes site ``i``.
    """

    upper_bound: int
    values: np.ndarray
    take_bits: np.ndarray

    @property
    def K(self) -> int:
        return self.values.shape[0] - 1

    @property
    def cells(self) -> int:
        return self.values.size

    def take(self, i: int, j: int) -> bool:
        return bool((self.take_bits[i, j >> 3] >> (7 - (j & 7))) & 1)

    def take_matrix(self) -> np.ndarray:
        return np.unpackbits(self.take_bits, axis=1, count=self.upper_bound + 1).astype(bool)


@dataclass(frozen=True)
class SolveReport:
    algorithm: str
    selection: Selection  # internal (cost-sorted) order
    selected_ids: tuple[str, ...]  # in the caller's original order
    objective: int
    status: Status
    bound: int | None = None
    table_cells: int = 0
    wall_time: float = 0.0  # seconds
    epsilon: float | None = None
    zeta: int | None = None
    upper_bound: int | None = None  # C of the table actually built

    @property
    def outage_probability(self) -> float:
        return self.selection.outage_probability

    def to_dict(self) -> dict:
        out = {
            "algorithm": self.algorithm,
            "objective": self.objective,
            "status": self.status.value,
            "bound": self.bound,
            "selected_ids": list(self.selected_ids),
            "outage_probability": self.outage_probability,
            "table_cells": self.table_cells,
            "wall_time_us": int(round(self.wall_time * 1e6)),
        }
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        if self.zeta is not None:
            out["zeta"] = self.zeta
            out["upper_bound"] = self.upper_bound
        return out


def selected_ids(inst: Instance, chosen) -> tuple[str, ...]:
    user = inst.to_user_order(np.asarray(chosen))
    sites = inst.user_sites()
    return tuple(sites[k].id for k in np.flatnonzero(user))


def _require_feasible(inst, lf):
    if not check_feasible(inst, lf):
        raise Infeasible(math.prod(s.outage_probability for s in inst.sites), inst.threshold)


def greedy_upper_bound(inst: Instance, lf: LinearForm) -> int:
    """Cost of the shortest cost-ascending prefix that meets the threshold."""
    _require_feasible(inst, lf)
    margin, C, k = 0.0, 0, 0
    while margin < lf.b - TOL_FEAS and k < inst.K:
        margin += lf.a[k]
        C += inst.sites[k].cost
        k += 1
    return C


def fill_table(inst: Instance, lf: LinearForm, C: int) -> DpTable:
    if C < 0 or C > inst.total_cost:
        raise ValueError(f"upper bound {C} outside [0, {inst.total_cost}]")
    values, take = kernels.fill_table(inst.costs, np.ascontiguousarray(lf.a, dtype=np.float64), int(C))
    return DpTable(int(C), values, np.packbits(take, axis=1))


def extract_optimum(table: DpTable, lf: LinearForm) -> int:
    """Smallest cost column whose best margin reaches ``b``."""
    hits = np.flatnonzero(table.values[-1] >= lf.b - TOL_FEAS)
    if hits.size == 0:
        raise NoQualifyingColumn(f"no column in 0..{table.upper_bound} reaches margin {lf.b:.6g}")
    return int(hits[0])


def backtrack(table: DpTable, inst: Instance, j_star: int, lf: LinearForm | None = None) -> Selection:
    z = np.zeros(inst.K, dtype=np.int8)
    j = j_star
    for i in range(inst.K, 0, -1):
        if table.take(i, j):
            z[i - 1] = 1
            j -= inst.sites[i - 1].cost
    assert j == 0, "backtrack did not end at cost 0"
    return evaluate(inst, z, lf)


def solve_dp(inst: Instance) -> SolveReport:
    t0 = time.perf_counter()
    lf = to_linear_form(inst)
    _require_feasible(inst, lf)
    reduced, zeta = gcd_reduce(inst)
    C = greedy_upper_bound(reduced, lf)
    table = fill_table(reduced, lf, C)
    j_star = extract_optimum(table, lf)
    z = backtrack(table, reduced, j_star, lf).chosen
    sel = evaluate(inst, z, lf)
    wall = time.perf_counter() - t0
    assert sel.cost == j_star * zeta
    return SolveReport(
        algorithm="dp",
        selection=sel,
        selected_ids=selected_ids(inst, z),
        objective=sel.cost,
        status=Status.OPTIMAL,
        table_cells=table.cells,
        wall_time=wall,
        zeta=zeta,
        upper_bound=C,
    )


def exhaustive_search(inst: Instance) -> SolveReport:
    """Scan all 2^K subsets; ties go to the lexicographically smallest z."""
    if inst.K > MAX_EXHAUSTIVE_K:
        raise TooLargeForExhaustive(f"K = {inst.K} exceeds the exhaustive limit {MAX_EXHAUSTIVE_K}")
    t0 = time.perf_counter()
    lf = to_linear_form(inst)
    _require_feasible(inst, lf)
    cost, mask = kernels.exhaustive_scan(inst.costs, np.ascontiguousarray(lf.a), lf.b - TOL_FEAS)
    if mask < 0:
        raise NoQualifyingColumn("exhaustive scan found no feasible subset")
    z = kernels.mask_to_vector(mask, inst.K)
    sel = evaluate(inst, z, lf)
    wall = time.perf_counter() - t0
    assert sel.cost == cost
    return SolveReport(
        algorithm="exhaustive",
        selection=sel,
        selected_ids=selected_ids(inst, z),
        objective=sel.cost,
        status=Status.OPTIMAL,
        wall_time=wall,
    )
