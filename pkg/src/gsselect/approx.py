"""Cost-scaled DP with a certified absolute error bound."""
from __future__ import annotations

import math
import numbers
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonPositiveEpsilon
from .exact import SolveReport, Status, selected_ids, solve_dp
from .model import Instance, evaluate, to_linear_form

# c/theta values within this distance of an integer are snapped before the ceiling
_SNAP = 1e-12


@dataclass(frozen=True)
class ScaledCosts:
    epsilon: float
    theta: float
    scaled: tuple[int, ...]
    bound: int


def _check_epsilon(epsilon):
    if isinstance(epsilon, bool) or not isinstance(epsilon, numbers.Real) or not epsilon > 0:
        raise NonPositiveEpsilon(f"epsilon must be a positive number, got {epsilon!r}")
    if not math.isfinite(epsilon):
        raise NonPositiveEpsilon(f"epsilon must be finite, got {epsilon!r}")


def error_bound(inst: Instance, epsilon: float) -> int:
    """min(floor(epsilon * c_max), total cost)."""
    _check_epsilon(epsilon)
    # Fraction keeps the floor exact for the given binary float
    return min(math.floor(Fraction(epsilon) * inst.c_max), inst.total_cost)


def _snapped_ceil(x: float) -> int:
    r = round(x)
    if abs(x - r) <= _SNAP:
        return int(r)
    return math.ceil(x)


def scale_costs(inst: Instance, epsilon: float) -> ScaledCosts:
    _check_epsilon(epsilon)
    theta = epsilon * inst.c_max / inst.K
    scaled = tuple(max(1, _snapped_ceil(s.cost / theta)) for s in inst.sites)
    return ScaledCosts(float(epsilon), theta, scaled, error_bound(inst, epsilon))


def is_exact_regime(inst: Instance, epsilon: float) -> bool:
    """epsilon < 1/c_max, where the scaled DP is forced to the optimum."""
    return Fraction(epsilon) * inst.c_max < 1


def solve_dpaa(inst: Instance, epsilon: float) -> SolveReport:
    t0 = time.perf_counter()
    sc = scale_costs(inst, epsilon)
    inner = solve_dp(inst.with_costs(sc.scaled))
    z = inner.selection.chosen
    sel = evaluate(inst, z, to_linear_form(inst))
    wall = time.perf_counter() - t0
    exact = is_exact_regime(inst, epsilon)
    return SolveReport(
        algorithm="dpaa",
        selection=sel,
        selected_ids=selected_ids(inst, np.asarray(z)),
        objective=sel.cost,
        status=Status.OPTIMAL if exact else Status.APPROXIMATE,
        bound=0 if exact else sc.bound,
        table_cells=inner.table_cells,
        wall_time=wall,
        epsilon=sc.epsilon,
        zeta=inner.zeta,
        upper_bound=inner.upper_bound,
    )
