"""Problem data: sites, instances, the log-domain linear form, and selections.

Sites are kept sorted by ascending cost inside an :class:`Instance`; the
``original_order`` permutation maps internal positions back to the order the
caller supplied (0-based). All cost arithmetic is on Python ints.
"""
from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    EmptyCatalog,
    InvalidInstance,
    LengthMismatch,
    NonPositiveCost,
    ProbabilityOutOfRange,
    ThresholdOutOfRange,
)

# Absolute tolerance on log-margin comparisons. Shared by every constraint check.
TOL_FEAS = 1e-9


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Site:
    id: str
    cost: int
    outage_probability: float


@dataclass(frozen=True)
class Instance:
    sites: tuple[Site, ...]
    threshold: float
    original_order: tuple[int, ...]
    costs: np.ndarray = field(init=False, repr=False, compare=False)
    probs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "costs", _frozen(np.array([s.cost for s in self.sites], dtype=np.int64)))
        object.__setattr__(
            self, "probs", _frozen(np.array([s.outage_probability for s in self.sites], dtype=np.float64))
        )

    @property
    def K(self) -> int:
        return len(self.sites)

    @property
    def c_max(self) -> int:
        return self.sites[-1].cost

    @property
    def total_cost(self) -> int:
        """Sum of all site costs; the trivial upper bound on any optimum."""
        return sum(s.cost for s in self.sites)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.sites)

    def with_costs(self, costs: Sequence[int]) -> Instance:
        """Same sites, probabilities and ordering, new costs. Costs must stay sorted."""
        costs = [int(c) for c in costs]
        if len(costs) != self.K:
            raise LengthMismatch(f"expected {self.K} costs, got {len(costs)}")
        if any(c < 1 for c in costs):
            raise NonPositiveCost("costs must be positive integers")
        if any(x > y for x, y in zip(costs, costs[1:])):
            raise ValueError("replacement costs must preserve ascending order")
        sites = tuple(Site(s.id, c, s.outage_probability) for s, c in zip(self.sites, costs))
        return Instance(sites, self.threshold, self.original_order)

    def with_threshold(self, threshold: float) -> Instance:
        _check_threshold(threshold)
        return Instance(self.sites, float(threshold), self.original_order)

    def to_user_order(self, values):
        """Reorder a per-site internal vector into the caller's original order."""
        values = np.asarray(values)
        out = np.empty_like(values)
        out[np.asarray(self.original_order)] = values
        return out

    def user_sites(self) -> list[Site]:
        out = [None] * self.K
        for pos, orig in enumerate(self.original_order):
            out[orig] = self.sites[pos]
        return out


@dataclass(frozen=True)
class LinearForm:
    a: np.ndarray
    b: float


@dataclass(frozen=True)
class Selection:
    chosen: np.ndarray  # 0/1 per site, internal order
    cost: int
    log_margin: float
    outage_probability: float

    def meets(self, b: float) -> bool:
        return self.log_margin >= b - TOL_FEAS

    @property
    def count(self) -> int:
        return int(self.chosen.sum())


def _check_threshold(threshold, path="threshold"):
    if isinstance(threshold, bool) or not isinstance(threshold, numbers.Real):
        raise ThresholdOutOfRange(f"expected a number, got {threshold!r}", path)
    if not (0.0 < threshold <= 1.0):
        raise ThresholdOutOfRange(f"must lie in (0, 1], got {threshold!r}", path)


def _check_site(site, k):
    cost = site.cost
    if isinstance(cost, bool) or not isinstance(cost, numbers.Integral):
        raise NonPositiveCost(f"must be a positive integer, got {cost!r}", f"sites[{k}].cost")
    if cost < 1:
        raise NonPositiveCost(f"must be a positive integer, got {cost!r}", f"sites[{k}].cost")
    p = site.outage_probability
    if isinstance(p, bool) or not isinstance(p, numbers.Real) or not (0.0 < p <= 1.0):
        raise ProbabilityOutOfRange(f"must lie in (0, 1], got {p!r}", f"sites[{k}].p")


def build_instance(sites: Sequence[Site], threshold: float) -> Instance:
    """Validate and sort (stably, by cost) a site catalog."""
    if len(sites) == 0:
        raise EmptyCatalog("site catalog is empty", "sites")
    for k, site in enumerate(sites):
        _check_site(site, k)
    _check_threshold(threshold)
    order = sorted(range(len(sites)), key=lambda k: sites[k].cost)
    internal = tuple(
        Site(str(sites[k].id), int(sites[k].cost), float(sites[k].outage_probability)) for k in order
    )
    return Instance(internal, float(threshold), tuple(order))


def make_instance(costs, probs, threshold, ids=None) -> Instance:
    """Convenience constructor from parallel cost/probability sequences."""
    costs = list(costs)
    probs = list(probs)
    if len(costs) != len(probs):
        raise LengthMismatch(f"{len(costs)} costs but {len(probs)} probabilities")
    if ids is None:
        ids = [str(k) for k in range(len(costs))]
    costs = [int(c) if isinstance(c, np.integer) else c for c in costs]
    probs = [float(p) if isinstance(p, np.floating) else p for p in probs]
    return build_instance([Site(i, c, p) for i, c, p in zip(ids, costs, probs)], threshold)


def to_linear_form(inst: Instance) -> LinearForm:
    a = -np.log(inst.probs) + 0.0  # +0.0 turns -0.0 into 0.0
    b = -math.log(inst.threshold) + 0.0
    return LinearForm(_frozen(a), b)


def check_feasible(inst: Instance, lf: LinearForm | None = None) -> bool:
    """True iff selecting every site meets the threshold."""
    lf = lf or to_linear_form(inst)
    return math.fsum(lf.a) >= lf.b - TOL_FEAS


def evaluate(inst: Instance, chosen, lf: LinearForm | None = None) -> Selection:
    z = np.asarray(chosen)
    if z.ndim != 1 or z.shape[0] != inst.K:
        raise LengthMismatch(f"selection has shape {z.shape}, instance has {inst.K} sites")
    if not np.all((z == 0) | (z == 1)):
        raise ValueError("selection entries must be 0 or 1")
    z = _frozen(z.astype(np.int8))
    lf = lf or to_linear_form(inst)
    idx = np.flatnonzero(z)
    cost = sum(inst.sites[k].cost for k in idx)
    margin = math.fsum(lf.a[idx])
    outage = math.prod(inst.sites[k].outage_probability for k in idx)
    return Selection(z, int(cost), margin, outage)


def gcd_reduce(inst: Instance) -> tuple[Instance, int]:
    zeta = math.gcd(*(s.cost for s in inst.sites))
    if zeta == 1:
        return inst, 1
    return inst.with_costs([s.cost // zeta for s in inst.sites]), zeta


# --- JSON ------------------------------------------------------------------


def instance_to_dict(inst: Instance) -> dict:
    return {
        "threshold": inst.threshold,
        "sites": [{"id": s.id, "cost": s.cost, "p": s.outage_probability} for s in inst.user_sites()],
    }


def instance_from_dict(data) -> Instance:
    if not isinstance(data, dict):
        raise InvalidInstance("expected a JSON object", "$")
    if "threshold" not in data:
        raise ThresholdOutOfRange("missing", "threshold")
    raw_sites = data.get("sites")
    if not isinstance(raw_sites, list):
        raise InvalidInstance("expected a list of sites", "sites")
    sites = []
    for k, raw in enumerate(raw_sites):
        if not isinstance(raw, dict):
            raise InvalidInstance("expected an object", f"sites[{k}]")
        for key in ("cost", "p"):
            if key not in raw:
                raise InvalidInstance("missing", f"sites[{k}].{key}")
        site_id = raw.get("id", str(k))
        if not isinstance(site_id, str):
            raise InvalidInstance(f"expected a string, got {site_id!r}", f"sites[{k}].id")
        sites.append(Site(site_id, raw["cost"], raw["p"]))
    return build_instance(sites, data["threshold"])


def dump_instance(inst: Instance, path) -> None:
    # json writes floats with repr(), the shortest decimal that round-trips exactly
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=2)
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInstance(f"malformed JSON: {exc}", "$") from exc
    return instance_from_dict(data)
