"""Seeded instance generation, the threshold sweep, and result emission."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .approx import solve_dpaa
from .baselines import solve_gd_c, solve_gd_p
from . import kernels
from .errors import EmptyRows, InvalidConfig
from .exact import exhaustive_search, solve_dp
from .model import Instance, check_feasible, make_instance

log = logging.getLogger(__name__)

CSV_HEADER = [
    "threshold",
    "algorithm",
    "epsilon",
    "mean_cost",
    "std_cost",
    "mean_runtime_us",
    "n_feasible",
    "n_skipped",
]
MAX_REDRAWS = 10_000
ALGORITHMS = ("exhaustive", "dp", "dpaa", "gd-c", "gd-p")
COST_RULES = ("ceil_k_over_5", "unit")


@dataclass(frozen=True)
class AlgoSpec:
    name: str
    epsilon: float | None = None

    @property
    def label(self) -> str:
        return f"dpaa({self.epsilon:g})" if self.name == "dpaa" else self.name

    @classmethod
    def parse(cls, raw) -> AlgoSpec:
        if isinstance(raw, AlgoSpec):
            return raw
        if isinstance(raw, dict):
            name, eps = raw.get("name"), raw.get("epsilon")
        elif isinstance(raw, str):
            m = re.fullmatch(r"\s*dpaa\s*\(\s*([^)]+?)\s*\)\s*", raw)
            if m:
                name = "dpaa"
                try:
                    eps = float(m.group(1))
                except ValueError:
                    raise InvalidConfig(f"bad epsilon in {raw!r}") from None
            else:
                name, eps = raw.strip(), None
        else:
            raise InvalidConfig(f"cannot parse algorithm {raw!r}")
        if name not in ALGORITHMS:
            raise InvalidConfig(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")
        if name == "dpaa":
            if eps is None or not isinstance(eps, (int, float)) or not eps > 0 or not math.isfinite(eps):
                raise InvalidConfig(f"dpaa needs a positive epsilon, got {eps!r}")
            return cls(name, float(eps))
        if eps is not None:
            raise InvalidConfig(f"{name} takes no epsilon")
        return cls(name)

    def solve(self, inst: Instance):
        if self.name == "dpaa":
            return solve_dpaa(inst, self.epsilon)
        return _SOLVERS[self.name](inst)


_SOLVERS: dict[str, Callable] = {
    "exhaustive": exhaustive_search,
    "dp": solve_dp,
    "gd-c": solve_gd_c,
    "gd-p": solve_gd_p,
}


@dataclass(frozen=True)
class ExperimentConfig:
    K: int
    cost_rule: str | tuple[int, ...]
    p_low: float
    p_high: float
    thresholds: tuple[float, ...]
    num_instances: int
    seed: int
    algorithms: tuple[AlgoSpec, ...]
    time_limit: float | None = None

    def __post_init__(self):
        if not isinstance(self.K, int) or self.K < 1:
            raise InvalidConfig(f"K must be a positive integer, got {self.K!r}")
        if isinstance(self.cost_rule, str):
            if self.cost_rule not in COST_RULES:
                raise InvalidConfig(f"unknown cost_rule {self.cost_rule!r}")
        else:
            costs = tuple(self.cost_rule)
            if len(costs) != self.K or any(not isinstance(c, int) or c < 1 for c in costs):
                raise InvalidConfig("explicit cost list must hold K positive integers")
            object.__setattr__(self, "cost_rule", costs)
        if not (0.0 < self.p_low < self.p_high <= 1.0):
            raise InvalidConfig(f"need 0 < p_low < p_high <= 1, got ({self.p_low}, {self.p_high})")
        ths = tuple(float(t) for t in self.thresholds)
        if not ths or any(not (0.0 < t <= 1.0) for t in ths):
            raise InvalidConfig("thresholds must be a nonempty list of values in (0, 1]")
        object.__setattr__(self, "thresholds", ths)
        if not isinstance(self.num_instances, int) or self.num_instances < 1:
            raise InvalidConfig("num_instances must be a positive integer")
        if not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            raise InvalidConfig("seed must be a 64-bit unsigned integer")
        algos = tuple(AlgoSpec.parse(a) for a in self.algorithms)
        if not algos:
            raise InvalidConfig("no algorithms requested")
        object.__setattr__(self, "algorithms", algos)
        if self.time_limit is not None and not self.time_limit > 0:
            raise InvalidConfig("time_limit must be positive")

    def costs(self) -> list[int]:
        if self.cost_rule == "ceil_k_over_5":
            return [math.ceil(k / 5) for k in range(1, self.K + 1)]
        if self.cost_rule == "unit":
            return [1] * self.K
        return list(self.cost_rule)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cost_rule"] = self.cost_rule if isinstance(self.cost_rule, str) else list(self.cost_rule)
        d["thresholds"] = list(self.thresholds)
        d["algorithms"] = [a.label for a in self.algorithms]
        return d

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        if not isinstance(data, dict):
            raise InvalidConfig("config must be a JSON object")
        known = {"K", "cost_rule", "p_low", "p_high", "thresholds", "num_instances", "seed", "algorithms", "time_limit"}
        extra = set(data) - known
        if extra:
            raise InvalidConfig(f"unknown config keys: {sorted(extra)}")
        missing = known - {"time_limit"} - set(data)
        if missing:
            raise InvalidConfig(f"missing config keys: {sorted(missing)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfig(str(exc)) from exc

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise InvalidConfig(f"malformed config JSON: {exc}") from exc


def paper_config(num_instances=100, seed=2020, algorithms=None, thresholds=None) -> ExperimentConfig:
    """Simulation setup with K = 25, costs ceil(k/5), p ~ U(0.25, 0.75).

    Thresholds default to 11 half-decade steps from 1e-1 to 1e-6.
    """
    if thresholds is None:
        thresholds = [float(10.0 ** (-e / 2)) for e in range(2, 13)]
    if algorithms is None:
        algorithms = ["dp", "dpaa(0.1)", "dpaa(1)", "dpaa(5)", "dpaa(10)", "dpaa(15)", "gd-c", "gd-p"]
    return ExperimentConfig(
        K=25,
        cost_rule="ceil_k_over_5",
        p_low=0.25,
        p_high=0.75,
        thresholds=tuple(thresholds),
        num_instances=num_instances,
        seed=seed,
        algorithms=tuple(algorithms),
    )


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """Independent PCG64 stream for instance ``index`` (SeedSequence spawn key)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def generate_instances(cfg: ExperimentConfig, threshold: float | None = None) -> list[Instance]:
    """Draw ``num_instances`` instances feasible at ``threshold``.

    ``threshold`` defaults to the smallest in the sweep, so one instance set
    serves every threshold. Infeasible draws are redrawn from the same stream.
    """
    threshold = min(cfg.thresholds) if threshold is None else threshold
    costs = cfg.costs()
    out = []
    for i in range(cfg.num_instances):
        rng = instance_rng(cfg.seed, i)
        for _ in range(MAX_REDRAWS):
            p = rng.uniform(cfg.p_low, cfg.p_high, cfg.K)
            inst = make_instance(costs, p, threshold, ids=[str(k + 1) for k in range(cfg.K)])
            if check_feasible(inst):
                out.append(inst)
                break
        else:
            raise InvalidConfig(
                f"instance {i}: no feasible draw at threshold {threshold:g} after {MAX_REDRAWS} attempts"
            )
    return out


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    algorithm: str
    epsilon: float | None
    mean_cost: float
    std_cost: float
    mean_runtime_us: float
    n_feasible: int
    n_skipped: int


@dataclass
class SweepResult:
    """Per-cell outcomes; NaN marks a skipped (infeasible or timed-out) cell.

    Arrays are indexed ``[threshold, algorithm, instance]`` with thresholds
    sorted descending.
    """

    thresholds: tuple[float, ...]
    algorithms: tuple[AlgoSpec, ...]
    costs: np.ndarray
    runtimes: np.ndarray  # seconds
    timeouts: int = 0

    def rows(self) -> list[SweepRow]:
        rows = []
        for t, th in enumerate(self.thresholds):
            for a, spec in enumerate(self.algorithms):
                mean, std, n = _welford(self.costs[t, a])
                rt, _, _ = _welford(self.runtimes[t, a])
                rows.append(
                    SweepRow(
                        threshold=th,
                        algorithm=spec.name,
                        epsilon=spec.epsilon,
                        mean_cost=mean,
                        std_cost=std,
                        mean_runtime_us=rt * 1e6,
                        n_feasible=n,
                        n_skipped=self.costs.shape[2] - n,
                    )
                )
        return rows


def _welford(values) -> tuple[float, float, int]:
    """Streaming mean and population std over the non-NaN entries."""
    n, mean, m2 = 0, 0.0, 0.0
    for x in values:
        if math.isnan(x):
            continue
        n += 1
        d = x - mean
        mean += d / n
        m2 += d * (x - mean)
    if n == 0:
        return math.nan, math.nan, 0
    return mean, math.sqrt(m2 / n), n


def _thread_count() -> int:
    raw = os.environ.get("GS_SELECT_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise InvalidConfig(f"GS_SELECT_THREADS must be an integer, got {raw!r}") from None


def _solve_instance(inst, thresholds, algorithms, time_limit):
    T, A = len(thresholds), len(algorithms)
    costs = np.full((T, A), np.nan)
    runtimes = np.full((T, A), np.nan)
    gave_up = [False] * A
    timeouts = 0
    for t, th in enumerate(thresholds):
        cur = inst.with_threshold(th)
        if not check_feasible(cur):
            continue
        for a, spec in enumerate(algorithms):
            # a solver that timed out here will not be faster on tighter thresholds
            if gave_up[a]:
                continue
            rep = spec.solve(cur)
            if time_limit is not None and rep.wall_time > time_limit:
                gave_up[a] = True
                timeouts += 1
                continue
            costs[t, a] = rep.objective
            runtimes[t, a] = rep.wall_time
    return costs, runtimes, timeouts


def run_sweep_detail(cfg: ExperimentConfig, instances: Sequence[Instance] | None = None) -> SweepResult:
    if instances is None:
        instances = generate_instances(cfg)
    kernels.warmup()
    thresholds = tuple(sorted(cfg.thresholds, reverse=True))
    algorithms = cfg.algorithms
    N = len(instances)
    costs = np.full((len(thresholds), len(algorithms), N), np.nan)
    runtimes = np.full_like(costs, np.nan)

    def job(i):
        return _solve_instance(instances[i], thresholds, algorithms, cfg.time_limit)

    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(job, range(N)))
    else:
        results = [job(i) for i in range(N)]
    timeouts = 0
    for i, (c, r, nt) in enumerate(results):
        costs[:, :, i] = c
        runtimes[:, :, i] = r
        timeouts += nt
    if timeouts:
        log.warning("%d solver calls exceeded the %.3g s time limit and were skipped", timeouts, cfg.time_limit)
    return SweepResult(thresholds, algorithms, costs, runtimes, timeouts)


def run_sweep(cfg: ExperimentConfig, instances: Sequence[Instance] | None = None) -> list[SweepRow]:
    return run_sweep_detail(cfg, instances).rows()


# --- emission ----------------------------------------------------------------


def _num(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(
            [
                repr(r.threshold),
                r.algorithm,
                _num(r.epsilon),
                _num(r.mean_cost),
                _num(r.std_cost),
                _num(r.mean_runtime_us),
                r.n_feasible,
                r.n_skipped,
            ]
        )
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")

    def f(s):
        return math.nan if s == "" else float(s)

    return [
        SweepRow(float(th), alg, None if eps == "" else float(eps), f(mc), f(sc), f(rt), int(nf), int(ns))
        for th, alg, eps, mc, sc, rt, nf, ns in reader
    ]


def _json_safe(x):
    return None if isinstance(x, float) and math.isnan(x) else x


def rows_to_json(rows: Sequence[SweepRow]) -> str:
    return json.dumps([{k: _json_safe(v) for k, v in asdict(r).items()} for r in rows], indent=2) + "\n"


def rows_from_json(text: str) -> list[SweepRow]:
    out = []
    for d in json.loads(text):
        for k in ("mean_cost", "std_cost", "mean_runtime_us"):
            if d[k] is None:
                d[k] = math.nan
        out.append(SweepRow(**d))
    return out


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"]


def rows_to_svg(rows: Sequence[SweepRow], width=720, height=460) -> str:
    """Mean cost against threshold (log x axis), one polyline per algorithm/epsilon."""
    if not rows:
        raise EmptyRows("cannot plot an empty result set")
    series: dict[tuple, list] = {}
    for r in rows:
        if not math.isnan(r.mean_cost):
            series.setdefault((r.algorithm, r.epsilon), []).append((r.threshold, r.mean_cost))
    if not series:
        raise EmptyRows("no row has a finite mean cost")
    xs = [math.log10(x) for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    x_lo, x_hi = math.floor(min(xs)), math.ceil(max(xs))
    if x_hi == x_lo:
        x_hi += 1
    y_lo, y_hi = 0.0, max(ys) * 1.05 or 1.0
    left, right, top, bottom = 64, 170, 24, 48
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (math.log10(x) - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return top + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    for e in range(x_lo, x_hi + 1):
        x = left + (e - x_lo) / (x_hi - x_lo) * pw
        out.append(f'<line x1="{x:.1f}" y1="{top + ph}" x2="{x:.1f}" y2="{top + ph + 4}" stroke="#333"/>')
        out.append(f'<text x="{x:.1f}" y="{top + ph + 16}" text-anchor="middle">1e{e}</text>')
    for k in range(6):
        y = y_lo + (y_hi - y_lo) * k / 5
        out.append(f'<text x="{left - 6}" y="{py(y) + 4:.1f}" text-anchor="end">{y:.1f}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">outage probability threshold</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2})">average installation cost</text>'
    )
    for n, ((alg, eps), pts) in enumerate(series.items()):
        colour = _PALETTE[n % len(_PALETTE)]
        pts = sorted(pts)
        coords = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in pts)
        label = alg if eps is None else f"{alg} eps={eps:g}"
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}"><title>{label}</title></polyline>')
        ly = top + 12 + 16 * n
        out.append(f'<line x1="{width - right + 10}" y1="{ly}" x2="{width - right + 30}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{width - right + 36}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_results(rows: Sequence[SweepRow], fmt: str, path) -> None:
    if fmt == "csv":
        text = rows_to_csv(rows)
    elif fmt == "json":
        text = rows_to_json(rows)
    elif fmt == "svg":
        text = rows_to_svg(rows)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)
