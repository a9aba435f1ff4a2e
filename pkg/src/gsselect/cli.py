"""Command-line front end.

Exit codes: 0 success, 1 infeasible, 2 invalid input, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

from . import harness
from .approx import solve_dpaa
from .errors import Infeasible, InvalidConfig, InvalidInstance, NonPositiveEpsilon, TooLargeForExhaustive
from .model import check_feasible, dump_instance, load_instance, to_linear_form

EXIT_OK, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


def _solve(args):
    inst = load_instance(args.instance)
    if args.algo == "dpaa":
        if args.epsilon is None:
            raise NonPositiveEpsilon("--algo dpaa requires --epsilon")
        report = solve_dpaa(inst, args.epsilon)
    else:
        report = harness.AlgoSpec.parse(args.algo).solve(inst)
    text = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _check(args):
    inst = load_instance(args.instance)
    product = math.prod(s.outage_probability for s in inst.sites)
    if check_feasible(inst, to_linear_form(inst)):
        print(f"feasible: product of all outage probabilities {product:.6g} <= threshold {inst.threshold:.6g}")
        return EXIT_OK
    print(
        f"infeasible: product of all outage probabilities {product:.6g} > threshold {inst.threshold:.6g}",
        file=sys.stderr,
    )
    return EXIT_INFEASIBLE


def _gen(args):
    cost_rule = args.cost_rule
    if cost_rule not in harness.COST_RULES:
        try:
            cost_rule = [int(c) for c in cost_rule.split(",")]
        except ValueError:
            raise InvalidConfig(f"cost rule must be one of {harness.COST_RULES} or a comma list") from None
    cfg = harness.ExperimentConfig(
        K=args.k,
        cost_rule=cost_rule,
        p_low=args.p_low,
        p_high=args.p_high,
        thresholds=(args.threshold,),
        num_instances=args.count,
        seed=args.seed,
        algorithms=("dp",),
    )
    os.makedirs(args.out, exist_ok=True)
    width = max(4, len(str(args.count - 1)))
    for i, inst in enumerate(harness.generate_instances(cfg)):
        dump_instance(inst, os.path.join(args.out, f"instance_{i:0{width}d}.json"))
    print(f"wrote {args.count} instances to {args.out}")
    return EXIT_OK


def _bench(args):
    cfg = harness.ExperimentConfig.load(args.config) if args.config else harness.paper_config()
    rows = harness.run_sweep(cfg)
    harness.emit_results(rows, "csv", args.out)
    if args.json:
        harness.emit_results(rows, "json", args.json)
    if args.svg:
        harness.emit_results(rows, "svg", args.svg)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="gsselect", description="Minimum-cost ground-station selection.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance")
    s.add_argument("--algo", choices=harness.ALGORITHMS, default="dp")
    s.add_argument("--epsilon", type=float)
    s.add_argument("--out")
    s.set_defaults(func=_solve)

    c = sub.add_parser("check", help="feasibility test only")
    c.add_argument("instance")
    c.set_defaults(func=_check)

    g = sub.add_parser("gen", help="write seeded random instances")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--cost-rule", default="ceil_k_over_5")
    g.add_argument("--p-low", type=float, default=0.25)
    g.add_argument("--p-high", type=float, default=0.75)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--threshold", type=float, default=1e-4)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_gen)

    b = sub.add_parser("bench", help="threshold sweep; defaults to the K=25 simulation setup")
    b.add_argument("--config")
    b.add_argument("--out", required=True)
    b.add_argument("--svg")
    b.add_argument("--json")
    b.set_defaults(func=_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except Infeasible as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INFEASIBLE
    except (InvalidInstance, InvalidConfig, NonPositiveEpsilon, TooLargeForExhaustive, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
