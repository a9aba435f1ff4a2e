"""Compare the numba and pure-numpy kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the DP table fill at increasing table widths (the cost-scaled instances
that the approximation solver produces for small epsilon) and the exhaustive
scan at increasing K, on the K=25, c_k = ceil(k/5) setup.
"""
import argparse
import math
import time

import numpy as np

from gsselect import harness, kernels, scale_costs, to_linear_form, greedy_upper_bound
from gsselect.model import TOL_FEAS


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=2020)
    args = ap.parse_args()

    kernels.warmup()
    inst = harness.generate_instances(harness.paper_config(num_instances=1, seed=args.seed), threshold=1e-4)[0]
    lf = to_linear_form(inst)

    print("fill_table  (K=25)")
    print(f"{'epsilon':>8} {'C':>7} {'cells':>9} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for eps in (1.0, 0.1, 0.01, 0.001):
        scaled = inst.with_costs(scale_costs(inst, eps).scaled)
        C = greedy_upper_bound(scaled, lf)
        costs, a = scaled.costs, np.ascontiguousarray(lf.a)
        t_np = best_of(lambda: kernels.fill_table_numpy(costs, a, C), args.repeat)
        t_nb = best_of(lambda: kernels.fill_table_numba(costs, a, C), args.repeat)
        R1, _ = kernels.fill_table_numpy(costs, a, C)
        R2, _ = kernels.fill_table_numba(costs, a, C)
        assert np.array_equal(R1, R2)
        print(f"{eps:>8g} {C:>7d} {R1.size:>9d} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>8.1f}")

    print("\nexhaustive_scan  (threshold 1e-4, first K sites)")
    print(f"{'K':>8} {'subsets':>10} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for K in (12, 16, 20, 25):
        costs = np.ascontiguousarray(inst.costs[:K])
        a = np.ascontiguousarray(lf.a[:K])
        margin = min(lf.b, float(a.sum())) - TOL_FEAS
        t_np = best_of(lambda: kernels.exhaustive_numpy(costs, a, margin), max(1, args.repeat // 2))
        t_nb = best_of(lambda: kernels.exhaustive_numba(costs, a, margin), args.repeat)
        assert kernels.exhaustive_numpy(costs, a, margin) == kernels.exhaustive_numba(costs, a, margin)
        print(f"{K:>8d} {2**K:>10d} {t_np * 1e3:>10.3f} {t_nb * 1e3:>10.3f} {t_np / t_nb:>8.1f}")


if __name__ == "__main__":
    main()
