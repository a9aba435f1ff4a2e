"""Hot loops: the DP table fill and the exhaustive subset scan.

Each kernel has a numba version and a pure-numpy version with identical
floating-point operation order, so both backends produce bit-identical
tables. ``fill_table`` and ``exhaustive_scan`` dispatch on ``_jit.USE_NUMBA``.
"""
import numpy as np

from . import _jit

def fill_table_numpy(costs, a, C):
    """Fill the (K+1) x (C+1) margin table and the take-branch flags.

    ``R[i, j]`` is the largest log-margin reachable with sites ``0..i-1`` at
    total cost exactly ``j`` (``-inf`` if no subset has that cost).
    """
    K = costs.shape[0]
    R = np.full((K + 1, C + 1), -np.inf)
    R[0, 0] = 0.0
    take = np.zeros((K + 1, C + 1), dtype=np.bool_)
    for i in range(1, K + 1):
        c = int(costs[i - 1])
        prev = R[i - 1]
        row = R[i]
        row[:] = prev
        if c <= C:
            cand = a[i - 1] + prev[: C + 1 - c]
            better = cand > prev[c:]
            row[c:][better] = cand[better]
            take[i, c:] = better
    return R, take


@_jit.njit
def _fill_table_jit(costs, a, C):
    K = costs.shape[0]
    R = np.empty((K + 1, C + 1))
    take = np.zeros((K + 1, C + 1), dtype=np.bool_)
    R[0, 0] = 0.0
    for j in range(1, C + 1):
        R[0, j] = -np.inf
    for i in range(1, K + 1):
        c = costs[i - 1]
        ai = a[i - 1]
        for j in range(C + 1):
            keep = R[i - 1, j]
            if j >= c:
                cand = ai + R[i - 1, j - c]
                if cand > keep:
                    R[i, j] = cand
                    take[i, j] = True
                    continue
            R[i, j] = keep
    return R, take


def fill_table_numba(costs, a, C):
    return _fill_table_jit(costs, a, np.int64(C))


def _subset_sums(values):
    """Sums over every subset of ``values``; bit t of the index selects values[t]."""
    n = values.shape[0]
    out = np.zeros(1 << n, dtype=values.dtype)
    for t in range(n):
        half = 1 << t
        out[half : 2 * half] = out[:half] + values[t]
    return out


def _split_tables(costs, a):
    # Mask bit K-1-k selects site k, so ascending mask order is lexicographic
    # order on z. The low half holds the last L sites.
    K = costs.shape[0]
    L = (K + 1) // 2
    H = K - L
    lo_sites = np.arange(K - 1, K - 1 - L, -1)
    hi_sites = np.arange(K - 1 - L, -1, -1)
    lo_c = _subset_sums(costs[lo_sites])
    lo_m = _subset_sums(a[lo_sites])
    hi_c = _subset_sums(costs[hi_sites]) if H else np.zeros(1, dtype=costs.dtype)
    hi_m = _subset_sums(a[hi_sites]) if H else np.zeros(1)
    return L, lo_c, lo_m, hi_c, hi_m


_BLOCK = 1 << 20


def exhaustive_numpy(costs, a, min_margin):
    """Return ``(best_cost, best_mask)``; mask is -1 when nothing qualifies.

    Among equal-cost qualifying subsets the smallest mask (lexicographically
    smallest z) wins.
    """
    L, lo_c, lo_m, hi_c, hi_m = _split_tables(costs, a)
    nlo = lo_c.shape[0]
    rows = max(1, _BLOCK // nlo)
    sentinel = np.iinfo(np.int64).max
    best_cost, best_mask = sentinel, -1
    for start in range(0, hi_c.shape[0], rows):
        stop = min(start + rows, hi_c.shape[0])
        cost = hi_c[start:stop, None] + lo_c[None, :]
        ok = (hi_m[start:stop, None] + lo_m[None, :]) >= min_margin
        cost = np.where(ok, cost, sentinel).ravel()
        pos = int(np.argmin(cost))
        if cost[pos] < best_cost:
            best_cost = int(cost[pos])
            best_mask = ((start + pos // nlo) << L) | (pos % nlo)
    if best_mask < 0:
        return -1, -1
    return best_cost, best_mask


@_jit.njit
def _exhaustive_jit(L, lo_c, lo_m, hi_c, hi_m, min_margin):
    best_cost = np.iinfo(np.int64).max
    best_mask = -1
    for h in range(hi_c.shape[0]):
        hc = hi_c[h]
        if hc >= best_cost:
            continue
        hm = hi_m[h]
        for l in range(lo_c.shape[0]):
            c = hc + lo_c[l]
            if c < best_cost and hm + lo_m[l] >= min_margin:
                best_cost = c
                best_mask = (h << L) | l
    if best_mask < 0:
        return -1, -1
    return best_cost, best_mask


def exhaustive_numba(costs, a, min_margin):
    L, lo_c, lo_m, hi_c, hi_m = _split_tables(costs, a)
    cost, mask = _exhaustive_jit(np.int64(L), lo_c, lo_m, hi_c, hi_m, float(min_margin))
    return int(cost), int(mask)


def mask_to_vector(mask, K):
    shifts = np.arange(K - 1, -1, -1, dtype=np.int64)
    return ((np.int64(mask) >> shifts) & 1).astype(np.int8)


def fill_table(costs, a, C):
    if _jit.USE_NUMBA:
        return fill_table_numba(costs, a, C)
    return fill_table_numpy(costs, a, C)


def exhaustive_scan(costs, a, min_margin):
    if _jit.USE_NUMBA:
        return exhaustive_numba(costs, a, min_margin)
    return exhaustive_numpy(costs, a, min_margin)


def warmup():
    """Trigger compilation so later timings exclude it. No-op on the numpy path."""
    if not _jit.USE_NUMBA:
        return
    costs = np.array([1, 2], dtype=np.int64)
    a = np.array([0.5, 0.5])
    # instance arrays are read-only, which numba types separately
    for flag in (True, False):
        costs.flags.writeable = flag
        a.flags.writeable = flag
        fill_table_numba(costs, a, 3)
    costs.flags.writeable = True
    exhaustive_numba(costs, a, 0.5)
