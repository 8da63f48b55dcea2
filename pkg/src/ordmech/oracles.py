"""Exact brute-force optima: the ground truth for every ratio check."""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import Clustering, Matching, MetricInstance, NodeSubset, Tour


class OracleLimitError(ValueError):
    """Instance is too large for exact enumeration."""


MAX_MATCHING_N = 20
MAX_TSP_N = 16
MAX_SUBSETS = 10**6
MAX_PARTITIONS = 10**6


def opt_k_matching(inst: MetricInstance, k: int) -> tuple[Matching, float]:
    """Maximum-weight matching with exactly k edges (bitmask DP).

    Among optima the lexicographically smallest sorted edge list wins: the
    lowest remaining agent tries partners in ascending order before sitting out.
    """
    n = inst.n
    if n > MAX_MATCHING_N:
        raise OracleLimitError(f"n={n} exceeds matching oracle limit {MAX_MATCHING_N}")
    if not 0 <= k <= n // 2:
        raise ValueError(f"k={k} out of range for n={n}")
    w = inst.weights.tolist()
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(mask: int, need: int) -> tuple[float, tuple]:
        # mask: agents still undecided
        if need == 0:
            return 0.0, ()
        if bin(mask).count("1") < 2 * need:
            return -math.inf, ()
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        top_val, top_edges = -math.inf, ()
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            val, edges = best(rest & ~(1 << j), need - 1)
            val += w[i][j]
            if val > top_val:
                top_val, top_edges = val, ((i, j),) + edges
        val, edges = best(rest, need)
        if val > top_val:
            top_val, top_edges = val, edges
        return top_val, top_edges

    val, edges = best(full, k)
    return Matching(edges), float(val)


def _subset_weights(w: np.ndarray, idx: np.ndarray) -> np.ndarray:
    total = np.zeros(len(idx))
    for a, b in combinations(range(idx.shape[1]), 2):
        total += w[idx[:, a], idx[:, b]]
    return total


def opt_densest_k_subgraph(inst: MetricInstance, k: int) -> tuple[NodeSubset, float]:
    n = inst.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for n={n}")
    if math.comb(n, k) > MAX_SUBSETS:
        raise OracleLimitError(f"C({n},{k}) exceeds {MAX_SUBSETS}")
    idx = np.array(list(combinations(range(n), k)), dtype=int)
    vals = _subset_weights(inst.weights, idx)
    best = int(np.argmax(vals))
    return NodeSubset(tuple(int(x) for x in idx[best])), float(vals[best])


def count_equal_partitions(n: int, k: int) -> int:
    gamma = n // k
    return math.factorial(n) // (math.factorial(gamma) ** k * math.factorial(k))


def opt_ksum_clustering(inst: MetricInstance, k: int) -> tuple[Clustering, float]:
    """Best partition into k equal clusters; each cluster is keyed by its
    lowest remaining agent so every partition is visited once."""
    n = inst.n
    if k < 1 or n % k:
        raise ValueError(f"k={k} must divide n={n}")
    if count_equal_partitions(n, k) > MAX_PARTITIONS:
        raise OracleLimitError(f"too many partitions for n={n}, k={k}")
    gamma = n // k
    w = inst.weights

    def rec(remaining: tuple[int, ...]):
        if not remaining:
            return 0.0, ()
        first, rest = remaining[0], remaining[1:]
        best_val, best_parts = -math.inf, ()
        for others in combinations(rest, gamma - 1):
            cluster = (first,) + others
            val = sum(w[a, b] for a, b in combinations(cluster, 2))
            sub_val, sub_parts = rec(tuple(x for x in rest if x not in others))
            if val + sub_val > best_val:
                best_val, best_parts = val + sub_val, (cluster,) + sub_parts
        return best_val, best_parts

    val, parts = rec(tuple(range(n)))
    return Clustering(parts), float(val)


def opt_max_tsp(inst: MetricInstance) -> tuple[Tour, float]:
    """Held-Karp over subsets, vectorised across each subset-size layer."""
    n = inst.n
    if n > MAX_TSP_N:
        raise OracleLimitError(f"n={n} exceeds TSP oracle limit {MAX_TSP_N}")
    if n < 3:
        raise ValueError("a tour needs n >= 3")
    w = inst.weights
    m = n - 1  # agent n-1 is the fixed start; subsets range over 0..n-2
    size = 1 << m
    dp = np.full((size, m), -np.inf)
    parent = np.full((size, m), -1, dtype=np.int64)
    for j in range(m):
        dp[1 << j, j] = w[n - 1, j]
    masks = np.arange(size)
    popcount = np.array([bin(x).count("1") for x in range(size)])
    for layer in range(2, m + 1):
        layer_masks = masks[popcount == layer]
        for j in range(m):
            sel = layer_masks[(layer_masks >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = dp[prev] + w[:m, j][None, :]
            # end node must lie in prev
            cand[((prev[:, None] >> np.arange(m)[None, :]) & 1) == 0] = -np.inf
            arg = np.argmax(cand, axis=1)
            dp[sel, j] = cand[np.arange(len(sel)), arg]
            parent[sel, j] = arg
    full = size - 1
    closing = dp[full] + w[:m, n - 1]
    last = int(np.argmax(closing))
    value = float(closing[last])
    order = []
    mask, j = full, last
    while j >= 0:
        order.append(j)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    order.append(n - 1)
    return Tour(tuple(order[::-1])), value
