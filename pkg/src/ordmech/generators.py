"""Instance generators: Euclidean points, shortest-path metrics, the
densest-subgraph lower-bound clusters, and the greedy non-truthfulness witness."""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .core import MetricInstance, agent_utility
from .matching import greedy_k_matching
from .ordinal import PreferenceProfile, induce_preferences
from .truthfulness import enumerate_misreports


def gen_euclidean(n: int, dim: int, seed: int) -> MetricInstance:
    """n uniform points in the unit cube, weighted by Euclidean distance."""
    if n < 2 or dim < 1:
        raise ValueError(f"need n >= 2 and dim >= 1, got n={n}, dim={dim}")
    pts = np.random.default_rng(seed).random((n, dim))
    diff = pts[:, None, :] - pts[None, :, :]
    w = np.sqrt((diff**2).sum(axis=-1))
    w = (w + w.T) / 2
    np.fill_diagonal(w, 0.0)
    return MetricInstance(w)


def metric_closure(weights) -> np.ndarray:
    """All-pairs shortest-path distances; the identity on metric matrices.

    Zero off-diagonal entries are read as missing edges.
    """
    w = np.asarray(weights, dtype=float)
    return shortest_path(w, method="FW", directed=False)


def gen_metric_closure(n: int, density: float, seed: int, max_weight: int = 100) -> MetricInstance:
    """Random integer weights on a connected G(n, density), closed under shortest paths.

    Integer weights keep the closure exact, so the triangle inequality holds
    with no tolerance at all.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)
    w = np.zeros((n, n))
    upper = np.triu(rng.random((n, n)) < density, 1)
    # random spanning path keeps the graph connected
    perm = rng.permutation(n)
    upper[np.minimum(perm[:-1], perm[1:]), np.maximum(perm[:-1], perm[1:])] = True
    vals = rng.integers(1, max_weight + 1, size=(n, n)).astype(float)
    w[upper] = vals[upper]
    w = w + w.T
    return MetricInstance(metric_closure(w))


def gen_random_symmetric(n: int, seed: int) -> MetricInstance:
    """Symmetric uniform(0,1) weights with no triangle-inequality guarantee."""
    rng = np.random.default_rng(seed)
    w = np.triu(rng.random((n, n)), 1)
    return MetricInstance(w + w.T)


def gen_dks_lower_bound(m_clusters: int, k: int, seed: int) -> tuple[MetricInstance, int]:
    """m_clusters blocks of k agents; one hidden block has internal weight 2,
    every other pair weight 1. Block c holds agents c*k .. c*k+k-1."""
    if m_clusters < 2 or k < 2:
        raise ValueError(f"need m_clusters >= 2 and k >= 2, got {m_clusters}, {k}")
    hidden = int(np.random.default_rng(seed).integers(m_clusters))
    n = m_clusters * k
    w = np.ones((n, n))
    block = slice(hidden * k, hidden * k + k)
    w[block, block] = 2.0
    np.fill_diagonal(w, 0.0)
    return MetricInstance(w), hidden


def cluster_profile(m_clusters: int, k: int) -> PreferenceProfile:
    """Rankings of the lower-bound construction: own block first, then the rest,
    each part in index order. It is the same whichever block is hidden."""
    n = m_clusters * k
    rankings = []
    for i in range(n):
        c = i // k
        inside = [j for j in range(c * k, c * k + k) if j != i]
        outside = [j for j in range(n) if j // k != c]
        rankings.append(tuple(inside + outside))
    return PreferenceProfile(tuple(rankings))


class WitnessSearchError(RuntimeError):
    pass


def gen_greedy_nontruthful_regression(seed: int, n: int = 6, k: int = 1,
                                      attempts: int = 2000) -> tuple[MetricInstance, int, tuple[int, ...]]:
    """Search Euclidean instances for an agent that gains against greedy k-matching by lying.

    Returns ``(instance, agent, misreport)``; the deviation is replayed before
    returning, so the witness is valid under this package's tie-breaking.
    """
    if not 1 <= k < n // 2:
        raise ValueError(f"need 1 <= k < n/2 for a non-truthful witness, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        inst = gen_euclidean(n, 2, int(rng.integers(2**63)))
        truth = induce_preferences(inst)
        base = greedy_k_matching(truth, k)
        for i in range(n):
            if base.partner(i) is not None:
                continue
            for lie in enumerate_misreports(n, i):
                alt = greedy_k_matching(truth.with_ranking(i, lie), k)
                if agent_utility(alt, inst, i) > agent_utility(base, inst, i) + 1e-9:
                    return inst, i, lie
    raise WitnessSearchError(f"no deviation found in {attempts} attempts (n={n}, k={k})")
