"""k-sum clustering and Densest k-Subgraph mechanisms."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import Clustering, NodeSubset
from .matching import greedy_k_matching
from .ordinal import PreferenceProfile
from .randomness import RandomSource


def ksum_random_clustering(n: int, k: int, rng: RandomSource) -> Clustering:
    """Peel off uniformly random groups of size n/k; ignores preferences."""
    if k < 2 or k > n // 2:
        raise ValueError(f"k={k} out of range for n={n} (need 2 <= k <= n/2)")
    if n % k:
        raise ValueError(f"k={k} does not divide n={n}")
    gamma = n // k
    remaining = list(range(n))
    clusters = []
    for _ in range(k - 1):
        c = rng.sample(remaining, gamma)
        clusters.append(tuple(c))
        remaining = [x for x in remaining if x not in c]
    clusters.append(tuple(remaining))
    return Clustering(tuple(clusters))


def dks_hybrid(profile: PreferenceProfile, k: int, rng: RandomSource) -> NodeSubset:
    """Anchor/partner rounds: add {a,x} or {b,x} with equal chance.

    ``b`` is the anchor's favourite among the other available agents; it is
    the only input the profile contributes, and only when the anchor is
    discarded.
    """
    return dks_hybrid_rounds(profile, k, rng)[0]


def dks_hybrid_rounds(profile: PreferenceProfile, k: int, rng: RandomSource):
    """``dks_hybrid`` plus the (anchor, partner, keep_anchor) triple of each round."""
    n = profile.n
    if k % 2 or not 2 <= k <= n // 2:
        raise ValueError(f"dks_hybrid needs even k with 2 <= k <= n/2, got k={k}, n={n}")
    available = list(range(n))
    chosen: list[int] = []
    rounds = []
    while len(chosen) < k:
        a = rng.choice(available)
        x = rng.choice([v for v in available if v != a])
        heads = rng.coin(0.5)
        rounds.append((a, x, heads))
        if heads:
            chosen += [a, x]
            available = [v for v in available if v not in (a, x)]
        else:
            b = profile.top(a, [v for v in available if v not in (a, x)])
            chosen += [b, x]
            available = [v for v in available if v not in (a, b, x)]
    return NodeSubset(tuple(chosen)), rounds


def dks_hybrid_fixed(profile: PreferenceProfile, k: int, anchor_order: Sequence[int],
                     partner_order: Sequence[int], coins: Sequence[bool]) -> NodeSubset:
    """Deterministic member of the hybrid family.

    Each round the anchor is the first available agent of ``anchor_order``,
    the partner the first available agent of ``partner_order`` other than the
    anchor, and ``coins[r]`` says whether round ``r`` keeps the anchor.
    """
    n = profile.n
    if k % 2 or not 2 <= k <= n // 2:
        raise ValueError(f"dks_hybrid needs even k with 2 <= k <= n/2, got k={k}, n={n}")
    available = set(range(n))
    chosen: list[int] = []
    r = 0
    while len(chosen) < k:
        a = next(v for v in anchor_order if v in available)
        x = next(v for v in partner_order if v in available and v != a)
        if coins[r]:
            chosen += [a, x]
            available -= {a, x}
        else:
            b = profile.top(a, available - {a, x})
            chosen += [b, x]
            available -= {a, b, x}
        r += 1
    return NodeSubset(tuple(chosen))


def dks_random_trivial(n: int, k: int, rng: RandomSource) -> NodeSubset:
    """Uniform k-subset; the fallback for k >= n/2."""
    if 2 * k < n or k > n:
        raise ValueError(f"dks_random_trivial needs n/2 <= k <= n, got k={k}, n={n}")
    return NodeSubset(tuple(rng.sample(range(n), k)))


def bicriteria_dks(profile: PreferenceProfile, k: int, beta: float = 1.0) -> NodeSubset:
    """Endpoints of a greedy matching with beta*k/2 edges (beta=1: size exactly k)."""
    if not 1 <= beta <= 2:
        raise ValueError(f"beta={beta} outside [1, 2]")
    size = Fraction(beta).limit_denominator(1000) * k
    if size.denominator != 1 or size % 2:
        raise ValueError(f"beta*k/2 = {float(size) / 2} is not an integer")
    size = int(size)
    if size > profile.n:
        raise ValueError(f"beta*k = {size} exceeds n = {profile.n}")
    m = greedy_k_matching(profile, size // 2)
    return NodeSubset(tuple(sorted(m.nodes())))
