"""Greedy, serial-dictatorship and random mechanisms for Max k-Matching."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .core import Matching
from .ordinal import PreferenceProfile, find_undominated_edge
from .randomness import RandomSource

MIX_GREEDY_PROB = 3 / 7


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n // 2:
        raise ValueError(f"k={k} out of range for n={n} (need 1 <= k <= n/2)")


@lru_cache(maxsize=4096)
def greedy_k_matching(profile: PreferenceProfile, k: int) -> Matching:
    """Repeatedly take an undominated edge among the still-unmatched agents."""
    _check_k(profile.n, k)
    active = set(range(profile.n))
    edges = []
    while len(edges) < k:
        x, y = find_undominated_edge(profile, active)
        edges.append((x, y))
        active -= {x, y}
    return Matching(tuple(edges))


def greedy_order(profile: PreferenceProfile, k: int) -> list[tuple[int, int]]:
    """Greedy edges in the order they were picked."""
    _check_k(profile.n, k)
    active = set(range(profile.n))
    edges = []
    while len(edges) < k:
        x, y = find_undominated_edge(profile, active)
        edges.append((min(x, y), max(x, y)))
        active -= {x, y}
    return edges


def serial_dictatorship_k_matching(profile: PreferenceProfile, k: int,
                                   order: Sequence[int]) -> Matching:
    n = profile.n
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {list(order)} is not a permutation of 0..{n - 1}")
    _check_k(n, k)
    available = set(range(n))
    edges = []
    for x in order:
        if len(edges) == k:
            break
        if x not in available:
            continue
        y = profile.top(x, available)
        edges.append((x, y))
        available -= {x, y}
    return Matching(tuple(edges))


@lru_cache(maxsize=64)
def all_k_matchings(n: int, k: int) -> tuple[Matching, ...]:
    """Every matching of exactly ``k`` edges on ``n`` agents."""
    out = []

    def rec(remaining: tuple[int, ...], need: int, acc: list):
        if need == 0:
            out.append(Matching(tuple(acc)))
            return
        if len(remaining) < 2 * need:
            return
        first, rest = remaining[0], remaining[1:]
        for idx, j in enumerate(rest):
            rec(rest[:idx] + rest[idx + 1:], need - 1, acc + [(first, j)])
        rec(rest, need, acc)

    rec(tuple(range(n)), k, [])
    return tuple(out)


def random_k_matching(n: int, k: int, rng: RandomSource) -> Matching:
    """Uniform edge among the remaining valid edges, k times.

    Every ordered draw sequence has probability ``prod 1/C(n-2j, 2)``, so each
    k-matching is equally likely; enumerated mode uses that directly.
    """
    _check_k(n, k)
    if rng.enumerating:
        return rng.choice(all_k_matchings(n, k))
    available = list(range(n))
    edges = []
    for _ in range(k):
        x, y = rng.choice(list(combinations(available, 2)))
        edges.append((x, y))
        available.remove(x)
        available.remove(y)
    return Matching(tuple(edges))


def rsd_k_matching(profile: PreferenceProfile, k: int, rng: RandomSource) -> Matching:
    """Serial dictatorship with each dictator uniform among remaining agents."""
    n = profile.n
    _check_k(n, k)
    available = set(range(n))
    edges = []
    while len(edges) < k:
        x = rng.choice(sorted(available))
        y = profile.top(x, available)
        edges.append((x, y))
        available -= {x, y}
    return Matching(tuple(edges))


def greedy_random_mix_perfect(profile: PreferenceProfile, n: int, rng: RandomSource) -> Matching:
    """Greedy perfect matching w.p. 3/7, uniform random perfect matching w.p. 4/7."""
    if n % 2:
        raise ValueError(f"perfect matching needs even n, got {n}")
    if profile.n != n:
        raise ValueError(f"profile has {profile.n} agents, expected {n}")
    if rng.coin(MIX_GREEDY_PROB):
        return greedy_k_matching(profile, n // 2)
    return random_k_matching(n, n // 2, rng)
