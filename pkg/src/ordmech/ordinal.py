"""Preference profiles and the ordinal primitives mechanisms are built from.

Nothing below the profile constructor ever sees a weight matrix; that is the
information boundary every mechanism in this package respects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .core import MetricInstance


@dataclass(frozen=True)
class PreferenceProfile:
    """``rankings[i]`` lists every other agent, most preferred first."""

    rankings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rankings = tuple(tuple(int(x) for x in r) for r in self.rankings)
        n = len(rankings)
        for i, r in enumerate(rankings):
            if sorted(r) != [j for j in range(n) if j != i]:
                raise ValueError(f"ranking of agent {i} is not a permutation of the others: {r}")
        object.__setattr__(self, "rankings", rankings)

    @property
    def n(self) -> int:
        return len(self.rankings)

    @cached_property
    def rank(self) -> tuple[tuple[int, ...], ...]:
        """``rank[i][j]`` is the position of ``j`` in ``i``'s list (self = n)."""
        n = self.n
        out = []
        for i, r in enumerate(self.rankings):
            pos = [n] * n
            for p, j in enumerate(r):
                pos[j] = p
            out.append(tuple(pos))
        return tuple(out)

    def prefers(self, i: int, a: int, b: int) -> bool:
        """Whether ``i`` strictly prefers ``a`` to ``b``."""
        r = self.rank[i]
        return r[a] < r[b]

    def top(self, i: int, candidates: Iterable[int]) -> int:
        """``i``'s most preferred agent among ``candidates`` (``i`` excluded)."""
        r = self.rank[i]
        return min((c for c in candidates if c != i), key=r.__getitem__)

    def with_ranking(self, i: int, ranking: Sequence[int]) -> "PreferenceProfile":
        rankings = list(self.rankings)
        rankings[i] = tuple(ranking)
        return PreferenceProfile(tuple(rankings))

    def to_json(self) -> str:
        return json.dumps({"rankings": [list(r) for r in self.rankings]})

    @classmethod
    def from_json(cls, text: str) -> "PreferenceProfile":
        return cls(tuple(tuple(r) for r in json.loads(text)["rankings"]))


def induce_preferences(inst: MetricInstance) -> PreferenceProfile:
    """Truthful profile: descending weight, ties to the lower index."""
    w = inst.weights
    rankings = []
    for i in range(inst.n):
        others = [j for j in range(inst.n) if j != i]
        rankings.append(tuple(sorted(others, key=lambda j: (-w[i, j], j))))
    return PreferenceProfile(tuple(rankings))


def is_consistent(profile: PreferenceProfile, inst: MetricInstance, eps: float = 0.0) -> bool:
    """True when every ranking is non-increasing in the hidden weights."""
    w = inst.weights
    for i, r in enumerate(profile.rankings):
        vals = w[i, list(r)]
        if np.any(np.diff(vals) > eps):
            return False
    return True


def find_undominated_edge(profile: PreferenceProfile, active) -> tuple[int, int]:
    """Undominated edge among ``active`` agents, from rankings alone.

    Follows first-choice pointers from the lowest-index active agent until an
    agent repeats, then returns the pointer edge that closed the cycle.
    """
    active = set(active)
    if len(active) < 2:
        raise ValueError("need at least two active agents")
    u = min(active)
    visited = {u}
    while True:
        v = profile.top(u, active)
        if v in visited:
            return (u, v)
        visited.add(v)
        u = v
