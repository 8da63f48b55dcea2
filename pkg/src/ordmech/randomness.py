"""Seedable randomness with an exhaustive branch-enumeration mode.

Mechanisms draw every random bit through a :class:`RandomSource`. In
``sampled`` mode the source is an ordinary seeded PRNG. In ``enumerated`` mode
the source replays a fixed prefix of choice indices and records each choice
point it meets; :func:`enumerate_outcomes` uses that trace to walk the full
tree of random branches depth-first, re-running the mechanism once per leaf.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Iterator, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

DEFAULT_BRANCH_GUARD = 10**7


class EnumerationLimitError(RuntimeError):
    """Raised when exhaustive enumeration would exceed its branch guard."""


class RandomSource:
    def __init__(self, seed: int = 0, mode: str = "sampled", _prefix: Sequence[int] = ()):
        if mode not in ("sampled", "enumerated"):
            raise ValueError(f"unknown mode {mode!r}")
        self.seed = seed
        self.mode = mode
        self._rng = random.Random(seed) if mode == "sampled" else None
        self._prefix = list(_prefix)
        self.trace: list[tuple[int, int]] = []
        self.probability = 1.0

    @property
    def enumerating(self) -> bool:
        return self.mode == "enumerated"

    def choice(self, options: Sequence[T], weights: Sequence[float] | None = None) -> T:
        """Pick one option, uniformly unless ``weights`` (summing to 1) is given."""
        n = len(options)
        if n == 0:
            raise ValueError("choice from an empty sequence")
        if self._rng is not None:
            if weights is None:
                return options[self._rng.randrange(n)]
            return self._rng.choices(options, weights=weights)[0]
        depth = len(self.trace)
        idx = self._prefix[depth] if depth < len(self._prefix) else 0
        self.trace.append((idx, n))
        self.probability *= weights[idx] if weights is not None else 1.0 / n
        return options[idx]

    def coin(self, p: float) -> bool:
        """True with probability ``p``."""
        return self.choice((True, False), (p, 1.0 - p))

    def shuffled(self, items: Sequence[T]) -> list[T]:
        """Uniform random permutation built from sequential uniform draws."""
        pool = list(items)
        out = []
        while pool:
            x = self.choice(pool)
            pool.remove(x)
            out.append(x)
        return out

    def sample(self, items: Sequence[T], size: int) -> list[T]:
        """Uniform ``size``-subset, returned sorted (order carries no information)."""
        if self._rng is not None:
            return sorted(self._rng.sample(list(items), size))
        from itertools import combinations

        return list(self.choice(list(combinations(sorted(items), size))))


def enumerate_outcomes(
    run: Callable[[RandomSource], T], guard: int = DEFAULT_BRANCH_GUARD
) -> Iterator[tuple[float, T]]:
    """Yield ``(probability, outcome)`` for every random branch of ``run``."""
    prefix: list[int] = []
    count = 0
    while True:
        count += 1
        if count > guard:
            raise EnumerationLimitError(f"more than {guard} branches")
        src = RandomSource(mode="enumerated", _prefix=prefix)
        out = run(src)
        if src.probability > 0:
            yield src.probability, out
        trace = src.trace
        while trace and trace[-1][0] + 1 >= trace[-1][1]:
            trace.pop()
        if not trace:
            return
        prefix = [c for c, _ in trace[:-1]] + [trace[-1][0] + 1]


def expectation(run: Callable[[RandomSource], T], value: Callable[[T], float],
                guard: int = DEFAULT_BRANCH_GUARD) -> float:
    total = 0.0
    mass = 0.0
    for p, out in enumerate_outcomes(run, guard):
        total += p * value(out)
        mass += p
    if not math.isclose(mass, 1.0, abs_tol=1e-9):
        raise AssertionError(f"branch probabilities sum to {mass}")
    return total


def derive_seed(master: int, *keys: int) -> int:
    """Independent 64-bit child seed for ``(master, *keys)``."""
    ss = np.random.SeedSequence([master & (2**64 - 1), *keys])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
