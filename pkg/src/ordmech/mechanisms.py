"""Uniform descriptors for every mechanism, plus exact and sampled evaluation.

A :class:`Mechanism` bundles a randomized ``run(profile, rng)`` with the
deterministic family it is a distribution over (when it has one). The
truthfulness auditor and the experiment harness only talk to descriptors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Any, Callable, Iterable

import numpy as np

from . import clustering, matching, tsp
from .core import MetricInstance, Solution, social_welfare, utilities
from .ordinal import PreferenceProfile, induce_preferences
from .randomness import DEFAULT_BRANCH_GUARD, RandomSource, enumerate_outcomes

PROBLEMS = {
    "greedy": "matching", "sd": "matching", "random": "matching", "rsd": "matching",
    "mix": "matching",
    "ksum": "clustering",
    "dks-hybrid": "dks", "dks-trivial": "dks", "dks-bicriteria": "dks",
    "tsp-sd": "tsp", "tsp-188": "tsp", "tsp-sub1": "tsp", "tsp-sub2": "tsp",
}


@dataclass(frozen=True)
class Mechanism:
    name: str
    problem: str
    n: int
    k: int | None
    run: Callable[[PreferenceProfile, RandomSource], Solution]
    # profile -> iterable of deterministic indices; None when not exposed
    family: Callable[[PreferenceProfile], Iterable[Any]] | None = None
    fixed: Callable[[PreferenceProfile, Any], Solution] | None = None
    oblivious: bool = False
    beta: float | None = None
    params: dict = field(default_factory=dict)


def make_mechanism(name: str, n: int, k: int | None = None, beta: float | None = None,
                   order=None) -> Mechanism:
    """Build the descriptor for ``name`` on ``n`` agents."""
    if name not in PROBLEMS:
        raise ValueError(f"unknown mechanism {name!r}; choose from {sorted(PROBLEMS)}")
    problem = PROBLEMS[name]
    common = dict(name=name, problem=problem, n=n, k=k)

    if name == "greedy":
        return Mechanism(**common, run=lambda p, rng: matching.greedy_k_matching(p, k),
                         family=lambda p: [None],
                         fixed=lambda p, _: matching.greedy_k_matching(p, k))
    if name == "sd":
        order = tuple(order) if order is not None else tuple(range(n))
        return Mechanism(**common,
                         run=lambda p, rng: matching.serial_dictatorship_k_matching(p, k, order),
                         family=lambda p: [order],
                         fixed=lambda p, o: matching.serial_dictatorship_k_matching(p, k, o),
                         params={"order": order})
    if name == "random":
        return Mechanism(**common, run=lambda p, rng: matching.random_k_matching(n, k, rng),
                         family=lambda p: matching.all_k_matchings(n, k),
                         fixed=lambda p, m: m, oblivious=True)
    if name == "rsd":
        return Mechanism(**common, run=lambda p, rng: matching.rsd_k_matching(p, k, rng),
                         family=lambda p: permutations(range(n)),
                         fixed=lambda p, o: matching.serial_dictatorship_k_matching(p, k, o))
    if name == "mix":
        def mix_fixed(p, idx):
            return matching.greedy_k_matching(p, n // 2) if idx is None else idx

        return Mechanism(name=name, problem=problem, n=n, k=n // 2,
                         run=lambda p, rng: matching.greedy_random_mix_perfect(p, n, rng),
                         family=lambda p: [None, *matching.all_k_matchings(n, n // 2)],
                         fixed=mix_fixed)
    if name == "ksum":
        return _oblivious(common, lambda p, rng: clustering.ksum_random_clustering(n, k, rng))
    if name == "dks-trivial":
        return _oblivious(common, lambda p, rng: clustering.dks_random_trivial(n, k, rng))
    if name == "dks-hybrid":
        return Mechanism(**common, run=lambda p, rng: clustering.dks_hybrid(p, k, rng),
                         family=lambda p: _hybrid_family(p, k),
                         fixed=lambda p, idx: clustering.dks_hybrid_fixed(p, k, *idx))
    if name == "dks-bicriteria":
        beta = 1.0 if beta is None else beta
        return Mechanism(**common, beta=beta,
                         run=lambda p, rng: clustering.bicriteria_dks(p, k, beta),
                         family=lambda p: [None],
                         fixed=lambda p, _: clustering.bicriteria_dks(p, k, beta))
    if name == "tsp-sd":
        return Mechanism(**common, run=tsp.tsp_serial_dictatorship,
                         family=lambda p: [(e, d) for e in combinations(range(n), 2) for d in e],
                         fixed=lambda p, idx: tsp.tsp_sd_fixed(p, *idx))
    runs = {"tsp-188": tsp.tsp_mix188, "tsp-sub1": tsp.tsp_subroutine1,
            "tsp-sub2": tsp.tsp_subroutine2}
    return Mechanism(**common, run=runs[name])


def _oblivious(common: dict, run) -> Mechanism:
    n = common["n"]
    dummy = induce_preferences(MetricInstance(np.ones((n, n)) - np.eye(n)))

    def family(p):
        return sorted({sol for _, sol in enumerate_outcomes(lambda rng: run(dummy, rng))}, key=repr)

    return Mechanism(**common, run=run, family=family, fixed=lambda p, sol: sol, oblivious=True)


def _hybrid_family(profile: PreferenceProfile, k: int):
    """One coupled deterministic index per enumerated branch of the hybrid.

    A branch's anchors (in round order) followed by everyone else form the
    anchor permutation; likewise for partners. Replaying that index under the
    truthful profile reproduces the branch exactly.
    """
    n = profile.n
    seen = set()
    for _, (_, rounds) in enumerate_outcomes(lambda rng: clustering.dks_hybrid_rounds(profile, k, rng)):
        anchors = [a for a, _, _ in rounds]
        partners = [x for _, x, _ in rounds]
        idx = (
            tuple(anchors + [v for v in range(n) if v not in anchors]),
            tuple(partners + [v for v in range(n) if v not in partners]),
            tuple(c for _, _, c in rounds),
        )
        if idx not in seen:
            seen.add(idx)
            yield idx


# --- evaluation ------------------------------------------------------------

def outcome_distribution(mech: Mechanism, profile: PreferenceProfile,
                         guard: int = DEFAULT_BRANCH_GUARD) -> list[tuple[float, Solution]]:
    """Exact distribution over solutions, identical solutions merged."""
    dist: dict = {}
    for prob, sol in enumerate_outcomes(lambda rng: mech.run(profile, rng), guard):
        dist[sol] = dist.get(sol, 0.0) + prob
    mass = math.fsum(dist.values())
    if not math.isclose(mass, 1.0, abs_tol=1e-9):
        raise AssertionError(f"branch probabilities sum to {mass}")
    return [(p, s) for s, p in dist.items()]


def exact_expectation(mech: Mechanism, inst: MetricInstance, profile: PreferenceProfile | None = None,
                      guard: int = DEFAULT_BRANCH_GUARD) -> float:
    """Exact expected social welfare; truthful profile unless one is given."""
    profile = induce_preferences(inst) if profile is None else profile
    return math.fsum(p * social_welfare(sol, inst) for p, sol in outcome_distribution(mech, profile, guard))


def expected_utilities(mech: Mechanism, inst: MetricInstance, profile: PreferenceProfile,
                       guard: int = DEFAULT_BRANCH_GUARD) -> np.ndarray:
    total = np.zeros(inst.n)
    for p, sol in outcome_distribution(mech, profile, guard):
        total += p * utilities(sol, inst)
    return total


def monte_carlo(mech: Mechanism, inst: MetricInstance, samples: int, seed: int,
                profile: PreferenceProfile | None = None) -> tuple[float, float]:
    """Sample mean and standard error of social welfare."""
    profile = induce_preferences(inst) if profile is None else profile
    rng = RandomSource(seed)
    w = inst.weights.tolist()
    vals = np.empty(samples)
    for s in range(samples):
        sol = mech.run(profile, rng)
        vals[s] = sum(w[a][b] for a, b in sol.edges())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(vals.mean()), se
