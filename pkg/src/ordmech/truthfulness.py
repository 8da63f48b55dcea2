"""Single-agent misreport audits against the two truthfulness notions.

``check_truthful_in_expectation`` compares exact expected utilities;
``check_universal_truthfulness`` replays every deterministic member of a
mechanism's family under truth and under each misreport.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass
from typing import Iterator

from .core import MetricInstance, agent_utility
from .mechanisms import Mechanism, expected_utilities
from .ordinal import PreferenceProfile, induce_preferences
from .randomness import DEFAULT_BRANCH_GUARD

GAIN_TOL = 1e-9
FULL_ENUMERATION_MAX_N = 8


@dataclass(frozen=True)
class DeviationReport:
    agent: int
    truthful_utility: float
    best_misreport: tuple[int, ...]
    best_utility: float
    gain: float
    realization_witness: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["best_misreport"] = list(self.best_misreport)
        return d


def enumerate_misreports(n: int, i: int, sample: int | None = None,
                         seed: int = 0) -> Iterator[tuple[int, ...]]:
    """All rankings of the other agents in lexicographic order.

    Above ``FULL_ENUMERATION_MAX_N`` agents a ``sample`` size is required and a
    seeded random subset of that size is produced instead.
    """
    others = [j for j in range(n) if j != i]
    if n <= FULL_ENUMERATION_MAX_N and sample is None:
        yield from itertools.permutations(others)
        return
    if sample is None:
        raise ValueError(f"n={n} too large for full enumeration; pass sample=")
    rng = random.Random(seed)
    for _ in range(sample):
        yield tuple(rng.sample(others, len(others)))


def _agents(n: int, agents):
    return range(n) if agents is None else agents


def check_truthful_in_expectation(mech: Mechanism, inst: MetricInstance, tolerance: float = GAIN_TOL,
                                  profile: PreferenceProfile | None = None, agents=None,
                                  guard: int = DEFAULT_BRANCH_GUARD) -> list[DeviationReport]:
    """One report per agent that some misreport helps in expectation (the best one)."""
    truth = induce_preferences(inst) if profile is None else profile
    base = expected_utilities(mech, inst, truth, guard)
    reports = []
    for i in _agents(inst.n, agents):
        best = None
        for lie in enumerate_misreports(inst.n, i):
            if lie == truth.rankings[i]:
                continue
            u = expected_utilities(mech, inst, truth.with_ranking(i, lie), guard)[i]
            if u - base[i] > tolerance and (best is None or u > best[1]):
                best = (lie, u)
        if best is not None:
            reports.append(DeviationReport(i, float(base[i]), best[0], float(best[1]),
                                           float(best[1] - base[i])))
    return reports


def check_universal_truthfulness(mech: Mechanism, inst: MetricInstance, tolerance: float = GAIN_TOL,
                                 profile: PreferenceProfile | None = None,
                                 agents=None) -> list[DeviationReport]:
    """Per-realization audit; first violating (index, misreport) per agent is reported."""
    if mech.family is None or mech.fixed is None:
        raise ValueError(f"mechanism {mech.name!r} exposes no deterministic family")
    truth = induce_preferences(inst) if profile is None else profile
    indices = list(mech.family(truth))
    lies = {i: [(lie, truth.with_ranking(i, lie)) for lie in enumerate_misreports(inst.n, i)
                if lie != truth.rankings[i]]
            for i in _agents(inst.n, agents)}
    reports = []
    for i, agent_lies in lies.items():
        found = None
        for idx in indices:
            u_true = agent_utility(mech.fixed(truth, idx), inst, i)
            for lie, lied in agent_lies:
                u = agent_utility(mech.fixed(lied, idx), inst, i)
                if u - u_true > tolerance:
                    found = DeviationReport(i, u_true, lie, u, u - u_true, repr(idx))
                    break
            if found:
                break
        if found:
            reports.append(found)
    return reports


def check_semi_obliviousness(mech: Mechanism, inst: MetricInstance,
                             profile: PreferenceProfile | None = None) -> list[DeviationReport]:
    """Hybrid-DkS property: in any realization that selects agent ``i``,
    none of ``i``'s misreports changes the selected set."""
    if mech.name != "dks-hybrid":
        raise ValueError("semi-obliviousness is defined for dks-hybrid")
    truth = induce_preferences(inst) if profile is None else profile
    reports = []
    indices = list(mech.family(truth))
    for i in range(inst.n):
        lied = [(lie, truth.with_ranking(i, lie)) for lie in enumerate_misreports(inst.n, i)]
        found = None
        for idx in indices:
            chosen = mech.fixed(truth, idx)
            if i not in chosen:
                continue
            for lie, p in lied:
                alt = mech.fixed(p, idx)
                if alt != chosen:
                    u, v = agent_utility(chosen, inst, i), agent_utility(alt, inst, i)
                    found = DeviationReport(i, u, lie, v, v - u, repr(idx))
                    break
            if found:
                break
        if found:
            reports.append(found)
    return reports
