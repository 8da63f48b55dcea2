"""Max TSP: the truthful path-building dictatorship and the 1.88 pipeline."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .core import Matching, Path, Tour
from .matching import greedy_k_matching
from .ordinal import PreferenceProfile
from .randomness import RandomSource


def tsp_sd_fixed(profile: PreferenceProfile, edge: tuple[int, int], dead: int) -> Tour:
    """Path-building dictatorship for one (first edge, dead endpoint) realization.

    The live endpoint keeps extending the path to its favourite unvisited
    agent; the dead endpoint only receives its second edge when the cycle is
    closed.
    """
    n = profile.n
    if n < 3:
        raise ValueError(f"a tour needs n >= 3, got {n}")
    a, b = edge
    if dead not in edge or a == b:
        raise ValueError(f"dead node {dead} must be an endpoint of edge {edge}")
    live = b if dead == a else a
    order = [dead, live]
    available = set(range(n)) - {a, b}
    while available:
        live = profile.top(live, available)
        available.discard(live)
        order.append(live)
    return Tour(tuple(order))


def tsp_serial_dictatorship(profile: PreferenceProfile, rng: RandomSource) -> Tour:
    if profile.n < 3:
        raise ValueError(f"a tour needs n >= 3, got {profile.n}")
    edge = rng.choice(list(combinations(range(profile.n), 2)))
    dead = rng.choice(edge)
    return tsp_sd_fixed(profile, edge, dead)


def complete_matching_to_path(matching: Matching, profile: PreferenceProfile, rng: RandomSource,
                              edge_order: Sequence[tuple[int, int]] | None = None) -> Path:
    """Join the matching's edges into one Hamiltonian path on its nodes.

    A uniformly random matched node ``i`` fixes the first edge; the remaining
    edges follow ``edge_order`` (default: ascending), and the loose end of the
    path attaches to whichever endpoint of the next edge it prefers.
    """
    if len(matching) == 0:
        raise ValueError("cannot complete an empty matching")
    i = rng.choice(sorted(matching.nodes()))
    first = next(e for e in matching.edges() if i in e)
    rest = [e for e in (edge_order if edge_order is not None else matching.edges()) if e != first]
    if sorted(rest) != sorted(e for e in matching.edges() if e != first):
        raise ValueError("edge_order must list the matching's edges")
    a = first[1] if first[0] == i else first[0]
    order = [i, a]
    for y, z in rest:
        x = order[-1]
        order += [y, z] if profile.prefers(x, y, z) else [z, y]
    return Path(tuple(order))


def stitch_paths_to_tour(h1: Path, h2: Path, profile: PreferenceProfile) -> Tour:
    """Close two disjoint paths into a tour.

    With ends (a, b) of ``h1`` and (x, y) of ``h2``: add (a,x),(b,y) if ``a``
    prefers ``x`` to ``y``, otherwise (a,y),(b,x).
    """
    s1, s2 = set(h1.order), set(h2.order)
    if s1 & s2:
        raise ValueError(f"paths overlap on {sorted(s1 & s2)}")
    if s1 | s2 != set(range(profile.n)):
        raise ValueError("paths must cover every agent")
    a = h1.order[0]
    x, y = h2.ends
    if x != y and profile.prefers(a, x, y):
        return Tour(h1.order + h2.order[::-1])
    return Tour(h1.order + h2.order)


def tsp_subroutine1(profile: PreferenceProfile, rng: RandomSource) -> Tour:
    """Greedy N/3-matching completed to a path, stitched to a random path on the rest."""
    n = profile.n
    if n % 3 or n < 6:
        raise ValueError(f"subroutine 1 needs n divisible by 3 and n >= 6, got {n}")
    m = greedy_k_matching(profile, n // 3)
    h_top = complete_matching_to_path(m, profile, rng)
    bottom = sorted(set(range(n)) - m.nodes())
    h_bottom = Path(tuple(rng.shuffled(bottom)))
    return stitch_paths_to_tour(h_bottom, h_top, profile)


def tsp_subroutine2(profile: PreferenceProfile, rng: RandomSource) -> Tour:
    """Half of the greedy matching as a path, plus a random matched/unmatched
    alternating path through the other half and the unmatched agents."""
    n = profile.n
    if n % 6:
        raise ValueError(f"subroutine 2 needs n divisible by 6, got {n}")
    m = greedy_k_matching(profile, n // 3)
    kept = Matching(tuple(rng.sample(list(m.edges()), n // 6)))
    h_top = complete_matching_to_path(kept, profile, rng)
    side_a = sorted(m.nodes() - kept.nodes())
    side_b = sorted(set(range(n)) - m.nodes())
    order = []
    while side_a:
        u = rng.choice(side_a)
        v = rng.choice(side_b)
        order += [u, v]
        side_a.remove(u)
        side_b.remove(v)
    return stitch_paths_to_tour(Path(tuple(order)), h_top, profile)


def tsp_mix188(profile: PreferenceProfile, rng: RandomSource, coin: bool | None = None) -> Tour:
    """Subroutine 1 or 2 with probability 1/2 each; ``coin`` pins the choice."""
    if profile.n % 6:
        raise ValueError(f"the 1.88 pipeline needs n divisible by 6, got {profile.n}")
    if coin is None:
        coin = rng.coin(0.5)
    return tsp_subroutine1(profile, rng) if coin else tsp_subroutine2(profile, rng)
