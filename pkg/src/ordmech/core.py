"""Domain types shared by every mechanism, plus validation and utility accounting.

Agents are dense indices ``0..n-1``. All solution types are immutable and
expose their edge multiset through ``edges()``; welfare and per-agent utility
are both computed from that single view so the two can never disagree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

TRIANGLE_EPS = 1e-9

Edge = tuple[int, int]


def _edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Hidden ground truth: a symmetric nonnegative weight matrix."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("an instance needs at least 2 agents")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def w(self, i: int, j: int) -> float:
        return float(self.weights[i, j])

    def total_weight(self) -> float:
        return float(np.triu(self.weights, 1).sum())

    def relabel(self, perm) -> "MetricInstance":
        """Instance where new agent ``perm[i]`` plays old agent ``i``."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return MetricInstance(self.weights[np.ix_(inv, inv)])

    def __eq__(self, other):
        return isinstance(other, MetricInstance) and np.array_equal(self.weights, other.weights)

    __hash__ = None


@dataclass(frozen=True)
class Matching:
    edges_: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted(_edge(i, j) for i, j in self.edges_))
        seen = set()
        for i, j in edges:
            if i == j or i in seen or j in seen:
                raise ValueError(f"not a matching: {edges}")
            seen.update((i, j))
        object.__setattr__(self, "edges_", edges)

    def edges(self) -> Iterator[Edge]:
        return iter(self.edges_)

    def nodes(self) -> frozenset[int]:
        return frozenset(x for e in self.edges_ for x in e)

    def partner(self, i: int) -> int | None:
        for a, b in self.edges_:
            if a == i:
                return b
            if b == i:
                return a
        return None

    def __len__(self):
        return len(self.edges_)


@dataclass(frozen=True)
class Clustering:
    clusters: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clusters = tuple(sorted(tuple(sorted(c)) for c in self.clusters))
        members = [x for c in clusters for x in c]
        if len(set(members)) != len(members):
            raise ValueError("clusters overlap")
        if len({len(c) for c in clusters}) > 1:
            raise ValueError("clusters must have equal size")
        object.__setattr__(self, "clusters", clusters)

    def edges(self) -> Iterator[Edge]:
        for c in self.clusters:
            yield from itertools.combinations(c, 2)


@dataclass(frozen=True)
class NodeSubset:
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(set(self.members)))
        if len(members) != len(self.members):
            raise ValueError("duplicate members")
        object.__setattr__(self, "members", members)

    def edges(self) -> Iterator[Edge]:
        return itertools.combinations(self.members, 2)

    def __contains__(self, i):
        return i in self.members

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class Path:
    """Hamiltonian path over its own node set, listed end to end."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(self.order)
        if len(set(order)) != len(order) or not order:
            raise ValueError(f"invalid path {order}")
        object.__setattr__(self, "order", order)

    @property
    def ends(self) -> tuple[int, int]:
        return self.order[0], self.order[-1]

    def edges(self) -> Iterator[Edge]:
        return (_edge(a, b) for a, b in zip(self.order, self.order[1:]))


@dataclass(frozen=True)
class Tour:
    """Cyclic order; normalised to start at the lowest agent, lexicographically
    smaller direction first, so equal tours compare equal."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = list(self.order)
        if len(set(order)) != len(order) or len(order) < 3:
            raise ValueError(f"invalid tour {order}")
        s = order.index(min(order))
        order = order[s:] + order[:s]
        if order[-1] < order[1]:
            order = [order[0]] + order[1:][::-1]
        object.__setattr__(self, "order", tuple(order))

    def edges(self) -> Iterator[Edge]:
        o = self.order
        return (_edge(o[t], o[(t + 1) % len(o)]) for t in range(len(o)))


Solution = Union[Matching, Clustering, NodeSubset, Path, Tour]


def validate_instance(inst: MetricInstance, eps: float = TRIANGLE_EPS) -> list[str]:
    """List every violated invariant; an empty list means a valid metric."""
    w = inst.weights
    n = inst.n
    violations = []
    for i, j in zip(*np.nonzero(np.abs(w - w.T) > 0)):
        if i < j:
            violations.append(f"asymmetric: w({i},{j})={w[i, j]} != w({j},{i})={w[j, i]}")
    for i in np.nonzero(np.diag(w) != 0)[0]:
        violations.append(f"nonzero diagonal at {i}")
    for i, j in zip(*np.nonzero(w < 0)):
        if i <= j:
            violations.append(f"negative weight w({i},{j})={w[i, j]}")
    # slack[i, k, j] = w(i,k) + w(k,j) - w(i,j)
    slack = w[:, :, None] + w[None, :, :] - w[:, None, :]
    for i, k, j in zip(*np.nonzero(slack < -eps)):
        if i < j and k != i and k != j:
            violations.append(
                f"triangle: w({i},{j})={w[i, j]} > w({i},{k})+w({k},{j})={w[i, k] + w[k, j]}"
            )
    return violations


def social_welfare(solution: Solution, inst: MetricInstance) -> float:
    return float(sum(inst.weights[i, j] for i, j in solution.edges()))


def agent_utility(solution: Solution, inst: MetricInstance, i: int) -> float:
    if not 0 <= i < inst.n:
        raise IndexError(f"agent {i} out of range for n={inst.n}")
    w = inst.weights
    return float(sum(w[a, b] for a, b in solution.edges() if a == i or b == i))


def utilities(solution: Solution, inst: MetricInstance) -> np.ndarray:
    u = np.zeros(inst.n)
    for a, b in solution.edges():
        u[a] += inst.weights[a, b]
        u[b] += inst.weights[a, b]
    return u


# --- JSON -----------------------------------------------------------------

_KIND = {Matching: "matching", Clustering: "clustering", NodeSubset: "subset", Tour: "tour", Path: "path"}


def instance_to_json(inst: MetricInstance) -> str:
    return json.dumps({"n": inst.n, "weights": inst.weights.tolist()})


def instance_from_json(text: str) -> MetricInstance:
    data = json.loads(text)
    inst = MetricInstance(data["weights"])
    if data.get("n", inst.n) != inst.n:
        raise ValueError(f"n={data['n']} does not match a {inst.n}x{inst.n} matrix")
    return inst


def solution_to_dict(solution: Solution) -> dict:
    kind = _KIND[type(solution)]
    if isinstance(solution, Matching):
        data = [list(e) for e in solution.edges_]
    elif isinstance(solution, Clustering):
        data = [list(c) for c in solution.clusters]
    elif isinstance(solution, NodeSubset):
        data = list(solution.members)
    else:
        data = list(solution.order)
    return {"type": kind, "data": data}


def solution_from_dict(d: dict) -> Solution:
    kind, data = d["type"], d["data"]
    if kind == "matching":
        return Matching(tuple(tuple(e) for e in data))
    if kind == "clustering":
        return Clustering(tuple(tuple(c) for c in data))
    if kind == "subset":
        return NodeSubset(tuple(data))
    if kind == "tour":
        return Tour(tuple(data))
    if kind == "path":
        return Path(tuple(data))
    raise ValueError(f"unknown solution type {kind!r}")
