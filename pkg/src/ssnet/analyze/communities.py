"""Resolution-parameterized modularity and multi-level community detection."""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Mapping

import networkx as nx

from ..model import Partition


def modularity(view: nx.Graph, assignment: Mapping, resolution: float = 1.0) -> float:
    """Q = sum_c [ L_c / m - resolution * (d_c / 2m)^2 ].

    ``L_c`` is the total weight of edges inside community ``c``, ``d_c`` the
    summed weighted degree of its members and ``m`` the total edge weight.
    """
    missing = [v for v in view.nodes if v not in assignment]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} vertices, e.g. {missing[:3]}")
    m = 0.0
    intra: dict = defaultdict(float)
    deg: dict = defaultdict(float)
    for u, v, w in view.edges(data="weight", default=1.0):
        cu, cv = assignment[u], assignment[v]
        m += w
        if cu == cv:
            intra[cu] += w
        deg[cu] += w
        deg[cv] += w
    if m <= 0:
        raise ValueError("modularity is undefined on a graph without edge weight")
    return sum(intra[c] / m - resolution * (deg[c] / (2 * m)) ** 2 for c in sorted(deg, key=str))


class _Level:
    """Compact weighted graph over integer nodes 0..n-1."""

    def __init__(self, n: int, adj: list[dict[int, float]], loops: list[float]):
        self.n = n
        self.adj = adj
        self.loops = loops
        self.k = [sum(a.values()) + 2 * loops[i] for i, a in enumerate(adj)]

    @classmethod
    def from_view(cls, view: nx.Graph, order: list) -> "_Level":
        index = {v: i for i, v in enumerate(order)}
        adj: list[dict[int, float]] = [{} for _ in order]
        loops = [0.0] * len(order)
        for u, v, w in view.edges(data="weight", default=1.0):
            i, j = index[u], index[v]
            if i == j:
                loops[i] += w
            else:
                adj[i][j] = adj[i].get(j, 0.0) + w
                adj[j][i] = adj[j].get(i, 0.0) + w
        for i in range(len(adj)):
            adj[i] = dict(sorted(adj[i].items()))
        return cls(len(order), adj, loops)

    def aggregate(self, comm: list[int], n_comm: int) -> "_Level":
        adj: list[dict[int, float]] = [{} for _ in range(n_comm)]
        loops = [0.0] * n_comm
        for i in range(self.n):
            ci = comm[i]
            loops[ci] += self.loops[i]
            for j, w in self.adj[i].items():
                cj = comm[j]
                if ci == cj:
                    if i < j:
                        loops[ci] += w
                else:
                    adj[ci][cj] = adj[ci].get(cj, 0.0) + w
        for i in range(n_comm):
            adj[i] = dict(sorted(adj[i].items()))
        return _Level(n_comm, adj, loops)


def _local_moving(level: _Level, resolution: float, m: float, max_passes: int = 1000) -> tuple[list[int], bool]:
    comm = list(range(level.n))
    tot = list(level.k)
    moved_any = False
    two_m = 2 * m
    for _ in range(max_passes):
        moved = False
        for i in range(level.n):
            ci = comm[i]
            ki = level.k[i]
            links: dict[int, float] = {}
            for j, w in level.adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            best_c = ci
            best_gain = links.get(ci, 0.0) - resolution * tot[ci] * ki / two_m
            for c, w_ic in links.items():
                gain = w_ic - resolution * tot[c] * ki / two_m
                if gain > best_gain + 1e-12 * m:
                    best_c, best_gain = c, gain
            tot[best_c] += ki
            if best_c != ci:
                comm[i] = best_c
                moved = moved_any = True
        if not moved:
            break
    return comm, moved_any


def _renumber(comm: list[int]) -> tuple[list[int], int]:
    mapping: dict[int, int] = {}
    out = []
    for c in comm:
        if c not in mapping:
            mapping[c] = len(mapping)
        out.append(mapping[c])
    return out, len(mapping)


def detect_communities(view: nx.Graph, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Multi-level local-moving modularity maximization.

    The vertex visit order is a seeded shuffle of the sorted vertex ids,
    drawn once; aggregated levels visit communities in order of first
    appearance, so the whole run is a pure function of (graph, resolution,
    seed).
    """
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    if view.number_of_edges() == 0:
        raise ValueError("community detection needs at least one edge")
    order = sorted(view.nodes, key=str)
    random.Random(seed).shuffle(order)
    level = _Level.from_view(view, order)
    m = sum(level.k) / 2
    membership = list(range(level.n))

    while True:
        comm, moved = _local_moving(level, resolution, m)
        if not moved:
            break
        comm, n_comm = _renumber(comm)
        membership = [comm[c] for c in membership]
        if n_comm == level.n:
            break
        level = level.aggregate(comm, n_comm)

    # canonical labels: communities numbered by their smallest member id
    groups: dict[int, list] = defaultdict(list)
    for v, c in zip(order, membership):
        groups[c].append(v)
    ranked = sorted(groups.values(), key=lambda members: min(map(str, members)))
    assignment = {v: label for label, members in enumerate(ranked) for v in members}
    assignment = {v: assignment[v] for v in sorted(assignment, key=str)}
    q = modularity(view, assignment, resolution)
    return Partition(assignment=assignment, modularity=q, resolution=resolution, seed=seed)
