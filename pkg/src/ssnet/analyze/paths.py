"""Shortest-path metrics: diameter, average path length, closeness, betweenness.

Betweenness uses Brandes' dependency accumulation (BFS for the unweighted
default, Dijkstra with distance = 1/weight in weighted mode). Per-source work
runs in fixed-size chunks via :func:`ssnet._parallel.chunked_map`, so results
are bit-identical for any worker count.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

import networkx as nx

from .._parallel import chunked_map


@dataclass(frozen=True)
class PathMetrics:
    diameter: int
    avg_path_length: float
    component_coverage: float
    component_size: int


@dataclass(frozen=True)
class CentralityRow:
    label: str
    closeness: float  # mean distance to reachable vertices; NaN when isolated
    closeness_standard: float  # reciprocal of the above; 0 when isolated
    betweenness: float
    normalized_betweenness: float
    size: int = 1


@dataclass
class CentralityTable:
    rows: list[CentralityRow] = field(default_factory=list)

    def by_label(self) -> dict[str, CentralityRow]:
        return {r.label: r for r in self.rows}

    def top(self, k: int = 10) -> list[CentralityRow]:
        return sorted(self.rows, key=lambda r: (-r.betweenness, r.label))[:k]


def largest_component(view: nx.Graph) -> set:
    """Largest connected component; ties go to the one with the smallest vertex id."""
    comps = sorted(nx.connected_components(view), key=lambda c: (-len(c), min(map(str, c))))
    return set(comps[0]) if comps else set()


def _adjacency(view: nx.Graph) -> tuple[list, list[list[tuple[int, float]]]]:
    nodes = sorted(view.nodes, key=str)
    index = {v: i for i, v in enumerate(nodes)}
    adj: list[list[tuple[int, float]]] = [[] for _ in nodes]
    for u, v, w in view.edges(data="weight", default=1.0):
        if u == v:
            continue
        adj[index[u]].append((index[v], w))
        adj[index[v]].append((index[u], w))
    for a in adj:
        a.sort()
    return nodes, adj


def _sssp_bfs(adj, s):
    n = len(adj)
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = []
    dist[s] = 0
    sigma[s] = 1
    q = deque([s])
    while q:
        v = q.popleft()
        order.append(v)
        for w, _ in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, dist, sigma, preds


def _sssp_dijkstra(adj, s):
    n = len(adj)
    dist = [math.inf] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order = []
    done = [False] * n
    dist[s] = 0.0
    sigma[s] = 1
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        order.append(v)
        for w, wt in adj[v]:
            nd = d + 1.0 / wt
            if nd < dist[w] - 1e-12 * max(1.0, nd):
                dist[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif abs(nd - dist[w]) <= 1e-12 * max(1.0, nd) and not done[w]:
                sigma[w] += sigma[v]
                preds[w].append(v)
    dist = [d if d < math.inf else -1 for d in dist]
    return order, dist, sigma, preds


def _source_chunk(args):
    sources, adj, weighted = args
    n = len(adj)
    bc = [0.0] * n
    dist_sum = [0.0] * len(sources)
    reach = [0] * len(sources)
    ecc = [0.0] * len(sources)
    sssp = _sssp_dijkstra if weighted else _sssp_bfs
    for k, s in enumerate(sources):
        order, dist, sigma, preds = sssp(adj, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
        reached = [dist[v] for v in order if v != s]
        reach[k] = len(reached)
        dist_sum[k] = float(sum(reached))
        ecc[k] = max(reached) if reached else 0
    return bc, dist_sum, reach, ecc


def _all_sources(view: nx.Graph, weighted: bool, jobs: int):
    nodes, adj = _adjacency(view)
    parts = chunked_map(_source_chunk, list(range(len(nodes))), jobs, extra=(adj, weighted))
    bc = [0.0] * len(nodes)
    dist_sum: list[float] = []
    reach: list[int] = []
    ecc: list[float] = []
    for part_bc, ds, r, e in parts:
        for i, x in enumerate(part_bc):
            bc[i] += x
        dist_sum.extend(ds)
        reach.extend(r)
        ecc.extend(e)
    # undirected: each unordered pair was counted from both endpoints
    bc = [x / 2 for x in bc]
    return nodes, bc, dist_sum, reach, ecc


def centrality(
    view: nx.Graph,
    weighted: bool = False,
    jobs: int = 1,
) -> CentralityTable:
    """Per-vertex closeness (mean distance), betweenness and normalized betweenness.

    Normalized betweenness divides by (n-1)(n-2)/2 where n counts every
    vertex of ``view``.
    """
    nodes, bc, dist_sum, reach, _ = _all_sources(view, weighted, jobs)
    n = len(nodes)
    scale = (n - 1) * (n - 2) / 2
    rows = []
    for i, v in enumerate(nodes):
        if reach[i]:
            mean_d = dist_sum[i] / reach[i]
            std = 1.0 / mean_d
        else:
            mean_d, std = math.nan, 0.0
        rows.append(
            CentralityRow(
                label=str(v),
                closeness=mean_d,
                closeness_standard=std,
                betweenness=bc[i],
                normalized_betweenness=bc[i] / scale if scale > 0 else 0.0,
            )
        )
    return CentralityTable(rows)


def group_centrality(table: CentralityTable, assignment: Mapping) -> CentralityTable:
    """Mean of each per-vertex column over the members of every group.

    Closeness averages skip isolated members (NaN); a group with no connected
    member gets NaN closeness.
    """
    lookup = {str(k): g for k, g in assignment.items()}
    members: dict[str, list[CentralityRow]] = {}
    for row in table.rows:
        members.setdefault(str(lookup[row.label]), []).append(row)
    out = []
    for g in sorted(members):
        rows = members[g]
        close = [r.closeness for r in rows if not math.isnan(r.closeness)]
        out.append(
            CentralityRow(
                label=g,
                closeness=sum(close) / len(close) if close else math.nan,
                closeness_standard=sum(r.closeness_standard for r in rows) / len(rows),
                betweenness=sum(r.betweenness for r in rows) / len(rows),
                normalized_betweenness=sum(r.normalized_betweenness for r in rows) / len(rows),
                size=len(rows),
            )
        )
    return CentralityTable(out)


def path_metrics(view: nx.Graph, jobs: int = 1) -> PathMetrics:
    """Unweighted diameter and mean distance over the largest component."""
    comp = largest_component(view)
    if len(comp) < 2:
        raise ValueError("path metrics need a connected component with at least 2 vertices")
    sub = view.subgraph(comp)
    _, _, dist_sum, reach, ecc = _all_sources(sub, False, jobs)
    nc, n = len(comp), view.number_of_nodes()
    pairs = nc * (nc - 1)
    return PathMetrics(
        diameter=int(max(ecc)),
        avg_path_length=sum(dist_sum) / pairs,
        component_coverage=pairs / (n * (n - 1)),
        component_size=nc,
    )
