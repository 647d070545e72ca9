"""Independent brute-force reference computations used by the tests.

These deliberately avoid the package's own helpers: different data layouts,
naive loops, no shared code paths.
"""

from __future__ import annotations

import math
from collections import deque
from itertools import combinations


def ssn_brute_force(events, time_window, min_interval=1.0, rule="mean"):
    """Time-decayed co-mention weights by exhaustive enumeration.

    Loops over every user and every ordered pair of papers in the whole
    corpus, checks the incidence matrix directly, and evaluates the weight
    formula from scratch. O(users * papers^2).
    """
    users = sorted({e.user_id for e in events})
    papers = sorted({e.paper_id for e in events})
    raw_rt = {p: 0 for p in papers}
    for e in events:
        raw_rt[e.paper_id] = max(raw_rt[e.paper_id], e.retweet_count)
    top = max(raw_rt.values(), default=0)
    rt = {p: (raw_rt[p] / top if top else 1.0) for p in papers}

    # incidence: first mention time of paper j by user i, or None
    first = {u: {p: None for p in papers} for u in users}
    for e in events:
        t = first[e.user_id][e.paper_id]
        if t is None or e.timestamp < t:
            first[e.user_id][e.paper_id] = e.timestamp

    weights = {}
    for u in users:
        for i, a in enumerate(papers):
            for b in papers[i + 1 :]:
                ta, tb = first[u][a], first[u][b]
                if ta is None or tb is None:
                    continue
                if rule == "mean":
                    r = (rt[a] + rt[b]) / 2
                elif rule == "min":
                    r = min(rt[a], rt[b])
                else:
                    r = max(rt[a], rt[b])
                t = max(abs(tb - ta), min_interval)
                w = r / math.sqrt(t) if t < time_window else 0.0
                if w > 0:
                    weights[(a, b)] = weights.get((a, b), 0.0) + w
    return weights


def bfs_distances(adj, s):
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def adjacency(graph):
    return {v: set(graph.neighbors(v)) - {v} for v in graph.nodes}


def count_shortest_paths(adj, s, dist_s):
    """Number of shortest paths from s to every vertex, by layered counting."""
    sigma = {s: 1}
    for v in sorted(dist_s, key=dist_s.get):
        if v == s:
            continue
        sigma[v] = sum(sigma[u] for u in adj[v] if dist_s.get(u) == dist_s[v] - 1)
    return sigma


def naive_betweenness(graph):
    """Sum over unordered pairs (s, t) of sigma_st(v) / sigma_st for every v."""
    adj = adjacency(graph)
    nodes = list(graph.nodes)
    dist = {s: bfs_distances(adj, s) for s in nodes}
    sigma = {s: count_shortest_paths(adj, s, dist[s]) for s in nodes}
    bc = {v: 0.0 for v in nodes}
    for s, t in combinations(nodes, 2):
        if t not in dist[s]:
            continue
        d = dist[s][t]
        for v in nodes:
            if v in (s, t) or v not in dist[s] or t not in dist[v]:
                continue
            if dist[s][v] + dist[v][t] == d:
                bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t]
    return bc


def naive_closeness(graph):
    """Mean BFS distance to every other reachable vertex; NaN if none."""
    adj = adjacency(graph)
    out = {}
    for v in graph.nodes:
        d = bfs_distances(adj, v)
        others = [x for k, x in d.items() if k != v]
        out[v] = sum(others) / len(others) if others else math.nan
    return out


def naive_path_metrics(graph):
    """(diameter, mean distance) over ordered pairs of the largest component."""
    adj = adjacency(graph)
    seen, comps = set(), []
    for v in sorted(graph.nodes, key=str):
        if v in seen:
            continue
        comp = set(bfs_distances(adj, v))
        seen |= comp
        comps.append(comp)
    comp = max(comps, key=len)
    dists = []
    for s in comp:
        d = bfs_distances(adj, s)
        dists.extend(x for t, x in d.items() if t != s)
    return max(dists), sum(dists) / len(dists)


def modularity_double_sum(graph, assignment, resolution=1.0):
    """(1/2m) sum_ij [A_ij - res * k_i k_j / 2m] delta(c_i, c_j) over all ordered pairs."""
    nodes = list(graph.nodes)
    A = {(u, v): 0.0 for u in nodes for v in nodes}
    for u, v, d in graph.edges(data=True):
        w = d.get("weight", 1.0)
        if u == v:
            A[(u, u)] += 2 * w
        else:
            A[(u, v)] += w
            A[(v, u)] += w
    k = {u: sum(A[(u, v)] for v in nodes) for u in nodes}
    two_m = sum(k.values())
    q = 0.0
    for u in nodes:
        for v in nodes:
            if assignment[u] == assignment[v]:
                q += A[(u, v)] - resolution * k[u] * k[v] / two_m
    return q / two_m


def truncated_power_law_mean(gamma, x_min, x_max):
    num = den = 0.0
    for k in range(x_min, x_max + 1):
        p = k ** -gamma
        num += k * p
        den += p
    return num / den
