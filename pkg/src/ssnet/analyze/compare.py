"""Attribute-based partitions, partition agreement, and category aggregation."""

from __future__ import annotations

from collections import defaultdict
from typing import Literal, Mapping

import networkx as nx
from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

from ..model import MultiRelationalGraph, Partition

AttributeMode = Literal["category", "subcategory", "category+subcategory"]
ATTRIBUTE_MODES: tuple[str, ...] = ("category", "subcategory", "category+subcategory")
UNKNOWN = "unknown"


def _as_assignment(p: Partition | Mapping) -> Mapping:
    return p.assignment if isinstance(p, Partition) else p


def compare_partitions(p1: Partition | Mapping, p2: Partition | Mapping) -> tuple[float, float]:
    """(NMI with arithmetic normalization, adjusted Rand index)."""
    a, b = _as_assignment(p1), _as_assignment(p2)
    if set(a) != set(b):
        raise ValueError(
            f"partitions cover different vertex sets ({len(set(a) ^ set(b))} vertices differ)"
        )
    keys = sorted(a, key=str)
    la = [str(a[k]) for k in keys]
    lb = [str(b[k]) for k in keys]
    nmi = normalized_mutual_info_score(la, lb, average_method="arithmetic")
    ari = adjusted_rand_score(la, lb)
    return float(nmi), float(ari)


def attribute_label(primary_category: str, mode: str) -> str:
    """Group key for an arXiv category such as ``cs.IR``.

    ``category`` is the archive (``cs``), ``subcategory`` the full category
    (``cs.IR``), and the compound mode joins both (``cs+cs.IR``).
    """
    if not primary_category:
        return UNKNOWN
    archive = primary_category.split(".", 1)[0]
    if mode == "category":
        return archive
    if mode == "subcategory":
        return primary_category
    if mode == "category+subcategory":
        return f"{archive}+{primary_category}"
    raise ValueError(f"unknown attribute mode {mode!r}; expected one of {ATTRIBUTE_MODES}")


def attribute_partition(graph: MultiRelationalGraph, attribute: str) -> dict[str, str]:
    """One group per distinct attribute value; unenriched papers go to ``unknown``."""
    out = {}
    for pid in sorted(graph.vertices):
        rec = graph.vertices[pid]
        cat = rec.primary_category if rec.enriched else ""
        out[pid] = attribute_label(cat, attribute)
    return out


def aggregate_by_attribute(view: nx.Graph, assignment: Mapping) -> nx.Graph:
    """Collapse vertices into groups.

    Inter-group edge weights are summed; weight inside a group is kept as the
    ``self_mass`` vertex attribute rather than as a self-loop. Each group also
    records its member count as ``size``.
    """
    missing = [v for v in view.nodes if v not in assignment]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} vertices")
    size: dict = defaultdict(int)
    for v in view.nodes:
        size[assignment[v]] += 1
    self_mass: dict = defaultdict(float)
    cross: dict = defaultdict(float)
    for u, v, w in view.edges(data="weight", default=1.0):
        gu, gv = assignment[u], assignment[v]
        if gu == gv:
            self_mass[gu] += w
        else:
            key = (gu, gv) if str(gu) <= str(gv) else (gv, gu)
            cross[key] += w
    agg = nx.Graph()
    for g in sorted(size, key=str):
        agg.add_node(g, size=size[g], self_mass=float(self_mass[g]))
    for (a, b) in sorted(cross, key=lambda k: (str(k[0]), str(k[1]))):
        agg.add_edge(a, b, weight=cross[(a, b)])
    return agg
