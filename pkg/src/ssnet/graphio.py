"""GraphML and CSV serialization for multi-relational paper graphs.

GraphML layout: one ``<edge>`` per (relation, vertex pair) carrying ``relation``
and ``weight`` attributes; vertex attributes mirror :class:`PaperRecord`.
The relation names are also stored as a graph attribute so empty edge sets
survive a round trip.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import date
from pathlib import Path

import networkx as nx

from .model import EdgeSet, GraphIntegrityError, MultiRelationalGraph, PaperRecord

RELATIONS_KEY = "relations"


def fmt(x: float | int | None) -> str:
    """Format a number for CSV output (6 significant digits for floats)."""
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.6g}"


def _node_attrs(rec: PaperRecord) -> dict:
    attrs = {
        "title": rec.title,
        "authors": json.dumps(rec.authors, ensure_ascii=False),
        "primary_category": rec.primary_category,
        "summary": rec.summary,
        "enriched": rec.enriched,
    }
    if rec.published is not None:
        attrs["published"] = rec.published.isoformat()
    if rec.citation_count is not None:
        attrs["citation_count"] = int(rec.citation_count)
    if rec.citation_cluster_id is not None:
        attrs["citation_cluster_id"] = str(rec.citation_cluster_id)
    return attrs


def to_networkx(graph: MultiRelationalGraph) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.graph[RELATIONS_KEY] = json.dumps(list(graph.edge_family))
    for pid in sorted(graph.vertices):
        g.add_node(pid, **_node_attrs(graph.vertices[pid]))
    for name, es in graph.edge_family.items():
        for a, b, w in es.sorted_edges():
            g.add_edge(a, b, key=name, relation=name, weight=float(w))
    return g


def from_networkx(g: nx.Graph) -> MultiRelationalGraph:
    out = MultiRelationalGraph()
    for pid, data in g.nodes(data=True):
        published = data.get("published")
        count = data.get("citation_count")
        out.add_paper(
            PaperRecord(
                paper_id=str(pid),
                title=data.get("title", ""),
                authors=json.loads(data.get("authors", "[]")),
                primary_category=data.get("primary_category", ""),
                published=date.fromisoformat(published) if published else None,
                summary=data.get("summary", ""),
                citation_count=None if count is None else int(count),
                citation_cluster_id=data.get("citation_cluster_id"),
                enriched=bool(data.get("enriched", False)),
            )
        )
    names = json.loads(g.graph.get(RELATIONS_KEY, "[]"))
    sets = {name: EdgeSet(name) for name in names}
    for a, b, data in g.edges(data=True):
        name = data.get("relation")
        if name is None:
            raise GraphIntegrityError(f"edge ({a}, {b}) lacks a 'relation' attribute")
        es = sets.setdefault(name, EdgeSet(name))
        if (a, b) in es:
            raise GraphIntegrityError(f"duplicate edge ({a}, {b}) in relation {name!r}")
        es.add(str(a), str(b), float(data.get("weight", 1.0)))
    for es in sets.values():
        out.add_relation(es)
    out.validate()
    return out


def write_graphml(graph: MultiRelationalGraph, path: str | Path) -> None:
    nx.write_graphml(to_networkx(graph), str(path))


def read_graphml(path: str | Path) -> MultiRelationalGraph:
    try:
        g = nx.read_graphml(str(path), force_multigraph=True)
    except Exception as exc:  # networkx raises a mix of XML and type errors
        raise ValueError(f"{path}: not a readable GraphML file ({exc})") from exc
    return from_networkx(g)


def write_edge_list(edges: EdgeSet, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src", "dst", "weight"])
        for a, b, wt in edges.sorted_edges():
            w.writerow([a, b, fmt(wt)])


def read_edge_list(path: str | Path, relation_name: str) -> EdgeSet:
    es = EdgeSet(relation_name)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            es.add(row["src"], row["dst"], float(row["weight"]))
    return es


def write_weighted_graphml(g: nx.Graph, path: str | Path) -> None:
    """Write a plain weighted graph (e.g. a category aggregate) deterministically."""
    h = nx.Graph()
    h.graph.update(g.graph)
    for n in sorted(g.nodes()):
        h.add_node(n, **g.nodes[n])
    for a, b, d in sorted(g.edges(data=True), key=lambda e: tuple(sorted(e[:2]))):
        h.add_edge(a, b, **d)
    buf = io.BytesIO()
    nx.write_graphml(h, buf)
    Path(path).write_bytes(buf.getvalue())
