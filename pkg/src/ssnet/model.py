"""Core domain types: mention events, paper records, and the multi-relational graph.

A :class:`MultiRelationalGraph` is one vertex set (papers keyed by their
canonical identifier) carrying a family of named, weighted, undirected edge
sets.  Analyses never work on the multi-relational object directly; they take
a single-relation view (a plain :class:`networkx.Graph`) from
:func:`single_relation_view`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Iterator, Mapping

import networkx as nx


class GraphIntegrityError(ValueError):
    """Raised when a graph violates referential integrity or edge-set rules."""


@dataclass(frozen=True, order=True)
class MentionEvent:
    """One user mentioning one paper at one instant.

    ``timestamp`` is UTC epoch seconds.
    """

    user_id: str
    paper_id: str
    timestamp: int
    retweet_count: int = 0

    def __post_init__(self) -> None:
        if self.retweet_count < 0:
            raise ValueError(f"retweet_count must be >= 0, got {self.retweet_count}")


@dataclass
class PaperRecord:
    paper_id: str
    title: str = ""
    authors: list[str] = field(default_factory=list)
    primary_category: str = ""
    published: date | None = None
    summary: str = ""
    citation_count: int | None = None
    citation_cluster_id: str | None = None
    enriched: bool = False

    @classmethod
    def stub(cls, paper_id: str) -> "PaperRecord":
        return cls(paper_id=paper_id)

    def to_dict(self) -> dict:
        d = {
            "paper_id": self.paper_id,
            "title": self.title,
            "authors": list(self.authors),
            "primary_category": self.primary_category,
            "published": self.published.isoformat() if self.published else None,
            "summary": self.summary,
            "citation_count": self.citation_count,
            "cluster_id": self.citation_cluster_id,
            "enriched": self.enriched,
        }
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "PaperRecord":
        published = d.get("published")
        if isinstance(published, str) and published:
            published = date.fromisoformat(published[:10])
        elif not isinstance(published, date):
            published = None
        count = d.get("citation_count")
        return cls(
            paper_id=str(d["paper_id"]),
            title=d.get("title") or "",
            authors=list(d.get("authors") or []),
            primary_category=d.get("primary_category") or d.get("category") or "",
            published=published,
            summary=d.get("summary") or "",
            citation_count=None if count is None else int(count),
            citation_cluster_id=d.get("cluster_id", d.get("citation_cluster_id")),
            enriched=bool(d.get("enriched", True)),
        )


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class EdgeSet:
    """Undirected weighted edge set for one relation.

    Vertex pairs are stored order-normalized. Re-adding a pair sums the
    weights. Zero-weight additions are ignored so absent means zero.
    """

    def __init__(self, relation_name: str, edges: Iterable[tuple[str, str, float]] = ()):
        self.relation_name = relation_name
        self._w: dict[tuple[str, str], float] = {}
        for a, b, w in edges:
            self.add(a, b, w)

    def add(self, a: str, b: str, weight: float) -> None:
        if a == b:
            raise GraphIntegrityError(f"self-loop on {a!r} in relation {self.relation_name!r}")
        if weight < 0:
            raise GraphIntegrityError(f"negative weight {weight} on ({a!r}, {b!r})")
        if weight == 0:
            return
        key = _pair(a, b)
        self._w[key] = self._w.get(key, 0.0) + weight

    def weight(self, a: str, b: str) -> float:
        return self._w.get(_pair(a, b), 0.0)

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return _pair(*pair) in self._w

    def __len__(self) -> int:
        return len(self._w)

    def __iter__(self) -> Iterator[tuple[str, str, float]]:
        for (a, b), w in self._w.items():
            yield a, b, w

    def sorted_edges(self) -> list[tuple[str, str, float]]:
        return sorted(self)

    def vertices(self) -> set[str]:
        out: set[str] = set()
        for a, b in self._w:
            out.add(a)
            out.add(b)
        return out

    def total_weight(self) -> float:
        return sum(w for _, _, w in self.sorted_edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeSet):
            return NotImplemented
        return self.relation_name == other.relation_name and self._w == other._w

    def __repr__(self) -> str:
        return f"EdgeSet({self.relation_name!r}, {len(self)} edges)"


@dataclass
class MultiRelationalGraph:
    """M = (V, {E_1..E_m}): papers plus a named family of edge sets."""

    vertices: dict[str, PaperRecord] = field(default_factory=dict)
    edge_family: dict[str, EdgeSet] = field(default_factory=dict)

    def add_paper(self, record: PaperRecord) -> None:
        self.vertices[record.paper_id] = record

    def add_relation(self, edges: EdgeSet) -> None:
        if edges.relation_name in self.edge_family:
            raise GraphIntegrityError(f"relation {edges.relation_name!r} already present")
        missing = edges.vertices() - self.vertices.keys()
        if missing:
            raise GraphIntegrityError(
                f"relation {edges.relation_name!r} references unknown vertices: {sorted(missing)[:5]}"
            )
        self.edge_family[edges.relation_name] = edges

    @property
    def relations(self) -> list[str]:
        return list(self.edge_family)

    def validate(self) -> None:
        for name, es in self.edge_family.items():
            if es.relation_name != name:
                raise GraphIntegrityError(f"relation key {name!r} != edge set name {es.relation_name!r}")
            for a, b, w in es:
                if a == b:
                    raise GraphIntegrityError(f"self-loop on {a!r} in {name!r}")
                if not w > 0:
                    raise GraphIntegrityError(f"non-positive weight on ({a!r}, {b!r}) in {name!r}")
                if a not in self.vertices or b not in self.vertices:
                    raise GraphIntegrityError(f"edge ({a!r}, {b!r}) in {name!r} has unknown endpoint")

    def structurally_equal(self, other: "MultiRelationalGraph") -> bool:
        if self.vertices.keys() != other.vertices.keys():
            return False
        if any(self.vertices[k] != other.vertices[k] for k in self.vertices):
            return False
        if self.edge_family.keys() != other.edge_family.keys():
            return False
        return all(self.edge_family[k] == other.edge_family[k] for k in self.edge_family)


@dataclass
class Partition:
    """Vertex -> dense community label, with the objective that produced it."""

    assignment: dict[str, int]
    modularity: float
    resolution: float
    seed: int

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> list[list[str]]:
        groups: dict[int, list[str]] = {}
        for v, c in self.assignment.items():
            groups.setdefault(c, []).append(v)
        return [sorted(groups[c]) for c in sorted(groups)]


def single_relation_view(graph: MultiRelationalGraph, relation_name: str) -> nx.Graph:
    """Project ``graph`` onto one relation as a weighted simple graph.

    Every vertex is present, isolated or not. Vertex attributes are not
    copied. The returned graph is frozen so it can be shared between readers.
    """
    if relation_name not in graph.edge_family:
        raise KeyError(
            f"unknown relation {relation_name!r}; available: {sorted(graph.edge_family)}"
        )
    view = nx.Graph(relation=relation_name)
    view.add_nodes_from(sorted(graph.vertices))
    for a, b, w in graph.edge_family[relation_name].sorted_edges():
        view.add_edge(a, b, weight=w)
    return nx.freeze(view)
