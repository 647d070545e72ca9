"""Metadata and citation clients.

Two flavours exist for each lookup: a fixture-backed client reading a
line-delimited JSON file (deterministic, offline) and, for metadata, a live
client for the arXiv query API. Citation counts have no live client; plug one
in by implementing :class:`CitationClient`.
"""

from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Protocol, runtime_checkable

import requests

logger = logging.getLogger(__name__)


class TransientClientError(RuntimeError):
    """A lookup failed in a way worth retrying (timeouts, 5xx, rate limits)."""


@runtime_checkable
class MetadataClient(Protocol):
    retries: int

    def fetch(self, paper_id: str) -> dict | None:
        """Return PaperRecord fields for ``paper_id`` or None when unknown."""


@runtime_checkable
class CitationClient(Protocol):
    retries: int

    def fetch(self, paper_id: str) -> tuple[int, str | None] | None:
        """Return ``(citation_count, cluster_id)`` or None when unknown."""


def read_jsonl(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
    return rows


class FixtureMetadataClient:
    retries = 1

    def __init__(self, records: dict[str, dict]):
        self.records = records

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureMetadataClient":
        rows = read_jsonl(path)
        return cls({str(r["paper_id"]): r for r in rows})

    def fetch(self, paper_id: str) -> dict | None:
        rec = self.records.get(paper_id)
        return dict(rec) if rec is not None else None


class FixtureCitationClient:
    retries = 1

    def __init__(self, records: dict[str, tuple[int, str | None]]):
        self.records = records

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureCitationClient":
        out = {}
        for r in read_jsonl(path):
            if r.get("citation_count") is None:
                continue
            out[str(r["paper_id"])] = (int(r["citation_count"]), r.get("cluster_id"))
        return cls(out)

    def fetch(self, paper_id: str) -> tuple[int, str | None] | None:
        return self.records.get(paper_id)


ATOM = "{http://www.w3.org/2005/Atom}"
ARXIV = "{http://arxiv.org/schemas/atom}"


def parse_arxiv_atom(xml_text: str) -> list[dict]:
    """Parse an arXiv query API Atom feed into PaperRecord field dicts."""
    from .ingest import NotAPaperLink, normalize_link

    root = ET.fromstring(xml_text)
    out = []
    for entry in root.findall(f"{ATOM}entry"):
        id_url = (entry.findtext(f"{ATOM}id") or "").strip()
        try:
            pid = normalize_link(id_url)
        except NotAPaperLink:
            # error entries carry an api/errors id
            continue
        cat = entry.find(f"{ARXIV}primary_category")
        published = (entry.findtext(f"{ATOM}published") or "").strip()[:10] or None
        out.append(
            {
                "paper_id": pid,
                "title": " ".join((entry.findtext(f"{ATOM}title") or "").split()),
                "authors": [
                    " ".join((a.findtext(f"{ATOM}name") or "").split())
                    for a in entry.findall(f"{ATOM}author")
                ],
                "primary_category": cat.get("term", "") if cat is not None else "",
                "published": published,
                "summary": " ".join((entry.findtext(f"{ATOM}summary") or "").split()),
            }
        )
    return out


class ArxivMetadataClient:
    """Live client for ``export.arxiv.org/api/query``."""

    BASE_URL = "http://export.arxiv.org/api/query"
    retries = 3

    def __init__(self, timeout: float = 20.0, session: requests.Session | None = None):
        self.timeout = timeout
        self.session = session or requests.Session()

    def fetch(self, paper_id: str) -> dict | None:
        try:
            resp = self.session.get(
                self.BASE_URL,
                params={"id_list": paper_id, "max_results": 1},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransientClientError(str(exc)) from exc
        if resp.status_code == 429 or resp.status_code >= 500:
            raise TransientClientError(f"HTTP {resp.status_code}")
        if resp.status_code != 200:
            logger.warning("arXiv lookup for %s returned HTTP %s", paper_id, resp.status_code)
            return None
        for rec in parse_arxiv_atom(resp.text):
            if rec["paper_id"] == paper_id:
                return rec
        return None
