"""Mention-stream parsing, paper-link canonicalization, and enrichment."""

from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Iterable, TypeVar
from urllib.parse import urlsplit

from .clients import CitationClient, MetadataClient, TransientClientError, read_jsonl
from .model import MentionEvent, PaperRecord

logger = logging.getLogger(__name__)

T = TypeVar("T")

ARXIV_HOSTS = {"arxiv.org", "www.arxiv.org", "export.arxiv.org", "m.arxiv.org"}
_NEW_ID = re.compile(r"^(\d{4}\.\d{4,5})(v\d+)?$")
_OLD_ID = re.compile(r"^([a-z][a-z\-]*(?:\.[A-Z]{2})?/\d{7})(v\d+)?$")


class NotAPaperLink(ValueError):
    pass


def normalize_link(url: str) -> str:
    """Map an arXiv abstract or PDF URL to its bare, version-less identifier.

    >>> normalize_link("http://arxiv.org/abs/1409.0210v1")
    '1409.0210'
    """
    parts = urlsplit(url.strip())
    if parts.scheme not in ("http", "https") or not parts.netloc:
        raise NotAPaperLink(f"not an absolute http(s) URL: {url!r}")
    if parts.hostname is None or parts.hostname.lower() not in ARXIV_HOSTS:
        raise NotAPaperLink(f"not a paper link: {url!r}")
    path = parts.path
    for prefix in ("/abs/", "/pdf/"):
        if path.startswith(prefix):
            ident = path[len(prefix):].rstrip("/")
            break
    else:
        raise NotAPaperLink(f"not a paper link: {url!r}")
    if ident.endswith(".pdf"):
        ident = ident[:-4]
    for pattern in (_NEW_ID, _OLD_ID):
        m = pattern.match(ident)
        if m:
            return m.group(1)
    raise NotAPaperLink(f"unrecognized paper identifier in {url!r}")


def parse_timestamp(value: str) -> int:
    """ISO-8601 instant -> UTC epoch seconds. Naive values are taken as UTC."""
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_timestamp(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_record(line: str) -> tuple[str, int, list[str], int]:
    rec = json.loads(line)
    if not isinstance(rec, dict):
        raise ValueError("record is not an object")
    user = rec["user_id"]
    urls = rec["urls"]
    rt = rec["retweet_count"]
    if not isinstance(user, str) or not user:
        raise ValueError("user_id must be a non-empty string")
    if not isinstance(urls, list) or not all(isinstance(u, str) for u in urls):
        raise ValueError("urls must be a list of strings")
    if isinstance(rt, bool) or not isinstance(rt, int) or rt < 0:
        raise ValueError("retweet_count must be a non-negative integer")
    if not isinstance(rec["timestamp"], str):
        raise ValueError("timestamp must be an ISO-8601 string")
    return user, parse_timestamp(rec["timestamp"]), urls, rt


def parse_mentions(
    stream: Iterable[str],
    url_transform: Callable[[str], str] | None = None,
) -> tuple[list[MentionEvent], int]:
    """Parse a line-delimited mention stream.

    Returns the deduplicated events (in first-seen order) and the number of
    malformed lines skipped. ``url_transform`` runs on every URL before
    normalization, e.g. to expand shortened links.
    """
    events: list[MentionEvent] = []
    seen: set[tuple[str, str, int]] = set()
    skipped = 0
    for lineno, line in enumerate(stream, 1):
        if not line.strip():
            continue
        try:
            user, ts, urls, rt = _parse_record(line)
        except (ValueError, KeyError, TypeError) as exc:
            skipped += 1
            logger.warning("line %d: skipped malformed record (%s)", lineno, exc)
            continue
        for url in urls:
            if url_transform is not None:
                url = url_transform(url)
            try:
                pid = normalize_link(url)
            except NotAPaperLink:
                continue
            key = (user, pid, ts)
            if key in seen:
                continue
            seen.add(key)
            events.append(MentionEvent(user, pid, ts, rt))
    return events, skipped


def read_mentions(path: str | Path, **kw) -> tuple[list[MentionEvent], int]:
    with open(path, encoding="utf-8") as fh:
        return parse_mentions(fh, **kw)


def write_events(events: Iterable[MentionEvent], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in events:
            fh.write(
                json.dumps(
                    {
                        "user_id": e.user_id,
                        "paper_id": e.paper_id,
                        "timestamp": format_timestamp(e.timestamp),
                        "retweet_count": e.retweet_count,
                    }
                )
                + "\n"
            )


def read_events(path: str | Path) -> list[MentionEvent]:
    """Read canonical events written by :func:`write_events`."""
    out = []
    for i, r in enumerate(read_jsonl(path), 1):
        try:
            out.append(
                MentionEvent(
                    str(r["user_id"]),
                    str(r["paper_id"]),
                    parse_timestamp(r["timestamp"]),
                    int(r["retweet_count"]),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"{path}: record {i}: {exc}") from exc
    return out


def mentions_to_stream_lines(events: Iterable[MentionEvent]) -> list[str]:
    """Render events back into the raw input format, one URL per record."""
    return [
        json.dumps(
            {
                "user_id": e.user_id,
                "timestamp": format_timestamp(e.timestamp),
                "urls": [f"https://arxiv.org/abs/{e.paper_id}"],
                "retweet_count": e.retweet_count,
            }
        )
        for e in events
    ]


# -- enrichment ---------------------------------------------------------------


def _with_retries(fn: Callable[[], T], attempts: int, backoff: float, sleep) -> T:
    delay = backoff
    for attempt in range(1, attempts + 1):
        try:
            return fn()
        except TransientClientError:
            if attempt == attempts:
                raise
            sleep(delay)
            delay *= 2
    raise AssertionError("unreachable")


def _lookup_all(ids, fetch, attempts, backoff, sleep, max_workers):
    def one(pid):
        try:
            return pid, _with_retries(lambda: fetch(pid), attempts, backoff, sleep)
        except TransientClientError as exc:
            logger.warning("lookup for %s failed after %d attempts: %s", pid, attempts, exc)
            return pid, None

    if max_workers <= 1 or len(ids) <= 1:
        return dict(map(one, ids))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return dict(pool.map(one, ids))


def _load_cache(path: Path | None) -> dict[str, dict]:
    if path is None or not path.exists():
        return {}
    return {str(r["paper_id"]): r for r in read_jsonl(path)}


def _write_cache(path: Path, rows: dict[str, dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(rows):
            fh.write(json.dumps(rows[pid], sort_keys=True, ensure_ascii=False) + "\n")


def enrich_metadata(
    papers: Iterable[str],
    client: MetadataClient,
    cache_path: str | Path | None = None,
    max_workers: int = 1,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> dict[str, PaperRecord]:
    """Resolve paper ids to records; unresolved ids become unenriched stubs.

    Resolved records are written to ``cache_path`` (fixture format) and
    cached ids are never fetched again.
    """
    ids = sorted(set(papers))
    cache_file = Path(cache_path) if cache_path else None
    cache = _load_cache(cache_file)
    todo = [pid for pid in ids if pid not in cache]
    fetched = _lookup_all(todo, client.fetch, max(1, client.retries), backoff, sleep, max_workers)

    new_rows = {}
    out: dict[str, PaperRecord] = {}
    for pid in ids:
        row = cache.get(pid) or fetched.get(pid)
        if row is None:
            out[pid] = PaperRecord.stub(pid)
            continue
        row = dict(row, paper_id=pid, enriched=True)
        if pid not in cache:
            new_rows[pid] = row
        out[pid] = PaperRecord.from_dict(row)
    if cache_file is not None and new_rows:
        _write_cache(cache_file, {**cache, **new_rows})
    return out


def enrich_citations(
    papers: dict[str, PaperRecord],
    client: CitationClient,
    cache_path: str | Path | None = None,
    max_workers: int = 1,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> dict[str, PaperRecord]:
    """Fill ``citation_count`` and ``citation_cluster_id`` in place where known."""
    cache_file = Path(cache_path) if cache_path else None
    cache = _load_cache(cache_file)
    ids = sorted(papers)
    todo = [pid for pid in ids if pid not in cache]
    fetched = _lookup_all(todo, client.fetch, max(1, client.retries), backoff, sleep, max_workers)

    new_rows = {}
    for pid in ids:
        if pid in cache:
            hit = (cache[pid]["citation_count"], cache[pid].get("cluster_id"))
        else:
            hit = fetched.get(pid)
            if hit is not None:
                new_rows[pid] = {"paper_id": pid, "citation_count": hit[0], "cluster_id": hit[1]}
        if hit is None:
            continue
        rec = papers[pid]
        rec.citation_count = int(hit[0])
        rec.citation_cluster_id = hit[1]
    if cache_file is not None and new_rows:
        _write_cache(cache_file, {**cache, **new_rows})
    return {pid: papers[pid] for pid in ids}


def load_papers(path: str | Path) -> dict[str, PaperRecord]:
    return {r.paper_id: r for r in map(PaperRecord.from_dict, read_jsonl(path))}


def write_papers(papers: dict[str, PaperRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pid in sorted(papers):
            fh.write(json.dumps(papers[pid].to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
