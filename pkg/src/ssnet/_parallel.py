"""Worker-count-independent parallel map.

Items are split into chunks of a fixed size that does not depend on the
number of workers, and chunk results come back in submission order. Any
reduction done per chunk and then across chunks in order is therefore
bit-identical for every ``jobs`` value.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

CHUNK_SIZE = 64


def chunked_map(
    fn: Callable[[tuple], Any],
    items: Sequence,
    jobs: int = 1,
    extra: tuple = (),
    chunk_size: int = CHUNK_SIZE,
) -> list:
    """Apply ``fn((chunk, *extra))`` to fixed-size chunks; results in chunk order."""
    chunks = [tuple(items[i : i + chunk_size]) for i in range(0, len(items), chunk_size)]
    args = [(c, *extra) for c in chunks]
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, args))
