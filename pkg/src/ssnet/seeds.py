"""Named sub-seeds derived from one top-level seed."""

import hashlib


def derive_seed(seed: int, *names: object) -> int:
    """Stable 32-bit seed for the stage identified by ``names``."""
    key = ":".join([str(seed), *map(str, names)]).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:4], "big")
