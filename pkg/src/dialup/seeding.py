"""Named seed derivation.

All randomness hangs off one 64-bit seed. Each consumer derives its own stream
from the seed plus a purpose path, so results never depend on the order in
which units are visited or on how work is split across threads.
"""

from __future__ import annotations

import hashlib
import random

DEFAULT_SEED = 13

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, *path: object) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & _MASK64).encode())
    for part in path:
        h.update(b"\x1f")
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest(), "big")


def derive_rng(seed: int, *path: object) -> random.Random:
    return random.Random(derive_seed(seed, *path))


def unit_uniform(seed: int, *path: object) -> float:
    """Uniform draw in [0, 1) that is a pure function of (seed, path)."""
    return (derive_seed(seed, *path) >> 11) / float(1 << 53)
