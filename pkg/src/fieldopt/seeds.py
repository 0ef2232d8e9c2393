"""Stable seed derivation for replicate and task streams.

Every replicate, sweep cell, and comparison instance gets its own 64-bit
seed derived from a master seed plus a tuple of labels. The derivation is
SHA-256 over a fixed-width encoding, so streams are reproducible across
platforms and process boundaries (workers can re-derive their own seeds).
"""

from __future__ import annotations

import hashlib


def derive_seed(base_seed: int, *parts: int | str) -> int:
    """Derive a 64-bit seed from a base seed and a label tuple.

    Integers are encoded as signed 8-byte little-endian, strings as UTF-8
    with a length prefix, so distinct tuples never collide by concatenation.
    """
    h = hashlib.sha256()
    h.update(int(base_seed).to_bytes(8, "little", signed=False))
    for part in parts:
        if isinstance(part, str):
            data = part.encode("utf-8")
            h.update(b"s" + len(data).to_bytes(4, "little") + data)
        else:
            h.update(b"i" + int(part).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest()[:8], "little")
