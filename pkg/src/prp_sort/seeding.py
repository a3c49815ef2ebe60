"""Deterministic seed derivation.

Seeds are derived by hashing string-rendered parts with BLAKE2b rather than
the built-in hash(), which is salted per process for strings and would break
run-to-run reproducibility.
"""

import hashlib

_SEP = b"\x1f"


def stable_seed(*parts: object) -> int:
    """Derive a 64-bit seed from the given parts, stable across processes."""
    material = _SEP.join(str(p).encode("utf-8") for p in parts)
    return int.from_bytes(hashlib.blake2b(material, digest_size=8).digest(), "big")
