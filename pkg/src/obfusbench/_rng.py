"""Seed handling shared by every generator."""

import hashlib
import random


def derive_rng(seed, *keys):
    """A ``random.Random`` determined by ``seed`` and the stream ``keys``.

    Keys are hashed with the seed so that, say, record 3 of a batch gets the
    same stream whether or not records 0-2 were processed first.
    """
    h = hashlib.blake2b(digest_size=16)
    h.update(str(int(seed)).encode())
    for key in keys:
        h.update(b"\x1f")
        h.update(repr(key).encode())
    return random.Random(int.from_bytes(h.digest(), "big"))
