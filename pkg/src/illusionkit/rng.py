"""Counter-based random substreams.

All randomness in the toolkit flows from a single 64-bit seed through
Philox counter-based streams, so any item of a sweep or schedule can be
regenerated independently of evaluation order.
"""

import numpy as np

__all__ = ["substream"]

_MASK64 = (1 << 64) - 1
# distinct stream domains so e.g. sweep item 3 and trial 3 never collide
_DOMAINS = {
    "sweep": 0x53574545,
    "trial": 0x54524941,
    "session": 0x53455353,
    "augment": 0x4155474D,
    "split": 0x53504C54,
    "sim": 0x53494D00,
}


def substream(seed: int, domain: str, *indices: int) -> np.random.Generator:
    """Return an independent generator for (seed, domain, indices).

    The same arguments always produce the same stream, regardless of how
    many other streams were drawn from before.
    """
    try:
        key_hi = _DOMAINS[domain]
    except KeyError:
        raise KeyError(f"unknown stream domain {domain!r}") from None
    for ix in indices:
        # splitmix64-style mixing keeps nearby indices decorrelated
        key_hi = (key_hi + 0x9E3779B97F4A7C15 + ix) & _MASK64
        key_hi = ((key_hi ^ (key_hi >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        key_hi = ((key_hi ^ (key_hi >> 27)) * 0x94D049BB133111EB) & _MASK64
        key_hi ^= key_hi >> 31
    key = np.array([seed & _MASK64, key_hi], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
