"""Deterministic replica-seed derivation.

Replica i of a run with master seed M gets

    seed_i = splitmix64(M + (i+1) * 0x9E3779B97F4A7C15  mod 2^64)

i.e. the (i+1)-th output of a SplitMix64 stream started at M. This mixing
is part of the external reproducibility contract: artifacts are a function
of (config, master seed, replica index) only, and plain "master + i"
seeding is avoided because adjacent integer seeds produce correlated
low-entropy generator states.
"""

from __future__ import annotations

_MASK = 2**64 - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One SplitMix64 finalization round."""
    x &= _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK
    return x ^ (x >> 31)


def replica_seed(master_seed: int, replica: int) -> int:
    if replica < 0:
        raise ValueError(f"replica index must be nonnegative, got {replica}")
    return splitmix64((master_seed + (replica + 1) * _GOLDEN) & _MASK)
