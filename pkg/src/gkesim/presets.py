"""Fixed parameter sets plus a generator for fresh ones.

The toy sets keep every quantity small enough to check by hand or to brute
force; the standard set is a realistic 1024/160-bit group shipped as a
checked-in fixture so realistic-size runs need no generation time.  All
sets pass through validate_params at first use.
"""

from __future__ import annotations

import random
from functools import lru_cache

from .groups import GroupParams, is_probable_prime, validate_params

# 1024-bit p with a 160-bit prime-order subgroup, generated once offline.
_STD_P = int(
    "a103f8fd8dafbd5f3c24399a846cd52ea2221636f34ac759ae36168c69d2d8c8"
    "5cf2137e285ce5fce0cd488028bc8ea43878cf77d9166ea48ef51800a0891d8a"
    "9a15d97ff0c1da761570ca790133332ab14e7659bf313dc063f4113d35ac29cb"
    "fd2fd67fae6284a9fc3fb1127cc6b32be84be1ed36037ba0bdfef8ffadb48d49",
    16,
)
_STD_Q = int("e5c337d4866882092c165163e0fc921de81650e5", 16)
_STD_G = int(
    "97e9a3fde57bcc1697749aafb62a242c6e48b895e9689153b7c415b405f99f43"
    "97151339879fbe43acb6ec359643855996d851dbd4db42be89299cf17d7748fe"
    "76bbb7ea1f54c0015539d7900c66f06ff4c9ebf494a90b693ef47e84bd5f3dda"
    "eb92b7c8b90343ae20a83cf61c1a6802fbdf93088d758ffc235637e74eb4ef5d",
    16,
)


@lru_cache(maxsize=None)
def toy_params() -> GroupParams:
    """Tiny hand-checkable group: p=23, q=11, g=2."""
    return validate_params(23, 11, 2)


@lru_cache(maxsize=None)
def toy_medium_params() -> GroupParams:
    """Toy group with q=10007, big enough for groups of a few thousand."""
    return validate_params(240169, 10007, 205555)


@lru_cache(maxsize=None)
def toy_dlog_params() -> GroupParams:
    """Toy group with q just above 2**20, sized for brute-force dlog runs."""
    return validate_params(20971661, 1048583, 1048576)


@lru_cache(maxsize=None)
def std_params() -> GroupParams:
    """The checked-in 1024/160-bit fixture."""
    return validate_params(_STD_P, _STD_Q, _STD_G)


def generate_params(rng: random.Random, p_bits: int = 1024, q_bits: int = 160) -> GroupParams:
    """Generate a fresh Schnorr group: random prime q, then p = k*q + 1.

    Deterministic under the supplied rng.  Not on any test path; intended
    for the CLI's `--params gen` mode.
    """
    if q_bits < 8 or p_bits <= q_bits + 8:
        raise ValueError("need p_bits comfortably above q_bits")
    while True:
        q = rng.getrandbits(q_bits) | (1 << (q_bits - 1)) | 1
        if is_probable_prime(q):
            break
    k_bits = p_bits - q_bits
    while True:
        k = rng.getrandbits(k_bits) | (1 << (k_bits - 1))
        k &= ~1
        p = k * q + 1
        if p.bit_length() != p_bits:
            continue
        if is_probable_prime(p):
            break
    h = 2
    while True:
        g = pow(h, (p - 1) // q, p)
        if g != 1:
            break
        h += 1
    return validate_params(p, q, g)
