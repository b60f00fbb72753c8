"""Schnorr-group arithmetic over arbitrary-precision integers.

The protocol works in the order-q multiplicative subgroup of Z_p*, where
p and q are primes with q | p - 1 and g generates the subgroup.  Scalars
(private keys, identifiers, session keys, interpolation coordinates) live
in Z_q; group elements (public keys, ephemeral commitments) live in the
subgroup of Z_p*.  Everything here is a pure function over plain ints.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BadGeneratorError,
    BadModulusError,
    DuplicateAbscissaError,
    EmptyPointSetError,
    NotPrimeError,
    OrderMismatchError,
    TooManyPointsError,
)

# A point on a polynomial over Z_q: (abscissa, ordinate), both reduced mod q.
Point = tuple[int, int]

# The one hash used anywhere in the repo (commitments and signatures).
DEFAULT_HASH = "sha256"

# 40 rounds of Miller-Rabin: composite acceptance probability < 4^-40 = 2^-80.
MILLER_RABIN_ROUNDS = 40

# Interpolation is quadratic in the point count; cap it.
MAX_INTERPOLATION_POINTS = 4096

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)


@dataclass(frozen=True)
class GroupParams:
    """A validated Schnorr group (p, q, g) plus the hash the session uses.

    Invariants (enforced by validate_params):
      - p and q are prime (probabilistic, error < 2^-80),
      - q divides p - 1,
      - 1 < g < p and g has multiplicative order exactly q modulo p.
    """

    p: int
    q: int
    g: int
    hash_name: str = DEFAULT_HASH

    @property
    def q_bytes(self) -> int:
        """Byte width of a Z_q scalar in fixed-width encodings."""
        return (self.q.bit_length() + 7) // 8

    @property
    def p_bytes(self) -> int:
        """Byte width of a group element in fixed-width encodings."""
        return (self.p.bit_length() + 7) // 8

    def new_hash(self):
        return hashlib.new(self.hash_name)


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS) -> bool:
    """Miller-Rabin test with `rounds` pseudo-random bases.

    Bases are drawn from an RNG seeded by n itself, so the result is a pure
    function of n.  For composite n the acceptance probability is below
    4**-rounds.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    base_rng = random.Random(n ^ 0x9E3779B97F4A7C15)
    for _ in range(rounds):
        a = base_rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def validate_params(p: int, q: int, g: int, hash_name: str = DEFAULT_HASH) -> GroupParams:
    """Check (p, q, g) and return them as a GroupParams on success.

    Raises NotPrimeError, OrderMismatchError or BadGeneratorError.  Since q
    is prime, g**q = 1 together with g != 1 pins g's order to exactly q.
    """
    if not is_probable_prime(p):
        raise NotPrimeError(f"p = {p} is not prime")
    if not is_probable_prime(q):
        raise NotPrimeError(f"q = {q} is not prime")
    if (p - 1) % q != 0:
        raise OrderMismatchError(f"q = {q} does not divide p - 1 = {p - 1}")
    if g <= 1 or g >= p:
        raise BadGeneratorError(f"g = {g} outside (1, p)")
    if pow(g, q, p) != 1:
        raise BadGeneratorError(f"g = {g} does not have order q")
    hasher = hashlib.new(hash_name)
    if hasher.digest_size != 32:
        raise ValueError(f"hash {hash_name!r} does not produce 32-byte digests")
    return GroupParams(p=p, q=q, g=g, hash_name=hash_name)


def mod_exp(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus via square-and-multiply (builtin pow)."""
    if modulus < 2:
        raise BadModulusError(f"modulus {modulus} < 2")
    if exponent < 0:
        raise ValueError("exponent must be non-negative")
    return pow(base, exponent, modulus)


def mod_inv(a: int, m: int) -> int:
    """Multiplicative inverse of a modulo m, by extended Euclid."""
    a %= m
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
    if old_r != 1:
        raise ValueError(f"{a} has no inverse modulo {m}")
    return old_s % m


def lagrange_eval(points: Sequence[Point], x0: int, q: int) -> int:
    """Evaluate at x0 the unique degree <= len(points)-1 polynomial over Z_q
    through the given points.

    Works directly on the Lagrange basis with modular inverses; the
    coefficient vector is never materialised.  Abscissas must be pairwise
    distinct mod q.
    """
    if len(points) == 0:
        raise EmptyPointSetError("cannot interpolate an empty point set")
    if len(points) > MAX_INTERPOLATION_POINTS:
        raise TooManyPointsError(
            f"{len(points)} points exceeds limit {MAX_INTERPOLATION_POINTS}"
        )
    reduced = [(x % q, y % q) for x, y in points]
    abscissas = [x for x, _ in reduced]
    if len(set(abscissas)) != len(abscissas):
        raise DuplicateAbscissaError("interpolation points share an abscissa")
    x0 %= q
    total = 0
    for i, (xi, yi) in enumerate(reduced):
        num = 1
        den = 1
        for j, (xj, _) in enumerate(reduced):
            if i == j:
                continue
            num = num * (x0 - xj) % q
            den = den * (xi - xj) % q
        total = (total + yi * num % q * mod_inv(den, q)) % q
    return total


def random_scalar(rng: random.Random, q: int, allow_zero: bool = False) -> int:
    """Uniform scalar in [0, q-1] (or [1, q-1]), by rejection sampling.

    Rejection keeps the draw exactly uniform; truncating getrandbits output
    with a mod would bias low residues.
    """
    if q < 3:
        raise ValueError("q must be at least 3")
    bits = q.bit_length()
    while True:
        value = rng.getrandbits(bits)
        if value >= q:
            continue
        if value == 0 and not allow_zero:
            continue
        return value


def random_scalar_excluding(rng: random.Random, q: int, excluded: Iterable[int]) -> int:
    """Uniform scalar over Z_q minus an excluded set (abscissa selection)."""
    banned = {v % q for v in excluded}
    if len(banned) >= q:
        raise ValueError("excluded set covers all of Z_q")
    while True:
        value = random_scalar(rng, q, allow_zero=True)
        if value not in banned:
            return value
