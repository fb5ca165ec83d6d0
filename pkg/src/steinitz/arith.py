"""Exact integer helpers: Kronecker symbol, primality, congruences, prime streams."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import PreconditionError, UndefinedInputError

# Deterministic for every n < 3.3 * 10**24, which covers the 2**64 range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
PRIME_LIMIT = 1 << 64


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n).

    >>> kronecker(-23, 13)
    1
    >>> kronecker(-4, 3)
    -1
    """
    if n == 0:
        raise UndefinedInputError("kronecker symbol (a|0) is undefined here")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    # factor out twos from n
    twos = (n & -n).bit_length() - 1
    if twos:
        if a % 2 == 0:
            return 0
        n >>= twos
        if twos % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd positive n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, valid for 0 <= n < 2**64."""
    if n < 0:
        raise PreconditionError("is_prime expects n >= 0")
    if n >= PRIME_LIMIT:
        raise PreconditionError("is_prime is only deterministic below 2**64")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division (small inputs only)."""
    n = abs(n)
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_squarefree(n: int) -> bool:
    n = abs(n)
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return n != 0


def lifted_power_congruence(x: int, y: int, m: int, n: int) -> bool:
    """Return whether x**n == y**n (mod m*n), given x == y (mod m) and rad(n) | m.

    The answer is always True for valid input; the function exists so the
    implication can be fuzzed.
    """
    if m < 1 or n < 1:
        raise PreconditionError("m and n must be positive")
    if (x - y) % m:
        raise PreconditionError(f"{x} is not congruent to {y} mod {m}")
    bad = [q for q in prime_factors(n) if m % q]
    if bad:
        raise PreconditionError(f"primes {bad} divide n={n} but not m={m}")
    mod = m * n
    return pow(x, n, mod) == pow(y, n, mod)


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo an odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        raise PreconditionError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class PrimeStream:
    """Primes p in [lower, upper] with p mod modulus in residues, p coprime to
    modulus * discriminant, and kronecker(discriminant, p) == +1."""

    modulus: int
    residues: frozenset[int]
    discriminant: int
    lower: int
    upper: int

    def __post_init__(self):
        if self.modulus < 1:
            raise PreconditionError("modulus must be >= 1")
        object.__setattr__(self, "residues", frozenset(r % self.modulus for r in self.residues))
        if not self.residues:
            raise PreconditionError("residue set must be nonempty")

    def __iter__(self) -> Iterator[int]:
        return prime_stream(self)


def _residue_candidates(r: int, modulus: int, lower: int, upper: int) -> Iterable[int]:
    start = lower + (r - lower) % modulus
    return range(start, upper + 1, modulus)


def prime_stream(cfg: PrimeStream) -> Iterator[int]:
    """Yield the primes described by cfg in increasing order."""
    lower = max(cfg.lower, 2)
    if cfg.upper < lower:
        return
    bad = abs(cfg.modulus * (cfg.discriminant or 1))
    ranges = [_residue_candidates(r, cfg.modulus, lower, cfg.upper) for r in sorted(cfg.residues)]
    for p in heapq.merge(*ranges):
        if bad % p == 0 or not is_prime(p):
            continue
        if cfg.discriminant != 0 and kronecker(cfg.discriminant, p) != 1:
            continue
        yield p
