"""Integer and modular arithmetic: sieving, factorization, root counts and I_k.

Memory bound: a ``PrimeTable`` stores one byte per integer plus an int64 list
of primes, so ``MAX_SIEVE_LIMIT`` (5 * 10**8) costs about 0.7 GB.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._kernels import kernels

MAX_SIEVE_LIMIT = 5 * 10**8
MAX_FACTOR_N = 10**12
MAX_EXHAUSTIVE_MODULUS = 10**7


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapacityError(RuntimeError):
    """A request exceeds the documented size bound of an operation."""


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to ``limit`` with an O(1) primality predicate."""

    limit: int
    flags: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise CapacityError(f"{n} exceeds prime table limit {self.limit}")
        return n >= 2 and bool(self.flags[n])

    def primes_in(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo <= p <= hi."""
        if hi > self.limit:
            raise CapacityError(f"range end {hi} exceeds prime table limit {self.limit}")
        i = np.searchsorted(self.primes, lo, side="left")
        j = np.searchsorted(self.primes, hi, side="right")
        return self.primes[i:j]

    def __len__(self) -> int:
        return len(self.primes)


def sieve_primes(limit: int) -> PrimeTable:
    if limit < 2 or limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {limit}")
    flags = kernels.sieve(int(limit))
    flags.setflags(write=False)
    primes = np.flatnonzero(flags).astype(np.int64)
    primes.setflags(write=False)
    return PrimeTable(int(limit), flags, primes)


@lru_cache(maxsize=8)
def _cached_table(limit: int) -> PrimeTable:
    return sieve_primes(limit)


def prime_table(limit: int) -> PrimeTable:
    """Shared table covering at least ``limit`` (rounded up to a power of two)."""
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"prime table limit {limit} exceeds {MAX_SIEVE_LIMIT}")
    size = min(MAX_SIEVE_LIMIT, max(1024, 1 << (int(limit) - 1).bit_length()))
    return _cached_table(size)


def segmented_prime_count(limit: int, segment: int = 1 << 16) -> int:
    """Count primes <= limit with a segmented sieve; independent of ``sieve_primes``."""
    if limit < 2:
        return 0
    root = math.isqrt(limit)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for i in range(2, math.isqrt(root) + 1):
        if base[i]:
            base[i * i :: i] = False
    small = np.flatnonzero(base)
    count = 0
    for lo in range(2, limit + 1, segment):
        hi = min(lo + segment - 1, limit)
        block = np.ones(hi - lo + 1, dtype=bool)
        for p in small:
            if p * p > hi:
                break
            start = max(p * p, -(-lo // p) * p)
            block[start - lo :: p] = False
        count += int(block.sum())
    return count


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Trial division by 2, 3 and 6k +- 1; fine up to 10**12."""
    if n <= 0:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    if n > MAX_FACTOR_N:
        raise CapacityError(f"factorize supports n <= {MAX_FACTOR_N}, got {n}")
    return Factorization(n, tuple(_factor_pairs(n)))


@lru_cache(maxsize=1 << 16)
def _factor_pairs(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    m = n
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= m:
        for p in (d, d + 2):
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out.append((p, e))
        d += 6
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def mobius(n: int) -> int:
    f = factorize(n).factors
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n).factors:
        r = r // p * (p - 1)
    return r


def omega(n: int) -> int:
    return len(factorize(n).factors)


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n).factors)


def mult_invariants(n: int) -> tuple[int, int, int]:
    """(mu(n), phi(n), omega(n))."""
    return mobius(n), euler_phi(n), omega(n)


@dataclass(frozen=True)
class RootCount:
    k: int
    d: int
    n: int
    count: int


def prime_root_count(k: int, p: int, n: int) -> int:
    """rho_k(p, n) for a prime p via Euler's criterion in (Z/p)*.

    The map h -> h**k on the cyclic group (Z/p)* has kernel of size
    g = gcd(k, p - 1), so a unit n has g roots if n**((p-1)/g) == 1 and none
    otherwise; n = 0 mod p has the single root h = 0.
    """
    nm = n % p
    if nm == 0:
        return 1
    g = math.gcd(k, p - 1)
    return g if pow(nm, (p - 1) // g, p) == 1 else 0


def _exhaustive_root_count(k: int, d: int, n: int) -> int:
    h = np.arange(d, dtype=np.int64)
    acc = np.ones(d, dtype=np.int64) % d
    base = h % d
    e = k
    while e:
        if e & 1:
            acc = (acc * base) % d
        base = (base * base) % d
        e >>= 1
    return int(np.count_nonzero(acc == n % d))


def root_count(k: int, d: int, n: int, method: str = "auto") -> RootCount:
    """rho_k(d, n) = #{h mod d : h**k = n mod d}.

    ``method`` is "exhaustive" (all h mod d), "crt" (product of prime counts,
    squarefree d only) or "auto" (crt when d is squarefree, else exhaustive).
    Non-squarefree moduli are handled only exhaustively.
    """
    if d <= 0:
        raise DomainError(f"modulus must be >= 1, got {d}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if method == "auto":
        method = "crt" if d <= MAX_FACTOR_N and is_squarefree(d) else "exhaustive"
    if method == "crt":
        if not is_squarefree(d):
            raise DomainError(f"CRT path needs squarefree d, got {d}")
        count = math.prod(prime_root_count(k, p, n) for p in factorize(d).primes)
    elif method == "exhaustive":
        if d > MAX_EXHAUSTIVE_MODULUS:
            raise CapacityError(f"exhaustive root count limited to d <= {MAX_EXHAUSTIVE_MODULUS}")
        count = _exhaustive_root_count(k, d, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return RootCount(k, d, n, count)


def integer_root(n: int, e: int) -> int:
    """floor(n ** (1/e)) for n >= 0, exact."""
    if n < 0:
        raise DomainError("integer_root needs n >= 0")
    if n < 2 or e == 1:
        return n
    if e == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / e)))
    while r**e > n:
        r -= 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def is_perfect_power(n: int, e: int) -> bool:
    return n >= 0 and integer_root(n, e) ** e == n


def is_in_Ik(k: int, n: int) -> bool:
    """Whether x**k - n is irreducible over Q (Capelli's criterion).

    x**k - n is reducible iff n is a p-th power for some prime p | k, or
    4 | k and n = -4c**4. The second case needs n < 0, so for the positive n
    used here only the perfect-power test matters.
    """
    if k < 2 or n < 1:
        raise DomainError(f"is_in_Ik needs k >= 2 and n >= 1, got k={k}, n={n}")
    return not any(is_perfect_power(n, p) for p in factorize(k).primes)


def in_Ik_mask(k: int, x_max: int) -> np.ndarray:
    """Boolean array over 0..x_max marking n in I_k (0 is never in I_k)."""
    mask = np.ones(x_max + 1, dtype=bool)
    mask[0] = False
    for p in factorize(k).primes:
        top = integer_root(x_max, p)
        mask[np.arange(1, top + 1, dtype=np.int64) ** p] = False
    return mask


def omega_array(x: int) -> np.ndarray:
    """omega(n) for n = 0..x (omega(0) set to 0)."""
    om = np.zeros(x + 1, dtype=np.int64)
    flags = kernels.sieve(max(x, 2))
    for p in np.flatnonzero(flags[: x + 1]):
        om[p::p] += 1
    return om


def sum_power_omega(x: int, a: int) -> tuple[int, float]:
    """Sum over n <= x of a**omega(n), and that sum over x (log x)**(a-1)."""
    if x < 3:
        raise DomainError(f"sum_power_omega needs x >= 3, got {x}")
    om = omega_array(x)[1:]
    total = int(np.sum(np.power(np.int64(a), om, dtype=np.int64) if a > 1 else np.ones_like(om)))
    return total, total / (x * math.log(x) ** (a - 1))
