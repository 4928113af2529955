"""Singular series for p + m**k: Euler products, the truncated sum over q and tail majorants."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import kernels
from .arith import DomainError, CapacityError, factorize, is_squarefree, prime_root_count, prime_table

MAX_PRODUCT_CUTOFF = 10**7
MAX_SUM_CUTOFF = 10**5


@dataclass(frozen=True)
class TruncatedEulerProduct:
    """A truncated singular-series value.

    ``tail_estimate`` is a size estimate for what the truncation leaves out; see
    the producing function for the formula. ``skipped`` lists primes dropped by
    the division guard of ``product_form`` (empty in practice, since
    rho_k(p, n) < p for every prime p).
    """

    k: int
    n: int
    cutoff: int
    value: float
    tail_estimate: float
    excluded_modulus: int = 1
    skipped: tuple[int, ...] = ()
    lam: float | None = None


def _primes_upto(bound: int) -> np.ndarray:
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    return prime_table(bound).primes_in(2, bound)


def local_rhos(k: int, n: int, primes: np.ndarray) -> np.ndarray:
    return kernels.prime_rho(np.asarray(primes, dtype=np.int64), int(k), int(n))


def local_factor(k: int, p: int, n: int) -> float:
    """(p - rho_k(p, n)) / (p - 1)."""
    rho = prime_root_count(k, p, n)
    return (p - rho) / (p - 1)


def _log_product(k: int, n: int, primes: np.ndarray) -> float:
    if len(primes) == 0:
        return 0.0
    rho = local_rhos(k, n, primes)
    p = primes.astype(np.float64)
    return math.fsum(np.log1p(-(rho - 1) / (p - 1)).tolist())


def singular_series(k: int, n: int, cutoff: int) -> TruncatedEulerProduct:
    """Product over p <= cutoff of (p - rho_k(p, n)) / (p - 1).

    Primes with gcd(k, p - 1) = 1 and p not dividing n have rho = 1 and are
    neutral; the rest contribute factors 1 + O((k-1)/p) whose signs follow
    characters of order dividing k, so the remaining log-product behaves like a
    sum of random signs. The reported tail estimate is that standard deviation,
    (k - 1) / sqrt(R log R) with R = max(cutoff, 2). It is a heuristic scale,
    not a bound.
    """
    if n < 1:
        raise DomainError(f"singular_series needs n >= 1, got {n}")
    if cutoff > MAX_PRODUCT_CUTOFF:
        raise CapacityError(f"cutoff limited to {MAX_PRODUCT_CUTOFF}")
    value = math.exp(_log_product(k, n, _primes_upto(cutoff)))
    r = max(cutoff, 2)
    return TruncatedEulerProduct(k, n, cutoff, value, (k - 1) / math.sqrt(r * math.log(r)))


def a_coeff(k: int, n: int, q: int, r: int = 1) -> float:
    """A(n, q, r) = mu(q)/phi(q) * mu((q, r)**2) * prod over p | q of (rho_k(p, n) - 1)."""
    if q < 1 or not is_squarefree(q):
        raise DomainError(f"a_coeff needs squarefree q >= 1, got {q}")
    if math.gcd(q, r) > 1:
        return 0.0
    num = 1
    den = 1
    for p in factorize(q).primes:
        num *= -(prime_root_count(k, p, n) - 1)
        den *= p - 1
    return num / den


def _a_array(k: int, n: int, R: int, r: int) -> np.ndarray:
    """A(n, q, r) for q = 0..R (0 at non-squarefree q and q sharing a prime with r)."""
    out = np.zeros(R + 1, dtype=np.float64)
    if R < 1:
        return out
    out[1:] = 1.0
    primes = _primes_upto(R)
    rho = local_rhos(k, n, primes)
    for p, rp in zip(primes.tolist(), rho.tolist()):
        if r % p == 0:
            out[p::p] = 0.0
            continue
        out[p::p] *= -(rp - 1) / (p - 1)
        out[p * p :: p * p] = 0.0
    return out


def truncated_sum(k: int, n: int, R: int, r: int = 1) -> TruncatedEulerProduct:
    """Sum over squarefree q <= R coprime to r of mu(q)/phi(q) prod_{p | q}(rho_k(p, n) - 1).

    This equals the sum of mu(q) H_k(q, n) / (q phi(q)) because H_k(q, n) is
    multiplicative with H_k(p, n) = p (rho_k(p, n) - 1). The tail estimate is
    ``tail_bound(k, n, R, R)``, a majorant for the gap to the full product.
    """
    if R > MAX_SUM_CUTOFF:
        raise CapacityError(f"truncated_sum limited to R <= {MAX_SUM_CUTOFF}")
    if R < 1:
        return TruncatedEulerProduct(k, n, R, 0.0, 0.0, r)
    value = math.fsum(_a_array(k, n, R, r).tolist())
    tail = tail_bound(k, n, R, R) if R >= 2 else 0.0
    return TruncatedEulerProduct(k, n, R, value, tail, r)


def product_form(k: int, n: int, R: int, r: int = 1) -> TruncatedEulerProduct:
    """prod_{p <= R} (p - rho)/(p - 1) times prod_{p <= R, p | r} (p - 1)/(p - rho)."""
    primes = _primes_upto(R)
    rho = local_rhos(k, n, primes)
    logs = []
    skipped = []
    for p, rp in zip(primes.tolist(), rho.tolist()):
        f = math.log1p(-(rp - 1) / (p - 1))
        if r % p == 0:
            if rp == p:
                skipped.append(p)
                logs.append(f)
                continue
            f = 0.0
        logs.append(f)
    value = math.exp(math.fsum(logs)) if logs else 1.0
    tail = tail_bound(k, n, R, R) if R >= 2 else 0.0
    return TruncatedEulerProduct(k, n, R, value, tail, r, tuple(skipped))


def tail_bound(k: int, n: int, R: int, V: float) -> float:
    """Majorant V**-lam prod_{p <= R}(1 + (k-1) p**lam / (p-1)) with lam = 1/log R.

    Bounds the sum of |A(n, q, r)| over squarefree q > V whose prime factors
    are all <= R (Rankin's trick: (q/V)**lam >= 1 there).
    """
    if R < 2 or V < R:
        raise DomainError(f"tail_bound needs V >= R >= 2, got R={R}, V={V}")
    lam = 1.0 / math.log(R)
    primes = _primes_upto(R).astype(np.float64)
    terms = np.log1p((k - 1) * np.power(primes, lam) / (primes - 1))
    return math.exp(math.fsum(terms.tolist()) - lam * math.log(V))


def smooth_squarefree(R: int) -> list[int]:
    """All squarefree q whose prime factors are <= R, ascending."""
    out = [1]
    for p in _primes_upto(R).tolist():
        out += [q * p for q in out]
    return sorted(out)
