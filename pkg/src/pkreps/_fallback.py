"""Pure numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_core.pyx``.
The package imports the compiled module when it is available and this one
otherwise (see ``pkreps._kernels``).
"""
import math

import numpy as np

NAME = "python"

_TWO_PI = 2.0 * math.pi


def sieve(limit):
    """Sieve of Eratosthenes; returns a uint8 array with 1 at primes, length limit+1."""
    flags = np.ones(limit + 1, dtype=np.uint8)
    flags[:2] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = 0
    return flags


def rep_counts(primes, k, x_max, m_lo, m_hi):
    """Counts of n = p + m**k for m in [m_lo, m_hi), n <= x_max, saturating at 2**16-1."""
    acc = np.zeros(x_max + 1, dtype=np.uint32)
    for m in range(m_lo, m_hi):
        shift = m**k
        if shift + 2 > x_max:
            break
        top = np.searchsorted(primes, x_max - shift, side="right")
        acc[primes[:top] + shift] += 1
    np.minimum(acc, 0xFFFF, out=acc)
    return acc.astype(np.uint16)


def shifted_accumulate(shifts, positions, weights, base, length):
    """out[s + x - base] += w over all shifts s and (x, w) pairs landing in [0, length)."""
    out = np.zeros(length, dtype=np.float64)
    for s in shifts.tolist():
        idx = positions + (s - base)
        keep = (idx >= 0) & (idx < length)
        out[idx[keep]] += weights[keep]
    return out


def _neumaier(values):
    return math.fsum(values.tolist())


def expsum(freqs, weights, alpha):
    """Sum of w * e(alpha * f), with the phase reduced mod 1 before the trig call."""
    frac = np.mod(freqs.astype(np.float64) * alpha, 1.0)
    ang = _TWO_PI * frac
    return complex(_neumaier(weights * np.cos(ang)), _neumaier(weights * np.sin(ang)))


def expsum_rational(freqs, weights, num, den):
    """Sum of w * e(f * num / den) with the residue f*num mod den taken exactly."""
    res = _mulmod(np.mod(freqs, den), num % den, den)
    ang = _TWO_PI * (res.astype(np.float64) / den)
    return complex(_neumaier(weights * np.cos(ang)), _neumaier(weights * np.sin(ang)))


def _mulmod(x, b, m):
    """x * b mod m for a non-negative int64 array x < m, exact even when the product overflows int64."""
    if m < 2**31 or b == 0 or int(x.max(initial=0)) <= (2**63 - 1) // b:
        return (x * b) % m
    return np.array([int(v) * b % m for v in x.tolist()], dtype=np.int64)


def _sinpi_rational(u, d):
    """sin(pi * u / d) for int64 arrays u, scalar d, exact zeros at multiples of d."""
    u = np.mod(u, 2 * d)
    sign = np.where(u >= d, -1.0, 1.0)
    u = np.where(u >= d, u - d, u)
    u = np.where(2 * u > d, d - u, u)
    out = sign * np.sin(math.pi * (u.astype(np.float64) / d))
    out[u == 0] = 0.0
    return out


def arc_sum(c, m0, n, a, q, dnum, dden):
    """Closed-form integral over [a/q - delta, a/q + delta] of sum_m c_m e((m - n) alpha).

    ``delta = dnum / dden``; only the real part is returned, the imaginary parts
    cancel once the conjugate arc (q - a)/q is added.
    """
    t = np.arange(len(c), dtype=np.int64) + (m0 - n)
    phase = np.mod(t * (a % q), q).astype(np.float64) / q
    w = np.empty(len(c), dtype=np.float64)
    zero = t == 0
    nz = ~zero
    if dden <= 0 or dden >= 2**61:
        raise ValueError("arc width denominator out of range")
    dd = 2 * dden
    u = _mulmod(np.mod(2 * t[nz], dd), dnum % dd, dd)
    w[nz] = _sinpi_rational(u, dden) / (math.pi * t[nz].astype(np.float64))
    w[zero] = 2.0 * dnum / dden
    return _neumaier(c * np.cos(_TWO_PI * phase) * w)


def sum_counts_square(values, s):
    """Sum over v of N(v)**2, N(v) = number of s-tuples from ``values`` summing to v."""
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(s):
        sums = np.add.outer(sums, values).ravel()
    span = int(sums.max() - sums.min()) + 1
    if span <= 4 * sums.size:
        counts = np.bincount(sums - sums.min())
    else:
        counts = np.unique(sums, return_counts=True)[1]
    return int(np.dot(counts.astype(np.int64), counts.astype(np.int64)))


def _powmod(base, exp, mod):
    result = np.ones_like(base)
    base = base % mod
    exp = exp.copy()
    while np.any(exp > 0):
        odd = (exp & 1) == 1
        result = np.where(odd, (result * base) % mod, result)
        base = (base * base) % mod
        exp >>= 1
    return result


def prime_rho(primes, k, n):
    """rho_k(p, n) for every prime p in ``primes`` (p < 3e9)."""
    primes = np.asarray(primes, dtype=np.int64)
    g = np.gcd(np.int64(k), primes - 1)
    nm = np.mod(np.int64(n), primes)
    residue = _powmod(nm, (primes - 1) // g, primes) == 1
    rho = np.where(residue, g, 0)
    rho[nm == 0] = 1
    return rho.astype(np.int64)
