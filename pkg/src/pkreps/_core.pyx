# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Signatures and results match ``pkreps._fallback``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, M_PI
from libc.stdint cimport int64_t, uint8_t, uint16_t, uint64_t

cnp.import_array()

NAME = "cython"

cdef extern from *:
    """
    typedef unsigned __int128 pk_u128;
    static inline unsigned long long pk_mulmod(unsigned long long a, unsigned long long b, unsigned long long m) {
        return (unsigned long long)(((pk_u128)a * b) % m);
    }
    """
    unsigned long long pk_mulmod(unsigned long long a, unsigned long long b, unsigned long long m) nogil

cdef Py_ssize_t SEGMENT = 1 << 18


def sieve(Py_ssize_t limit):
    """Segmented sieve of Eratosthenes; uint8 flags of length limit+1."""
    cdef cnp.ndarray[uint8_t, ndim=1] flags = np.ones(limit + 1, dtype=np.uint8)
    cdef uint8_t[::1] f = flags
    cdef Py_ssize_t root = <Py_ssize_t>(limit ** 0.5)
    while (root + 1) * (root + 1) <= limit:
        root += 1
    while root * root > limit:
        root -= 1
    cdef Py_ssize_t i, j, p, lo, hi, start
    f[0] = 0
    if limit >= 1:
        f[1] = 0
    with nogil:
        for i in range(2, root + 1):
            if f[i]:
                j = i * i
                while j <= root:
                    f[j] = 0
                    j += i
    small = np.flatnonzero(flags[: root + 1]).astype(np.int64)
    cdef int64_t[::1] sp = small
    cdef Py_ssize_t ns = sp.shape[0]
    cdef Py_ssize_t idx
    with nogil:
        lo = root + 1
        while lo <= limit:
            hi = lo + SEGMENT - 1
            if hi > limit:
                hi = limit
            for idx in range(ns):
                p = sp[idx]
                if p * p > hi:
                    break
                start = ((lo + p - 1) // p) * p
                if start < p * p:
                    start = p * p
                j = start
                while j <= hi:
                    f[j] = 0
                    j += p
            lo = hi + 1
    return flags


def rep_counts(cnp.ndarray primes_arr, int k, Py_ssize_t x_max, Py_ssize_t m_lo, Py_ssize_t m_hi):
    """Counts of n = p + m**k for m in [m_lo, m_hi), n <= x_max, saturating at 2**16-1."""
    cdef cnp.ndarray[uint16_t, ndim=1] out = np.zeros(x_max + 1, dtype=np.uint16)
    cdef uint16_t[::1] acc = out
    cdef const int64_t[::1] primes = np.ascontiguousarray(primes_arr, dtype=np.int64)
    cdef Py_ssize_t np_ = primes.shape[0]
    cdef Py_ssize_t m, i, idx
    cdef int64_t shift
    cdef int e
    with nogil:
        for m in range(m_lo, m_hi):
            shift = 1
            for e in range(k):
                shift *= m
            if shift + 2 > x_max:
                break
            for i in range(np_):
                idx = primes[i] + shift
                if idx > x_max:
                    break
                if acc[idx] != 0xFFFF:
                    acc[idx] += 1
    return out


def shifted_accumulate(cnp.ndarray shifts_arr, cnp.ndarray positions_arr, cnp.ndarray weights_arr,
                       int64_t base, Py_ssize_t length):
    """out[s + x - base] += w over all shifts s and (x, w) pairs landing in [0, length)."""
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(length, dtype=np.float64)
    cdef double[::1] o = out
    cdef const int64_t[::1] shifts = np.ascontiguousarray(shifts_arr, dtype=np.int64)
    cdef const int64_t[::1] pos = np.ascontiguousarray(positions_arr, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights_arr, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef int64_t idx
    with nogil:
        for i in range(shifts.shape[0]):
            for j in range(pos.shape[0]):
                idx = shifts[i] + pos[j] - base
                if 0 <= idx < length:
                    o[idx] += w[j]
    return out


cdef inline void _neumaier_add(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if (s[0] if s[0] >= 0 else -s[0]) >= (x if x >= 0 else -x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def expsum(cnp.ndarray freqs_arr, cnp.ndarray weights_arr, double alpha):
    """Sum of w * e(alpha * f), with the phase reduced mod 1 before the trig call."""
    cdef const int64_t[::1] freqs = np.ascontiguousarray(freqs_arr, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights_arr, dtype=np.float64)
    cdef double sr = 0, cr = 0, si = 0, ci = 0, x, ang
    cdef Py_ssize_t i
    with nogil:
        for i in range(freqs.shape[0]):
            x = (<double>freqs[i]) * alpha
            x = x - <double>(<int64_t>x)
            if x < 0:
                x += 1.0
            ang = 2.0 * M_PI * x
            _neumaier_add(&sr, &cr, w[i] * cos(ang))
            _neumaier_add(&si, &ci, w[i] * sin(ang))
    return complex(sr + cr, si + ci)


def expsum_rational(cnp.ndarray freqs_arr, cnp.ndarray weights_arr, int64_t num, int64_t den):
    """Sum of w * e(f * num / den) with the residue f*num mod den taken exactly."""
    cdef const int64_t[::1] freqs = np.ascontiguousarray(freqs_arr, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights_arr, dtype=np.float64)
    cdef double sr = 0, cr = 0, si = 0, ci = 0, ang
    cdef uint64_t nm = <uint64_t>(((num % den) + den) % den)
    cdef uint64_t r, fm
    cdef Py_ssize_t i
    with nogil:
        for i in range(freqs.shape[0]):
            fm = <uint64_t>(((freqs[i] % den) + den) % den)
            r = pk_mulmod(fm, nm, <uint64_t>den)
            ang = 2.0 * M_PI * (<double>r / <double>den)
            _neumaier_add(&sr, &cr, w[i] * cos(ang))
            _neumaier_add(&si, &ci, w[i] * sin(ang))
    return complex(sr + cr, si + ci)


cdef inline double _sinpi_rational(int64_t u, int64_t d) noexcept nogil:
    cdef int64_t dd = 2 * d
    cdef double sign = 1.0
    u = ((u % dd) + dd) % dd
    if u >= d:
        sign = -1.0
        u -= d
    if 2 * u > d:
        u = d - u
    if u == 0:
        return 0.0
    return sign * sin(M_PI * (<double>u / <double>d))


def arc_sum(cnp.ndarray c_arr, int64_t m0, int64_t n, int64_t a, int64_t q, int64_t dnum, int64_t dden):
    """Closed-form integral over [a/q - delta, a/q + delta] of sum_m c_m e((m - n) alpha)."""
    cdef const double[::1] c = np.ascontiguousarray(c_arr, dtype=np.float64)
    cdef double s = 0, comp = 0, w, ph
    cdef int64_t t, r, u
    cdef int64_t am = ((a % q) + q) % q
    cdef int64_t dd = 2 * dden
    cdef uint64_t dn = <uint64_t>(((dnum % dd) + dd) % dd)
    cdef Py_ssize_t i
    if dden <= 0 or dden >= (<int64_t>1 << 61):
        raise ValueError("arc width denominator out of range")
    with nogil:
        for i in range(c.shape[0]):
            if c[i] == 0:
                continue
            t = i + m0 - n
            if t == 0:
                w = 2.0 * (<double>dnum / <double>dden)
            else:
                u = <int64_t>pk_mulmod(<uint64_t>((((2 * t) % dd) + dd) % dd), dn, <uint64_t>dd)
                w = _sinpi_rational(u, dden) / (M_PI * <double>t)
            r = ((t % q) + q) % q
            r = (r * am) % q
            ph = cos(2.0 * M_PI * (<double>r / <double>q))
            _neumaier_add(&s, &comp, c[i] * ph * w)
    return s + comp


def sum_counts_square(cnp.ndarray values_arr, int s):
    """Sum over v of N(v)**2, N(v) = number of s-tuples from ``values`` summing to v."""
    cdef const int64_t[::1] values = np.ascontiguousarray(values_arr, dtype=np.int64)
    cdef Py_ssize_t nv = values.shape[0]
    cdef Py_ssize_t total = int(nv) ** s
    cdef cnp.ndarray[int64_t, ndim=1] sums_arr = np.zeros(total, dtype=np.int64)
    cdef int64_t[::1] sums = sums_arr
    cdef Py_ssize_t i, j, width = 1, r
    with nogil:
        for r in range(s):
            # expand in place from the back so earlier entries are still unread
            for i in range(width - 1, -1, -1):
                for j in range(nv - 1, -1, -1):
                    sums[i * nv + j] = sums[i] + values[j]
            width *= nv
    sums_arr.sort()
    cdef int64_t acc = 0, run = 1
    with nogil:
        for i in range(1, total):
            if sums[i] == sums[i - 1]:
                run += 1
            else:
                acc += run * run
                run = 1
        acc += run * run
    return int(acc)


cdef inline uint64_t _powmod(uint64_t b, uint64_t e, uint64_t m) noexcept nogil:
    cdef uint64_t r = 1 % m
    b %= m
    while e:
        if e & 1:
            r = pk_mulmod(r, b, m)
        b = pk_mulmod(b, b, m)
        e >>= 1
    return r


cdef inline int64_t _gcd(int64_t a, int64_t b) noexcept nogil:
    while b:
        a, b = b, a % b
    return a


def prime_rho(primes_arr, int64_t k, n):
    """rho_k(p, n) for every prime p in ``primes``."""
    cdef const int64_t[::1] primes = np.ascontiguousarray(primes_arr, dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] out = np.empty(primes.shape[0], dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef int64_t nn = n
    cdef int64_t p, g, nm
    cdef Py_ssize_t i
    with nogil:
        for i in range(primes.shape[0]):
            p = primes[i]
            nm = ((nn % p) + p) % p
            if nm == 0:
                o[i] = 1
                continue
            g = _gcd(k, p - 1)
            if _powmod(<uint64_t>nm, <uint64_t>((p - 1) // g), <uint64_t>p) == 1:
                o[i] = g
            else:
                o[i] = 0
    return out
