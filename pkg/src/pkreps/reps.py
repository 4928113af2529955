"""Representation counts n = p + m**k, exceptional sets and windowed counts.

Conventions:
  * m >= 1. Allowing m = 0 would make every prime representable and erase the
    classical exceptional values 2, 5, 10, 13 for k = 2.
  * I(X) = [X/2, X] and J_k(X) = [X**(1/k)/2, X**(1/k)] on the integers, i.e.
    j runs from ceil(X**(1/k)/2) to floor(X**(1/k)).
  * Scan counts are stored as uint16 and saturate at 65535 (R_k(n) is far
    below that for n <= 10**8).
"""
from __future__ import annotations

import csv
import io
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._kernels import kernels
from .arith import CapacityError, DomainError, in_Ik_mask, integer_root, is_in_Ik, prime_table
from .series import singular_series

MAX_SCAN = 10**8
SCAN_MAGIC = b"PKRS"
SCAN_VERSION = 1
SCAN_CSV_SCHEMA = "pkreps.scan/1"
_HEADER = struct.Struct("<4sHHQ")


@dataclass(frozen=True)
class RepScanResult:
    k: int
    x_max: int
    counts: np.ndarray = field(repr=False)
    in_Ik: np.ndarray = field(repr=False)
    exceptional: tuple[int, ...] = ()

    @property
    def E(self) -> int:
        return len(self.exceptional)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(f"# schema: {SCAN_CSV_SCHEMA} k={self.k} x_max={self.x_max}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "R", "in_Ik"])
            for n in range(1, self.x_max + 1):
                w.writerow([n, int(self.counts[n]), int(self.in_Ik[n])])

    def to_bytes(self) -> bytes:
        """Header (magic, version, k, x_max; little endian) then uint16 counts for n = 0..x_max."""
        head = _HEADER.pack(SCAN_MAGIC, SCAN_VERSION, self.k, self.x_max)
        return head + self.counts.astype("<u2").tobytes()

    def write_binary(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def from_bytes(cls, blob: bytes) -> "RepScanResult":
        magic, version, k, x_max = _HEADER.unpack_from(blob)
        if magic != SCAN_MAGIC or version != SCAN_VERSION:
            raise ValueError(f"not a pkreps scan cache (magic={magic!r}, version={version})")
        counts = np.frombuffer(blob, dtype="<u2", offset=_HEADER.size, count=x_max + 1).astype(np.uint16)
        return _assemble(k, x_max, counts)

    @classmethod
    def read_binary(cls, path) -> "RepScanResult":
        return cls.from_bytes(Path(path).read_bytes())

    @classmethod
    def read_csv(cls, path) -> "RepScanResult":
        text = Path(path).read_text().splitlines()
        head = dict(tok.split("=") for tok in text[0].split()[3:])
        k, x_max = int(head["k"]), int(head["x_max"])
        counts = np.zeros(x_max + 1, dtype=np.uint16)
        for row in csv.DictReader(io.StringIO("\n".join(text[1:]))):
            counts[int(row["n"])] = int(row["R"])
        return _assemble(k, x_max, counts)


def _assemble(k: int, x_max: int, counts: np.ndarray) -> RepScanResult:
    mask = in_Ik_mask(k, x_max) if x_max >= 1 else np.zeros(max(x_max, 0) + 1, dtype=bool)
    exc = np.flatnonzero(mask & (counts == 0))
    exc = exc[exc >= 2]
    counts.setflags(write=False)
    mask.setflags(write=False)
    return RepScanResult(k, x_max, counts, mask, tuple(int(n) for n in exc))


def count_reps(k: int, n: int, primes=None) -> int:
    """R_k(n): pairs (p, m), p prime, m >= 1, p + m**k = n."""
    if n < 2:
        return 0
    table = primes if primes is not None else prime_table(n)
    if table.limit < n:
        raise CapacityError(f"prime table limit {table.limit} < n = {n}")
    top = integer_root(n - 2, k)
    return sum(1 for m in range(1, top + 1) if table.flags[n - m**k])


def scan(k: int, x_max: int, threads: int = 1, cache_dir=None) -> RepScanResult:
    """R_k(n) for all n <= x_max by looping over m and adding shifted prime indicators.

    With ``threads > 1`` the m-range is split into contiguous shards whose
    partial counts are summed in shard order. When ``cache_dir`` (or the
    PKREPS_CACHE_DIR environment variable) names a directory, the result is
    read from / written to a binary cache there.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if x_max > MAX_SCAN:
        raise CapacityError(f"scan limited to x_max <= {MAX_SCAN}; got {x_max}")
    if x_max < 2:
        empty = np.zeros(max(x_max, 0) + 1, dtype=np.uint16)
        return _assemble(k, x_max, empty)
    cache_dir = cache_dir or os.environ.get("PKREPS_CACHE_DIR")
    cache = Path(cache_dir) / f"scan_k{k}_x{x_max}.bin" if cache_dir else None
    if cache is not None and cache.exists():
        return RepScanResult.read_binary(cache)
    primes = prime_table(x_max).primes_in(2, x_max)
    m_top = integer_root(x_max - 2, k) + 1
    if threads <= 1 or m_top < 2 * threads:
        counts = kernels.rep_counts(primes, k, x_max, 1, m_top)
    else:
        edges = np.linspace(1, m_top, threads + 1).astype(int)
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda lo_hi: kernels.rep_counts(primes, k, x_max, *lo_hi),
                                  zip(edges[:-1], edges[1:])))
        acc = np.zeros(x_max + 1, dtype=np.uint32)
        for part in parts:
            acc += part
        counts = np.minimum(acc, 0xFFFF).astype(np.uint16)
    result = _assemble(k, x_max, counts)
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        result.write_binary(cache)
    return result


def exceptional_set(k: int, x_max: int) -> list[int]:
    """Sorted n <= x_max with n in I_k and R_k(n) = 0; its length is E_k(x_max)."""
    return list(scan(k, x_max).exceptional)


def j_range(k: int, X: int) -> tuple[int, int]:
    """Inclusive integer bounds of J_k(X) = [X**(1/k)/2, X**(1/k)]."""
    top = integer_root(X, k)
    # smallest j with (2j)**k >= X
    lo = integer_root(X, k) // 2
    while (2 * lo) ** k < X:
        lo += 1
    return max(lo, 1), top


def i_range(X: int) -> tuple[int, int]:
    """Inclusive integer bounds of I(X) = [X/2, X]."""
    return (X + 1) // 2, X


@dataclass(frozen=True)
class WindowedCount:
    k: int
    X: int
    n: int
    weighted: float
    unweighted: int


def windowed_count(k: int, X: int, n: int) -> WindowedCount:
    """r_k(X, n): sum of log p over n = j**k + p, j in J_k(X), p prime in I(X)."""
    if not X / 2 <= n < 2 * X:
        return WindowedCount(k, X, n, 0.0, 0)
    table = prime_table(X)
    lo_i, hi_i = i_range(X)
    lo_j, hi_j = j_range(k, X)
    logs = []
    for j in range(lo_j, hi_j + 1):
        p = n - j**k
        if lo_i <= p <= hi_i and table.flags[p]:
            logs.append(math.log(p))
    return WindowedCount(k, X, n, math.fsum(logs), len(logs))


def l_count(k: int, X: int, n: int, rho: float = 1.0) -> float:
    """L_rho(X, n): sum of m**(rho-1) over n = j**k + m, j in J_k(X), m in I(X)."""
    if not X / 2 <= n < 2 * X:
        return 0.0
    lo_i, hi_i = i_range(X)
    lo_j, hi_j = j_range(k, X)
    terms = [float(n - j**k) ** (rho - 1.0) for j in range(lo_j, hi_j + 1) if lo_i <= n - j**k <= hi_i]
    return math.fsum(terms)


def selberg_bound(k: int, n: int, X: float, cutoff: int) -> float:
    """2 prod_{p <= cutoff}(1 - (rho_k(p,n) - 1)/(p - 1)) X / log X, without the O-term.

    This is the main term of the sieve upper bound for the number of m with
    n - m**k prime; it carries X / log X rather than n**(1/k) / log n, which
    makes it a loose but valid bound for R_k(n) when n <= X.
    """
    if n > X:
        raise DomainError(f"selberg_bound needs n <= X, got n={n}, X={X}")
    return 2.0 * singular_series(k, n, cutoff).value * X / math.log(X)


def hl_ratio(k: int, n: int, series_cutoff: int, count: int | None = None) -> float:
    """R_k(n) log n / (S_k(n; cutoff) n**(1/k)); pass ``count`` to reuse a scanned R_k(n)."""
    if not is_in_Ik(k, n):
        raise DomainError(f"{n} is not in I_{k}; the predicted count is 0")
    series = singular_series(k, n, series_cutoff).value
    if series <= 0:
        raise DomainError("truncated singular series vanished")
    r = count_reps(k, n) if count is None else count
    return r * math.log(n) / (series * n ** (1.0 / k))


def hl_ratios(k: int, ns: np.ndarray, counts: np.ndarray, series_cutoff: int) -> np.ndarray:
    """hl_ratio for many n at once; ``counts[i]`` is R_k(ns[i]). All n must be in I_k."""
    ns = np.asarray(ns, dtype=np.int64)
    log_series = np.zeros(len(ns))
    if series_cutoff >= 2:
        primes = prime_table(series_cutoff).primes_in(2, series_cutoff)
        for p in primes.tolist():
            residues = np.arange(p, dtype=np.int64)
            rho_table = np.bincount(pow_mod_array(residues, k, p), minlength=p)
            rho = rho_table[ns % p]
            log_series += np.log1p(-(rho - 1) / (p - 1))
    return counts * np.log(ns) / (np.exp(log_series) * ns ** (1.0 / k))


def pow_mod_array(base: np.ndarray, e: int, mod: int) -> np.ndarray:
    acc = np.ones_like(base) % mod
    b = base % mod
    while e:
        if e & 1:
            acc = acc * b % mod
        b = b * b % mod
        e >>= 1
    return acc


MAX_WARING_N = 10**6


def count_waring(s: int, k: int, n: int) -> int:
    """R_{s,k}(n): ordered s-tuples of positive integers with k-th powers summing to n."""
    if s < 1 or s > 4:
        raise CapacityError("count_waring supports 1 <= s <= 4")
    if n > MAX_WARING_N:
        raise CapacityError(f"count_waring limited to n <= {MAX_WARING_N}")
    if n < s:
        return 0
    top = integer_root(n, k)
    powers = np.arange(1, top + 1, dtype=np.int64) ** k
    one = np.zeros(n + 1, dtype=np.int64)
    one[powers] = 1
    if s == 1:
        return int(one[n])
    two = np.zeros(n + 1, dtype=np.int64)
    sums = np.add.outer(powers, powers).ravel()
    sums = sums[sums <= n]
    np.add.at(two, sums, 1)
    if s == 2:
        return int(two[n])
    if s == 3:
        return int(sum(two[n - v] for v in powers.tolist() if v <= n))
    return int(np.dot(two, two[::-1]))
