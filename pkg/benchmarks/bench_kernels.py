"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import importlib
import timeit

import numpy as np

from pkreps import _fallback


def cases():
    rng = np.random.default_rng(0)
    primes = np.flatnonzero(_fallback.sieve(2_000_000)).astype(np.int64)
    j2 = np.arange(64, 129, dtype=np.int64) ** 2
    pos = primes[(primes >= 8192) & (primes <= 16384)]
    logs = np.log(pos.astype(np.float64))
    coeff = _fallback.shifted_accumulate(j2, pos, logs, int(8192 + j2[0]), 16384 + int(j2[-1]) - 8192 - int(j2[0]) + 1)
    freqs = rng.integers(0, 10**6, 100_000).astype(np.int64)
    weights = rng.random(100_000)
    small = np.arange(1, 2**12, dtype=np.int64)
    return {
        "sieve(2e6)": lambda k: k.sieve(2_000_000),
        "rep_counts(k=2, 2e6)": lambda k: k.rep_counts(primes, 2, 2_000_000, 1, 1415),
        "shifted_accumulate(X=2^14)": lambda k: k.shifted_accumulate(j2, pos, logs, int(8192 + j2[0]), len(coeff)),
        "expsum(1e5)": lambda k: k.expsum(freqs, weights, 0.318309886),
        "expsum_rational(1e5)": lambda k: k.expsum_rational(freqs, weights, 355, 113 * 997),
        "arc_sum(X=2^14)": lambda k: k.arc_sum(coeff, int(8192 + j2[0]), 20011, 3, 7, 775630, 7 * 198354939),
        "sum_counts_square(|J|=65, s=3)": lambda k: k.sum_counts_square(j2, 3),
        "prime_rho(p<=2^12)": lambda k: k.prime_rho(small[np.isin(small, primes)], 3, 123457),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": _fallback}
    try:
        backends["cython"] = importlib.import_module("pkreps._core")
    except ImportError:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, fn in cases().items():
        times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for mod in backends.values()]
        row = f"{label:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
