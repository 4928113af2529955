"""Acceptance criteria, each at its stated tolerance; one PASS/FAIL line per criterion is printed."""
import math
import time

import numpy as np
import pytest

from pkreps import verify
from pkreps.arith import is_in_Ik, sum_power_omega
from pkreps.circle import (
    coefficients,
    dissect,
    hua_moment,
    integrate_major,
    integrate_major_quadrature,
    minor_l2,
    r_split,
    weyl_approximation_max,
)
from pkreps.reps import hl_ratios, j_range, scan
from pkreps.series import product_form

RESULTS = {}

# Frozen oracle values (see the calibration notes for how each was produced).
HL_BAND = (0.8118716999828284, 1.3276419433117985)  # median at X = 10**4, +- loglogX/logX
WEYL_APPROX = {2: 0.5, 3: 0.5541743246498407}  # X = 2**10, q <= 12, Q = 24
SERIES_LOWER = {2: 11.396715054377509, 3: 151.0577887944013}  # P = 10**3, seed 2026
OMEGA_SUM = {2: 0.6934488566169698, 3: 0.2604161700639353}  # X = 10**4


def record(num, ok, detail):
    RESULTS[num] = (bool(ok), detail)
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, detail


def naive_oracle(k, x_max):
    flags = [True] * (x_max + 1)
    flags[0] = flags[1] = False
    for i in range(2, math.isqrt(x_max) + 1):
        if flags[i]:
            for j in range(i * i, x_max + 1, i):
                flags[j] = False
    counts = [0] * (x_max + 1)
    for n in range(2, x_max + 1):
        m = 1
        while m**k < n:
            counts[n] += flags[n - m**k]
            m += 1
    return counts


def test_1_exceptional_set_oracle():
    ok = True
    details = []
    for k in (2, 3):
        t0 = time.perf_counter()
        res = scan(k, 10**4)
        elapsed = time.perf_counter() - t0
        oracle = naive_oracle(k, 10**4)
        exc = [n for n in range(2, 10**4 + 1) if oracle[n] == 0 and is_in_Ik(k, n)]
        same = res.counts.tolist() == oracle and list(res.exceptional) == exc
        ok &= same and elapsed < 10
        details.append(f"k={k} match={same} E={res.E} t={elapsed:.2f}s")
        if k == 2:
            ok &= list(res.exceptional[:4]) == [2, 5, 10, 13]
    record(1, ok, "; ".join(details))


def test_2_gauss_sum_modulus():
    t0 = time.perf_counter()
    rep = verify.check_gauss_modulus(500, 1e-9)
    elapsed = time.perf_counter() - t0
    record(2, rep.ok and elapsed < 30, f"{rep.cases} primitive characters, max dev {rep.max_deviation:.2e}, t={elapsed:.1f}s")


def test_3_h_identities():
    a = verify.check_h_prime(200, (2, 3, 4, 5), 1e-8)
    b = verify.check_h_crt(300, (2, 3), tol=1e-6)
    c = verify.check_h_squarefree_bound(500, (2, 3))
    ok = a.ok and b.ok and c.ok
    record(3, ok, f"prime {a.cases} (max {a.max_deviation:.1e}), CRT {b.cases} (max {b.max_deviation:.1e}), "
                  f"squarefree bound {c.cases} failures={len(c.failures)}")


def test_4_h_tau_sigma():
    rep = verify.check_eq54(200, (2, 3), 20, seed=0, tol=1e-8)
    record(4, rep.ok, f"{rep.cases} (chi, k) cases x 20 n, max rel dev {rep.max_deviation:.1e}")


def test_5_hua_parseval():
    ok = hua_moment(2, 16, 2).exact == 15
    worst = 0.0
    for k in (2, 3):
        for X in (2**8, 2**12):
            lo, hi = j_range(k, X)
            h = hua_moment(k, X, 1)
            ok &= h.exact == hi - lo + 1
            worst = max(worst, abs(h.exact - h.grid) / h.exact)
    for k, X, s in ((2, 16, 2), (2, 2**8, 2), (2, 2**10, 3), (3, 2**12, 2), (3, 2**14, 3), (2, 2**14, 3)):
        h = hua_moment(k, X, s)
        worst = max(worst, abs(h.exact - h.grid) / h.exact)
    ok &= worst <= 1e-6
    record(5, ok, f"hua(2,16,2)=15, s=1 Parseval, max exact/grid rel dev {worst:.1e}")


def test_6_decomposition():
    t0 = time.perf_counter()
    k, X = 2, 2**14
    d = dissect(X, 8, k=k)
    cv = coefficients(k, X)
    ok = d.is_disjoint()
    rng = np.random.default_rng(0)
    support = np.flatnonzero(cv.c) + cv.n_min
    ns = rng.choice(support, size=10, replace=False).tolist()
    split_dev = quad_dev = deg_dev = 0.0
    full = dissect(X, 1, 2)
    for n in ns:
        r, r1, r2 = r_split(k, X, n, d, cv)
        split_dev = max(split_dev, abs(r - (r1 + r2)) / abs(r))
        q = integrate_major_quadrature(k, X, n, d, cv)
        quad_dev = max(quad_dev, abs(r1 - q) / abs(q))
        deg = integrate_major(k, X, n, full, cv)
        deg_dev = max(deg_dev, abs(deg - cv[n]) / abs(cv[n]))
    elapsed = time.perf_counter() - t0
    ok &= split_dev <= 1e-9 and quad_dev <= 1e-6 and deg_dev <= 1e-9 and elapsed < 120
    record(6, ok, f"disjoint={d.is_disjoint()} arcs={len(d.arcs)} split {split_dev:.1e}, quad {quad_dev:.1e}, "
                  f"degenerate {deg_dev:.1e}, t={elapsed:.1f}s")


def test_7_bessel():
    X = 2**14
    res = minor_l2(2, X, dissect(X, 8, k=2))
    record(7, res.lhs <= res.bessel + 1e-6, f"sum r2^2 = {res.lhs:.6g} <= minor L2 = {res.bessel:.6g}")


def test_8_singular_series():
    reps_ = [verify.VerifyReport("expansion"), verify.VerifyReport("gap")]
    for k in (2, 3, 4):
        for n in (2, 3, 7, 30, 1001, 65537, 999983):
            for R in (2, 5, 11, 20, 30):
                reps_[0].merge(verify.check_finite_expansion(k, n, R, 1e-9))
                reps_[1].merge(verify.check_sum_product_gap(k, n, R))
    dec = verify.VerifyReport("decreasing")
    for k, n in ((2, 9), (2, 10**4), (3, 8), (3, 1331), (4, 16), (6, 64)):
        dec.merge(verify.check_non_ik_decreasing(k, n))
    ok = all(r.ok for r in reps_) and dec.ok
    record(8, ok, f"expansion {reps_[0].cases} cases max {reps_[0].max_deviation:.1e}; gap<=tail {reps_[1].cases}; "
                  f"non-I_k decreasing {dec.cases}")


def test_9_hardy_littlewood():
    t0 = time.perf_counter()
    X = 10**5
    res = scan(2, X)
    ns = np.arange(X // 2, X + 1)
    ns = ns[res.in_Ik[ns] & (res.counts[ns] > 0)]
    med = float(np.median(hl_ratios(2, ns, res.counts[ns].astype(float), 10**3)))
    elapsed = time.perf_counter() - t0
    lo, hi = HL_BAND
    record(9, lo <= med <= hi and elapsed < 60, f"median {med:.6f} in [{lo:.6f}, {hi:.6f}] over {len(ns)} n, t={elapsed:.1f}s")


def _sample_Ik(k, count=100, seed=2026):
    rng = np.random.default_rng(seed)
    ns = []
    while len(ns) < count:
        n = int(rng.integers(2, 10**6 + 1))
        if is_in_Ik(k, n):
            ns.append(n)
    return ns


def test_10_calibrated_constants():
    parts = []
    ok = True
    for k in (2, 3):
        v = weyl_approximation_max(k, 2**12, 12, 24.0)
        ok &= v <= WEYL_APPROX[k] * (1 + 1e-12)
        parts.append(f"weyl k={k} {v:.4f}<={WEYL_APPROX[k]:.4f}")
    for k in (2, 3):
        ns = _sample_Ik(k)
        v = min(product_form(k, n, 10**4).value * math.log(10**4) ** k for n in ns)
        ok &= v >= SERIES_LOWER[k]
        parts.append(f"series-lower k={k} {v:.2f}>={SERIES_LOWER[k]:.2f}")
    for a in (2, 3):
        v = sum_power_omega(10**5, a)[1]
        ok &= v <= OMEGA_SUM[a]
        parts.append(f"omega-sum A={a} {v:.4f}<={OMEGA_SUM[a]:.4f}")
    record(10, ok, "; ".join(parts))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
