import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pkreps.arith import CapacityError, DomainError, euler_phi
from pkreps.characters import v_sum
from pkreps.circle import (
    ArcDissection,
    DissectionError,
    coefficients,
    default_Q,
    dissect,
    f_sum,
    hua_moment,
    integrate_major,
    integrate_major_quadrature,
    l_coefficients,
    l_rho_shape,
    main_term_compare,
    minor_l2,
    prime_count_coefficients,
    r_split,
    s_sum,
    t_rho,
    t_rho_shape,
    weyl_approximation_max,
    weyl_l1_near_zero,
)
from pkreps.reps import j_range, l_count, scan


def e(x):
    return cmath.exp(2j * math.pi * x)


def test_exponential_sums_naive(backend):
    X = 3000
    alpha = 0.1234567
    lo, hi = j_range(2, X)
    assert abs(f_sum(2, X, alpha) - sum(e(alpha * j * j) for j in range(lo, hi + 1))) < 1e-10
    primes = [p for p in range(X // 2, X + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]
    assert abs(s_sum(X, alpha) - sum(math.log(p) * e(alpha * p) for p in primes)) < 1e-8
    want = sum(m ** (-0.5) * e(alpha * m) for m in range(X // 2, X + 1))
    assert abs(t_rho(X, 0.5, alpha) - want) < 1e-10
    # exact rational phase agrees with the float path
    assert abs(f_sum(2, X, Fraction(3, 7)) - f_sum(2, X, 3 / 7)) < 1e-9
    with pytest.raises(DomainError):
        f_sum(3, 4, 0.1)


def test_coefficient_examples(backend):
    cv = coefficients(2, 16)
    assert cv[20] == pytest.approx(math.log(11))
    assert cv[cv.n_min - 1] == 0.0
    total = math.fsum(cv.c.tolist())
    assert total == pytest.approx((s_sum(16, 0) * f_sum(2, 16, 0)).real, rel=1e-12)
    big = coefficients(3, 10**5)
    assert math.fsum(big.c.tolist()) == pytest.approx((s_sum(10**5, 0) * f_sum(3, 10**5, 0)).real, rel=1e-12)
    with pytest.raises(CapacityError):
        coefficients(2, 10**7)


def test_dissect_small_enumeration():
    d = dissect(100, 2, 100)
    assert [(a.a, a.q) for a in d.arcs] == [(1, 1), (1, 2)]
    assert [a.half_width for a in d.arcs] == [Fraction(1, 100), Fraction(1, 200)]
    assert d.major_measure == Fraction(3, 100)
    assert d.is_disjoint()


def test_dissect_default_Q_and_errors():
    d = dissect(2**14, 8, k=2)
    assert float(d.Q) == pytest.approx(2**14 * 8 ** (-2.0005), rel=1e-9)
    assert default_Q(2, 2**14, 8) == pytest.approx(255.7339698, rel=1e-9)
    assert d.is_disjoint() and len(d.arcs) == sum(euler_phi(q) for q in range(1, 9))
    with pytest.raises(DissectionError):
        dissect(1000, 8, 10)
    with pytest.raises(DomainError):
        dissect(1000, 8)
    small_b = dissect(2**14, b=0.0181, k=2)
    assert small_b.P < 2 and len(small_b.arcs) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 30), st.fractions(min_value=1, max_value=500, max_denominator=50))
def test_accepted_dissections_are_disjoint(P, Q):
    if 2 * P > Q:
        with pytest.raises(DissectionError):
            dissect(1000, P, Q)
        return
    d = dissect(1000, P, Q)
    assert d.is_disjoint()
    assert d.major_measure == d.expected_measure()
    minor = d.minor_intervals()
    assert sum((b - a for a, b in minor), Fraction(0)) + d.major_measure == 1


def test_integrate_major_matches_quadrature(backend):
    k, X = 2, 2**12
    d = dissect(X, 4, k=k)
    cv = coefficients(k, X)
    for n in (2600, 3001, 4097, 5555, 7000):
        assert integrate_major(k, X, n, d) == pytest.approx(integrate_major_quadrature(k, X, n, d, cv), rel=1e-6)


def test_full_coverage_and_empty(backend):
    k, X = 2, 2**12
    full = dissect(X, 1, 2)
    empty = dissect(X, 0.5, 2)
    assert full.major_measure == 1 and not empty.arcs
    cv = coefficients(k, X)
    for n in range(cv.n_min, cv.n_max + 1, 97):
        r, r1, r2 = r_split(k, X, n, full)
        assert r1 == pytest.approx(r, rel=1e-9, abs=1e-9)
        assert integrate_major(k, X, n, empty) == 0.0


def test_r_split_outside_support():
    d = dissect(2**12, 4, k=2)
    r, r1, r2 = r_split(2, 2**12, 10, d)
    assert r == 0.0 and r2 == -r1


def test_r_split_sums(backend):
    k, X = 2, 2**14
    d = dissect(X, 8, k=k)
    for n in (20011, 24000, 30001):
        r, r1, r2 = r_split(k, X, n, d)
        assert r1 + r2 == pytest.approx(r, rel=1e-9)


def test_l_integral_identity(backend):
    k, X = 2, 2**12
    lc = l_coefficients(k, X)
    full = dissect(X, 1, 2)
    for n in range(X // 2 + 900, 2 * X, 211):
        assert integrate_major(k, X, n, full, lc) == pytest.approx(l_count(k, X, n), rel=1e-9, abs=1e-9)


def test_hua_examples(backend):
    h = hua_moment(2, 16, 2)
    assert h.exact == 15 and h.grid == pytest.approx(15, rel=1e-6)
    for k in (2, 3):
        for X in (2**8, 2**12):
            lo, hi = j_range(k, X)
            assert hua_moment(k, X, 1).exact == hi - lo + 1
    for k, X, s in ((2, 2**10, 2), (2, 2**10, 3), (3, 2**14, 2), (3, 2**14, 3), (4, 2**16, 3)):
        h = hua_moment(k, X, s)
        assert h.grid == pytest.approx(h.exact, rel=1e-6)
    with pytest.raises(CapacityError):
        hua_moment(2, 10**6, 2)
    with pytest.raises(CapacityError):
        hua_moment(2, 1000, 4)


def test_hua_trend_k2_s3():
    vals = [hua_moment(2, X, 3).normalized for X in (2**10, 2**12, 2**14)]
    assert vals[0] >= vals[1] >= vals[2]


def test_minor_l2_degenerate(backend):
    k, X = 2, 2**10
    full = minor_l2(k, X, dissect(X, 1, 2))
    assert abs(full.bessel) <= 1e-8 * full.full_parseval and full.lhs <= 1e-16 * full.full_parseval
    empty = minor_l2(k, X, dissect(X, 0.5, 2))
    assert empty.bessel == empty.full_parseval
    cv = coefficients(k, X)
    assert empty.lhs == pytest.approx(math.fsum(cv[n] ** 2 for n in range(math.ceil(0.99 * X), X + 1)))


def test_minor_l2_bessel_holds():
    k, X = 2, 2**14
    res = minor_l2(k, X, dissect(X, 8, k=k))
    assert res.lhs <= res.bessel + 1e-6
    assert res.n_window == (math.ceil(0.99 * X), X)


def test_main_term_ratio_near_one():
    k, X = 2, 2**14
    d = dissect(X, 8, k=k)
    counts = scan(2, 2 * X)
    rng = np.random.default_rng(0)
    ns = [int(n) for n in rng.integers(X + X // 2, 2 * X, 60) if counts.in_Ik[n] and counts.counts[n] > 0][:40]
    ratios = [main_term_compare(k, X, n, 8, d).ratio for n in ns]
    delta = math.log(math.log(X)) / math.log(X)
    assert 1 - delta <= float(np.median(ratios)) <= 1 + delta
    pc = [main_term_compare(k, X, n, 8, d).ratio_prime_count for n in ns[:10]]
    assert all(r is not None and r > 0 for r in pc)


def test_main_term_flag_outside_support():
    d = dissect(2**12, 4, k=2)
    cmp = main_term_compare(2, 2**12, 100, 4, d)
    assert cmp.prediction == 0 and cmp.ratio is None


def test_prime_count_coefficients(backend):
    cv = prime_count_coefficients(2, 16)
    assert cv[20] == 1.0


# Calibrated at X = 2**10 with q <= 12, Q = 24, 41 values of eta (see notes).
WEYL_APPROX_CONSTANT = {2: 0.5, 3: 0.5541743246498407}


@pytest.mark.parametrize("k", [2, 3])
def test_weyl_approximation_calibrated(k, backend):
    assert weyl_approximation_max(k, 2**10, 12, 24.0) == pytest.approx(WEYL_APPROX_CONSTANT[k], rel=1e-12)
    assert weyl_approximation_max(k, 2**12, 12, 24.0) <= WEYL_APPROX_CONSTANT[k] * (1 + 1e-12)


def test_v_over_q_main_term_at_eta_zero():
    # at eta = 0, F(a/q) - V(a,q)/q F(0) is bounded by the incomplete-period error <= q
    k, X = 2, 2**12
    lo, hi = j_range(k, X)
    for q in (3, 5, 7):
        for a in range(1, q):
            err = abs(f_sum(k, X, Fraction(a, q)) - v_sum(k, a, q) / q * (hi - lo + 1))
            assert err <= q


def test_shape_diagnostics():
    val, norm = weyl_l1_near_zero(2, 1024, 0.001)
    lo, hi = j_range(2, 1024)
    assert 0 < val <= 0.002 * (hi - lo + 1)
    assert norm == pytest.approx(val)
    assert t_rho_shape(10**4, 1.0, 0.01) <= 1.0
    assert l_rho_shape(2, 10**4, 12000, 1.0) > 0
