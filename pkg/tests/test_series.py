import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pkreps.arith import CapacityError, DomainError, is_in_Ik, is_squarefree
from pkreps.characters import CharacterGroup, h_principal_exact
from pkreps.series import (
    a_coeff,
    local_factor,
    product_form,
    singular_series,
    smooth_squarefree,
    tail_bound,
    truncated_sum,
)


def brute_rho(k, p, n):
    return sum(1 for h in range(p) if (pow(h, k, p) - n) % p == 0)


def exact_product(k, n, R):
    return math.prod(Fraction(p - brute_rho(k, p, n), p - 1) for p in sympy.primerange(2, R + 1))


def test_product_example(backend):
    assert singular_series(2, 2, 7).value == pytest.approx(1.5625, rel=1e-15)
    assert singular_series(2, 2, 1).value == 1.0


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(1, 10**6), st.integers(2, 60))
def test_product_matches_exact_rationals(k, n, R):
    assert singular_series(k, n, R).value == pytest.approx(float(exact_product(k, n, R)), rel=1e-12, abs=1e-300)


def test_local_factor():
    assert local_factor(2, 7, 2) == pytest.approx(5 / 6)
    assert local_factor(2, 5, 2) == pytest.approx(5 / 4)


def test_a_coeff_examples():
    assert a_coeff(2, 2, 7) == pytest.approx(-1 / 6)
    assert a_coeff(2, 2, 1) == 1.0
    assert a_coeff(2, 2, 3, r=3) == 0.0
    with pytest.raises(DomainError):
        a_coeff(2, 2, 4)


def test_a_coeff_is_mu_h_over_q_phi():
    # A(n, q, 1) = mu(q) H_k(q, n) / (q phi(q)) with H_k(q, n) from Ramanujan sums
    for k in (2, 3):
        for n in (1, 2, 5, 12):
            for q in range(1, 80):
                if not is_squarefree(q):
                    continue
                want = sympy.mobius(q) * h_principal_exact(k, q, n) / (q * sympy.totient(q))
                assert a_coeff(k, n, q) == pytest.approx(float(want), abs=1e-14)


def test_a_coeff_multiplicative():
    sq = [q for q in range(1, 101) if is_squarefree(q)]
    for k in (2, 3):
        for n in (3, 10, 777):
            for q1 in sq:
                for q2 in sq:
                    if q1 < q2 and math.gcd(q1, q2) == 1:
                        assert a_coeff(k, n, q1 * q2) == pytest.approx(a_coeff(k, n, q1) * a_coeff(k, n, q2), rel=1e-12, abs=1e-15)


def test_truncated_sum_example(backend):
    want = sum(a_coeff(2, 2, q) for q in range(1, 8) if is_squarefree(q))
    assert truncated_sum(2, 2, 7).value == pytest.approx(want, rel=1e-14)
    assert truncated_sum(2, 2, 7).value == pytest.approx(1.5833333333333333, rel=1e-14)
    assert truncated_sum(2, 2, 0).value == 0.0


def test_product_form_r_correction(backend):
    assert product_form(2, 2, 7, 3).value == pytest.approx(1.0416666666666667, rel=1e-14)
    assert product_form(2, 2, 7, 1).value == pytest.approx(1.5625, rel=1e-14)
    assert product_form(3, 5, 50, 1).skipped == ()


@pytest.mark.parametrize("R", [2, 5, 10, 20, 30])
def test_finite_multiplicative_expansion(R, backend):
    for k in (2, 3, 4):
        for n in (2, 7, 30, 1001, 65537):
            total = math.fsum(a_coeff(k, n, q) for q in smooth_squarefree(R))
            prod = math.prod(1 + a_coeff(k, n, p) for p in sympy.primerange(2, R + 1))
            assert total == pytest.approx(prod, rel=1e-9, abs=1e-9)
            assert prod == pytest.approx(product_form(k, n, R).value, rel=1e-12)


@pytest.mark.parametrize("R", [2, 5, 10, 20, 30])
def test_gap_bounded_by_brute_tail(R, backend):
    for k in (2, 3):
        for n in (2, 7, 30, 1001):
            gap = abs(truncated_sum(k, n, R).value - product_form(k, n, R).value)
            tail = math.fsum(abs(a_coeff(k, n, q)) for q in smooth_squarefree(R) if q > R)
            assert gap <= tail + 1e-12
            assert tail <= tail_bound(k, n, R, R) + 1e-12


def test_tail_bound_value():
    assert tail_bound(2, 2, 2, math.e**2) == pytest.approx(math.exp(-2 / math.log(2)) * (1 + 2 ** (1 / math.log(2))), rel=1e-12)
    with pytest.raises(DomainError):
        tail_bound(2, 2, 10, 5)


def test_full_expansion_at_30_equals_product():
    assert math.fsum(a_coeff(2, 2, q) for q in smooth_squarefree(30)) == pytest.approx(1.8216451013, rel=1e-9)


@pytest.mark.parametrize("k,n", [(2, 9), (2, 144), (3, 8), (3, 343), (4, 81), (6, 64)])
def test_non_Ik_product_strictly_decreasing(k, n, backend):
    assert not is_in_Ik(k, n)
    vals = [singular_series(k, n, c).value for c in (10**2, 10**3, 10**4, 10**5)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


# Calibrated at P = 10**3 (see notes); seed 2026, 100 n per k.
SERIES_LOWER_CONSTANT = {2: 11.396715054377509, 3: 151.0577887944013}


def _sample_Ik(k, count=100, seed=2026):
    rng = np.random.default_rng(seed)
    ns = []
    while len(ns) < count:
        n = int(rng.integers(2, 10**6 + 1))
        if is_in_Ik(k, n):
            ns.append(n)
    return ns


@pytest.mark.parametrize("k", [2, 3])
def test_lower_bound_calibrated(k, backend):
    ns = _sample_Ik(k)
    small = min(product_form(k, n, 10**3).value * math.log(10**3) ** k for n in ns)
    assert small == pytest.approx(SERIES_LOWER_CONSTANT[k], rel=1e-12)
    large = min(product_form(k, n, 10**4).value * math.log(10**4) ** k for n in ns)
    assert large >= SERIES_LOWER_CONSTANT[k]


def test_capacity_limits():
    with pytest.raises(CapacityError):
        truncated_sum(2, 2, 10**6)
    with pytest.raises(CapacityError):
        singular_series(2, 2, 10**8)
    with pytest.raises(DomainError):
        singular_series(2, 0, 10)


def test_smooth_squarefree():
    assert smooth_squarefree(5) == [1, 2, 3, 5, 6, 10, 15, 30]
