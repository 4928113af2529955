"""Identity batteries behind ``pkreps verify``; every report is deterministic for a fixed seed."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import is_squarefree, omega, prime_root_count, prime_table
from .characters import (
    CharacterGroup,
    gauss_sum,
    h_principal_exact,
    h_sum_all,
    h_sums_group,
    power_residue_counts,
)
from .circle import (
    coefficients,
    dissect,
    hua_moment,
    integrate_major,
    integrate_major_quadrature,
    r_split,
)
from .series import a_coeff, product_form, singular_series, smooth_squarefree, truncated_sum

REPORT_SCHEMA = "pkreps.verify/1"
SUITES = ("characters", "singular", "circle", "hua")


@dataclass
class VerifyReport:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)
    max_deviation: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, name: str, inputs: dict, lhs, rhs, deviation: float, tol: float) -> bool:
        """Record one case; ``deviation`` is compared against ``tol``."""
        self.cases += 1
        self.max_deviation = max(self.max_deviation, float(deviation))
        if not deviation <= tol:
            self.failures.append({"check": name, "inputs": inputs, "lhs": _plain(lhs), "rhs": _plain(rhs),
                                  "deviation": float(deviation), "tol": tol})
            return False
        return True

    def merge(self, other: "VerifyReport") -> None:
        self.cases += other.cases
        self.failures.extend(other.failures)
        self.max_deviation = max(self.max_deviation, other.max_deviation)

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "suite": self.suite, "cases": self.cases,
                "failures": self.failures, "max_deviation": self.max_deviation}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_plain)


def _plain(x):
    if isinstance(x, complex):
        return [float(f"{x.real:.17g}"), float(f"{x.imag:.17g}")]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def rel_dev(a, b) -> float:
    """|a - b| / max(|a|, |b|, 1)."""
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def check_gauss_modulus(r_max: int = 500, tol: float = 1e-9) -> VerifyReport:
    """| |tau(chi)| - sqrt(r) | < tol sqrt(r) for every primitive chi mod r <= r_max."""
    rep = VerifyReport("gauss-modulus")
    for r in range(3, r_max + 1):
        for chi in CharacterGroup(r):
            if not chi.is_primitive:
                continue
            t = abs(gauss_sum(chi))
            rep.check("|tau| = sqrt(r)", {"r": r, "chi": list(chi.exps)}, t, math.sqrt(r),
                      abs(t - math.sqrt(r)) / math.sqrt(r), tol)
    return rep


def check_h_prime(p_max: int = 200, ks=(2, 3, 4, 5), tol: float = 1e-8) -> VerifyReport:
    """H_k(p, n) = p (rho_k(p, n) - 1) for every prime p <= p_max and every n mod p."""
    rep = VerifyReport("h-prime")
    for p in prime_table(p_max).primes_in(2, p_max).tolist():
        chi0 = CharacterGroup(p).principal
        for k in ks:
            vals = h_sum_all(k, chi0)
            for n in range(p):
                want = p * (prime_root_count(k, p, n) - 1)
                rep.check("H_k(p,n) = p(rho-1)", {"k": k, "p": p, "n": n}, complex(vals[n]), want,
                          abs(vals[n] - want), tol)
    return rep


def _char_map(g1: CharacterGroup, g2: CharacterGroup, g12: CharacterGroup) -> np.ndarray:
    """index in g12 of chi1 * chi2 for every pair (i, j)."""
    out = np.empty((len(g1), len(g2)), dtype=np.int64)
    for i, c1 in enumerate(g1):
        for j, c2 in enumerate(g2):
            out[i, j] = g12.index_of((c1 * c2).exps)
    return out


def check_h_crt(q_max: int = 300, ks=(2, 3), n_values=(0, 1, 2, 7), tol: float = 1e-6) -> VerifyReport:
    """H_k(chi1 chi2, q1 q2, n) = chi1(q2) chi2(q1) H_k(chi1, q1, n) H_k(chi2, q2, n) for coprime q1 q2 <= q_max."""
    rep = VerifyReport("h-crt")
    for q1 in range(2, q_max + 1):
        for q2 in range(q1 + 1, q_max // q1 + 1):
            if math.gcd(q1, q2) != 1:
                continue
            g1, g2, g12 = CharacterGroup(q1), CharacterGroup(q2), CharacterGroup(q1 * q2)
            cmap = _char_map(g1, g2, g12)
            c1 = np.array([chi(q2) for chi in g1])
            c2 = np.array([chi(q1) for chi in g2])
            for k in ks:
                for n in n_values:
                    h1 = h_sums_group(k, g1, n)
                    h2 = h_sums_group(k, g2, n)
                    h12 = h_sums_group(k, g12, n)
                    rhs = np.outer(c1 * h1, c2 * h2)
                    lhs = h12[cmap]
                    dev = np.abs(lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
                    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
                    rep.check("H CRT multiplicativity", {"k": k, "q1": q1, "q2": q2, "n": n,
                                                         "pair": [int(worst[0]), int(worst[1])]},
                              complex(lhs[worst]), complex(rhs[worst]), float(dev[worst]), tol)
    return rep


def check_h_squarefree_bound(q_max: int = 500, ks=(2, 3), seed: int = 0, exact_samples: int = 3) -> VerifyReport:
    """|H_k(q, n)| <= q (k-1)**omega(q) for squarefree q <= q_max and every n mod q.

    H_k(q, n) is an integer. All n are covered by the FFT values rounded to the
    nearest integer (the rounding gap is itself checked), and a few seeded n per
    q are recomputed exactly through Ramanujan sums.
    """
    rep = VerifyReport("h-squarefree-bound")
    rng = np.random.default_rng(seed)
    for q in range(1, q_max + 1):
        if not is_squarefree(q):
            continue
        chi0 = CharacterGroup(q).principal
        w = omega(q)
        for k in ks:
            bound = q * (k - 1) ** w
            vals = h_sum_all(k, chi0)
            ints = np.rint(vals.real).astype(np.int64)
            gap = float(np.max(np.abs(vals - ints)))
            rep.check("H_k(q,n) integral", {"k": k, "q": q}, gap, 0.0, gap, 1e-6)
            worst = int(np.argmax(np.abs(ints)))
            rep.check("|H_k(q,n)| <= q(k-1)^omega", {"k": k, "q": q, "n": worst}, int(abs(ints[worst])), bound,
                      0.0 if abs(ints[worst]) <= bound else float(abs(ints[worst]) - bound), 0.0)
            for n in rng.integers(0, q, size=min(exact_samples, q)).tolist():
                exact = h_principal_exact(k, q, n)
                rep.check("Ramanujan-sum H = FFT H", {"k": k, "q": q, "n": n}, exact, int(ints[n]),
                          float(abs(exact - ints[n])), 0.0)
    return rep


def check_eq54(r_max: int = 200, ks=(2, 3), n_count: int = 20, seed: int = 0, tol: float = 1e-8) -> VerifyReport:
    """H_k(chi, r, n) = tau(chi) sigma(r, conj(chi), n) for primitive chi mod r <= r_max."""
    rep = VerifyReport("h-tau-sigma")
    rng = np.random.default_rng(seed)
    for r in range(3, r_max + 1):
        ns = rng.integers(0, 10**6, size=n_count)
        group = CharacterGroup(r)
        for k in ks:
            counts = power_residue_counts(k, r)
            u = np.flatnonzero(counts)
            for chi in group:
                if not chi.is_primitive:
                    continue
                hv = h_sum_all(k, chi)
                tau = gauss_sum(chi)
                cvals = chi.conj().values()
                sig = (counts[u][None, :] * cvals[(u[None, :] - ns[:, None]) % r]).sum(axis=1)
                lhs = hv[ns % r]
                rhs = tau * sig
                dev = np.abs(lhs - rhs) / np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
                i = int(np.argmax(dev))
                rep.check("H = tau sigma", {"k": k, "r": r, "chi": list(chi.exps), "n": int(ns[i])},
                          complex(lhs[i]), complex(rhs[i]), float(dev[i]), tol)
    return rep


def characters_suite(seed: int = 0, quick: bool = False) -> VerifyReport:
    rep = VerifyReport("characters")
    scale = 0.4 if quick else 1.0
    rep.merge(check_gauss_modulus(int(500 * scale)))
    rep.merge(check_h_prime(int(200 * scale)))
    rep.merge(check_h_crt(int(300 * scale)))
    rep.merge(check_h_squarefree_bound(int(500 * scale), seed=seed))
    rep.merge(check_eq54(int(200 * scale), seed=seed))
    return rep


def check_finite_expansion(k: int, n: int, R: int, tol: float = 1e-9) -> VerifyReport:
    """Sum of A(n, q, 1) over squarefree R-smooth q equals prod_{p <= R}(1 + A(n, p, 1))."""
    rep = VerifyReport("finite-expansion")
    qs = smooth_squarefree(R)
    total = math.fsum(a_coeff(k, n, q) for q in qs)
    primes = prime_table(max(R, 2)).primes_in(2, R).tolist()
    prod = math.prod(1 + a_coeff(k, n, p) for p in primes)
    rep.check("sum A = prod(1 + A)", {"k": k, "n": n, "R": R}, total, prod, rel_dev(total, prod), tol)
    return rep


def brute_tail(k: int, n: int, R: int) -> float:
    """Sum of |A(n, q, 1)| over squarefree R-smooth q > R."""
    return math.fsum(abs(a_coeff(k, n, q)) for q in smooth_squarefree(R) if q > R)


def check_sum_product_gap(k: int, n: int, R: int) -> VerifyReport:
    rep = VerifyReport("sum-product-gap")
    gap = abs(truncated_sum(k, n, R).value - product_form(k, n, R).value)
    tail = brute_tail(k, n, R)
    rep.check("|sum - product| <= brute tail", {"k": k, "n": n, "R": R}, gap, tail, max(0.0, gap - tail), 1e-12)
    if R >= 2:
        rankin = product_form(k, n, R).tail_estimate
        rep.check("brute tail <= Rankin tail", {"k": k, "n": n, "R": R}, tail, rankin, max(0.0, tail - rankin), 1e-12)
    return rep


def check_a_multiplicative(k: int, n: int, q_max: int = 100) -> VerifyReport:
    rep = VerifyReport("a-multiplicative")
    sq = [q for q in range(1, q_max + 1) if is_squarefree(q)]
    for q1 in sq:
        for q2 in sq:
            if q2 <= q1 or math.gcd(q1, q2) != 1:
                continue
            lhs = a_coeff(k, n, q1 * q2)
            rhs = a_coeff(k, n, q1) * a_coeff(k, n, q2)
            rep.check("A(q1 q2) = A(q1) A(q2)", {"k": k, "n": n, "q1": q1, "q2": q2}, lhs, rhs,
                      rel_dev(lhs, rhs), 1e-12)
    return rep


def check_non_ik_decreasing(k: int, n: int, cutoffs=(10**2, 10**3, 10**4, 10**5)) -> VerifyReport:
    rep = VerifyReport("non-Ik-decreasing")
    vals = [singular_series(k, n, c).value for c in cutoffs]
    for c0, c1, v0, v1 in zip(cutoffs, cutoffs[1:], vals, vals[1:]):
        rep.check("product strictly decreases", {"k": k, "n": n, "from": c0, "to": c1}, v1, v0,
                  0.0 if v1 < v0 else v1 - v0 + 1e-300, 0.0)
    return rep


def singular_suite(seed: int = 0, quick: bool = False) -> VerifyReport:
    rep = VerifyReport("singular")
    rng = np.random.default_rng(seed)
    ns = [2, 3, 7, 30, 105] + rng.integers(2, 10**6, size=5).tolist()
    for k in (2, 3, 4):
        for n in ns:
            for R in (2, 10, 30):
                rep.merge(check_finite_expansion(k, n, R))
                rep.merge(check_sum_product_gap(k, n, R))
        rep.merge(check_a_multiplicative(k, ns[-1], 40 if quick else 100))
    top = (10**2, 10**3, 10**4) if quick else (10**2, 10**3, 10**4, 10**5)
    for k, n in ((2, 9), (2, 144), (3, 8), (3, 343), (4, 81)):
        rep.merge(check_non_ik_decreasing(k, n, top))
    return rep


def circle_suite(seed: int = 0, quick: bool = False, k: int = 2, X: int = 2**12, P: float = 4) -> VerifyReport:
    rep = VerifyReport("circle")
    rng = np.random.default_rng(seed)
    d = dissect(X, P, k=k)
    rep.check("arcs disjoint", {"X": X, "P": P}, d.is_disjoint(), True, 0.0 if d.is_disjoint() else 1.0, 0.0)
    meas, want = d.major_measure, d.expected_measure()
    rep.check("measure = sum 2 phi(q)/(qQ)", {"X": X, "P": P}, float(meas), float(want),
              0.0 if meas == want else 1.0, 0.0)
    cv = coefficients(k, X)
    full = dissect(X, 1, 2)
    support = np.flatnonzero(cv.c) + cv.n_min
    ns = rng.choice(support, size=3 if quick else 6, replace=False).tolist()
    for n in ns:
        r, r1, r2 = r_split(k, X, n, d, cv)
        rep.check("r = r1 + r2", {"n": n}, r, r1 + r2, abs(r - (r1 + r2)) / max(abs(r), 1e-300), 1e-9)
        quad_val = integrate_major_quadrature(k, X, n, d, cv)
        rep.check("closed form r1 = quadrature", {"n": n}, r1, quad_val, rel_dev(r1, quad_val), 1e-6)
        deg = integrate_major(k, X, n, full, cv)
        rep.check("full coverage r1 = c_n", {"n": n}, deg, cv[n], abs(deg - cv[n]) / max(abs(cv[n]), 1e-300), 1e-9)
    return rep


def hua_suite(k: int = 2, X: int = 16, s: int = 2, extra: bool = True) -> VerifyReport:
    rep = VerifyReport("hua")
    cases = [(k, X, s)]
    if extra:
        cases += [(2, 2**8, 1), (2, 2**8, 2), (3, 2**12, 1), (3, 2**12, 2), (2, 2**10, 3)]
    for kk, xx, ss in cases:
        h = hua_moment(kk, xx, ss)
        rep.check("exact = grid", {"k": kk, "X": xx, "s": ss, "exact": h.exact}, h.exact, h.grid,
                  abs(h.exact - h.grid) / max(h.exact, 1), 1e-6)
    return rep


def run_suite(name: str, seed: int = 0, quick: bool = False, **hua_args) -> VerifyReport:
    if name == "characters":
        return characters_suite(seed, quick)
    if name == "singular":
        return singular_suite(seed, quick)
    if name == "circle":
        return circle_suite(seed, quick)
    if name == "hua":
        return hua_suite(**hua_args)
    if name == "all":
        rep = VerifyReport("all")
        for sub in SUITES:
            rep.merge(run_suite(sub, seed, quick, **hua_args))
        return rep
    raise ValueError(f"unknown suite {name!r}")
