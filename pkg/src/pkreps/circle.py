"""Exponential sums, the major/minor arc dissection and exact arc integrals.

S(alpha) F_k(alpha) is a trigonometric polynomial sum_m c_m e(m alpha) with
c_m = r_k(X, m). Integrating it against e(-n alpha) over an arc
[a/q - d, a/q + d] gives sum_m c_m e((m - n) a / q) w(m - n, d) with
w(0, d) = 2d and w(t, d) = sin(2 pi t d) / (pi t), so every arc integral is a
finite sum and no quadrature is involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._kernels import kernels
from .arith import CapacityError, DomainError, euler_phi, prime_table
from .characters import v_sum
from .reps import i_range, j_range, l_count
from .series import truncated_sum

MAX_COEFF_X = 10**6
Q_DENOMINATOR_LIMIT = 10**6
DEFAULT_B = 0.0181


class DissectionError(DomainError):
    """The requested arcs would overlap (2P > Q)."""


def _phase_sum(freqs: np.ndarray, weights: np.ndarray, alpha) -> complex:
    if isinstance(alpha, Fraction) and alpha.denominator < 2**62:
        return kernels.expsum_rational(freqs, weights, alpha.numerator, alpha.denominator)
    if isinstance(alpha, int):
        return complex(math.fsum(weights.tolist()), 0.0)
    return kernels.expsum(freqs, weights, float(alpha))


@lru_cache(maxsize=32)
def _j_powers(k: int, X: int) -> np.ndarray:
    lo, hi = j_range(k, X)
    out = np.arange(lo, hi + 1, dtype=np.int64) ** k
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _prime_window(X: int) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = i_range(X)
    primes = prime_table(X).primes_in(lo, hi)
    logs = np.log(primes.astype(np.float64))
    logs.setflags(write=False)
    return primes, logs


def f_sum(k: int, X: int, alpha) -> complex:
    """F_k(alpha) = sum over j in J_k(X) of e(alpha j**k)."""
    if X < 2**k:
        raise DomainError(f"f_sum needs X >= 2**k, got X={X}")
    powers = _j_powers(k, X)
    return _phase_sum(powers, np.ones(len(powers)), alpha)


def s_sum(X: int, alpha) -> complex:
    """S(alpha) = sum over primes p in [X/2, X] of log p e(alpha p)."""
    primes, logs = _prime_window(X)
    return _phase_sum(primes, logs, alpha)


def t_rho(X: int, rho: float, eta) -> complex:
    """T_rho(eta) = sum over m in [X/2, X] of m**(rho - 1) e(m eta)."""
    if X > 10**7:
        raise CapacityError("t_rho limited to X <= 10**7")
    lo, hi = i_range(X)
    m = np.arange(lo, hi + 1, dtype=np.int64)
    w = np.ones(len(m)) if rho == 1 else m.astype(np.float64) ** (rho - 1.0)
    return _phase_sum(m, w, eta)


@dataclass(frozen=True)
class CoefficientVector:
    """Coefficients c_n of a product of two exponential sums, stored from ``n_min``."""

    k: int
    X: int
    n_min: int
    c: np.ndarray = field(repr=False)
    kind: str = "log"

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.c) - 1

    def __getitem__(self, n: int) -> float:
        i = n - self.n_min
        return float(self.c[i]) if 0 <= i < len(self.c) else 0.0


def _convolve(k: int, X: int, positions: np.ndarray, weights: np.ndarray, kind: str) -> CoefficientVector:
    if X > MAX_COEFF_X:
        raise CapacityError(f"coefficient vectors limited to X <= {MAX_COEFF_X}")
    powers = _j_powers(k, X)
    lo, hi = i_range(X)
    n_min = lo + int(powers[0])
    length = hi + int(powers[-1]) - n_min + 1
    c = kernels.shifted_accumulate(powers, positions, weights, n_min, length)
    c.setflags(write=False)
    return CoefficientVector(k, X, n_min, c, kind)


@lru_cache(maxsize=16)
def coefficients(k: int, X: int) -> CoefficientVector:
    """c_n = r_k(X, n), the coefficients of S(alpha) F_k(alpha)."""
    primes, logs = _prime_window(X)
    return _convolve(k, X, primes, logs, "log")


@lru_cache(maxsize=16)
def prime_count_coefficients(k: int, X: int) -> CoefficientVector:
    """Unit weight per prime: coefficients of F_k times the unweighted prime sum."""
    primes, _ = _prime_window(X)
    return _convolve(k, X, primes, np.ones(len(primes)), "prime-count")


@lru_cache(maxsize=16)
def l_coefficients(k: int, X: int, rho: float = 1.0) -> CoefficientVector:
    """Coefficients of F_k(eta) T_rho(eta); at rho = 1 these are L(X, n)."""
    lo, hi = i_range(X)
    m = np.arange(lo, hi + 1, dtype=np.int64)
    w = np.ones(len(m)) if rho == 1 else m.astype(np.float64) ** (rho - 1.0)
    return _convolve(k, X, m, w, f"L_{rho}")


@dataclass(frozen=True)
class Arc:
    a: int
    q: int
    half_width: Fraction

    @property
    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def left(self) -> Fraction:
        return self.center - self.half_width

    @property
    def right(self) -> Fraction:
        return self.center + self.half_width


@dataclass(frozen=True)
class ArcDissection:
    """Major arcs M(a, q) = [a/q - 1/(qQ), a/q + 1/(qQ)] for q <= P, gcd(a, q) = 1, 1 <= a <= q.

    Arcs are closed intervals; the minor set is [1/Q, 1 + 1/Q] minus their
    interiors. Endpoint overlaps have measure zero and do not affect integrals.
    """

    X: int
    P: float
    Q: Fraction
    arcs: tuple[Arc, ...]

    @property
    def major_measure(self) -> Fraction:
        return sum((2 * arc.half_width for arc in self.arcs), Fraction(0))

    def expected_measure(self) -> Fraction:
        return sum((Fraction(2 * euler_phi(q), q) / self.Q for q in range(1, int(self.P) + 1)), Fraction(0))

    def is_disjoint(self) -> bool:
        ordered = sorted(self.arcs, key=lambda arc: arc.center)
        return all(x.right < y.left for x, y in zip(ordered, ordered[1:]))

    def minor_intervals(self) -> list[tuple[Fraction, Fraction]]:
        lo, hi = 1 / self.Q, 1 + 1 / self.Q
        out = []
        cursor = lo
        for arc in sorted(self.arcs, key=lambda arc: arc.center):
            if arc.left > cursor:
                out.append((cursor, arc.left))
            cursor = max(cursor, arc.right)
        if cursor < hi:
            out.append((cursor, hi))
        return out

    def summary(self) -> dict:
        return {
            "P": self.P,
            "Q": float(self.Q),
            "arc_count": len(self.arcs),
            "major_measure": float(self.major_measure),
        }


def default_Q(k: int, X: int, P: float) -> float:
    """Q = X P**(-4k + 5.9995)."""
    return X * P ** (-4 * k + 5.9995)


def dissect(X: int, P: float | None = None, Q=None, *, b: float | None = None, k: int | None = None) -> ArcDissection:
    """Major arcs for q <= P. P defaults to X**b; Q defaults to X P**(-4k + 5.9995) (needs k).

    Q is held as a rational with denominator at most 10**6 (exact for integer
    or Fraction input).
    """
    if P is None:
        P = X ** (DEFAULT_B if b is None else b)
    if Q is None:
        if k is None:
            raise DomainError("default Q needs k")
        Q = default_Q(k, X, P)
    Qf = Q if isinstance(Q, Fraction) else Fraction(Q).limit_denominator(Q_DENOMINATOR_LIMIT)
    if Qf <= 0:
        raise DomainError("Q must be positive")
    if 2 * Fraction(P).limit_denominator(Q_DENOMINATOR_LIMIT) > Qf:
        raise DissectionError(f"major arcs overlap: 2P = {2 * P} > Q = {float(Qf)}")
    if int(math.floor(P)) * Qf.numerator >= 2**61:
        raise CapacityError("Q numerator too large for exact arc widths; pass a simpler rational Q")
    arcs = []
    for q in range(1, int(math.floor(P)) + 1):
        hw = Fraction(1, q) / Qf
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                arcs.append(Arc(a, q, hw))
    return ArcDissection(X, P, Qf, tuple(arcs))


def _arc_params(arc: Arc) -> tuple[int, int]:
    hw = arc.half_width
    return hw.numerator, hw.denominator


def integrate_major(k: int, X: int, n: int, dissection: ArcDissection, coeffs: CoefficientVector | None = None) -> float:
    """r_1(X, n): the integral of F_k S e(-n alpha) over the major arcs, in closed form."""
    cv = coeffs if coeffs is not None else coefficients(k, X)
    total = []
    for arc in dissection.arcs:
        dnum, dden = _arc_params(arc)
        total.append(kernels.arc_sum(cv.c, cv.n_min, n, arc.a, arc.q, dnum, dden))
    return math.fsum(total)


def integrate_major_quadrature(k: int, X: int, n: int, dissection: ArcDissection,
                               coeffs: CoefficientVector | None = None, epsrel: float = 1e-10) -> float:
    """r_1(X, n) by adaptive quadrature of Re(F_k S e(-n alpha)) over each arc; an independent check."""
    from scipy.integrate import quad

    cv = coeffs if coeffs is not None else coefficients(k, X)
    offsets = np.arange(len(cv.c), dtype=np.float64) + (cv.n_min - n)
    nz = cv.c != 0
    offsets, weights = offsets[nz], cv.c[nz]

    def integrand(alpha):
        return float(np.dot(weights, np.cos(2 * np.pi * offsets * alpha)))

    parts = []
    for arc in dissection.arcs:
        lo, hi = float(arc.left), float(arc.right)
        cycles = max(1, int((hi - lo) * (np.abs(offsets).max() if len(offsets) else 1)))
        val, _ = quad(integrand, lo, hi, limit=max(200, 4 * cycles), epsabs=0.0, epsrel=epsrel)
        parts.append(val)
    return math.fsum(parts)


def full_period_integral(coeffs: CoefficientVector, n: int) -> float:
    """Integral over one period of the coefficient polynomial times e(-n alpha): exactly c_n."""
    return coeffs[n]


def r_split(k: int, X: int, n: int, dissection: ArcDissection, coeffs: CoefficientVector | None = None):
    """(r, r1, r2) with r the full-period integral (= c_n), r1 the major-arc part, r2 = r - r1."""
    cv = coeffs if coeffs is not None else coefficients(k, X)
    r = full_period_integral(cv, n)
    r1 = integrate_major(k, X, n, dissection, cv)
    return r, r1, r - r1


@dataclass(frozen=True)
class HuaMoment:
    k: int
    X: int
    s: int
    exact: int
    grid: float
    grid_points: int

    @property
    def normalized(self) -> float:
        return self.exact / self.X ** (2 * self.s / self.k - 1)


def hua_moment(k: int, X: int, s: int) -> HuaMoment:
    """Integral over [0, 1] of |F_k|**(2s): exact solution count and a Riemann-mean check.

    The exact value counts (j_1..j_2s) in J**(2s) with equal k-th power sums in
    the two halves, as the sum of squared s-fold sum multiplicities. The grid
    value is the mean of |F_k|**(2s) on M equally spaced points with
    M > 2 s max(j**k), which is exact for this trigonometric polynomial up to
    rounding.
    """
    powers = _j_powers(k, X)
    if len(powers) > 200 or s > 3 or s < 1:
        raise CapacityError(f"hua_moment limited to |J| <= 200 and 1 <= s <= 3 (|J|={len(powers)}, s={s})")
    exact = kernels.sum_counts_square(powers, s)
    m = 1 << int(2 * s * int(powers[-1])).bit_length()
    ind = np.zeros(m)
    np.add.at(ind, powers % m, 1.0)
    values = np.fft.ifft(ind) * m
    grid = float(np.mean(np.abs(values) ** (2 * s)))
    return HuaMoment(k, X, s, exact, grid, m)


@dataclass(frozen=True)
class MinorL2:
    lhs: float
    bessel: float
    full_parseval: float
    n_window: tuple[int, int]


def _autocorrelation(c: np.ndarray) -> np.ndarray:
    return np.correlate(c, c, mode="full")


def minor_l2(k: int, X: int, dissection: ArcDissection) -> MinorL2:
    """Sum of r_2(X, n)**2 over 0.99 X <= n <= X against the minor-arc L2 mass of F_k S.

    The minor-arc mass is sum c_m**2 minus the major-arc integral of |F_k S|**2,
    which is the same sinc-kernel sum applied to the autocorrelation of c.
    """
    if X > 2**16:
        raise CapacityError("minor_l2 limited to X <= 2**16")
    cv = coefficients(k, X)
    lo = math.ceil(0.99 * X)
    r2sq = []
    for n in range(lo, X + 1):
        _, _, r2 = r_split(k, X, n, dissection, cv)
        r2sq.append(r2 * r2)
    lhs = math.fsum(r2sq)
    auto = _autocorrelation(cv.c)
    shift = len(cv.c) - 1
    major = math.fsum(
        kernels.arc_sum(auto, -shift, 0, arc.a, arc.q, *_arc_params(arc)) for arc in dissection.arcs
    )
    parseval = math.fsum((cv.c * cv.c).tolist())
    return MinorL2(lhs, parseval - major, parseval, (lo, X))


@dataclass(frozen=True)
class MainTermComparison:
    n: int
    r1: float
    prediction: float | None
    ratio: float | None
    series: float
    l_value: float
    mean_log_weight: float
    r1_prime_count: float
    prediction_prime_count: float | None
    ratio_prime_count: float | None


def main_term_compare(k: int, X: int, n: int, P: float, dissection: ArcDissection) -> MainTermComparison:
    """Compare r_1(X, n) with the main term S(n, P) L(X, n).

    By the prime number theorem log p has mean 1 per integer, so the
    log-weighted prime sum tracks the unweighted sum T over I(X) and the main
    term needs no extra weight. ``mean_log_weight`` (sum of log p over the
    number of primes in I(X)) is reported as the bridge to the prime-count
    comparison, which puts unit weight on each prime for r_1 and predicts
    S(n, P) times the sum of 1/log m over the same (j, m) pairs.
    """
    r1 = integrate_major(k, X, n, dissection)
    series = truncated_sum(k, n, int(math.floor(P)), 1).value
    l_value = l_count(k, X, n, 1.0)
    primes, logs = _prime_window(X)
    mean_log = math.fsum(logs.tolist()) / len(primes)
    prediction = series * l_value
    ratio = r1 / prediction if prediction != 0 else None
    r1_pc = integrate_major(k, X, n, dissection, prime_count_coefficients(k, X))
    lo_i, hi_i = i_range(X)
    lo_j, hi_j = j_range(k, X)
    inv_logs = [1.0 / math.log(n - j**k) for j in range(lo_j, hi_j + 1) if lo_i <= n - j**k <= hi_i]
    pred_pc = series * math.fsum(inv_logs)
    ratio_pc = r1_pc / pred_pc if pred_pc != 0 else None
    return MainTermComparison(n, r1, prediction, ratio, series, l_value, mean_log, r1_pc, pred_pc, ratio_pc)


def weyl_approximation_ratio(k: int, X: int, a: int, q: int, eta: float) -> float:
    """|F_k(a/q + eta) - V_k(a, q)/q F_k(eta)| / (q (1 + X |eta|))."""
    lhs = f_sum(k, X, Fraction(a, q) + Fraction(eta))
    main = v_sum(k, a, q) / q * f_sum(k, X, Fraction(eta))
    return abs(lhs - main) / (q * (1 + X * abs(eta)))


def weyl_approximation_max(k: int, X: int, q_max: int, Q: float, samples: int = 41) -> float:
    """Largest weyl_approximation_ratio over q <= q_max, gcd(a, q) = 1, |eta| <= 1/(qQ)."""
    worst = 0.0
    for q in range(1, q_max + 1):
        etas = np.linspace(-1.0 / (q * Q), 1.0 / (q * Q), samples)
        for a in range(1, q + 1):
            if math.gcd(a, q) != 1:
                continue
            for eta in etas.tolist():
                worst = max(worst, weyl_approximation_ratio(k, X, a, q, eta))
    return worst


def weyl_l1_near_zero(k: int, X: int, delta: float) -> tuple[float, float]:
    """Integral of |F_k| over [-delta, delta] by adaptive quadrature, and its ratio to X**(2/k - 1)."""
    from scipy.integrate import quad

    powers = _j_powers(k, X).astype(np.float64)

    def integrand(eta):
        return abs(np.exp(2j * np.pi * eta * powers).sum())

    val, _ = quad(integrand, -delta, delta, limit=500, epsrel=1e-8)
    return val, val / X ** (2.0 / k - 1.0)


def t_rho_shape(X: int, rho: float, eta: float) -> float:
    """|T_rho(eta)| |eta| / X**(rho - 1)."""
    return abs(t_rho(X, rho, eta)) * abs(eta) / X ** (rho - 1.0)


def l_rho_shape(k: int, X: int, n: int, rho: float) -> float:
    """|L_rho(X, n)| / (X**(1/k) X**(rho - 1)) for real rho."""
    return abs(l_count(k, X, n, rho)) / (X ** (1.0 / k) * X ** (rho - 1.0))
