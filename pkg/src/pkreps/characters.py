"""Dirichlet characters, Gauss sums and the complete exponential sums V, H, sigma, T.

A character mod q is stored as an exponent vector over a fixed cyclic
decomposition of (Z/qZ)*: one generator per odd prime power (the least
primitive root mod p**2, so the same generator serves every power of p), and
{-1} x <5> for 2**e with e >= 3. Values are roots of unity of order dividing
the group exponent E and are looked up through an integer index table, so
every phase in a sum is reduced exactly before any trig call.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .arith import DomainError, CapacityError, euler_phi, factorize, mobius

MAX_GROUP_MODULUS = 10**5
MAX_V_MODULUS = 10**6

_TWO_PI = 2.0 * math.pi


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))


def _roots(order: int) -> np.ndarray:
    j = np.arange(order, dtype=np.float64)
    return np.cos(_TWO_PI * j / order) + 1j * np.sin(_TWO_PI * j / order)


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least g that generates (Z/p**e)* for every e >= 1 (p odd)."""
    ells = factorize(p - 1).primes
    g = 2
    while True:
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in ells):
            return g if pow(g, p - 1, p * p) != 1 else g + p
        g += 1


@dataclass(frozen=True)
class _Cyclic:
    prime: int
    exponent: int  # of the prime in q
    order: int
    generator: int


@lru_cache(maxsize=256)
def _prime_power_logs(p: int, e: int) -> tuple[np.ndarray, ...]:
    """Discrete-log tables mod p**e, one array per cyclic factor; -1 at non-units."""
    pe = p**e
    if p != 2:
        g = primitive_root(p)
        phi = pe // p * (p - 1)
        log = np.full(pe, -1, dtype=np.int64)
        x = 1
        for j in range(phi):
            log[x] = j
            x = x * g % pe
        return (log,)
    if e == 1:
        return ()
    sign = np.full(pe, -1, dtype=np.int64)
    if e == 2:
        sign[1], sign[3] = 0, 1
        return (sign,)
    five = np.full(pe, -1, dtype=np.int64)
    x = 1
    for j in range(pe // 4):
        sign[x], five[x] = 0, j
        sign[pe - x], five[pe - x] = 1, j
        x = x * 5 % pe
    return sign, five


def _cyclic_factors(p: int, e: int) -> list[_Cyclic]:
    pe = p**e
    if p != 2:
        return [_Cyclic(p, e, pe // p * (p - 1), primitive_root(p))]
    if e == 1:
        return []
    if e == 2:
        return [_Cyclic(2, 2, 2, pe - 1)]
    return [_Cyclic(2, e, 2, pe - 1), _Cyclic(2, e, pe // 4, 5)]


class CharacterGroup:
    """All phi(q) Dirichlet characters mod q, in a fixed lexicographic order."""

    def __init__(self, q: int):
        if q <= 0:
            raise DomainError(f"modulus must be >= 1, got {q}")
        if q > MAX_GROUP_MODULUS:
            raise CapacityError(f"character groups limited to q <= {MAX_GROUP_MODULUS}")
        self.q = q
        self.factorization = factorize(q).factors
        self.cyclics: tuple[_Cyclic, ...] = tuple(
            c for p, e in self.factorization for c in _cyclic_factors(p, e)
        )
        self.orders = tuple(c.order for c in self.cyclics)
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        self.phi = euler_phi(q)

    def __repr__(self) -> str:
        return f"CharacterGroup(q={self.q})"

    def __len__(self) -> int:
        return self.phi

    def __iter__(self):
        for exps in itertools.product(*(range(m) for m in self.orders)):
            yield DirichletCharacter(self, exps)

    def __getitem__(self, i: int) -> "DirichletCharacter":
        if not 0 <= i < self.phi:
            raise IndexError(i)
        exps = []
        for m in reversed(self.orders):
            i, x = divmod(i, m)
            exps.append(x)
        return DirichletCharacter(self, tuple(reversed(exps)))

    def index_of(self, exps: tuple[int, ...]) -> int:
        i = 0
        for x, m in zip(exps, self.orders):
            i = i * m + x
        return i

    def character(self, exps) -> "DirichletCharacter":
        return DirichletCharacter(self, tuple(int(x) % m for x, m in zip(exps, self.orders)))

    @property
    def principal(self) -> "DirichletCharacter":
        return DirichletCharacter(self, (0,) * len(self.orders))

    @cached_property
    def logs(self) -> np.ndarray:
        """(q, r) array of discrete logs of a mod q per cyclic factor, -1 at non-units."""
        a = np.arange(self.q, dtype=np.int64)
        cols = []
        for p, e in self.factorization:
            for table in _prime_power_logs(p, e):
                cols.append(table[a % p**e])
        out = np.stack(cols, axis=1) if cols else np.zeros((self.q, 0), dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def units(self) -> np.ndarray:
        a = np.arange(self.q, dtype=np.int64)
        return np.gcd(a, self.q) == 1

    @cached_property
    def _scales(self) -> np.ndarray:
        return np.array([self.exponent // m for m in self.orders], dtype=np.int64)

    def index_tables(self) -> np.ndarray:
        """(phi, q) array: chi(a) = zeta_E ** table[chi, a], -1 where gcd(a, q) > 1."""
        exps = np.array(list(itertools.product(*(range(m) for m in self.orders))), dtype=np.int64)
        exps = exps.reshape(self.phi, len(self.orders))
        idx = (exps * self._scales) @ np.where(self.logs < 0, 0, self.logs).T % self.exponent
        idx[:, ~self.units] = -1
        return idx

    def value_matrix(self) -> np.ndarray:
        """(phi, q) complex matrix of all character values."""
        idx = self.index_tables()
        vals = _roots(self.exponent)[np.where(idx < 0, 0, idx)]
        vals[idx < 0] = 0
        return vals


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    group: CharacterGroup
    exps: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and self.group.q == other.group.q
            and self.exps == other.exps
        )

    def __hash__(self) -> int:
        return hash((self.group.q, self.exps))

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, exps={self.exps})"

    @property
    def modulus(self) -> int:
        return self.group.q

    @cached_property
    def index_table(self) -> np.ndarray:
        """chi(a) = zeta_E ** table[a]; -1 marks non-units."""
        g = self.group
        logs = np.where(g.logs < 0, 0, g.logs)
        idx = logs @ (np.array(self.exps, dtype=np.int64) * g._scales) % g.exponent
        idx = idx.astype(np.int64)
        idx[~g.units] = -1
        idx.setflags(write=False)
        return idx

    def values(self) -> np.ndarray:
        idx = self.index_table
        vals = _roots(self.group.exponent)[np.where(idx < 0, 0, idx)]
        vals[idx < 0] = 0
        return vals

    def __call__(self, a: int) -> complex:
        j = int(self.index_table[a % self.modulus])
        if j < 0:
            return 0j
        e = self.group.exponent
        return complex(math.cos(_TWO_PI * j / e), math.sin(_TWO_PI * j / e))

    @property
    def is_principal(self) -> bool:
        return not any(self.exps)

    @property
    def order(self) -> int:
        return math.lcm(*(m // math.gcd(m, x) for x, m in zip(self.exps, self.group.orders))) if self.exps else 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    def conj(self) -> "DirichletCharacter":
        return self.group.character(tuple(-x for x in self.exps))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        """Product character modulo lcm of the two moduli."""
        q = math.lcm(self.modulus, other.modulus)
        a, b = lift(self, q), lift(other, q)
        return a.group.character(tuple(x + y for x, y in zip(a.exps, b.exps)))

    def _components(self):
        """Per prime: (p, e, exponents over that prime's cyclic factors)."""
        out = []
        i = 0
        for p, e in self.group.factorization:
            n = len(_cyclic_factors(p, e))
            out.append((p, e, self.exps[i : i + n]))
            i += n
        return out

    @cached_property
    def conductor(self) -> int:
        f = 1
        for p, e, xs in self._components():
            f *= p ** _conductor_exponent(p, e, xs)
        return f

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive_part(self) -> "DirichletCharacter":
        """The primitive character mod the conductor that induces this one."""
        r = self.conductor
        target = CharacterGroup(r)
        exps: list[int] = []
        for p, e, xs in self._components():
            c = _conductor_exponent(p, e, xs)
            if c == 0:
                continue
            if p != 2:
                exps.append(xs[0] // p ** (e - c))
            elif c == 2:
                exps.append(xs[0])
            else:
                exps.extend([xs[0], xs[1] // 2 ** (e - c)])
        return target.character(tuple(exps))


def _conductor_exponent(p: int, e: int, xs: tuple[int, ...]) -> int:
    if p != 2:
        (x,) = xs
        if x == 0:
            return 0
        c = 1
        while x % p ** (e - c):
            c += 1
        return c
    if e == 1:
        return 0
    if e == 2 or xs[1] == 0:
        return 2 if xs[0] else 0
    c = 3
    while xs[1] % 2 ** (e - c):
        c += 1
    return c


def character_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def lift(chi: DirichletCharacter, q: int) -> DirichletCharacter:
    """The character chi * chi_{0,q} mod q, for a multiple q of chi's modulus."""
    r = chi.modulus
    if q % r:
        raise DomainError(f"cannot lift a character mod {r} to modulus {q}")
    if q == r:
        return chi
    src = {p: (e, xs) for p, e, xs in chi._components()}
    target = CharacterGroup(q)
    exps: list[int] = []
    for p, e in target.factorization:
        width = len(_cyclic_factors(p, e))
        if p not in src or not src[p][1]:
            exps.extend([0] * width)
            continue
        er, xs = src[p]
        if p != 2:
            exps.append(xs[0] * p ** (e - er))
        elif width == 1:  # 4 -> 4
            exps.append(xs[0])
        elif er == 2:  # 4 -> 2**e, e >= 3
            exps.extend([xs[0], 0])
        else:
            exps.extend([xs[0], xs[1] * 2 ** (e - er)])
    return target.character(tuple(exps))


def conductor_and_primitive_part(chi: DirichletCharacter) -> tuple[int, DirichletCharacter]:
    return chi.conductor, chi.primitive_part()


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum over a mod q of chi(a) e(a/q), phases combined exactly."""
    q = chi.modulus
    e = chi.group.exponent
    big = math.lcm(e, q)
    idx = chi.index_table
    a = np.arange(q, dtype=np.int64)
    units = idx >= 0
    ph = (idx[units] * (big // e) + a[units] * (big // q)) % big
    ang = _TWO_PI * ph.astype(np.float64) / big
    return complex(math.fsum(np.cos(ang).tolist()), math.fsum(np.sin(ang).tolist()))


@lru_cache(maxsize=64)
def power_residue_counts(k: int, q: int) -> np.ndarray:
    """N[u] = #{h mod q : h**k = u mod q}."""
    h = np.arange(q, dtype=np.int64)
    acc = np.ones(q, dtype=np.int64) % q
    base = h.copy()
    e = k
    while e:
        if e & 1:
            acc = acc * base % q
        base = base * base % q
        e >>= 1
    out = np.bincount(acc, minlength=q).astype(np.int64)
    out.setflags(write=False)
    return out


def v_sum(k: int, a: int, q: int) -> complex:
    """V_k(a, q) = sum over h mod q of e(a h**k / q)."""
    if q <= 0:
        raise DomainError(f"modulus must be >= 1, got {q}")
    if q > MAX_V_MODULUS:
        raise CapacityError(f"v_sum limited to q <= {MAX_V_MODULUS}")
    counts = power_residue_counts(k, q)
    u = np.flatnonzero(counts)
    ph = (u * (a % q)) % q
    ang = _TWO_PI * ph.astype(np.float64) / q
    w = counts[u].astype(np.float64)
    return complex(math.fsum((w * np.cos(ang)).tolist()), math.fsum((w * np.sin(ang)).tolist()))


def _twisted_gauss(vals: np.ndarray) -> np.ndarray:
    """G[t] = sum over a of vals[a] e(a t / q), for all t mod q."""
    q = len(vals)
    return np.fft.ifft(vals) * q


def _check_modulus(chi: DirichletCharacter, q: int) -> None:
    if chi.modulus != q:
        raise DomainError(f"character has modulus {chi.modulus}, expected {q}")


def h_sum(k: int, chi: DirichletCharacter, q: int, n: int) -> complex:
    """H_k(chi, q, n) = sum_a chi(a) V_k(a, q) e(-n a / q).

    Swapping the sums gives sum_u N[u] G(u - n) with N the k-th power residue
    counts and G the twisted Gauss sums of chi, evaluated for all shifts by FFT.
    """
    _check_modulus(chi, q)
    counts = power_residue_counts(k, q)
    g = _twisted_gauss(chi.values())
    u = np.flatnonzero(counts)
    return _fsum_complex(counts[u] * g[(u - n) % q])


def h_sum_all(k: int, chi: DirichletCharacter) -> np.ndarray:
    """H_k(chi, q, n) for every residue n mod q (circular correlation by FFT)."""
    q = chi.modulus
    counts = power_residue_counts(k, q).astype(np.float64)
    g = _twisted_gauss(chi.values())
    g_rev = np.roll(g[::-1], 1)  # g_rev[t] = g[-t]
    return np.fft.ifft(np.fft.fft(counts) * np.fft.fft(g_rev))


def h_sums_group(k: int, group: CharacterGroup, n: int) -> np.ndarray:
    """H_k(chi, q, n) for every character of ``group``, in group order."""
    q = group.q
    a = np.arange(q, dtype=np.int64)
    v = _v_all(k, q)
    w = v * np.exp(-2j * np.pi * ((n * a) % q) / q)
    return group.value_matrix() @ w


def _v_all(k: int, q: int) -> np.ndarray:
    """V_k(a, q) for all a mod q by FFT of the residue counts."""
    return np.fft.ifft(power_residue_counts(k, q).astype(np.float64)) * q


def h_sum_direct(k: int, chi: DirichletCharacter, q: int, n: int) -> complex:
    """Definition-literal double sum over a and h with exactly reduced phases; O(q**2)."""
    _check_modulus(chi, q)
    e = chi.group.exponent
    big = math.lcm(e, q)
    idx = chi.index_table
    a = np.flatnonzero(idx >= 0)
    h = np.arange(q, dtype=np.int64)
    hk = np.array([pow(int(x), k, q) for x in h], dtype=np.int64)
    t = (hk - n) % q
    ph = (idx[a][:, None] * (big // e) + ((a[:, None] * t[None, :]) % q) * (big // q)) % big
    ang = _TWO_PI * ph.astype(np.float64) / big
    return complex(math.fsum(np.cos(ang).ravel().tolist()), math.fsum(np.sin(ang).ravel().tolist()))


def h_principal_exact(k: int, q: int, n: int) -> int:
    """H_k(q, n) as an exact integer: sum over h of the Ramanujan sum c_q(h**k - n)."""
    counts = power_residue_counts(k, q)
    return sum(int(counts[u]) * ramanujan_sum(q, u - n) for u in np.flatnonzero(counts).tolist())


@lru_cache(maxsize=1 << 16)
def ramanujan_sum(q: int, m: int) -> int:
    g = math.gcd(q, m % q)
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += mobius(q // d) * d
    return total


def sigma_sum(k: int, chi: DirichletCharacter, r: int, n: int) -> complex:
    """sigma(r, chi, n) = sum over h mod r of chi(h**k - n), with chi = 0 off units."""
    _check_modulus(chi, r)
    if r > MAX_V_MODULUS:
        raise CapacityError(f"sigma_sum limited to r <= {MAX_V_MODULUS}")
    counts = power_residue_counts(k, r)
    u = np.flatnonzero(counts)
    idx = chi.index_table[(u - n) % r]
    keep = idx >= 0
    e = chi.group.exponent
    ang = _TWO_PI * idx[keep].astype(np.float64) / e
    w = counts[u][keep].astype(np.float64)
    return complex(math.fsum((w * np.cos(ang)).tolist()), math.fsum((w * np.sin(ang)).tolist()))


@dataclass(frozen=True)
class TFactor:
    """T(chi, r, n) by the H route and by the Gauss-sum/sigma route."""

    value: complex
    via_sigma: complex

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.via_sigma) / max(abs(self.value), abs(self.via_sigma), 1e-300)


def t_factor(k: int, chi: DirichletCharacter, n: int) -> TFactor:
    if not chi.is_primitive:
        raise DomainError("t_factor needs a primitive character")
    r = chi.modulus
    if r > 10**4:
        raise CapacityError("t_factor limited to r <= 10**4")
    phi = chi.group.phi
    tau_bar = gauss_sum(chi.conj())
    via_h = tau_bar * h_sum(k, chi, r, n) / (r * phi)
    via_sigma = tau_bar * gauss_sum(chi) * sigma_sum(k, chi.conj(), r, n) / (r * phi)
    return TFactor(via_h, via_sigma)


def lifted_h_tau_sum(k: int, chi: DirichletCharacter, P: int, n: int) -> tuple[float, float]:
    """Sum over q <= P, r | q of |tau(conj(psi)) H_k(psi, q, n)| / (q phi(q)), psi = chi chi_{0,q}.

    Returns the sum and the sum divided by (log P)**k.
    """
    r = chi.modulus
    total = []
    for q in range(r, P + 1, r):
        psi = lift(chi, q)
        val = abs(gauss_sum(psi.conj()) * h_sum(k, psi, q, n)) / (q * psi.group.phi)
        total.append(val)
    s = math.fsum(total)
    return s, s / math.log(P) ** k


def sigma_ratio_report(k: int, r_max: int, n_values, chars_per_modulus: int = 4, rng=None):
    """Ratios |sigma(r, chi, n)| / r**(1 - 1/(7(k-1))) over primitive chi mod r <= r_max.

    Characters per modulus are sampled with ``rng`` (a numpy Generator) when a
    modulus has more than ``chars_per_modulus`` primitive characters.
    Returns a list of (r, exps, n, ratio).
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    rows = []
    expo = 1.0 - 1.0 / (7 * (k - 1))
    for r in range(3, r_max + 1):
        group = CharacterGroup(r)
        prim = [chi for chi in group if chi.is_primitive]
        if not prim:
            continue
        if len(prim) > chars_per_modulus:
            pick = rng.choice(len(prim), size=chars_per_modulus, replace=False)
            prim = [prim[i] for i in sorted(pick.tolist())]
        for chi in prim:
            for n in n_values:
                rows.append((r, chi.exps, int(n), abs(sigma_sum(k, chi, r, int(n))) / r**expo))
    return rows
