"""Exact integer arithmetic: factor tables, multiplicative functions,
representation counts r_d(n), and the g_1..g_7 prime-rule functions.

Everything here is a pure function of its inputs.  Values that must stay
exact (g-function values, convolution transforms) are fractions.Fraction;
values involving log p are kept as formal sums of (rational, prime) pairs
and only materialised to float on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ResourceGuardError, ValidationError

# ---------------------------------------------------------------------------
# factor tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Prime factorisation [(p1,e1),(p2,e2),...] with p1 < p2 < ... and e >= 1."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)


class FactorTable:
    """Smallest-prime-factor table for 2..limit, backed by a numpy array.

    Immutable after construction; safe to share between threads.  spf[n]
    is the least prime dividing n, and spf[p] == p exactly for primes.
    """

    def __init__(self, limit: int):
        if limit < 2:
            raise ValidationError(f"FactorTable limit must be >= 2, got {limit}")
        if limit > 2**31 - 1:
            raise ResourceGuardError(
                f"FactorTable limit {limit} exceeds the 2^31-1 guard",
                cost_estimate=f"~{4 * limit / 1e9:.1f} GB of spf entries",
            )
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.uint32)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                sl = spf[p * p :: p]
                sl[sl == 0] = p
        rest = np.nonzero(spf[2:] == 0)[0] + 2
        spf[rest] = rest
        self.spf = spf
        self.spf.setflags(write=False)

    def factorize(self, n: int) -> Factorization:
        if not 1 <= n <= self.limit:
            raise ValidationError(f"factorize: n={n} outside [1, {self.limit}]")
        pairs = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            pairs.append((p, e))
        return Factorization(tuple(pairs))


def build_factor_table(limit: int) -> FactorTable:
    return FactorTable(limit)


def factorize(table: FactorTable, n: int) -> Factorization:
    return table.factorize(n)


def trial_factorize(n: int) -> Factorization:
    """Factorisation by trial division; no table required (small n only)."""
    if n < 1:
        raise ValidationError(f"trial_factorize: n={n} must be >= 1")
    pairs = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            pairs.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        pairs.append((n, 1))
    return Factorization(tuple(pairs))


def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


# ---------------------------------------------------------------------------
# classical multiplicative functions
# ---------------------------------------------------------------------------


def mobius(f: Factorization) -> int:
    if any(e >= 2 for _, e in f.pairs):
        return 0
    return -1 if len(f.pairs) % 2 else 1


def euler_phi(f: Factorization) -> int:
    out = 1
    for p, e in f.pairs:
        out *= (p - 1) * p ** (e - 1)
    return out


def sigma(f: Factorization) -> int:
    out = 1
    for p, e in f.pairs:
        out *= (p ** (e + 1) - 1) // (p - 1)
    return out


def tau_k(f: Factorization, k: int) -> int:
    """Number of ordered factorisations of n into k parts: prod C(e+k-1, k-1)."""
    if k < 1:
        raise ValidationError(f"tau_k: k={k} must be >= 1")
    out = 1
    for _, e in f.pairs:
        out *= math.comb(e + k - 1, k - 1)
    return out


def chi4(n: int) -> int:
    """Non-trivial Dirichlet character mod 4."""
    if n < 0:
        raise ValidationError(f"chi4: n={n} must be >= 0")
    r = n & 3
    if r == 1:
        return 1
    if r == 3:
        return -1
    return 0


def r2(f: Factorization) -> int:
    """Number of ordered signed (x,y) with x^2+y^2 = n, as 4 sum_{d|n} chi4(d).

    Per prime: p=2 contributes 1; p=1 mod 4 with exponent e contributes e+1;
    p=3 mod 4 contributes 1 for even e, 0 for odd e.
    """
    out = 4
    for p, e in f.pairs:
        if p == 2:
            continue
        if p % 4 == 1:
            out *= e + 1
        elif e % 2 == 1:
            return 0
    return out


def is_sum_of_two_squares(f: Factorization) -> bool:
    """True iff every prime 3 mod 4 divides n to an even exponent (n=0 -> True)."""
    return all(e % 2 == 0 for p, e in f.pairs if p % 4 == 3)


def rd_bruteforce(
    n: int, d: int, *, max_dim: int = 6, max_n: int = 10**6
) -> int:
    """Exact count of xi in Z^d with |xi|^2 = n by nested enumeration.

    This is the oracle everything else is checked against; it never uses
    divisor identities.  Guarded because the work grows like n^(d/2).
    """
    if n < 0:
        raise ValidationError(f"rd_bruteforce: n={n} must be >= 0")
    if d < 1:
        raise ValidationError(f"rd_bruteforce: d={d} must be >= 1")
    if d > max_dim or n > max_n:
        raise ResourceGuardError(
            f"rd_bruteforce guard: d={d} (max {max_dim}), n={n} (max {max_n})",
            cost_estimate=f"~n^(d/2) = {float(max(n, 1)) ** (d / 2):.2e} lattice points",
        )

    def count(rem: int, dims: int) -> int:
        if dims == 1:
            r = math.isqrt(rem)
            if r * r != rem:
                return 0
            return 1 if r == 0 else 2
        total = 0
        x = 0
        while x * x <= rem:
            sub = count(rem - x * x, dims - 1)
            total += sub if x == 0 else 2 * sub
            x += 1
        return total

    return count(n, d)


def r2_lattice_range(limit: int) -> np.ndarray:
    """r_2(n) for all 0 <= n <= limit at once, by direct lattice counting.

    Same semantics as rd_bruteforce(n, 2) but vectorised over the range;
    int64 output.  Used both as a range oracle in tests and as the bulk
    r(n) source for the arithmetic-progression experiments.
    """
    if limit < 0:
        raise ValidationError("r2_lattice_range: limit must be >= 0")
    if limit > 2 * 10**8:
        raise ResourceGuardError(
            f"r2_lattice_range limit {limit} exceeds the 2e8 guard",
            cost_estimate=f"~{8 * limit / 1e9:.1f} GB output array",
        )
    counts = np.zeros(limit + 1, dtype=np.int64)
    for x in range(math.isqrt(limit) + 1):
        ymax = math.isqrt(limit - x * x)
        ys = np.arange(ymax + 1, dtype=np.int64)
        idx = x * x + ys * ys
        w = np.full(ymax + 1, 4 if x > 0 else 2, dtype=np.int64)
        w[0] //= 2
        counts[idx] += w
    return counts


def rd_square_identity(n: int, d: int, table: FactorTable | None = None) -> int:
    """The closed forms for r_3(n^2) and r_4(n^2), writing n = 2^k * m, m odd.

      r_3(n^2) = 6 * prod_{p^a || m} (sigma(p^a) - (-1)^((p-1)/2) sigma(p^(a-1)))
      r_4(n^2) = 24 * sigma(m^2)

    Computes the stated identity exactly; callers compare against
    rd_bruteforce(n^2, d).  d >= 5 involves an uncomputed singular series
    and is out of scope; the d=4 form is only expected to match brute
    force for even n (odd n is a recorded discrepancy, not patched here).
    """
    if d not in (3, 4):
        raise ValidationError(f"rd_square_identity: d={d} not in {{3, 4}}")
    if n < 1:
        raise ValidationError(f"rd_square_identity: n={n} must be >= 1")
    m = n
    while m % 2 == 0:
        m //= 2
    fm = table.factorize(m) if table is not None else trial_factorize(m)
    if d == 4:
        m2 = Factorization(tuple((p, 2 * e) for p, e in fm.pairs))
        return 24 * sigma(m2)
    out = 6
    for p, a in fm.pairs:
        s_a = (p ** (a + 1) - 1) // (p - 1)
        s_am1 = (p**a - 1) // (p - 1)
        sign = -1 if ((p - 1) // 2) % 2 else 1
        out *= s_a - sign * s_am1
    return out


# ---------------------------------------------------------------------------
# the g_1 .. g_7 prime rules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormalLogSum:
    """Sum of c_i * log(p_i) with exact rational c_i, materialised on demand."""

    terms: tuple[tuple[Fraction, int], ...]

    def __add__(self, other: "FormalLogSum") -> "FormalLogSum":
        return FormalLogSum(self.terms + other.terms)

    def value(self) -> float:
        return math.fsum(float(c) * math.log(p) for c, p in self.terms)

    @staticmethod
    def zero() -> "FormalLogSum":
        return FormalLogSum(())


def _require_squarefree_odd(f: Factorization, name: str, odd: bool = True) -> None:
    if not f.is_squarefree():
        raise ValidationError(f"{name}: argument {f.n} is not squarefree")
    if odd and any(p == 2 for p, _ in f.pairs):
        raise ValidationError(f"{name}: argument {f.n} must be odd")


def g1(f: Factorization) -> Fraction:
    """g1(p) = 1 - chi4(p)/p, extended multiplicatively over squarefree n."""
    _require_squarefree_odd(f, "g1", odd=False)
    out = Fraction(1)
    for p, _ in f.pairs:
        out *= 1 - Fraction(chi4(p), p)
    return out


def g2(f: Factorization) -> Fraction:
    """g2(p) = 2 - 1/p for p = 1 mod 4, 1/p for p = 3 mod 4 (odd squarefree n)."""
    _require_squarefree_odd(f, "g2")
    out = Fraction(1)
    for p, _ in f.pairs:
        out *= 2 - Fraction(1, p) if p % 4 == 1 else Fraction(1, p)
    return out


def g3(f: Factorization) -> Fraction:
    """g3(p) = (p-1)^2/(p(p+1)) for p = 1 mod 4, else g1(p) = 1 + 1/p."""
    _require_squarefree_odd(f, "g3")
    out = Fraction(1)
    for p, _ in f.pairs:
        if p % 4 == 1:
            out *= Fraction((p - 1) ** 2, p * (p + 1))
        else:
            out *= 1 + Fraction(1, p)
    return out


def g4(f: Factorization) -> Fraction:
    """g4(p) = (4p^2-3p+1)/(p(p+1)) for p = 1 mod 4, else g2(p) = 1/p."""
    _require_squarefree_odd(f, "g4")
    out = Fraction(1)
    for p, _ in f.pairs:
        if p % 4 == 1:
            out *= Fraction(4 * p * p - 3 * p + 1, p * (p + 1))
        else:
            out *= Fraction(1, p)
    return out


def g5(f: Factorization) -> FormalLogSum:
    """g5(p) = (2p+1)log p/(p^2-1) [p=1 mod 4] or log p/(p^2-1) [p=3 mod 4],
    extended additively over the prime parts."""
    _require_squarefree_odd(f, "g5")
    terms = []
    for p, _ in f.pairs:
        c = Fraction(2 * p + 1, p * p - 1) if p % 4 == 1 else Fraction(1, p * p - 1)
        terms.append((c, p))
    return FormalLogSum(tuple(terms))


def g6(f: Factorization) -> FormalLogSum:
    """g6(p) = (p-1)^2(2p+1)log p/((p+1)(4p^2-3p+1)) [p=1 mod 4] or log p [p=3]."""
    _require_squarefree_odd(f, "g6")
    terms = []
    for p, _ in f.pairs:
        if p % 4 == 1:
            c = Fraction((p - 1) ** 2 * (2 * p + 1), (p + 1) * (4 * p * p - 3 * p + 1))
        else:
            c = Fraction(1)
        terms.append((c, p))
    return FormalLogSum(tuple(terms))


def g7(f: Factorization) -> Fraction:
    """g7(p) = p + 1, extended multiplicatively over squarefree n."""
    _require_squarefree_odd(f, "g7", odd=False)
    out = Fraction(1)
    for p, _ in f.pairs:
        out *= p + 1
    return out


_G_DISPATCH = {1: g1, 2: g2, 3: g3, 4: g4, 5: g5, 6: g6, 7: g7}


def g_function(gid: int, f: Factorization):
    """Dispatch to g1..g7.  g5 and g6 return FormalLogSum, the rest Fraction."""
    if gid not in _G_DISPATCH:
        raise ValidationError(f"g_function: id {gid} not in 1..7")
    return _G_DISPATCH[gid](f)


# ---------------------------------------------------------------------------
# Ramanujan sums and convolution transforms
# ---------------------------------------------------------------------------


def ramanujan_sum(r: int, h: int) -> int:
    """c_r(h) = sum over (a,r)=1 of e(ah/r), via mu(r/g) phi(r)/phi(r/g), g=(r,h)."""
    if r < 1:
        raise ValidationError(f"ramanujan_sum: r={r} must be >= 1")
    g = math.gcd(r, h)
    m = r // g
    fm = trial_factorize(m)
    mu_m = mobius(fm)
    if mu_m == 0:
        return 0
    phi_r = euler_phi(trial_factorize(r))
    phi_m = euler_phi(fm)
    val = Fraction(mu_m * phi_r, phi_m)
    if val.denominator != 1:
        raise AssertionError(f"ramanujan_sum({r},{h}) not an integer: {val}")
    return int(val)


def convolution_transform(
    kind: str, base: Callable[[int], Fraction], f: Factorization
) -> Fraction:
    """Multiplicative transforms of a prime rule, on squarefree arguments.

    kind "f_star"/"g_star":    p -> (1 - base(p)) / base(p)   (mu * 1/base)
    kind "f_dstar"/"g_dstar":  p -> 1 - p * base(p)           (iota mu base * 1)
    """
    if kind not in ("f_star", "g_star", "f_dstar", "g_dstar"):
        raise ValidationError(f"convolution_transform: unknown kind {kind!r}")
    _require_squarefree_odd(f, "convolution_transform", odd=False)
    out = Fraction(1)
    for p, _ in f.pairs:
        bp = Fraction(base(p))
        if kind in ("f_star", "g_star"):
            if bp == 0:
                raise ValidationError(f"convolution_transform: base({p}) = 0")
            out *= (1 - bp) / bp
        else:
            out *= 1 - p * bp
    return out


# ---------------------------------------------------------------------------
# helpers shared by the sieve-side modules
# ---------------------------------------------------------------------------


def squarefree_divisors(f: Factorization, residue: int | None = None) -> list[tuple[int, int]]:
    """All (d, mu(d)) for squarefree d | n, optionally keeping only primes
    with p % 4 == residue.  d=1 is always included."""
    ps = [p for p, _ in f.pairs if residue is None or p % 4 == residue]
    out = [(1, 1)]
    for p in ps:
        out += [(d * p, -m) for d, m in out]
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Solve x = r1 (mod m1), x = r2 (mod m2).  None if inconsistent."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g != 0:
        return None
    l = m1 // g * m2
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 != g else 0
    return (r1 + m1 * t) % l, l


def crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int] | None:
    """Simultaneous congruences over possibly non-coprime moduli."""
    r, m = 0, 1
    for r2_, m2_ in zip(residues, moduli):
        nxt = crt_pair(r, m, r2_ % m2_, m2_)
        if nxt is None:
            return None
        r, m = nxt
    return r, m


def count_in_class(lo: int, hi: int, residue: int, modulus: int) -> int:
    """#{n in [lo, hi) : n = residue (mod modulus)}."""
    if hi <= lo:
        return 0
    first = lo + (residue - lo) % modulus
    if first >= hi:
        return 0
    return (hi - 1 - first) // modulus + 1
