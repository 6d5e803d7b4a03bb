"""Arithmetic-progression sums of r(n), r(n)r(n+h) and r^2(n), empirical
versus predicted main terms.

Empirical sums step through the CRT-combined residue class with numpy
slices of an r_2 range table (no per-n modulus checks); partial sums are
integers, so results are independent of any internal blocking.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    chi4,
    crt,
    g1,
    g2,
    g3,
    g4,
    g5,
    g6,
    primes_up_to,
    r2_lattice_range,
    trial_factorize,
)
from .constants import ConstantEstimate, a2_constant
from .errors import ValidationError
from .report import CorrelationReport


@dataclass(frozen=True)
class APQuery:
    """Parameters for the progression sums.

    q, a cut the progression n = a (mod q); the sums always also impose
    n = 1 (mod 4).  d (single-sum / square-sum) or d1, d2 (pair sum) are
    divisibility moduli; h is the pair-correlation shift.
    """

    N: int
    q: int = 1
    a: int = 1
    d: int = 1
    d1: int = 1
    d2: int = 1
    h: int = 4


def _check_odd_squarefree(n: int, name: str) -> None:
    if n < 1 or n % 2 == 0:
        raise ValidationError(f"{name}={n} must be odd and positive")
    f = trial_factorize(n)
    if not f.is_squarefree():
        raise ValidationError(f"{name}={n} must be squarefree")


def validate_single(query: APQuery) -> None:
    """Hypotheses shared by the r(n) and r^2(n) sums: q, d odd squarefree,
    (a,q) = (d,q) = 1."""
    _check_odd_squarefree(query.q, "q")
    _check_odd_squarefree(query.d, "d")
    if math.gcd(query.a, query.q) != 1:
        raise ValidationError(f"(a,q) = {math.gcd(query.a, query.q)} != 1")
    if math.gcd(query.d, query.q) != 1:
        raise ValidationError(f"(d,q) = {math.gcd(query.d, query.q)} != 1")
    if query.N < 0:
        raise ValidationError(f"N={query.N} must be >= 0")


def validate_pair(query: APQuery) -> None:
    """Pair-sum hypotheses: additionally (d1,d2)=1, 4|h, h>0, and every
    prime of h divides 2q (which forces the Ramanujan sums to mu(r))."""
    _check_odd_squarefree(query.q, "q")
    _check_odd_squarefree(query.d1, "d1")
    _check_odd_squarefree(query.d2, "d2")
    for name, dd in (("d1", query.d1), ("d2", query.d2)):
        if math.gcd(dd, query.q) != 1:
            raise ValidationError(f"({name},q) != 1")
    if math.gcd(query.d1, query.d2) != 1:
        raise ValidationError("(d1,d2) != 1")
    if query.h <= 0 or query.h % 4 != 0:
        raise ValidationError(f"h={query.h} must be positive and divisible by 4")
    if math.gcd(query.a, query.q) != 1 or math.gcd(query.a + query.h, query.q) != 1:
        raise ValidationError("(a,q) and (a+h,q) must both be 1")
    hh = query.h
    while hh % 2 == 0:
        hh //= 2
    for p, _ in trial_factorize(hh).pairs:
        if (2 * query.q) % p != 0:
            raise ValidationError(f"prime {p} | h does not divide 2q")
    if query.N < 0:
        raise ValidationError(f"N={query.N} must be >= 0")


def _class_indices(query: APQuery, extra: list[tuple[int, int]], limit: int) -> np.ndarray:
    """Indices n in [1, limit] with n = a (q), n = 1 (4) and the extra
    congruences (residue, modulus)."""
    residues = [query.a % query.q, 1] + [r for r, _ in extra]
    moduli = [query.q, 4] + [m for _, m in extra]
    sol = crt(residues, moduli)
    if sol is None:
        return np.empty(0, dtype=np.int64)
    r, m = sol
    start = r % m
    if start == 0:
        start = m
    if start > limit:
        return np.empty(0, dtype=np.int64)
    return np.arange(start, limit + 1, m, dtype=np.int64)


# ---------------------------------------------------------------------------
# single sums:   sum r(n),  n <= N, n = a (q), n = 1 (4), d | n
# ---------------------------------------------------------------------------


def empirical_sum_r(query: APQuery, r2arr: np.ndarray | None = None) -> int:
    validate_single(query)
    if query.N == 0:
        return 0
    if r2arr is None:
        r2arr = r2_lattice_range(query.N)
    idx = _class_indices(query, [(0, query.d)], query.N)
    return int(r2arr[idx].sum())


def predicted_sum_r(query: APQuery) -> float:
    validate_single(query)
    gq = float(g1(trial_factorize(query.q)))
    gd = float(g2(trial_factorize(query.d)))
    return gq * gd / (2 * query.q * query.d) * math.pi * query.N


# ---------------------------------------------------------------------------
# pair sums:   sum r(n) r(n+h)
# ---------------------------------------------------------------------------


def gamma_singular_series(
    d1: int, d2: int, q: int, tail_prime_bound: int = 10**6
) -> ConstantEstimate:
    """Gamma(d1,d2,q) as an Euler product.

    The mu(r) sum has multiplicative summand, so it factors: primes p | d1 d2
    contribute the exact factor (1 - chi4(p)/p); the remaining odd primes
    coprime to q d1 d2 contribute (1 - p^-2), truncated at the bound; the
    whole thing carries g2(d1) g2(d2)/(d1 d2).
    """
    _check_odd_squarefree(q, "q")
    _check_odd_squarefree(d1, "d1")
    _check_odd_squarefree(d2, "d2")
    if math.gcd(d1, d2) != 1 or math.gcd(d1 * d2, q) != 1:
        raise ValidationError("d1, d2, q must be pairwise coprime")
    f1, f2 = trial_factorize(d1), trial_factorize(d2)
    head = float(g2(f1)) * float(g2(f2)) / (d1 * d2)
    for p, _ in f1.pairs + f2.pairs:
        head *= 1 - chi4(p) / p
    ps = primes_up_to(tail_prime_bound)
    excluded = 2 * q * d1 * d2
    keep = np.array([excluded % int(p) != 0 for p in ps])
    tail = float(np.exp(np.sum(np.log1p(-1.0 / ps[keep].astype(np.float64) ** 2))))
    value = head * tail
    bound = abs(value) * 2.0 / tail_prime_bound
    return ConstantEstimate(value, bound, f"tail product truncated at p <= {tail_prime_bound}")


def gamma_direct_sum(d1: int, d2: int, q: int, r_max: int = 10**4) -> float:
    """Brute-force oracle: the defining mu(r) sum truncated at r <= r_max."""
    mu = np.ones(r_max + 1, dtype=np.int64)
    for p in primes_up_to(r_max):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    r = np.arange(1, r_max + 1, dtype=np.int64)
    mur = mu[1:]
    mask = r % 2 == 1
    if q > 1:
        mask &= np.gcd(r, q) == 1
    g1r = np.gcd(r, d1)
    g2r = np.gcd(r, d2)
    # for squarefree r, (d^2, r) = (d, r)
    chi1 = np.where(g1r % 4 == 1, 1, -1)
    chi2 = np.where(g2r % 4 == 1, 1, -1)
    terms = mur * g1r * g2r * chi1 * chi2 / r.astype(np.float64) ** 2
    total = float(np.sum(terms[mask]))
    head = float(g2(trial_factorize(d1))) * float(g2(trial_factorize(d2))) / (d1 * d2)
    return head * total


def empirical_sum_rr(query: APQuery, r2arr: np.ndarray | None = None) -> int:
    validate_pair(query)
    if query.N == 0:
        return 0
    if r2arr is None:
        r2arr = r2_lattice_range(query.N + query.h)
    if len(r2arr) < query.N + query.h + 1:
        raise ValidationError("r2arr must cover 0..N+h")
    idx = _class_indices(query, [(0, query.d1), (-query.h, query.d2)], query.N)
    return int((r2arr[idx] * r2arr[idx + query.h]).sum())


def predicted_sum_rr(query: APQuery, tail_prime_bound: int = 10**6) -> float:
    validate_pair(query)
    gq = float(g1(trial_factorize(query.q)))
    gamma = gamma_singular_series(query.d1, query.d2, query.q, tail_prime_bound)
    return gq * gq * gamma.value / query.q * math.pi**2 * query.N


# ---------------------------------------------------------------------------
# square sums:   sum r^2(n)
# ---------------------------------------------------------------------------


def empirical_sum_r2(query: APQuery, r2arr: np.ndarray | None = None) -> int:
    validate_single(query)
    if query.N == 0:
        return 0
    if r2arr is None:
        r2arr = r2_lattice_range(query.N)
    idx = _class_indices(query, [(0, query.d)], query.N)
    vals = r2arr[idx]
    return int((vals * vals).sum())


def predicted_sum_r2(query: APQuery) -> float:
    """(g3(q) g4(d)/(qd)) (log N + A2 + 2 sum_{p|q} g5(p) - 2 sum_{p|d} g6(p)) N."""
    validate_single(query)
    fq, fd = trial_factorize(query.q), trial_factorize(query.d)
    a2 = a2_constant().value
    bracket = math.log(query.N) + a2 + 2 * g5(fq).value() - 2 * g6(fd).value()
    return float(g3(fq)) * float(g4(fd)) / (query.q * query.d) * bracket * query.N


# ---------------------------------------------------------------------------
# report wrappers
# ---------------------------------------------------------------------------

_RUNNERS = {
    "ap_r": (empirical_sum_r, predicted_sum_r),
    "ap_rr": (empirical_sum_rr, predicted_sum_rr),
    "ap_r2": (empirical_sum_r2, predicted_sum_r2),
}


def run_experiment(
    name: str, query: APQuery, r2arr: np.ndarray | None = None
) -> CorrelationReport:
    if name not in _RUNNERS:
        raise ValidationError(f"unknown AP experiment {name!r}")
    emp_fn, pred_fn = _RUNNERS[name]
    t0 = time.perf_counter()
    emp = emp_fn(query, r2arr)
    pred = pred_fn(query)
    ms = (time.perf_counter() - t0) * 1000
    params = {k: getattr(query, k) for k in ("q", "a", "d", "d1", "d2", "h")}
    return CorrelationReport(name, float(emp), pred, query.N, params, ms)
