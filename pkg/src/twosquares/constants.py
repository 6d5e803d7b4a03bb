"""Fixed mathematical constants used by the predicted main terms.

The slowly-convergent objects (Euler products over primes in a residue
class) are truncated at an explicit prime bound and always report the
truncation point and a tail bound.  The absolutely-convergent series
(gamma, zeta'(2), L'(1,chi4)) are evaluated once to >= 10 digits by
Euler-Maclaurin / iterated-averaging acceleration and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import primes_up_to
from .errors import ValidationError

# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantEstimate:
    """A numeric constant together with provenance of its truncation error.

    bound_kind records whether truncation_bound is a proven inequality
    ("rigorous") or an asymptotic estimate ("heuristic").
    """

    value: float
    truncation_bound: float
    parameters: str
    bound_kind: str = "rigorous"

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# Landau-Ramanujan constant  A = 2^(-1/2) prod_{p=3 mod 4} (1 - p^-2)^(-1/2)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def landau_ramanujan_A(prime_bound: int = 10**6) -> ConstantEstimate:
    """Truncated Euler product for A.

    Tail: 0 <= log(A) - log(A_trunc) = -1/2 sum_{p>P} log(1-p^-2) <= 1/P,
    so the returned bound value*(e^(1/P)-1) is rigorous.
    """
    if prime_bound < 3:
        raise ValidationError("landau_ramanujan_A: prime_bound must be >= 3")
    ps = primes_up_to(prime_bound)
    ps = ps[ps % 4 == 3].astype(np.float64)
    log_val = -0.5 * math.log(2.0) - 0.5 * float(np.sum(np.log1p(-1.0 / ps**2)))
    value = math.exp(log_val)
    bound = value * math.expm1(1.0 / prime_bound)
    return ConstantEstimate(value, bound, f"Euler product over p <= {prime_bound}")


# ---------------------------------------------------------------------------
# absolutely convergent constants
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def euler_gamma() -> ConstantEstimate:
    """Euler-Mascheroni constant by Euler-Maclaurin at n = 10^4.

    gamma = H_n - log n - 1/(2n) + 1/(12 n^2) - 1/(120 n^4) + 1/(252 n^6) - ...
    The first omitted term (1/(240 n^8)) bounds the truncation error.
    """
    n = 10**4
    h = math.fsum(1.0 / k for k in range(1, n + 1))
    val = h - math.log(n) - 1 / (2 * n) + 1 / (12 * n**2) - 1 / (120 * n**4) + 1 / (252 * n**6)
    return ConstantEstimate(val, 1 / (240 * n**8), f"Euler-Maclaurin, n={n}, 3 correction terms")


def _zeta_prime_2() -> tuple[float, float]:
    """zeta'(2) = -sum log(n)/n^2, tail by Euler-Maclaurin at N = 10^5."""
    N = 10**5
    ns = np.arange(2, N, dtype=np.float64)
    head = float(np.sum(np.log(ns) / ns**2))
    lnN = math.log(N)
    # integral + f/2 - f'/12 + f'''/720 for f = log(x)/x^2
    tail = (lnN + 1) / N + lnN / (2 * N**2) - (1 - 2 * lnN) / (12 * N**3)
    err = abs(26 - 24 * lnN) / (720 * N**5)
    return -(head + tail), err


@lru_cache(maxsize=1)
def zeta_prime_over_zeta_at_2() -> ConstantEstimate:
    v, err = _zeta_prime_2()
    z2 = math.pi**2 / 6
    return ConstantEstimate(v / z2, err / z2, "zeta'(2) via Euler-Maclaurin at N=10^5, zeta(2)=pi^2/6")


def _averaged_alternating(a, n0: int = 40, rounds: int = 45) -> tuple[float, float]:
    """sum_{k>=0} (-1)^k a(k) by iterated averaging of partial sums.

    Standard Euler acceleration: take partial sums S_{n0}, S_{n0+1}, ...
    and repeatedly average neighbours; for smooth eventually-monotone a
    the error decays like 2^(-rounds).  The error estimate is the spread
    between the full-depth value and a shallower (rounds-8) run.
    """

    def reduce(depth: int) -> float:
        terms = [((-1) ** k) * a(k) for k in range(n0 + depth + 1)]
        s = list(np.cumsum(terms)[n0:])
        while len(s) > 1:
            s = [(x + y) / 2 for x, y in zip(s, s[1:])]
        return float(s[0])

    full = reduce(rounds)
    check = reduce(rounds - 8)
    return full, abs(full - check) + 1e-15


@lru_cache(maxsize=1)
def dirichlet_beta_prime_1() -> ConstantEstimate:
    """L'(1, chi4) = sum_{k>=0} (-1)^(k+1) log(2k+1)/(2k+1), accelerated."""
    val, err = _averaged_alternating(lambda k: -math.log(2 * k + 1) / (2 * k + 1))
    return ConstantEstimate(val, err, "alternating series, iterated averaging (offset 40, 45 rounds)")


@lru_cache(maxsize=1)
def L1_chi4() -> ConstantEstimate:
    return ConstantEstimate(math.pi / 4, 0.0, "exact: pi/4")


@lru_cache(maxsize=1)
def L_prime_ratio_at_1() -> ConstantEstimate:
    b = dirichlet_beta_prime_1()
    l1 = math.pi / 4
    return ConstantEstimate(b.value / l1, b.truncation_bound / l1, "L'(1,chi4)/L(1,chi4)")


def a2_constant() -> ConstantEstimate:
    """A2 = 2 gamma - 1 + 2 L'/L(1,chi4) - 2 zeta'/zeta(2) + (4/3) log 2."""
    g = euler_gamma()
    lr = L_prime_ratio_at_1()
    zr = zeta_prime_over_zeta_at_2()
    val = 2 * g.value - 1 + 2 * lr.value - 2 * zr.value + (4.0 / 3.0) * math.log(2.0)
    err = 2 * g.truncation_bound + 2 * lr.truncation_bound + 2 * zr.truncation_bound
    return ConstantEstimate(val, err, "assembled from gamma, L'/L, zeta'/zeta(2)")


def special_constants() -> dict[str, ConstantEstimate]:
    """The cached constant set feeding the r^2 progression and sieve main terms."""
    return {
        "L1_chi4": L1_chi4(),
        "gamma_euler": euler_gamma(),
        "zeta_prime_ratio_at_2": zeta_prime_over_zeta_at_2(),
        "L_prime_ratio_at_1": L_prime_ratio_at_1(),
        "A2": a2_constant(),
    }
