"""Sphere-shell eigenfunction families on flat tori and their Fourier data.

A family is a finite set of frequency vectors xi on the shell |xi|^2 = M
with squared amplitudes kept as exact fractions; the normalisation
sum |a_xi|^2 = 1 is checked exactly at build time.  b_tau(k) sums
a_xi a_eta over difference pairs xi - eta = tau; when every contributing
pair shares a j-class the value is an exact rational (like square roots
multiply out), otherwise it falls back to floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import rd_bruteforce
from .errors import InternalError, ResourceGuardError, ValidationError
from .bins import two_square_decomposition

# ---------------------------------------------------------------------------
# shells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereShell:
    n: int
    d: int
    points: tuple[tuple[int, ...], ...]


from functools import lru_cache


@lru_cache(maxsize=4096)
def _shell_points(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    out: list[tuple[int, ...]] = []
    point = [0] * d

    def rec(j: int, rem: int) -> None:
        if j == d - 1:
            r = math.isqrt(rem)
            if r * r == rem:
                for x in {-r, r}:
                    point[j] = x
                    out.append(tuple(point))
            return
        r = math.isqrt(rem)
        for x in range(-r, r + 1):
            point[j] = x
            rec(j + 1, rem - x * x)

    rec(0, n)
    return tuple(sorted(out))


def enumerate_shell(n: int, d: int, *, max_dim: int = 6, max_n: int = 10**6) -> SphereShell:
    """All xi in Z^d with |xi|^2 = n, lexicographically sorted (cached)."""
    if n < 0 or d < 1:
        raise ValidationError("enumerate_shell: need n >= 0, d >= 1")
    if d > max_dim or n > max_n:
        raise ResourceGuardError(
            f"enumerate_shell guard: d={d} (max {max_dim}), n={n} (max {max_n})",
            cost_estimate=f"~n^(d/2) = {float(max(n, 1)) ** (d / 2):.2e} points",
        )
    return SphereShell(n, d, _shell_points(n, d))


def decompose_Mk(M: int, a_list: Sequence[int]) -> list[tuple[int, int]]:
    """Per j the lexicographically least (b, c), b >= c >= 0, with
    M - a_j^2 = b^2 + c^2; raises naming the failing j if none exists."""
    out = []
    for j, a in enumerate(a_list, start=1):
        rem = M - a * a
        if rem < 0:
            raise ValidationError(f"decompose_Mk: M - a_{j}^2 = {rem} < 0")
        bc = two_square_decomposition(rem)
        if bc is None:
            raise ValidationError(
                f"decompose_Mk: M - a_{j}^2 = {rem} is not a sum of two squares"
            )
        out.append(bc)
    return out


# ---------------------------------------------------------------------------
# coefficient families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FamilyInputs:
    """Data for one family: truncation level k, shell radius-squared M,
    the distinct a_j (at least k of them), the ambient dimension, and
    optionally precomputed decompositions M - a_j^2 = b_j^2 + c_j^2."""

    k: int
    M: int
    a: tuple[int, ...]
    d: int = 3
    bc: tuple[tuple[int, int], ...] | None = None


@dataclass(frozen=True)
class CoefficientFamily:
    rule: str
    k: int
    d: int
    M: int
    support: dict[tuple[int, ...], tuple[int, Fraction]]  # xi -> (j, amp^2)

    def amplitude_sq_total(self) -> Fraction:
        return sum((a2 for _, a2 in self.support.values()), Fraction(0))


@dataclass(frozen=True)
class FourierCoefficient:
    tau: tuple[int, ...]
    value: float
    exact: Fraction | None  # set when every contributing pair shares a j


_RULES = ("main", "ql_i", "ql_ii")


def build_family(rule: str, inputs: FamilyInputs) -> CoefficientFamily:
    """Assemble the coefficient family for one of the three rules.

    main  (d=3):  a_xi = sqrt(2^k/(2^k-1)) 2^(-(j+1)/2)      on (+-a_j, b_j, c_j)
    ql_i  (d=4):  a_xi = sqrt(2^k/(2^k-1)) (2^j r_2(a_j^2))^(-1/2)
                  on (X, Y, b_j, c_j), X^2+Y^2 = a_j^2
    ql_ii (d>=5): a_xi = sqrt(2^k/(2^k-1)) (2^j r_{d-2}(a_j^2))^(-1/2)
                  on (X_1..X_{d-2}, b_j, c_j), sum X^2 = a_j^2

    The prefactor 2^k/(2^k-1) makes sum |a_xi|^2 a geometric series summing
    to exactly 1; that is verified, not assumed.
    """
    if rule not in _RULES:
        raise ValidationError(f"build_family: unknown rule {rule!r}")
    k, M = inputs.k, inputs.M
    if k < 1:
        raise ValidationError("build_family: k >= 1")
    a = inputs.a[:k]
    if len(a) < k or len(set(a)) != len(a) or any(x <= 0 for x in a):
        raise ValidationError("build_family: need k distinct positive a_j")
    d = {"main": 3, "ql_i": 4}.get(rule, inputs.d)
    if rule == "ql_ii" and d < 5:
        raise ValidationError("build_family: ql_ii needs d >= 5")
    bc = list(inputs.bc[:k]) if inputs.bc else decompose_Mk(M, a)
    for j, (aj, (b, c)) in enumerate(zip(a, bc), start=1):
        if aj * aj + b * b + c * c != M:
            raise ValidationError(f"build_family: decomposition for j={j} misses M")

    pref = Fraction(2**k, 2**k - 1)
    support: dict[tuple[int, ...], tuple[int, Fraction]] = {}

    def put(xi: tuple[int, ...], j: int, amp2: Fraction) -> None:
        if xi in support:
            raise InternalError(f"build_family: support collision at {xi}")
        support[xi] = (j, amp2)

    for j, (aj, (b, c)) in enumerate(zip(a, bc), start=1):
        if rule == "main":
            amp2 = pref / 2 ** (j + 1)
            put((aj, b, c), j, amp2)
            put((-aj, b, c), j, amp2)
        else:
            dim = 2 if rule == "ql_i" else d - 2
            shell = enumerate_shell(aj * aj, dim)
            r = len(shell.points)
            if r == 0:
                raise ValidationError(f"build_family: r_{dim}(a_{j}^2) = 0")
            amp2 = pref / (2**j * r)
            for head in shell.points:
                put(head + (b, c), j, amp2)

    fam = CoefficientFamily(rule, k, d, M, support)
    total = fam.amplitude_sq_total()
    if total != 1:
        raise InternalError(f"build_family: normalisation sum is {total}, not 1")
    for xi in support:
        if sum(x * x for x in xi) != M:
            raise InternalError(f"build_family: {xi} off the shell")
    return fam


def embed(family: CoefficientFamily, extra_dims: int) -> CoefficientFamily:
    """Zero-pad every frequency vector into d + extra_dims dimensions."""
    if extra_dims < 0:
        raise ValidationError("embed: extra_dims >= 0")
    pad = (0,) * extra_dims
    support = {xi + pad: val for xi, val in family.support.items()}
    return CoefficientFamily(family.rule, family.k, family.d + extra_dims, family.M, support)


# ---------------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------------


def b_tau(family: CoefficientFamily, tau: Sequence[int]) -> FourierCoefficient:
    """b_tau = sum over support pairs xi - eta = tau of a_xi a_eta.

    Same-j pairs contribute the exact rational amp^2; cross-j pairs force a
    float square root and drop the exact path.
    """
    tau = tuple(tau)
    if len(tau) != family.d:
        raise ValidationError("b_tau: tau arity != family dimension")
    rat = Fraction(0)
    flo = 0.0
    rational_ok = True
    for xi, (j, a2) in family.support.items():
        eta = tuple(x - t for x, t in zip(xi, tau))
        got = family.support.get(eta)
        if got is None:
            continue
        j2, b2 = got
        if j == j2:
            rat += a2  # a_xi = a_eta within a class: product is exactly amp^2
        else:
            rational_ok = False
            flo += math.sqrt(float(a2) * float(b2))
    value = float(rat) + flo
    return FourierCoefficient(tau, value, rat if rational_ok else None)


def all_btau(family: CoefficientFamily) -> dict[tuple[int, ...], FourierCoefficient]:
    """Every non-zero b_tau, keyed by tau, via one pass over support pairs."""
    pts = list(family.support)
    if len(pts) ** 2 > 4e7:
        raise ResourceGuardError(
            "all_btau: support too large",
            cost_estimate=f"{len(pts) ** 2:.1e} pairs",
        )
    acc: dict[tuple[int, ...], tuple[Fraction, float, bool]] = {}
    for xi, (j, a2) in family.support.items():
        for eta, (j2, b2) in family.support.items():
            tau = tuple(x - y for x, y in zip(xi, eta))
            rat, flo, ok = acc.get(tau, (Fraction(0), 0.0, True))
            if j == j2:
                acc[tau] = (rat + a2, flo, ok)
            else:
                acc[tau] = (rat, flo + math.sqrt(float(a2) * float(b2)), False)
    return {
        tau: FourierCoefficient(tau, float(rat) + flo, rat if ok else None)
        for tau, (rat, flo, ok) in acc.items()
    }


@dataclass(frozen=True)
class LimitEstimate:
    tau: tuple[int, ...]
    value: float
    exact: Fraction | None
    convergence_diagnostic: float  # |b_tau(k_max) - b_tau(k_max - 1)|


def constant_M_inputs(
    M: int, a: Sequence[int], k_max: int, d: int = 3
) -> list[FamilyInputs]:
    """Per-k inputs reusing one shell level M for every k <= k_max."""
    return [FamilyInputs(k, M, tuple(a), d) for k in range(1, k_max + 1)]


def ctau_limit(
    rule: str, inputs_by_k: Sequence[FamilyInputs], tau: Sequence[int], k_max: int
) -> LimitEstimate:
    """b_tau(k_max) as the limit estimate, with |b(k_max) - b(k_max-1)| as
    the convergence diagnostic (the prefactor contracts geometrically)."""
    if k_max < 2:
        raise ValidationError("ctau_limit: k_max >= 2 so a difference exists")
    if len(inputs_by_k) < k_max:
        raise ValidationError("ctau_limit: need inputs for every k <= k_max")
    fam_prev = build_family(rule, inputs_by_k[k_max - 2])
    fam_last = build_family(rule, inputs_by_k[k_max - 1])
    b_prev = b_tau(fam_prev, tau)
    b_last = b_tau(fam_last, tau)
    return LimitEstimate(
        tuple(tau), b_last.value, b_last.exact, abs(b_last.value - b_prev.value)
    )


# ---------------------------------------------------------------------------
# partial sums of Fourier mass
# ---------------------------------------------------------------------------


def lp_partial_sum(family: CoefficientFamily, epsilon: float, radius: float) -> float:
    """sum of |b_tau|^(2 - epsilon) over |tau| <= radius, tau = 0 included."""
    if not 0 <= epsilon < 2:
        raise ValidationError("lp_partial_sum: epsilon in [0, 2)")
    total = 0.0
    for tau, coef in all_btau(family).items():
        if math.sqrt(sum(t * t for t in tau)) <= radius + 1e-12:
            total += abs(coef.value) ** (2 - epsilon)
    return total


def sigma_rho(family: CoefficientFamily, radius: float) -> float:
    """sum of |b_tau| over |tau| strictly below the radius."""
    total = 0.0
    for tau, coef in all_btau(family).items():
        if math.sqrt(sum(t * t for t in tau)) < radius - 1e-12:
            total += abs(coef.value)
    return total


def mass_lower_bound(family: CoefficientFamily, i: int, epsilon: float) -> dict[str, float]:
    """For the ql_i rule: the counting bound at radius 2 a_i,

      sum_{|tau| <= 2 a_i} |b_tau|^(2-eps) >= (2^k/(2^k-1))^(2-eps)
                                              (2^i r_2(a_i^2))^eps / 4^i,

    and for ql_ii the first-power analogue with r_{d-2}; returns both sides.

    The counting argument distributes r^2 class-i pairs over tau values;
    pairs sharing a tau (the diagonal pairs all land on tau = 0) only help
    when the exponent 2 - epsilon is >= 1, so the bound is guaranteed for
    epsilon <= 1 and the report may honestly come back holds=False above
    that.
    """
    if family.rule not in ("ql_i", "ql_ii"):
        raise ValidationError("mass_lower_bound: ql_i / ql_ii families only")
    a_i = None
    count = 0
    for xi, (j, _) in family.support.items():
        if j == i:
            count += 1
            a_i = math.isqrt(sum(x * x for x in xi[: family.d - 2]))
    if a_i is None:
        raise ValidationError(f"mass_lower_bound: class {i} not in family")
    pref = 2**family.k / (2**family.k - 1)
    if family.rule == "ql_i":
        lhs = lp_partial_sum(family, epsilon, 2 * a_i)
        rhs = pref ** (2 - epsilon) * (2**i * count) ** epsilon / 4**i
    else:
        lhs = lp_partial_sum(family, 1.0, 2 * a_i)  # exponent 1: plain |b_tau| sum
        rhs = pref * count / 2**i
    return {"lhs": lhs, "rhs": rhs, "holds": lhs >= rhs * (1 - 1e-12), "a_i": a_i}


def representation_growth_report(a_list: Sequence[int]) -> dict:
    """Empirical checks on a candidate a_j sequence: r_2 strictly increasing,
    bounded even part, and r_2(a^2) >= r_2(a) (flagged, not assumed)."""
    # d = 2 enumeration costs only ~sqrt(n) steps, so a larger cap is safe
    r_vals = [rd_bruteforce(a, 2, max_n=10**12) for a in a_list]
    r_sq_vals = [rd_bruteforce(a * a, 2, max_n=10**12) for a in a_list]
    even_parts = []
    for a in a_list:
        b = 0
        while a % 2 == 0:
            a //= 2
            b += 1
        even_parts.append(b)
    return {
        "r2": r_vals,
        "r2_strictly_increasing": all(x < y for x, y in zip(r_vals, r_vals[1:])),
        "even_part_exponents": even_parts,
        "r2_square_vs_r2": list(zip(r_sq_vals, r_vals)),
        "r2_square_ge_r2_violations": [
            a for a, rs, r in zip(a_list, r_sq_vals, r_vals) if rs < r
        ],
    }
