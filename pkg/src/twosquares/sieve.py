"""The modified Maynard-Tao sieve at half dimension: parameters, admissible
tuples, weight tables, the direct sums S1..S4, their predicted main terms,
and the functional calculus for the product test functions.

Weights live over tuples (d_1..d_k) of squarefree integers coprime to W
whose prime factors are all 3 mod 4 and whose product is at most R.  The
lambda <-> y transform pair is kept in exact rational arithmetic so the
inversion roundtrip is an identity, not an approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

import numpy as np

from .arith import (
    FactorTable,
    count_in_class,
    crt,
    primes_up_to,
    trial_factorize,
)
from .constants import ConstantEstimate, landau_ramanujan_A
from .errors import ResourceGuardError, ValidationError
from .hooley import RhoParams, rho
from .report import CorrelationReport

# ---------------------------------------------------------------------------
# parameters and admissible tuples
# ---------------------------------------------------------------------------


def _w_split(D0: int) -> tuple[int, int, int]:
    w = w1 = w3 = 1
    for p in map(int, primes_up_to(D0)):
        if p == 2:
            continue
        w *= p
        if p % 4 == 1:
            w1 *= p
        else:
            w3 *= p
    return w, w1, w3


@dataclass(frozen=True)
class SieveParams:
    """N, theta1, theta2, D0 and the derived v, R, W = W1*W3.

    strict=True enforces 0 < theta1 + theta2 < 1/18 (the regime of the
    asymptotic statements).  Desk-scale runs need far larger exponents to
    make v and R non-trivial, so strict=False only requires structural
    sanity and records the violation in `warnings`.
    """

    N: int
    theta1: float
    theta2: float
    D0: int = 1
    strict: bool = True
    v: int = field(init=False)
    R: int = field(init=False)
    W: int = field(init=False)
    W1: int = field(init=False)
    W3: int = field(init=False)
    warnings: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.N < 4:
            raise ValidationError(f"SieveParams: N={self.N} too small")
        if not (0 < self.theta1 < 1 and 0 < self.theta2 < 2):
            raise ValidationError(
                "SieveParams: need 0 < theta1 < 1 and 0 < theta2 < 2"
            )
        warnings: list[str] = []
        if self.theta1 + self.theta2 >= 1 / 18:
            msg = (
                f"theta1+theta2={self.theta1 + self.theta2:.4f} outside the "
                "asymptotic regime (0, 1/18)"
            )
            if self.strict:
                raise ValidationError(f"SieveParams: {msg}")
            warnings.append(msg)
        v = int(self.N**self.theta1)
        r = int(self.N ** (self.theta2 / 2))
        if v < 2:
            raise ValidationError(f"SieveParams: derived v={v} < 2")
        if r < 1:
            raise ValidationError(f"SieveParams: derived R={r} < 1")
        w, w1, w3 = _w_split(self.D0)
        for name, val in (("v", v), ("R", r), ("W", w)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "W1", w1)
        object.__setattr__(self, "W3", w3)
        object.__setattr__(self, "warnings", tuple(warnings))

    def rho_params(self) -> RhoParams:
        return RhoParams(self.N, self.theta1, strict=self.strict)


@dataclass(frozen=True)
class AdmissibilityCertificate:
    """Per-prime residue evidence: for each checked p, a residue class the
    tuple misses, or the prime whose classes it covers."""

    admissible: bool
    uncovered: dict[int, int]
    covering_prime: int | None = None


def check_admissible(h: Sequence[int]) -> AdmissibilityCertificate:
    """Scan primes p <= k: the tuple is admissible iff its residues never
    cover all of Z/p (automatic for p > k since only k residues exist)."""
    hs = sorted(set(h))
    if len(hs) != len(h):
        raise ValidationError("check_admissible: elements must be distinct")
    k = len(hs)
    uncovered: dict[int, int] = {}
    for p in map(int, primes_up_to(max(k, 2))):
        if p > k:
            break
        residues = {x % p for x in hs}
        if len(residues) == p:
            return AdmissibilityCertificate(False, uncovered, covering_prime=p)
        uncovered[p] = min(set(range(p)) - residues)
    return AdmissibilityCertificate(True, uncovered)


@dataclass(frozen=True)
class AdmissibleTuple:
    """Sorted distinct shifts, each divisible by 4, with residues mod every
    prime p <= k missing at least one class."""

    h: tuple[int, ...]
    certificate: AdmissibilityCertificate = field(init=False, compare=False)

    def __post_init__(self):
        hs = tuple(sorted(self.h))
        if any(x % 4 != 0 for x in hs):
            raise ValidationError("AdmissibleTuple: every element must be divisible by 4")
        cert = check_admissible(hs)
        if not cert.admissible:
            raise ValidationError(
                f"AdmissibleTuple: residues cover Z/{cert.covering_prime}"
            )
        object.__setattr__(self, "h", hs)
        object.__setattr__(self, "certificate", cert)

    @property
    def k(self) -> int:
        return len(self.h)


def find_v0(params: SieveParams, tup: AdmissibleTuple) -> int:
    """Least v0 >= 0 with (v0 + h_i, W) = 1 for every shift; exists by
    admissibility (D0 large enough) plus CRT."""
    W = params.W
    if W == 1:
        return 0
    for v0 in range(W):
        if all(math.gcd(v0 + h, W) == 1 for h in tup.h):
            return v0
    raise ValidationError(
        f"find_v0: no residue mod W={W} works; tuple not admissible for this D0"
    )


# ---------------------------------------------------------------------------
# test functions F = prod g(k_i t_j),  g(t) = 1/(1 + t/beta) on [0, beta]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunctionSpec:
    """Product-form test function on bins: bin i has k_i coordinates, each
    carrying g(k_i t) with g(t) = 1/(1+t/beta_i) truncated at t = beta_i,
    so each coordinate is supported on [0, beta_i/k_i]."""

    bins: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.bins:
            raise ValidationError("TestFunctionSpec: needs at least one bin")
        for ki, bi in self.bins:
            if ki < 1 or bi <= 0:
                raise ValidationError(f"TestFunctionSpec: bad bin ({ki}, {bi})")
        if sum(b for _, b in self.bins) > 1 + 1e-12:
            raise ValidationError("TestFunctionSpec: sum of betas exceeds 1")

    @property
    def k(self) -> int:
        return sum(ki for ki, _ in self.bins)

    def coordinate_bins(self) -> list[int]:
        out = []
        for i, (ki, _) in enumerate(self.bins):
            out += [i] * ki
        return out

    def caps(self) -> list[float]:
        """Per-coordinate support cap beta_i / k_i."""
        return [b / ki for i, (ki, b) in enumerate(self.bins) for _ in range(ki)]

    def evaluate(self, t: Sequence[float]) -> float:
        if len(t) != self.k:
            raise ValidationError("TestFunctionSpec.evaluate: wrong arity")
        out = 1.0
        j = 0
        for ki, bi in self.bins:
            for _ in range(ki):
                u = ki * t[j]
                if u > bi or t[j] < 0:
                    return 0.0
                out /= 1.0 + u / bi
                j += 1
        return out

    def evaluate_grid(self, coords: list[np.ndarray]) -> np.ndarray:
        """F on a tensor grid given per-coordinate sample arrays (broadcast)."""
        k = self.k
        out = None
        j = 0
        for ki, bi in self.bins:
            for _ in range(ki):
                t = coords[j]
                u = ki * t
                fac = np.where((u <= bi) & (t >= 0), 1.0 / (1.0 + u / bi), 0.0)
                shape = [1] * k
                shape[j] = -1
                fac = fac.reshape(shape)
                out = fac if out is None else out * fac
                j += 1
        return out


def single_bin_spec(k: int, beta: float = 1.0) -> TestFunctionSpec:
    return TestFunctionSpec(((k, beta),))


def geometric_bin_spec(sizes: Sequence[int]) -> TestFunctionSpec:
    """Bins of the given sizes with beta_i = 2^-i (i = 1, 2, ...)."""
    return TestFunctionSpec(tuple((ki, 2.0 ** -(i + 1)) for i, ki in enumerate(sizes)))


# ---------------------------------------------------------------------------
# support enumeration and weight tables
# ---------------------------------------------------------------------------


def enumerate_support(R: int, W: int = 1) -> list[int]:
    """Ascending squarefree n <= R, coprime to W, all prime factors 3 mod 4;
    1 is always included."""
    if R < 1:
        raise ValidationError(f"enumerate_support: R={R} < 1")
    ps = [int(p) for p in primes_up_to(R) if p % 4 == 3 and W % int(p) != 0]
    out = [1]

    def rec(start: int, prod: int) -> None:
        for j in range(start, len(ps)):
            nxt = prod * ps[j]
            if nxt > R:
                break
            out.append(nxt)
            rec(j + 1, nxt)

    rec(0, 1)
    return sorted(out)


@dataclass
class WeightTable:
    """lambda over divisor tuples and its diagonalising y-vector, both exact.

    entries[d] is nonzero only for d on the support (product <= R,
    squarefree, coprime to W, primes 3 mod 4); y_entries[r] holds the
    F-evaluation at (log r_i / log R) as an exact Fraction of the float.
    """

    k: int
    R: int
    W: int
    spec: TestFunctionSpec
    entries: dict[tuple[int, ...], Fraction]
    y_entries: dict[tuple[int, ...], Fraction]

    def float_entries(self) -> dict[tuple[int, ...], float]:
        return {d: float(v) for d, v in self.entries.items()}

    def common_denominator(self) -> int:
        den = 1
        for v in self.entries.values():
            den = den * v.denominator // math.gcd(den, v.denominator)
        return den

    def slot_values(self) -> list[list[int]]:
        cols = [set() for _ in range(self.k)]
        for d in self.entries:
            for i, di in enumerate(d):
                cols[i].add(di)
        return [sorted(c) for c in cols]

    def export_rows(self) -> list[str]:
        """Text rows "d1,...,dk,num,den" for external inspection."""
        rows = []
        for d in sorted(self.entries):
            v = self.entries[d]
            rows.append(",".join(map(str, d)) + f",{v.numerator},{v.denominator}")
        return rows


def _phi_squarefree(n: int) -> int:
    out = 1
    for p, _ in trial_factorize(n).pairs:
        out *= p - 1
    return out


def _mu_squarefree(n: int) -> int:
    return -1 if len(trial_factorize(n).pairs) % 2 else 1


def _squarefree_divisor_tuples(r: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    divs = []
    for ri in r:
        ds = [1]
        for p, _ in trial_factorize(ri).pairs:
            ds += [d * p for d in ds]
        divs.append(sorted(ds))
    return iproduct(*divs)


def _support_tuples(
    support: list[int], k: int, R: int, caps_vals: list[int]
) -> Iterable[tuple[int, ...]]:
    """Tuples (r_1..r_k) from the support, pairwise coprime, product <= R,
    r_j <= caps_vals[j]."""

    tup: list[int] = [1] * k

    def rec(j: int, prod: int):
        if j == k:
            yield tuple(tup)
            return
        # support is ascending with 1 first; 1 always fits (caps >= 1)
        for val in support:
            if val > caps_vals[j] or prod * val > R:
                break
            if val > 1 and any(math.gcd(val, tup[i]) > 1 for i in range(j)):
                continue
            tup[j] = val
            yield from rec(j + 1, prod * val)
            tup[j] = 1

    yield from rec(0, 1)


def lambda_from_F(params: SieveParams, spec: TestFunctionSpec) -> WeightTable:
    """Weights lambda_d = (prod mu(d_i) d_i) * sum over r-tuples divisible by
    d of F(log r / log R) / prod phi(r_i), on the squarefree 3-mod-4 support.

    F evaluations are materialised as exact fractions of their float
    values, so everything downstream is exact rational arithmetic.
    """
    k = spec.k
    if k != spec.k or k < 1:
        raise ValidationError("lambda_from_F: bad spec")
    support = enumerate_support(params.R, params.W)
    logR = math.log(params.R) if params.R > 1 else 1.0
    caps = spec.caps()
    caps_vals = [
        min(params.R, int(math.floor(params.R**c * (1 + 1e-12)))) for c in caps
    ]
    est = 1.0
    for cv in caps_vals:
        est *= max(1, sum(1 for s in support if s <= cv))
    if est > 5e6:
        raise ResourceGuardError(
            f"lambda_from_F: ~{est:.2e} r-tuples exceed the 5e6 guard",
            cost_estimate=f"k={k}, |support|={len(support)}",
        )

    phi = {s: _phi_squarefree(s) for s in support}
    y_entries: dict[tuple[int, ...], Fraction] = {}
    lam_tilde: dict[tuple[int, ...], Fraction] = {}
    for r in _support_tuples(support, k, params.R, caps_vals):
        t = [math.log(ri) / logR if ri > 1 else 0.0 for ri in r]
        fval = spec.evaluate(t)
        if fval == 0.0:
            continue
        y = Fraction(fval)
        y_entries[r] = y
        c = y
        for ri in r:
            c /= phi[ri]
        for d in _squarefree_divisor_tuples(r):
            lam_tilde[d] = lam_tilde.get(d, Fraction(0)) + c

    entries: dict[tuple[int, ...], Fraction] = {}
    for d, val in lam_tilde.items():
        pref = Fraction(1)
        for di in d:
            pref *= _mu_squarefree(di) * di
        lam = pref * val
        if lam != 0:
            entries[d] = lam
    return WeightTable(k, params.R, params.W, spec, entries, y_entries)


def y_from_lambda(table: WeightTable) -> dict[tuple[int, ...], Fraction]:
    """Recover y_r = (prod mu(r_i) phi(r_i)) sum_{d: r_i | d_i} lambda_d / prod d_i."""
    acc: dict[tuple[int, ...], Fraction] = {}
    for d, lam in table.entries.items():
        prod_d = 1
        for di in d:
            prod_d *= di
        contrib = lam / prod_d
        for r in _squarefree_divisor_tuples(d):
            acc[r] = acc.get(r, Fraction(0)) + contrib
    out: dict[tuple[int, ...], Fraction] = {}
    for r, val in acc.items():
        pref = Fraction(1)
        for ri in r:
            pref *= _mu_squarefree(ri) * _phi_squarefree(ri)
        val = pref * val
        if val != 0:
            out[r] = val
    return out


# ---------------------------------------------------------------------------
# functionals: closed forms (the base integrals below) and quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    method: str  # closed_form | quadrature
    tolerance: float


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-9,
    max_panels: int = 10**6,
) -> tuple[float, float]:
    """Adaptive Simpson; returns (value, achieved tolerance estimate)."""

    panels = 0

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def rec(x0, x2, f0, f1, f2, whole, eps):
        nonlocal panels
        panels += 1
        if panels > max_panels:
            raise ResourceGuardError(
                f"adaptive_simpson: exceeded {max_panels} panels",
                cost_estimate=f"achieved tolerance ~{eps:.1e}",
            )
        xm = 0.5 * (x0 + x2)
        xl, xr = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        fl, fr = f(xl), f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        if abs(left + right - whole) <= 15 * eps:
            return left + right + (left + right - whole) / 15.0
        return rec(x0, xm, f0, fl, f1, left, eps / 2) + rec(
            xm, x2, f1, fr, f2, right, eps / 2
        )

    if b <= a:
        return 0.0, 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return rec(a, b, fa, fm, fb, whole, tol), tol


def base_integral_sq(beta: float, k: int, method: str = "closed_form") -> FunctionalValue:
    """I2 = int_0^(beta/k) dt / (sqrt(t) (1 + kt/beta)^2) = (pi+2)/4 sqrt(beta/k)."""
    if method == "closed_form":
        return FunctionalValue((math.pi + 2) / 4 * math.sqrt(beta / k), method, 0.0)
    c = math.sqrt(beta / k)
    val, tol = adaptive_simpson(lambda u: 2.0 / (1.0 + k * u * u / beta) ** 2, 0.0, c)
    return FunctionalValue(val, "quadrature", tol)


def base_integral_lin(beta: float, k: int, method: str = "closed_form") -> FunctionalValue:
    """I1 = int_0^(beta/k) dt / (sqrt(t) (1 + kt/beta)) = (pi/2) sqrt(beta/k)."""
    if method == "closed_form":
        return FunctionalValue(math.pi / 2 * math.sqrt(beta / k), method, 0.0)
    c = math.sqrt(beta / k)
    val, tol = adaptive_simpson(lambda u: 2.0 / (1.0 + k * u * u / beta), 0.0, c)
    return FunctionalValue(val, "quadrature", tol)


def functional_value(
    spec: TestFunctionSpec,
    kind: str,
    method: str = "closed_form",
    m: int | None = None,
    l: int | None = None,
) -> FunctionalValue:
    """L (plain), L_m, or L_ml for the product test function.

    The support is a product of intervals, so each functional is a product
    of 1-D integrals: squared-g integrals everywhere, with coordinate m
    (and l) replaced by the square of the plain-g integral.  method
    "quadrature" recomputes the 1-D base integrals numerically (after the
    t = u^2 substitution that removes the 1/sqrt singularity) and
    assembles the same products.
    """
    if kind not in ("L", "L_m", "L_ml"):
        raise ValidationError(f"functional_value: unknown kind {kind!r}")
    cb = spec.coordinate_bins()
    if kind == "L_m" and m is None:
        raise ValidationError("functional_value: L_m needs m")
    if kind == "L_ml" and (m is None or l is None or m == l):
        raise ValidationError("functional_value: L_ml needs distinct m, l")
    special = {i for i in (m, l) if i is not None} if kind != "L" else set()
    for i in special:
        if not 0 <= i < spec.k:
            raise ValidationError(f"functional_value: coordinate {i} out of range")
    val = 1.0
    tol = 0.0
    for j in range(spec.k):
        ki, bi = spec.bins[cb[j]]
        if j in special:
            i1 = base_integral_lin(bi, ki, method)
            val *= i1.value**2
            tol += 2 * i1.tolerance
        else:
            i2 = base_integral_sq(bi, ki, method)
            val *= i2.value
            tol += i2.tolerance
    return FunctionalValue(val, method, tol)


def factorized_functionals(
    spec: TestFunctionSpec, j: int, m: int, l: int | None = None
) -> dict[str, float]:
    """The bin-factorised expressions: L_k = prod_i L_{|B_i|}(F_i) and the
    L_m / L_ml forms as (prod of per-bin L) times the in-bin ratio for bin j
    (ratios pi^2/(pi+2) sqrt(beta_j/k_j) and its square)."""
    if not 0 <= j < len(spec.bins):
        raise ValidationError("factorized_functionals: bad bin index")
    per_bin = []
    for ki, bi in spec.bins:
        per_bin.append(base_integral_sq(bi, ki).value ** ki)
    lk = float(np.prod(per_bin))
    kj, bj = spec.bins[j]
    ratio = math.pi**2 / (math.pi + 2) * math.sqrt(bj / kj)
    out = {"L": lk, "L_m": lk * ratio}
    if l is not None:
        cb = spec.coordinate_bins()
        if cb[m] == cb[l]:
            out["L_ml"] = lk * ratio**2
        else:
            kj2, bj2 = spec.bins[cb[l]]
            ratio2 = math.pi**2 / (math.pi + 2) * math.sqrt(bj2 / kj2)
            out["L_ml"] = lk * ratio * ratio2
    return out


def functional_tensor_quadrature(
    spec: TestFunctionSpec,
    kind: str,
    m: int | None = None,
    l: int | None = None,
    nodes: int = 48,
) -> float:
    """Direct multi-dimensional assembly of the functionals by tensor
    Gauss-Legendre after x = u^2 per coordinate, treating F as a black box
    on the grid.  Feasible for k <= 4-ish; used to check the factorised
    closed forms."""
    k = spec.k
    if nodes**k > 4e7:
        raise ResourceGuardError(
            f"functional_tensor_quadrature: {nodes}^{k} grid too large",
            cost_estimate=f"{nodes ** k:.1e} nodes",
        )
    caps = spec.caps()
    xs, ws = np.polynomial.legendre.leggauss(nodes)
    coords, weights = [], []
    for j in range(k):
        c = math.sqrt(caps[j])
        u = 0.5 * c * (xs + 1.0)
        w = 0.5 * c * ws * 2.0  # du weight plus the 2 from dx/sqrt(x) = 2 du
        coords.append(u * u)  # x = u^2
        weights.append(w)
    grid = spec.evaluate_grid(coords)
    special = [i for i in (m, l) if i is not None] if kind != "L" else []
    # integrate the special axes first (inner integrals), then square,
    # then integrate the rest against the squared integrand
    arr = grid
    for ax in sorted(special, reverse=True):
        arr = np.tensordot(arr, weights[ax], axes=([ax], [0]))
    arr = arr**2
    rem = [j for j in range(k) if j not in special]
    for ax_pos in reversed(range(len(rem))):
        arr = np.tensordot(arr, weights[rem[ax_pos]], axes=([ax_pos], [0]))
    return float(arr)


# ---------------------------------------------------------------------------
# normalisation constant and predicted sums
# ---------------------------------------------------------------------------


def b_constant(params: SieveParams, prime_bound: int = 10**6) -> ConstantEstimate:
    """B = (2A/pi) (phi(W3)/W3) sqrt(log R)."""
    A = landau_ramanujan_A(prime_bound)
    phi_ratio = 1.0
    for p, _ in trial_factorize(params.W3).pairs:
        phi_ratio *= 1 - 1 / p
    val = 2 * A.value / math.pi * phi_ratio * math.sqrt(math.log(params.R))
    return ConstantEstimate(
        val, 2 * A.truncation_bound, f"A truncated at {prime_bound}; R={params.R}"
    )


def s_predicted(
    which: str,
    params: SieveParams,
    tup: AdmissibleTuple,
    spec: TestFunctionSpec,
    m: int = 0,
    l: int = 1,
    prime_bound: int = 10**6,
) -> float:
    """Predicted main terms of the four sieve sums.

    S1 = B^k N/(4W) L_k;            S2 = 4 sqrt(logR/logv) B^k N/(pi W) L_m;
    S3 = 64 (logR/logv) B^k N/(pi^2 W) L_ml;
    S4 = 2 sqrt(logR/logv)(logN/logv + 1) B^k N/(pi W) L_m.
    log N is the window anchor.  Functionals are non-zero for this product
    family by construction.
    """
    k = tup.k
    if spec.k != k:
        raise ValidationError("s_predicted: spec arity != tuple size")
    B = b_constant(params, prime_bound).value
    N, W = params.N, params.W
    logR, logv = math.log(params.R), math.log(params.v)
    if which == "S1":
        L = functional_value(spec, "L").value
        return B**k * N / (4 * W) * L
    if which == "S2":
        L = functional_value(spec, "L_m", m=m).value
        return 4 * math.sqrt(logR / logv) * B**k * N / (math.pi * W) * L
    if which == "S3":
        L = functional_value(spec, "L_ml", m=m, l=l).value
        return 64 * (logR / logv) * B**k * N / (math.pi**2 * W) * L
    if which == "S4":
        L = functional_value(spec, "L_m", m=m).value
        return (
            2
            * math.sqrt(logR / logv)
            * (math.log(N) / logv + 1)
            * B**k
            * N
            / (math.pi * W)
            * L
        )
    raise ValidationError(f"s_predicted: unknown sum {which!r}")


# ---------------------------------------------------------------------------
# direct sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SieveSumResult:
    value: float
    exact: Fraction | None
    n_terms: int
    rho_negative_count: int
    rho_negative_examples: tuple[int, ...]


def _window_iter(params: SieveParams, v0: int):
    """n in [N, 2N) with n = v0 (mod W) and n = 1 (mod 4)."""
    sol = crt([v0, 1], [params.W, 4])
    if sol is None:
        raise ValidationError("_window_iter: v0 incompatible with 1 mod 4")
    r, mmod = sol
    start = params.N + (r - params.N) % mmod
    return range(start, 2 * params.N, mmod)


def _divisor_candidates(n_shift: int, values: list[int]) -> list[int]:
    return [v for v in values if n_shift % v == 0]


def s_direct(
    which: str,
    params: SieveParams,
    tup: AdmissibleTuple,
    table: WeightTable,
    factor_table: FactorTable | None = None,
    m: int = 0,
    l: int = 1,
    exact: bool = False,
) -> SieveSumResult:
    """Direct window sums: over n in [N, 2N), n = v0 (W), n = 1 (4), the
    squared inner weight (sum of lambda over divisor tuples of n + h_i)
    times 1 / rho(n+h_m) / rho(n+h_m) rho(n+h_l) / rho^2(n+h_m).

    exact=True (S1 only) accumulates in integers scaled by the common
    lambda denominator, so two independent evaluators can be compared
    bit-for-bit.
    """
    if which not in ("S1", "S2", "S3", "S4"):
        raise ValidationError(f"s_direct: unknown sum {which!r}")
    if which == "S3" and m == l:
        raise ValidationError("s_direct: S3 needs m != l")
    if which != "S1" and exact:
        raise ValidationError("s_direct: exact mode is defined for S1 only")
    k = tup.k
    if table.k != k:
        raise ValidationError("s_direct: table arity != tuple size")
    needs_rho = which != "S1"
    rp = params.rho_params() if needs_rho else None
    hmax = max(tup.h)
    if needs_rho:
        if factor_table is None:
            raise ValidationError(f"s_direct: {which} needs a FactorTable")
        if 2 * params.N + hmax > factor_table.limit:
            raise ResourceGuardError(
                "s_direct: FactorTable too small for the window",
                cost_estimate=f"need limit >= {2 * params.N + hmax}",
            )
    v0 = find_v0(params, tup)
    slot_vals = table.slot_values()

    if exact:
        den = table.common_denominator()
        scaled = {d: int(v * den) for d, v in table.entries.items()}
        total_int = 0
    else:
        lam = table.float_entries()
        total = 0.0

    neg_count = 0
    neg_examples: list[int] = []
    n_terms = 0
    for n in _window_iter(params, v0):
        cands = [_divisor_candidates(n + h, slot_vals[i]) for i, h in enumerate(tup.h)]
        if exact:
            t_int = 0
            for dt in iproduct(*cands):
                t_int += scaled.get(dt, 0)
            total_int += t_int * t_int
            n_terms += 1
            continue
        t = 0.0
        for dt in iproduct(*cands):
            t += lam.get(dt, 0.0)
        if t == 0.0:
            n_terms += 1
            continue
        w = t * t
        if needs_rho:
            rh_m = rho(rp, factor_table.factorize(n + tup.h[m]))
            if rh_m < 0:
                neg_count += 1
                if len(neg_examples) < 10:
                    neg_examples.append(n + tup.h[m])
            if which == "S2":
                w *= rh_m
            elif which == "S4":
                w *= rh_m * rh_m
            else:
                rh_l = rho(rp, factor_table.factorize(n + tup.h[l]))
                if rh_l < 0:
                    neg_count += 1
                    if len(neg_examples) < 10:
                        neg_examples.append(n + tup.h[l])
                w *= rh_m * rh_l
        total += w
        n_terms += 1

    if exact:
        frac = Fraction(total_int, den * den)
        return SieveSumResult(float(frac), frac, n_terms, 0, ())
    return SieveSumResult(total, None, n_terms, neg_count, tuple(neg_examples))


def s1_pair_expansion(
    params: SieveParams, tup: AdmissibleTuple, table: WeightTable
) -> tuple[Fraction, int]:
    """Independent S1 evaluator: expand the square into lambda_d lambda_e
    pairs and count the CRT progression hits for each pair.

    Returns (exact value, scaled-integer numerator) where the numerator is
    over the squared common denominator -- bit-comparable with s_direct's
    exact path.
    """
    v0 = find_v0(params, tup)
    den = table.common_denominator()
    scaled = {d: int(v * den) for d, v in table.entries.items()}
    keys = list(scaled)
    total_int = 0
    N, W = params.N, params.W
    for d in keys:
        for e in keys:
            moduli = [W, 4]
            residues = [v0, 1]
            ok = True
            for i, h in enumerate(tup.h):
                lcm_i = d[i] * e[i] // math.gcd(d[i], e[i])
                moduli.append(lcm_i)
                residues.append(-h % lcm_i if lcm_i > 1 else 0)
            sol = crt(residues, moduli)
            if sol is None:
                continue
            r, mmod = sol
            cnt = count_in_class(N, 2 * N, r, mmod)
            if cnt:
                total_int += scaled[d] * scaled[e] * cnt
    return Fraction(total_int, den * den), total_int


# ---------------------------------------------------------------------------
# technical sum and singular series checks
# ---------------------------------------------------------------------------


def tech_sum_check(
    params: SieveParams,
    f_rule: Callable[[int], Fraction],
    G: Callable[[float], float],
    prime_bound: int = 10**6,
) -> CorrelationReport:
    """Direct sum over the support of mu^2(d) f(d) G(log d / log R) against
    the predicted B * int_0^1 G(x) dx/sqrt(x)."""
    support = enumerate_support(params.R, params.W)
    logR = math.log(params.R) if params.R > 1 else 1.0
    total = 0.0
    for dd in support:
        fv = Fraction(1)
        for p, _ in trial_factorize(dd).pairs:
            fv *= Fraction(f_rule(p))
        total += float(fv) * G(math.log(dd) / logR if dd > 1 else 0.0)
    B = b_constant(params, prime_bound).value
    integral, _ = adaptive_simpson(lambda u: 2.0 * G(u * u), 0.0, 1.0)
    pred = B * integral
    return CorrelationReport(
        "tech_sum",
        total,
        pred,
        params.R,
        {"W": params.W, "R": params.R},
    )


def c_gamma_check(
    params: SieveParams,
    alpha_rule: Callable[[int], float] | None = None,
    prime_bound: int = 10**6,
) -> dict:
    """Singular product c_gamma for gamma(p) = 1 + alpha(p) on p coprime to
    W with p = 3 mod 4 (0 elsewhere), against the closed form
    A/sqrt(L(1,chi4)) * phi(W3)/W3.

    The infinite product prod (1 - gamma(p)/p)^(-1) (1 - 1/p)^(1/2) only
    converges conditionally prime-by-prime, so the truncation regroups each
    factor against (1 - chi4(p)/p)^(-1/2) and multiplies by the exactly
    known L(1,chi4)^(-1/2) = (pi/4)^(-1/2); the regrouped factors are
    1 + O(p^-2) and the partial products converge absolutely.
    """
    alpha = alpha_rule or (lambda p: 0.0)
    W = params.W
    log_acc = -0.5 * math.log(math.pi / 4.0)
    for p in map(int, primes_up_to(prime_bound)):
        chi = 0 if p == 2 else (1 if p % 4 == 1 else -1)
        gamma_p = (1.0 + alpha(p)) if (p % 4 == 3 and W % p != 0) else 0.0
        log_acc += (
            -math.log(1.0 - gamma_p / p)
            + 0.5 * math.log(1.0 - 1.0 / p)
            - 0.5 * math.log(1.0 - chi / p)
        )
    truncated = math.exp(log_acc)
    A = landau_ramanujan_A(prime_bound).value
    phi_ratio = 1.0
    for p, _ in trial_factorize(params.W3).pairs:
        phi_ratio *= 1 - 1 / p
    closed = A / math.sqrt(math.pi / 4.0) * phi_ratio
    return {
        "truncated": ConstantEstimate(
            truncated,
            truncated * 3.0 / prime_bound,
            f"regrouped Euler product, p <= {prime_bound}",
        ),
        "closed_form": closed,
        "slack": abs(truncated - closed),
        "D0": params.D0,
    }


# ---------------------------------------------------------------------------
# the general two-sided sieve sum S_{J,p1,p2,m}
# ---------------------------------------------------------------------------


def sJ_direct(
    params: SieveParams,
    table: WeightTable,
    J: Sequence[int],
    p1: int,
    p2: int,
    m: int,
    f_rule: Callable[[int], Fraction],
    g_rule: Callable[[int], Fraction] | None = None,
) -> Fraction:
    """Exact evaluation of the double sum over weight pairs:

      sum over (d, e) with W, [d_1,e_1], ..., [d_k,e_k] pairwise coprime,
      p1 | d_m, p2 | e_m, of lambda_d lambda_e prod_{i not in J} f([d_i,e_i])
      prod_{j in J} g([d_j,e_j]).
    """
    k = table.k
    if len(set(J)) != len(J) or any(not 0 <= j < k for j in J):
        raise ValidationError("sJ_direct: bad J")
    if len(J) > 2:
        raise ValidationError("sJ_direct: |J| <= 2")
    if k > 3:
        raise ResourceGuardError("sJ_direct: k <= 3 only", cost_estimate=f"k={k}")
    if g_rule is None and J:
        raise ValidationError("sJ_direct: non-empty J needs a g rule")
    Jset = set(J)
    keys = list(table.entries)
    if len(keys) ** 2 > 4e6:
        raise ResourceGuardError(
            "sJ_direct: too many weight pairs",
            cost_estimate=f"{len(keys) ** 2:.1e} pairs",
        )

    def mult_eval(rule, n: int) -> Fraction:
        out = Fraction(1)
        for p, _ in trial_factorize(n).pairs:
            out *= Fraction(rule(p))
        return out

    total = Fraction(0)
    for d in keys:
        if d[m] % p1 != 0:
            continue
        lam_d = table.entries[d]
        for e in keys:
            if e[m] % p2 != 0:
                continue
            lcms = [di * ei // math.gcd(di, ei) for di, ei in zip(d, e)]
            ok = True
            for i in range(k):
                for j in range(i + 1, k):
                    if math.gcd(lcms[i], lcms[j]) > 1:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            term = lam_d * table.entries[e]
            for i in range(k):
                if lcms[i] == 1:
                    continue
                term *= mult_eval(g_rule if i in Jset else f_rule, lcms[i])
            total += term
    return total
