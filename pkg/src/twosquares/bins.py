"""Second-moment certificate machinery: bin partitions, the certificate
left-hand side evaluated two independent ways, witness search with exact
two-squares certificates, and the pigeonhole extraction of nested hit
sequences from per-M witness rows.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import FactorTable, is_sum_of_two_squares
from .errors import ValidationError
from .hooley import rho
from .sieve import (
    AdmissibleTuple,
    SieveParams,
    TestFunctionSpec,
    WeightTable,
    _window_iter,
    _divisor_candidates,
    find_v0,
    s_direct,
)
from itertools import product as iproduct

# ---------------------------------------------------------------------------
# partitions and the certificate constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinPartition:
    """Partition of tuple indices {0..k-1} into consecutive bins.

    sizes[i] is k_i; betas default to 2^-(i+1) (i zero-based, so the first
    bin gets 1/2); mu and t are the certificate centre/width parameters,
    both required >= 1.
    """

    sizes: tuple[int, ...]
    betas: tuple[float, ...] = ()
    mu: tuple[float, ...] = ()
    t: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValidationError("BinPartition: sizes must be positive")
        M = len(self.sizes)
        betas = self.betas or tuple(2.0 ** -(i + 1) for i in range(M))
        if len(betas) != M:
            raise ValidationError("BinPartition: betas arity mismatch")
        if sum(betas) > 1 + 1e-12:
            raise ValidationError("BinPartition: sum of betas exceeds 1")
        for name, vals in (("mu", self.mu), ("t", self.t)):
            if vals and (len(vals) != M or any(x < 1 for x in vals)):
                raise ValidationError(f"BinPartition: bad {name} (need >= 1, arity {M})")
        object.__setattr__(self, "betas", betas)

    @property
    def M(self) -> int:
        return len(self.sizes)

    @property
    def k(self) -> int:
        return sum(self.sizes)

    def indices(self, i: int) -> range:
        lo = sum(self.sizes[:i])
        return range(lo, lo + self.sizes[i])

    def spec(self) -> TestFunctionSpec:
        return TestFunctionSpec(tuple(zip(self.sizes, self.betas)))


def theorem_constants(theta1: float, theta2: float) -> dict[str, float]:
    """Delta, c and the least admissible first-bin size.

    Delta = sqrt(2)(pi+2)/(32 pi) * (1+theta1)/sqrt(theta1 theta2)
    c     = 16 sqrt(theta2/(2 theta1))/pi * pi^2/(pi+2)
    k1_min = floor(2 Delta^3) + 1
    """
    if not 0 < theta1 + theta2 < 1 / 18 or theta1 <= 0 or theta2 <= 0:
        raise ValidationError("theorem_constants: need 0 < theta1 + theta2 < 1/18")
    delta = (
        math.sqrt(2) * (math.pi + 2) / (32 * math.pi) * (1 + theta1) / math.sqrt(theta1 * theta2)
    )
    c = 16 * math.sqrt(theta2 / (2 * theta1)) / math.pi * (math.pi**2 / (math.pi + 2))
    return {"Delta": delta, "c": c, "k1_min": int(2 * delta**3) + 1}


def default_mu_t(
    sizes: tuple[int, ...], theta1: float, theta2: float
) -> tuple[tuple[float, ...], tuple[float, ...], list[str]]:
    """mu_i = c (k_i/2^i)^(1/2), t_i = c (k_i/2^i)^(1/3), floored at 1 with a
    warning (the asymptotic regime always has them >= 1, desk scale may not)."""
    c = theorem_constants(theta1, theta2)["c"]
    mu, t, warnings = [], [], []
    for i, ki in enumerate(sizes, start=1):
        m = c * (ki / 2**i) ** 0.5
        tt = c * (ki / 2**i) ** (1 / 3)
        if m < 1 or tt < 1:
            warnings.append(f"bin {i}: mu={m:.3f}, t={tt:.3f} floored at 1")
        mu.append(max(m, 1.0))
        t.append(max(tt, 1.0))
    return tuple(mu), tuple(t), warnings


def feasibility_condition(
    sizes: tuple[int, ...], theta1: float, theta2: float
) -> dict[str, float | bool]:
    """The inequality Delta * sum_i (2^i/k_i)^(1/6) < (k_1/2)^(1/3)."""
    delta = theorem_constants(theta1, theta2)["Delta"]
    lhs = delta * sum((2**i / ki) ** (1 / 6) for i, ki in enumerate(sizes, start=1))
    rhs = (sizes[0] / 2) ** (1 / 3)
    return {"lhs": lhs, "rhs": rhs, "feasible": lhs < rhs, "Delta": delta}


def jakobson_tuple(i_max: int) -> AdmissibleTuple:
    """Shifts h_i = -(2*5^i)^2 for i = 1..i_max; admissible and 4 | h_i."""
    if i_max < 1:
        raise ValidationError("jakobson_tuple: i_max must be >= 1")
    return AdmissibleTuple(tuple(-((2 * 5**i) ** 2) for i in range(1, i_max + 1)))


# ---------------------------------------------------------------------------
# the second-moment left-hand side, two ways
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SecondMomentResult:
    lhs_direct: float
    lhs_assembled: float
    rel_difference: float
    components: dict
    rho_negative_count: int
    rho_negative_examples: tuple[int, ...]


def second_moment_lhs(
    params: SieveParams,
    tup: AdmissibleTuple,
    partition: BinPartition,
    table: WeightTable,
    factor_table: FactorTable,
) -> SecondMomentResult:
    """Evaluate sum_n [min_j mu_j^2/t_j^2 - sum_i ((sum_{h in B_i} rho(n+h)
    - mu_i)/t_i)^2] w(n) directly (evaluator A) and by assembling
    min(mu^2/t^2) S1 - sum_i t_i^-2 [sum_{h != h'} S3 + sum_h S4
    - 2 mu_i sum_h S2 + mu_i^2 S1] from the direct S-sums (evaluator B).

    Their agreement certifies the expansion identity; it is pure algebra,
    so the two floats should match to ~1e-12 relative.
    """
    if partition.k != tup.k:
        raise ValidationError("second_moment_lhs: partition arity != tuple size")
    if not partition.mu or not partition.t:
        raise ValidationError("second_moment_lhs: partition needs mu and t filled")
    rp = params.rho_params()
    if 2 * params.N + max(tup.h) > factor_table.limit:
        raise ValidationError("second_moment_lhs: FactorTable too small")
    mu, t = partition.mu, partition.t
    min_ratio = min(m * m / (tt * tt) for m, tt in zip(mu, t))

    # evaluator A: direct scan
    v0 = find_v0(params, tup)
    slot_vals = table.slot_values()
    lam = table.float_entries()
    neg = 0
    neg_examples: list[int] = []
    lhs_a = 0.0
    for n in _window_iter(params, v0):
        cands = [_divisor_candidates(n + h, slot_vals[i]) for i, h in enumerate(tup.h)]
        w = 0.0
        for dt in iproduct(*cands):
            w += lam.get(dt, 0.0)
        w *= w
        if w == 0.0:
            continue
        bracket = min_ratio
        for i in range(partition.M):
            s = 0.0
            for j in partition.indices(i):
                r = rho(rp, factor_table.factorize(n + tup.h[j]))
                if r < 0:
                    neg += 1
                    if len(neg_examples) < 10:
                        neg_examples.append(n + tup.h[j])
                s += r
            bracket -= ((s - mu[i]) / t[i]) ** 2
        lhs_a += bracket * w

    # evaluator B: assembled from S-sums
    s1 = s_direct("S1", params, tup, table).value
    comps: dict = {"S1": s1}
    lhs_b = min_ratio * s1
    for i in range(partition.M):
        idx = list(partition.indices(i))
        s3_sum = 0.0
        for a in idx:
            for b in idx:
                if a != b:
                    s3_sum += s_direct(
                        "S3", params, tup, table, factor_table, m=a, l=b
                    ).value
        s4_sum = sum(
            s_direct("S4", params, tup, table, factor_table, m=a).value for a in idx
        )
        s2_sum = sum(
            s_direct("S2", params, tup, table, factor_table, m=a).value for a in idx
        )
        comps[f"bin{i}"] = {"S3": s3_sum, "S4": s4_sum, "S2": s2_sum}
        lhs_b -= (s3_sum + s4_sum - 2 * mu[i] * s2_sum + mu[i] ** 2 * s1) / t[i] ** 2

    scale = max(abs(lhs_a), abs(lhs_b), 1e-30)
    return SecondMomentResult(
        lhs_a, lhs_b, abs(lhs_a - lhs_b) / scale, comps, neg, tuple(neg_examples)
    )


# ---------------------------------------------------------------------------
# witness search and exact certificates
# ---------------------------------------------------------------------------


def two_square_decomposition(m: int) -> tuple[int, int] | None:
    """Lexicographically least (x, y) with x >= y >= 0 and x^2 + y^2 = m."""
    if m < 0:
        return None
    x = math.isqrt((m + 1) // 2)
    if 2 * x * x < m:
        x += 1
    while x * x <= m:
        y2 = m - x * x
        y = math.isqrt(y2)
        if y * y == y2:
            return (x, y)
        x += 1
    return None


@dataclass(frozen=True)
class WitnessRecord:
    """One n whose translates hit every bin, with exact certificates.

    accepted[i] is the smallest shift h in bin i with n + h a sum of two
    squares; certificates[i] = (h, factorization pairs of n+h, (x, y))."""

    n: int
    accepted: tuple[int, ...]
    certificates: tuple[tuple[int, tuple[tuple[int, int], ...], tuple[int, int]], ...]


def verify_witness(record: WitnessRecord, factor_table: FactorTable) -> bool:
    """Recompute every certificate: factorisation parity and x^2+y^2 = n+h."""
    for h, pairs, (x, y) in record.certificates:
        m = record.n + h
        f = factor_table.factorize(m) if m >= 1 else None
        if m >= 1:
            if f.pairs != pairs:
                return False
            if not is_sum_of_two_squares(f):
                return False
            if any(p % 4 == 3 and e % 2 for p, e in pairs):
                return False
        if x * x + y * y != m:
            return False
    return True


def witness_search(
    params: SieveParams,
    tup: AdmissibleTuple,
    partition: BinPartition,
    n_limit: int,
    factor_table: FactorTable,
) -> list[WitnessRecord]:
    """Scan n in [N, n_limit), n = v0 (W), n = 1 (4); record every n for
    which each bin holds at least one h with n + h a sum of two squares.

    Uses the exact indicator, never rho.  Results sorted by n (the scan is
    already ordered; kept explicit for the parallel-partition contract)."""
    if partition.k != tup.k:
        raise ValidationError("witness_search: partition arity != tuple size")
    if n_limit + max(tup.h) > factor_table.limit + 1:
        raise ValidationError("witness_search: FactorTable too small")
    if params.N + min(tup.h) < 0:
        raise ValidationError("witness_search: window start + min shift is negative")
    v0 = find_v0(params, tup)
    sol_iter = [
        n for n in range(params.N, n_limit) if n % 4 == 1 and n % params.W == v0 % params.W
    ]
    out: list[WitnessRecord] = []
    for n in sol_iter:
        accepted: list[int] = []
        certs = []
        ok = True
        for i in range(partition.M):
            hit = None
            for j in partition.indices(i):
                h = tup.h[j]
                m = n + h
                if m == 0:
                    hit = (h, (), (0, 0))
                    break
                f = factor_table.factorize(m)
                if is_sum_of_two_squares(f):
                    xy = two_square_decomposition(m)
                    hit = (h, f.pairs, xy)
                    break
            if hit is None:
                ok = False
                break
            accepted.append(hit[0])
            certs.append(hit)
        if ok:
            out.append(WitnessRecord(n, tuple(accepted), tuple(certs)))
    out.sort(key=lambda r: r.n)
    return out


def witness_csv_rows(records: list[WitnessRecord]) -> list[str]:
    """Export rows "n,bin,h,x,y" (one per accepted bin element)."""
    rows = ["n,bin,h,x,y"]
    for r in records:
        for i, (h, _, (x, y)) in enumerate(r.certificates):
            rows.append(f"{r.n},{i},{h},{x},{y}")
    return rows


# ---------------------------------------------------------------------------
# pigeonhole extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PigeonholeResult:
    a: tuple[int, ...]
    supporting_rows: tuple[tuple[int, ...], ...]  # per depth, surviving row ids
    depth: int


def pigeonhole_extract(rows: list[tuple[int, ...]]) -> PigeonholeResult:
    """Column-wise most-frequent-element selection over a truncated table of
    per-M witness tuples (row M has M entries).

    At column j only rows of length >= j participate; the most frequent
    value is chosen (smallest value on ties), rows disagreeing at column j
    are erased, and extraction stops when a column has no rows left."""
    alive = {i for i, r in enumerate(rows) if r}
    a: list[int] = []
    support: list[tuple[int, ...]] = []
    j = 0
    while True:
        here = [i for i in alive if len(rows[i]) > j]
        if not here:
            break
        counts = Counter(rows[i][j] for i in here)
        best = max(counts.values())
        choice = min(v for v, c in counts.items() if c == best)
        a.append(choice)
        for i in here:
            if rows[i][j] != choice:
                alive.discard(i)
        support.append(tuple(sorted(i for i in alive if len(rows[i]) > j)))
        j += 1
    return PigeonholeResult(tuple(a), tuple(support), len(a))
