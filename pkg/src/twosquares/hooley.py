"""Hooley's damped representation function rho(n) = t(n) r_2(n).

t(n) is a truncated divisor sum over squarefree divisors supported on
primes 1 mod 4; it damps the oscillation of r_2 so two-point correlation
asymptotics exist.  rho is used as-is: the mu(a) signs permit t(n) < 0
for specific n, and callers that scan ranges record such sign violations
instead of clamping (see bins.second_moment_lhs diagnostics).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import Factorization, r2
from .errors import ValidationError


@dataclass(frozen=True)
class RhoParams:
    """Window anchor N and exponent theta1; v = floor(N^theta1).

    strict=True enforces the asymptotic-regime constraint theta1 < 1/18.
    Desk-scale runs need larger exponents just to make v >= 2, so
    strict=False keeps only the structural bounds and records the regime
    violation in `warnings`.
    """

    N: int
    theta1: float
    strict: bool = True
    v: int = field(init=False)
    warnings: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.N < 2:
            raise ValidationError(f"RhoParams: N={self.N} must be >= 2")
        warnings: list[str] = []
        if not 0 < self.theta1 < 1:
            raise ValidationError(f"RhoParams: theta1={self.theta1} outside (0, 1)")
        if self.theta1 >= 1 / 18:
            msg = f"theta1={self.theta1} outside the asymptotic regime (0, 1/18)"
            if self.strict:
                raise ValidationError(f"RhoParams: {msg}")
            warnings.append(msg)
        v = int(math.floor(self.N**self.theta1))
        if v < 2:
            raise ValidationError(
                f"RhoParams: derived v={v} < 2 (N={self.N}, theta1={self.theta1})"
            )
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "warnings", tuple(warnings))


def t_weight(params: RhoParams, f: Factorization) -> float:
    """sum over squarefree a | n, a <= v, p|a => p = 1 mod 4, of
    mu(a)/g2(a) * (1 - log a / log v).   Natural logarithms.

    Equals 1 whenever n has no prime factor 1 mod 4 below v.
    """
    v = params.v
    logv = math.log(v)
    ps = [p for p, _ in f.pairs if p % 4 == 1 and p <= v]
    total = 1.0  # a = 1 term
    # DFS over subsets of the 1-mod-4 primes with product <= v,
    # carrying mu(a) and g2(a) = prod (2 - 1/p) multiplicatively
    stack = [(0, 1, 1, 1.0)]
    while stack:
        i, prod, mu, gval = stack.pop()
        for j in range(i, len(ps)):
            p = ps[j]
            a = prod * p
            if a > v:
                continue
            ga = gval * (2.0 - 1.0 / p)
            total += (-mu / ga) * (1.0 - math.log(a) / logv)
            stack.append((j + 1, a, -mu, ga))
    return total


def rho(params: RhoParams, f: Factorization) -> float:
    """rho(n) = t(n) * r_2(n); vanishes off the sums-of-two-squares set."""
    r = r2(f)
    if r == 0:
        return 0.0
    return t_weight(params, f) * r
