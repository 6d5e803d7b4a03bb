import math

import mpmath as mp
import pytest

from twosquares.constants import (
    a2_constant,
    dirichlet_beta_prime_1,
    euler_gamma,
    landau_ramanujan_A,
    L1_chi4,
    L_prime_ratio_at_1,
    special_constants,
    zeta_prime_over_zeta_at_2,
)
from twosquares.errors import ValidationError

mp.mp.dps = 30


def mp_beta(s):
    return mp.nsum(lambda n: (-1) ** n / (2 * n + 1) ** s, [0, mp.inf])


def landau_A_oracle() -> float:
    """A via the classical zeta/beta product acceleration (independent path)."""
    P2 = mp.mpf(1)
    for k in range(1, 31):
        s = mp.mpf(2) ** k
        P2 *= (mp.zeta(s) * (1 - mp.mpf(2) ** (-s)) / mp_beta(s)) ** (mp.mpf(2) ** -k)
    return float(mp.sqrt(P2) / mp.sqrt(2))


def test_landau_A_hand_value_at_3():
    a = landau_ramanujan_A(3)
    assert a.value == pytest.approx(0.75, abs=1e-15)
    assert a.bound_kind == "rigorous"


def test_landau_A_monotone_in_bound():
    v1 = landau_ramanujan_A(10).value
    v2 = landau_ramanujan_A(100).value
    v3 = landau_ramanujan_A(10**4).value
    assert v1 < v2 < v3  # each new 3-mod-4 prime contributes a factor > 1


def test_landau_A_against_independent_oracle():
    a = landau_ramanujan_A(10**6)
    oracle = landau_A_oracle()
    assert abs(a.value - oracle) <= a.truncation_bound + 1e-12
    assert abs(a.value - oracle) < 2e-7


def test_landau_A_rejects():
    with pytest.raises(ValidationError):
        landau_ramanujan_A(2)


def test_gamma_ten_digits():
    g = euler_gamma()
    assert abs(g.value - float(mp.euler)) < 1e-12


def test_zeta_prime_ratio():
    z = zeta_prime_over_zeta_at_2()
    true = float(mp.zeta(2, derivative=1) / mp.zeta(2))
    assert abs(z.value - true) < 1e-12
    # bracket: the Euler-Maclaurin value must sit between crude partial-sum bounds
    partial = -sum(math.log(n) / n**2 for n in range(2, 20000))
    lo = partial - (math.log(20000) + 1) / 20000 * 1.5
    assert lo < z.value * (math.pi**2 / 6) < partial


def test_beta_prime_against_lgamma_identity():
    # beta'(1) = (pi/4)(gamma + 2 log 2 + 3 log pi - 4 log Gamma(1/4))
    oracle = (math.pi / 4) * (
        float(mp.euler)
        + 2 * math.log(2)
        + 3 * math.log(math.pi)
        - 4 * math.lgamma(0.25)
    )
    b = dirichlet_beta_prime_1()
    assert abs(b.value - oracle) < 1e-12


def test_L1_exact():
    assert L1_chi4().value == math.pi / 4
    assert L1_chi4().truncation_bound == 0.0
    # consistent with Gamma(1/2) sqrt(L(1)) = pi/2
    assert math.gamma(0.5) * math.sqrt(L1_chi4().value) == pytest.approx(math.pi / 2)


def test_a2_assembly_identity():
    consts = special_constants()
    a2 = consts["A2"]
    recomputed = (
        2 * consts["gamma_euler"].value
        - 1
        + 2 * consts["L_prime_ratio_at_1"].value
        - 2 * consts["zeta_prime_ratio_at_2"].value
        + 4 / 3 * math.log(2)
    )
    assert abs(a2.value - recomputed) < 1e-15
    # and against fully independent constituents (mpmath + lgamma identity)
    betap = (math.pi / 4) * (
        float(mp.euler) + 2 * math.log(2) + 3 * math.log(math.pi) - 4 * math.lgamma(0.25)
    )
    independent = (
        2 * float(mp.euler)
        - 1
        + 2 * betap / (math.pi / 4)
        - 2 * float(mp.zeta(2, derivative=1) / mp.zeta(2))
        + 4 / 3 * math.log(2)
    )
    assert abs(a2.value - independent) < 1e-9


def test_special_constants_keys():
    consts = special_constants()
    assert set(consts) == {
        "L1_chi4",
        "gamma_euler",
        "zeta_prime_ratio_at_2",
        "L_prime_ratio_at_1",
        "A2",
    }
    ratio = L_prime_ratio_at_1()
    assert ratio.value == pytest.approx(
        dirichlet_beta_prime_1().value / (math.pi / 4), rel=1e-14
    )
