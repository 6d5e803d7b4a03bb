import math

import pytest

from twosquares.arith import build_factor_table, is_sum_of_two_squares
from twosquares.bins import (
    BinPartition,
    default_mu_t,
    feasibility_condition,
    jakobson_tuple,
    pigeonhole_extract,
    second_moment_lhs,
    theorem_constants,
    two_square_decomposition,
    verify_witness,
    witness_csv_rows,
    witness_search,
)
from twosquares.errors import ValidationError
from twosquares.sieve import AdmissibleTuple, SieveParams, lambda_from_F


def relaxed(N, t1, t2, D0):
    return SieveParams(N=N, theta1=t1, theta2=t2, D0=D0, strict=False)


# -- constants ---------------------------------------------------------------


def test_theorem_constants_example():
    tc = theorem_constants(1 / 40, 1 / 40)
    assert tc["Delta"] == pytest.approx(2.9655, abs=2e-4)
    assert tc["k1_min"] == 53
    # equal thetas: c is independent of the common value
    assert theorem_constants(1 / 50, 1 / 50)["c"] == pytest.approx(tc["c"])
    # Delta blows up as theta1 theta2 -> 0
    assert theorem_constants(1 / 400, 1 / 400)["Delta"] > tc["Delta"]
    with pytest.raises(ValidationError):
        theorem_constants(0.3, 0.3)


def test_default_mu_t():
    tc = theorem_constants(1 / 40, 1 / 40)
    mu, t, warn = default_mu_t((2, 4, 8), 1 / 40, 1 / 40)
    assert mu == pytest.approx((tc["c"],) * 3)
    assert t == pytest.approx((tc["c"],) * 3)
    assert not warn
    # mu_i / t_i = (k_i / 2^i)^(1/6)
    mu2, t2, _ = default_mu_t((8, 4), 1 / 40, 1 / 40)
    assert mu2[0] / t2[0] == pytest.approx((8 / 2) ** (1 / 6))
    # flooring
    _, _, warn3 = default_mu_t((1, 1, 1, 1, 1, 1, 1, 1, 1, 1), 1 / 40, 1 / 40)
    assert warn3


def test_feasibility_for_paper_style_bins():
    tc = theorem_constants(1 / 40, 1 / 40)
    k1 = max(tc["k1_min"], 2**7 + 1)
    for M in range(1, 31):
        sizes = tuple(k1 if i == 1 else 2 ** (7 * i) + 1 for i in range(1, M + 1))
        fc = feasibility_condition(sizes, 1 / 40, 1 / 40)
        assert fc["feasible"], (M, fc)
        geo = tc["Delta"] * sum(2.0**-i for i in range(1, M + 1))
        assert fc["lhs"] <= geo + 1e-9
        assert geo <= tc["Delta"] < fc["rhs"]


def test_partition_validation():
    with pytest.raises(ValidationError):
        BinPartition(sizes=())
    with pytest.raises(ValidationError):
        BinPartition(sizes=(1, 1), betas=(0.7, 0.7))
    with pytest.raises(ValidationError):
        BinPartition(sizes=(2,), mu=(0.5,), t=(1.0,))  # mu < 1
    p = BinPartition(sizes=(1, 2))
    assert p.betas == (0.5, 0.25)
    assert list(p.indices(1)) == [1, 2]
    assert p.spec().k == 3


def test_jakobson_tuple():
    t = jakobson_tuple(3)
    assert set(t.h) == {-100, -2500, -62500}  # -(2*5^i)^2 = -4*25^i
    assert all(h % 4 == 0 for h in t.h)
    with pytest.raises(ValidationError):
        jakobson_tuple(0)


# -- second moment --------------------------------------------------------------


@pytest.mark.parametrize("D0", [1, 10])
@pytest.mark.parametrize(
    "shifts,sizes", [((0, 4), (2,)), ((0, 4, 16), (1, 2)), ((0, 4, 16), (3,))]
)
def test_second_moment_evaluators_agree(ftab, D0, shifts, sizes):
    p = relaxed(10**4, 0.12, 1.0, D0)
    tup = AdmissibleTuple(shifts)
    part = BinPartition(sizes=sizes, mu=(1.5,) * len(sizes), t=(1.2,) * len(sizes))
    wt = lambda_from_F(p, part.spec())
    res = second_moment_lhs(p, tup, part, wt, ftab)
    assert res.rel_difference < 1e-6


def test_second_moment_n1e5(ftab):
    p = relaxed(10**5, 0.07, 1.0, 10)
    tup = AdmissibleTuple((0, 4, 16))
    part = BinPartition(sizes=(1, 2), mu=(1.5, 2.5), t=(1.0, 2.0))
    wt = lambda_from_F(p, part.spec())
    res = second_moment_lhs(p, tup, part, wt, ftab)
    assert res.rel_difference < 1e-6


def test_second_moment_sign_structure(ftab):
    p = relaxed(10**4, 0.12, 1.0, 10)
    tup = AdmissibleTuple((0, 4, 16))
    # M = 2 with a huge second-bin mu: its squared deviation dominates
    part = BinPartition(sizes=(1, 2), mu=(1.5, 500.0), t=(1.0, 1.0))
    wt = lambda_from_F(p, part.spec())
    assert second_moment_lhs(p, tup, part, wt, ftab).lhs_direct < 0
    # M = 1 with huge mu is forced nonnegative (bracket = S(2mu - S)/t^2)
    tup2 = AdmissibleTuple((0, 4))
    part1 = BinPartition(sizes=(2,), mu=(500.0,), t=(1.0,))
    wt2 = lambda_from_F(p, part1.spec())
    assert second_moment_lhs(p, tup2, part1, wt2, ftab).lhs_direct >= 0


def test_second_moment_requires_mu_t(ftab):
    p = relaxed(10**4, 0.12, 1.0, 10)
    tup = AdmissibleTuple((0, 4))
    part = BinPartition(sizes=(2,))
    wt = lambda_from_F(p, part.spec())
    with pytest.raises(ValidationError):
        second_moment_lhs(p, tup, part, wt, ftab)


# -- witness search ----------------------------------------------------------------


def test_witness_search_single_bin_is_indicator(ftab):
    p = relaxed(10**4, 0.1, 0.5, 1)
    tup = AdmissibleTuple((0,))
    part = BinPartition(sizes=(1,))
    records = witness_search(p, tup, part, 11000, ftab)
    expected = [
        n
        for n in range(10**4, 11000)
        if n % 4 == 1 and is_sum_of_two_squares(ftab.factorize(n))
    ]
    assert [r.n for r in records] == expected
    assert all(verify_witness(r, ftab) for r in records)


def test_witness_search_two_bins(ftab):
    p = relaxed(10**4, 0.1, 0.5, 1)
    tup = AdmissibleTuple((0, 4, 16))
    part = BinPartition(sizes=(1, 2))
    records = witness_search(p, tup, part, 2 * 10**4, ftab)
    assert len(records) >= 1
    for r in records[:20]:
        assert verify_witness(r, ftab)
        # accepted element of bin 2 is the smallest working shift
        h2 = r.accepted[1]
        assert h2 in (4, 16)
        if h2 == 16:
            assert not is_sum_of_two_squares(ftab.factorize(r.n + 4))
    rows = witness_csv_rows(records[:2])
    assert rows[0] == "n,bin,h,x,y"
    n, b, h, x, y = map(int, rows[1].split(","))
    assert x * x + y * y == n + h


def test_witness_search_empty_window(ftab):
    p = relaxed(10**4, 0.1, 0.5, 1)
    tup = AdmissibleTuple((0,))
    part = BinPartition(sizes=(1,))
    assert witness_search(p, tup, part, 10**4, ftab) == []


def test_witness_search_negative_shifts(ftab):
    p = relaxed(10**4, 0.1, 0.5, 1)
    tup = jakobson_tuple(2)  # shifts -100, -10000
    part = BinPartition(sizes=(1, 1))
    records = witness_search(p, tup, part, 2 * 10**4, ftab)
    assert records, "jakobson prefix should have witnesses in this window"
    for r in records[:10]:
        assert verify_witness(r, ftab)
        for h, _, (x, y) in r.certificates:
            assert x * x + y * y == r.n + h


def test_witness_rejects_negative_start(ftab):
    p = relaxed(10**4, 0.1, 0.5, 1)
    tup = jakobson_tuple(3)  # includes -10^6 < -N
    part = BinPartition(sizes=(1, 1, 1))
    with pytest.raises(ValidationError):
        witness_search(p, tup, part, 2 * 10**4, ftab)


# -- pigeonhole ---------------------------------------------------------------------


def test_pigeonhole_constant_table():
    r = pigeonhole_extract([(9, 8, 7)] * 5)
    assert r.a == (9, 8, 7) and r.depth == 3
    assert all(len(s) == 5 for s in r.supporting_rows)


def test_pigeonhole_majority_and_erasure():
    r = pigeonhole_extract([(1,), (1, 2), (3, 2, 2)])
    assert r.a == (1, 2)
    assert r.supporting_rows[0] == (0, 1)  # row 3 erased at column 1


def test_pigeonhole_tie_breaks_smallest():
    r = pigeonhole_extract([(5,), (3,)])
    assert r.a == (3,)


def test_pigeonhole_prefix_invariant():
    rows = [(2,), (2, 5), (2, 5, 7), (2, 6, 8), (1, 5, 7, 9)]
    r = pigeonhole_extract(rows)
    for depth, surviving in enumerate(r.supporting_rows, start=1):
        for idx in surviving:
            assert rows[idx][:depth] == r.a[:depth]


def test_two_square_decomposition_convention():
    assert two_square_decomposition(16) == (4, 0)
    assert two_square_decomposition(1) == (1, 0)
    assert two_square_decomposition(2) == (1, 1)
    assert two_square_decomposition(25) == (4, 3)
    assert two_square_decomposition(3) is None
    assert two_square_decomposition(0) == (0, 0)
