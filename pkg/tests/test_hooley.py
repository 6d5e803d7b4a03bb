import math

import pytest

from twosquares.arith import build_factor_table, is_sum_of_two_squares, r2, trial_factorize
from twosquares.errors import ValidationError
from twosquares.hooley import RhoParams, rho, t_weight


@pytest.fixture(scope="module")
def p_v100():
    # v = floor(N^theta1) = 100 with a regime-legal exponent
    params = RhoParams(N=100**20, theta1=1 / 20)
    assert params.v == 100
    return params


def test_t_weight_trivial_cases(p_v100):
    assert t_weight(p_v100, trial_factorize(1)) == 1.0
    assert t_weight(p_v100, trial_factorize(3)) == 1.0  # 3 = 3 mod 4 excluded
    assert t_weight(p_v100, trial_factorize(21)) == 1.0


def test_t_weight_single_prime(p_v100):
    expected = 1 - (5 / 9) * (1 - math.log(5) / math.log(100))
    assert t_weight(p_v100, trial_factorize(5)) == pytest.approx(expected, abs=1e-15)


def test_t_weight_two_primes(p_v100):
    # divisors of 65 supported on 1-mod-4 primes: 1, 5, 13, 65
    logv = math.log(100)
    expected = (
        1
        - (5 / 9) * (1 - math.log(5) / logv)
        - (13 / 25) * (1 - math.log(13) / logv)
        + (5 / 9) * (13 / 25) * (1 - math.log(65) / logv)
    )
    assert t_weight(p_v100, trial_factorize(65)) == pytest.approx(expected, abs=1e-14)


def test_t_weight_respects_v_cutoff():
    params = RhoParams(N=10**40, theta1=0.025)  # v = 10
    assert params.v == 10
    # 13 > v: excluded, so t(13) = 1
    assert t_weight(params, trial_factorize(13)) == 1.0
    assert t_weight(params, trial_factorize(5)) != 1.0


def test_rho_examples(p_v100):
    assert rho(p_v100, trial_factorize(3)) == 0.0
    assert rho(p_v100, trial_factorize(1)) == 4.0
    tw = t_weight(p_v100, trial_factorize(5))
    assert rho(p_v100, trial_factorize(5)) == pytest.approx(8 * tw)


def test_rho_supported_on_two_squares(p_v100):
    table = build_factor_table(2000)
    for n in range(1, 2000):
        f = table.factorize(n)
        if not is_sum_of_two_squares(f):
            assert rho(p_v100, f) == 0.0
        else:
            assert rho(p_v100, f) == pytest.approx(t_weight(p_v100, f) * r2(f))


def test_rho_sign_violations_exist_and_are_recorded_not_clamped(p_v100):
    # the mu(a) signs permit t(n) < 0; verify rho reports it raw
    table = build_factor_table(10**5)
    negs = [n for n in range(1, 10**5) if rho(p_v100, table.factorize(n)) < 0]
    # whether or not this particular window has one, the function must not clamp
    for n in negs[:5]:
        assert rho(p_v100, table.factorize(n)) < 0
    # t_weight itself can certainly go negative for engineered n: 5*13*17*29
    f = trial_factorize(5 * 13 * 17 * 29)
    tw = t_weight(p_v100, f)
    assert rho(p_v100, f) == pytest.approx(tw * r2(f))


def test_params_validation():
    with pytest.raises(ValidationError):
        RhoParams(N=10, theta1=0.9)  # strict mode: outside regime
    relaxed = RhoParams(N=10**4, theta1=0.25, strict=False)
    assert relaxed.v == 10 and relaxed.warnings
    with pytest.raises(ValidationError):
        RhoParams(N=100, theta1=0.01)  # v < 2 even relaxed
