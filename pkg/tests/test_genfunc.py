from fractions import Fraction

import pytest

from pxpzero import combinatorics as c
from pxpzero.genfunc import (
    IntegerSeries, KMCounts, brute_force_km, f_series, g_series, reflection_series,
    verify_fibonacci_identity,
)

from oracles import fib_list, orbit_list, reverse

FIB = fib_list(80)


def tuple_km(L):
    """K and M from tuple orbits: self-reversing orbits vs reversal-exchanged pairs."""
    K, M = [0, 0], [0, 0]
    for orb in orbit_list(L):
        rev = frozenset(reverse(s) for s in orb)
        par = sum(min(orb)) % 2
        if rev == orb:
            K[par] += 1
        elif min(orb) < min(rev):
            M[par] += 1
    return K, M


# --- series algebra ----------------------------------------------------------------

def test_series_arithmetic():
    x = IntegerSeries.monomial(1, 6)
    p = (1 + x) * (1 - x)
    assert p.coefficients[:3] == [1, 0, -1]
    assert (x * 3)[1] == 3
    assert (2 - x)[0] == 2
    assert x.valuation() == 1
    assert IntegerSeries([], 4).valuation() is None
    assert len(p) == 7


def test_series_truncation_takes_smaller_order():
    a = IntegerSeries([1, 1, 1], 2)
    b = IntegerSeries([1, 1, 1, 1, 1], 4)
    assert (a * b).order == 2 and (a + b).order == 2


def test_log_inverse_one_minus_of_x():
    # ln 1/(1-x) = sum x^n / n
    x = IntegerSeries.monomial(1, 10)
    L = x.log_inverse_one_minus()
    assert L.coefficients == [0] + [Fraction(1, n) for n in range(1, 11)]
    with pytest.raises(ValueError):
        (1 + x).log_inverse_one_minus()


def test_substitute_power():
    s = IntegerSeries([1, 2, 3], 7).substitute_power(3)
    assert s.coefficients == [1, 0, 0, 2, 0, 0, 3, 0]


def test_rational_expansion_is_fibonacci():
    s = IntegerSeries.rational([0, 1], [1, -1, -1], 30)
    assert s.integers() == FIB[:31]
    with pytest.raises(ValueError):
        IntegerSeries.rational([1], [0, 1], 3)


def test_denominator_recurrence():
    # 1/(1 - x^2 - x^4): c_n = c_{n-2} + c_{n-4}
    cs = IntegerSeries.rational([1], [1, 0, -1, 0, -1], 60).integers()
    for n in range(4, 61):
        assert cs[n] == cs[n - 2] + cs[n - 4]


def test_reflection_series_is_fibonacci():
    r = reflection_series(60).integers()
    assert r == [FIB[n // 2 + 2] for n in range(61)]


def test_integers_rejects_fractions():
    with pytest.raises(ValueError):
        IntegerSeries([Fraction(1, 2)], 0).integers()


# --- f and g ------------------------------------------------------------------------

def test_f_and_g_integral_to_200():
    f = f_series(200)
    g = g_series(200)
    assert f.is_integral()
    assert g.is_integral(start=1)
    assert f[0] == 0
    assert g[0] == Fraction(1, 2)


def test_order_validation():
    with pytest.raises(ValueError):
        f_series(0)
    with pytest.raises(ValueError):
        verify_fibonacci_identity(5)


def test_f_counts_translation_orbits():
    f = f_series(20)
    for L in range(1, 21):
        assert f[L] == len(orbit_list(L))


@pytest.mark.parametrize("L", range(4, 15, 2))
def test_series_match_brute_force_km(L):
    f, g = f_series(14), g_series(14)
    km = brute_force_km(L)
    assert f[L] == 2 * km.M + km.K
    assert g[L] == km.M + km.K


def test_fibonacci_identity_to_100():
    result = verify_fibonacci_identity(100)
    assert set(result) == set(range(2, 101, 2))
    assert all(result.values())


# --- K and M ---------------------------------------------------------------------------

def test_brute_force_km_matches_tuple_oracle():
    for L in range(2, 17, 2):
        km = brute_force_km(L)
        K, M = tuple_km(L)
        assert (km.K_e, km.K_o, km.M_e, km.M_o) == (K[0], K[1], M[0], M[1])


def test_km_fibonacci_counts():
    for L in range(2, 17, 2):
        l = L // 2
        km = brute_force_km(L)
        assert km.K_e == FIB[l + 1]
        assert km.K_o == FIB[l]


def test_km_small_L():
    # at L = 4 every orbit (vacuum, one excitation, •◦•◦) is its own mirror image
    assert brute_force_km(4) == KMCounts(4, 2, 1, 0, 0)
    assert brute_force_km(10).M > 0


def test_km_bound_matches_zero_momentum_gap():
    for L in range(4, 17, 2):
        km = brute_force_km(L)
        assert abs(km.K - 2 * km.K_o) == c.fibonacci(L // 2 - 1)


def test_km_rejects_bad_L():
    for L in (0, 3, 18):
        with pytest.raises(ValueError):
            brute_force_km(L)
