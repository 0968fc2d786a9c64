"""Frozen-value and property tests for the local-invariant kernel.

Expected values marked by the oracle were computed with
shimura_calc.oracles (brute-force counting) before being frozen here.
"""

from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shimura_calc.arith import (
    OO,
    QuaternionAlgebra,
    check_place,
    field_splits_algebra,
    has_sqrt_in_Zp,
    hilbert_symbol,
    is_prime,
    kronecker_symbol,
    legendre_symbol,
    p_valuation,
    prime_factors,
    ramified_places,
    squarefree_part,
)
from shimura_calc.oracles import hilbert_oracle, squares_mod

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

nonzero_int = st.integers(-50, 50).filter(bool)
rationals = st.builds(
    Fraction, nonzero_int, st.integers(1, 50)
)
places = st.sampled_from(SMALL_PRIMES + [OO])


def test_legendre_frozen():
    assert legendre_symbol(2, 7) == 1  # oracle: 2 in squares mod 7
    assert legendre_symbol(-1, 3) == -1  # oracle: squares mod 3 are {0,1}
    assert legendre_symbol(6, 3) == 0


def test_legendre_matches_square_enumeration():
    for p in [3, 5, 7, 11, 13, 17, 19, 23]:
        sq = squares_mod(p)
        for a in range(-p, 2 * p):
            expect = 0 if a % p == 0 else (1 if a % p in sq else -1)
            assert legendre_symbol(a, p) == expect


def test_legendre_rejects():
    with pytest.raises(ValueError):
        legendre_symbol(3, 2)
    with pytest.raises(ValueError):
        legendre_symbol(3, 9)


def test_kronecker_frozen():
    assert kronecker_symbol(-3, 2) == -1  # -3 = 5 mod 8
    assert kronecker_symbol(-4, 2) == 0
    assert kronecker_symbol(-7, 2) == 1  # -7 = 1 mod 8
    assert kronecker_symbol(-7, 7) == 0
    assert kronecker_symbol(-3, 7) == 1  # 4 is a square mod 7
    for d in (-1, -2, 3, 6):
        with pytest.raises(ValueError):
            kronecker_symbol(d, 2)


def test_p_valuation():
    assert p_valuation(12, 2) == (2, 3)
    assert p_valuation(Fraction(3, 4), 2) == (-2, 3)
    assert p_valuation(5, 3) == (0, 5)
    with pytest.raises(ValueError):
        p_valuation(0, 2)
    with pytest.raises(ValueError):
        p_valuation(4, 6)


@given(rationals, st.sampled_from(SMALL_PRIMES))
def test_p_valuation_reconstructs(x, p):
    v, u = p_valuation(x, p)
    assert Fraction(p) ** v * u == x
    assert u.numerator % p and u.denominator % p


def test_squarefree_part():
    assert squarefree_part(12) == 3
    assert squarefree_part(-18) == -2
    assert squarefree_part(Fraction(3, 4)) == 3
    assert squarefree_part(Fraction(1, 2)) == 2
    assert squarefree_part(1) == 1
    with pytest.raises(ValueError):
        squarefree_part(0)


@given(rationals)
def test_squarefree_part_is_square_complement(x):
    s = squarefree_part(x)
    q = x / s
    assert q > 0
    # q must be the square of a rational
    assert isqrt(q.numerator) ** 2 == q.numerator
    assert isqrt(q.denominator) ** 2 == q.denominator


def test_hilbert_frozen():
    # paper values for the discriminant-6 exclusion argument
    for v in SMALL_PRIMES + [OO]:
        expect = -1 if v in (3, OO) else 1
        assert hilbert_symbol(-4, -12, v) == expect
    assert hilbert_symbol(-1, 3, 2) == -1  # oracle-derived
    for v in (2, 3, 5, OO):
        assert hilbert_symbol(1, 7, v) == 1
        assert hilbert_symbol(1, -30, v) == 1


@given(nonzero_int, nonzero_int, places)
def test_hilbert_symmetry(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)


@given(nonzero_int, nonzero_int, nonzero_int, places)
def test_hilbert_bilinear(a, b, c, v):
    assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(
        a, c, v
    )


@given(rationals, places)
def test_hilbert_a_minus_a(a, v):
    assert hilbert_symbol(a, -a, v) == 1


@settings(max_examples=200)
@given(
    st.integers(-30, 30).filter(bool),
    st.integers(-30, 30).filter(bool),
    st.sampled_from(SMALL_PRIMES + [OO]),
)
def test_hilbert_matches_oracle(a, b, v):
    assert hilbert_symbol(a, b, v) == hilbert_oracle(a, b, v)


@given(rationals, rationals)
def test_reciprocity(a, b):
    ram = ramified_places(a, b)
    assert len(ram) % 2 == 0
    prod = 1
    for v in ram:
        prod *= hilbert_symbol(a, b, v)
    assert prod == 1


def test_ramified_frozen():
    assert ramified_places(-1, -1) == {2, OO}  # oracle-derived
    assert ramified_places(-4, -8) == {2, OO}  # paper
    assert ramified_places(-4, -12) == {3, OO}  # paper
    assert ramified_places(1, 1) == frozenset()


def test_algebra_discriminants():
    assert QuaternionAlgebra(2, 3).discriminant() == 6
    assert QuaternionAlgebra(-1, 7).discriminant() == 14
    assert QuaternionAlgebra(-2, 5).discriminant() == 10
    assert QuaternionAlgebra(1, 1).discriminant() == 1
    with pytest.raises(ValueError):
        QuaternionAlgebra(0, 1)


def test_field_splits_algebra():
    disc6 = QuaternionAlgebra(2, 3).ramified()
    assert field_splits_algebra(-4, disc6)
    assert field_splits_algebra(-3, disc6)
    assert field_splits_algebra(-24, disc6)
    disc14 = QuaternionAlgebra(-1, 7).ramified()
    assert not field_splits_algebra(-7, disc14)  # -7 = 1 mod 8 splits at 2
    assert field_splits_algebra(-4, disc14)
    assert field_splits_algebra(-3, frozenset())
    with pytest.raises(ValueError):
        field_splits_algebra(5, disc6)


def test_has_sqrt_frozen():
    assert has_sqrt_in_Zp(6, 5)
    assert has_sqrt_in_Zp(-6, 5)
    assert has_sqrt_in_Zp(-2, 3)  # paper: (-2/3) = 1
    assert has_sqrt_in_Zp(7, 3)
    assert has_sqrt_in_Zp(-14, 3)
    assert not has_sqrt_in_Zp(2, 3)  # squares mod 3 are {0,1}
    assert has_sqrt_in_Zp(17, 2)
    assert not has_sqrt_in_Zp(3, 2)
    with pytest.raises(ValueError):
        has_sqrt_in_Zp(6, 3)


@given(st.integers(-200, 200), st.sampled_from(SMALL_PRIMES))
def test_has_sqrt_matches_enumeration(a, p):
    if a % p == 0:
        return
    m = p**3 if p > 2 else 16
    expect = a % m in {x * x % m for x in range(m) if x % p}
    assert has_sqrt_in_Zp(a, p) == expect


def test_places():
    check_place(2)
    check_place(29)
    check_place(OO)
    for bad in (4, 1, -3, "x", 2.0):
        with pytest.raises(ValueError):
            check_place(bad)
    assert prime_factors(-84) == [2, 3, 7]
    assert is_prime(2) and is_prime(97) and not is_prime(91)
