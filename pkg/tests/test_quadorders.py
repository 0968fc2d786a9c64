"""Class numbers and masses against the reduction-closure oracle."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shimura_calc.oracles import class_number_oracle
from shimura_calc.quadorders import (
    QuadOrder,
    class_number,
    divisors,
    fundamental_decomposition,
    is_fundamental,
    order_mass,
    orders_containing,
    ray_class_card,
    unit_count,
)

discriminants = st.integers(-1000, -3).filter(lambda d: d % 4 in (0, 1))


def test_class_number_frozen():
    assert class_number(-4) == 1  # oracle-derived
    assert class_number(-3) == 1
    assert class_number(-24) == 2  # x^2+6y^2, 2x^2+3y^2
    assert class_number(-56) == 4
    with pytest.raises(ValueError):
        class_number(-5)
    with pytest.raises(ValueError):
        class_number(4)


@given(discriminants)
def test_class_number_matches_oracle(d):
    assert class_number(d) == class_number_oracle(d)


def test_unit_count():
    assert unit_count(-3) == 6
    assert unit_count(-4) == 4
    assert unit_count(-20) == 2
    assert unit_count(-12) == 2  # conductor-2 order in Q(omega)


def test_is_fundamental():
    assert is_fundamental(-3)
    assert is_fundamental(-4)
    assert is_fundamental(-24)
    assert not is_fundamental(-12)
    assert not is_fundamental(-9)
    assert not is_fundamental(-16)


def test_order_mass_frozen():
    assert order_mass(QuadOrder(-3, 1)) == Fraction(1, 6)
    assert order_mass(QuadOrder(-3, 2)) == Fraction(1, 2)
    assert order_mass(QuadOrder(-7, 2)) == Fraction(1, 2)
    assert order_mass(QuadOrder(-4, 2)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        QuadOrder(-12, 1)
    with pytest.raises(ValueError):
        QuadOrder(-3, 0)


@given(discriminants)
def test_mass_of_maximal_order(d_K):
    if not is_fundamental(d_K):
        d_K, _ = fundamental_decomposition(d_K)
    assert order_mass(QuadOrder(d_K, 1)) == Fraction(
        class_number(d_K), unit_count(d_K)
    )


@given(st.integers(-200, -3).filter(lambda d: d % 4 in (0, 1)))
def test_conductor_formula_cross_check(d):
    # class_number(f^2 d_K) = order_mass(d_K, f) * unit_count(f^2 d_K)
    d_K, f0 = fundamental_decomposition(d)
    for f in divisors(f0):
        dd = f * f * d_K
        assert class_number(dd) == order_mass(QuadOrder(d_K, f)) * unit_count(dd)


def test_orders_containing():
    assert orders_containing(0, 7) == [QuadOrder(-7, 1), QuadOrder(-7, 2)]
    assert orders_containing(1, 1) == [QuadOrder(-3, 1)]
    assert orders_containing(0, 6) == [QuadOrder(-24, 1)]
    assert orders_containing(2, 5) == [QuadOrder(-4, 1), QuadOrder(-4, 2)]
    assert QuadOrder(-7, 2).discriminant == -28
    with pytest.raises(ValueError):
        orders_containing(4, 4)


def test_fundamental_decomposition():
    assert fundamental_decomposition(-28) == (-7, 2)
    assert fundamental_decomposition(-3) == (-3, 1)
    assert fundamental_decomposition(-48) == (-3, 4)
    assert fundamental_decomposition(-16) == (-4, 2)


def test_ray_class_card():
    assert ray_class_card(1, 3, 3) == 1  # F = Q(omega), a = (2)
    assert ray_class_card(1, 1, 1) == 1
    assert ray_class_card(2, 1, 1) == 2
    assert ray_class_card(2, 3, 6) == 4
    with pytest.raises(ValueError):
        ray_class_card(1, 2, 3)
    with pytest.raises(ValueError):
        ray_class_card(0, 1, 1)
