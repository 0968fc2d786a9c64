"""Polynomial arithmetic, the presentation format, and Hilbert series."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shimura_calc.polynomials import (
    GradedRingPresentation,
    Poly,
    graded_dimension,
    hilbert_series,
    load_presentation,
    parse_polynomial,
    parse_ring_presentation,
)

NAMES = ("x", "y")
X = Poly.variable(NAMES, "x")
Y = Poly.variable(NAMES, "y")


def small_polys():
    monos = st.tuples(st.integers(0, 3), st.integers(0, 3))
    coeff = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))
    return st.dictionaries(monos, coeff, max_size=4).map(
        lambda d: Poly(NAMES, d)
    )


def test_basic_arithmetic():
    assert (X + Y) ** 2 == X**2 + 2 * X * Y + Y**2
    assert (X - Y) * (X + Y) == X**2 - Y**2
    assert X * 0 == Poly(NAMES, {})
    assert (3 * X).coeffs == {(1, 0): Fraction(3)}
    assert Fraction(1, 2) * X + Fraction(1, 2) * X == X
    assert X**0 == 1


def test_views():
    p = X**2 * Y + 3 * Y**2
    assert p.degree_in("x") == 2
    assert p.degree_in("y") == 2
    assert p.coefficient_in("x", 2) == Y
    assert p.coefficient_in("x", 0) == 3 * Y**2
    assert p.constant_term == 0
    assert (p + 5).constant_term == 5
    assert p.homogeneous_weight({"x": 1, "y": 2}) == 4
    with pytest.raises(ValueError):
        (X + Y**2).homogeneous_weight({"x": 1, "y": 1})


def test_substitute_and_evaluate():
    p = X**2 + 3 * Y**2 + 3
    q = p.substitute({"x": -X, "y": Y + 1})
    assert q == X**2 + 3 * Y**2 + 6 * Y + 6
    assert p.evaluate({"x": 3, "y": Fraction(1, 2)}) == Fraction(51, 4)
    with pytest.raises(ValueError):
        p.substitute({"w": X})


@given(small_polys(), small_polys(), small_polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p - p == Poly(NAMES, {})


def test_parser():
    p = parse_polynomial("x^2 + 3*y^2 + 3", NAMES)
    assert p == X**2 + 3 * Y**2 + 3
    assert parse_polynomial("-x + 2", NAMES) == 2 - X
    assert parse_polynomial("(x + y)^2 - 2*x*y", NAMES) == X**2 + Y**2
    assert parse_polynomial("x*-y", NAMES) == -(X * Y)
    for bad in ("x +", "q", "x ^ y", "(x", "x)", "3.5", "x y"):
        with pytest.raises(ValueError):
            parse_polynomial(bad, NAMES)


def test_presentation_format():
    text = """
    # comment
    ring demo
    generator U 6
    generator V 4
    relation U^2 + V^3  # trailing comment
    """
    pres = parse_ring_presentation(text)
    assert pres.name == "demo"
    assert pres.generators == (("U", 6), ("V", 4))
    assert pres.relation_weights == (12,)
    for bad in (
        "generator U 2",  # no ring line
        "ring a",  # no generators
        "ring a\ngenerator U 0",  # bad weight
        "ring a\ngenerator U 2\nrelation U + 1",  # inhomogeneous
        "ring a\ngenerator U 2\nfrobnicate",  # unknown directive
    ):
        with pytest.raises(ValueError):
            parse_ring_presentation(bad)


def test_monomials_of_weight():
    pres = GradedRingPresentation("demo", (("U", 6), ("V", 4)))
    assert pres.monomials_of_weight(12) == [(0, 3), (2, 0)]
    assert pres.monomials_of_weight(5) == []
    assert pres.monomials_of_weight(0) == [(0, 0)]


def test_disc6_series():
    series = hilbert_series(load_presentation("disc6"), 22)
    assert [series[2 * t] for t in range(12)] == [1, 0, 1, 1, 1, 1, 3, 1, 3, 3, 3, 3]
    assert all(series[w] == 0 for w in range(23) if w % 2)


def test_disc14_quotient_series():
    series = hilbert_series(load_presentation("disc14_quotient"), 40)
    assert [series[2 * t] for t in range(1, 21)] == [1 + t // 4 for t in range(1, 21)]
    # free ring on weights 2 and 8: direct monomial count
    for t in range(21):
        assert series[2 * t] == sum(1 for b in range(t + 1) if (t - 4 * b) >= 0 and (t - 4 * b) % 1 == 0 and 4 * b <= t)


def test_disc10_invariants_series():
    # the relation is linear in the weight-12 generator, so the series
    # must agree with the free ring on weights 4 and 6
    series = hilbert_series(load_presentation("disc10_invariants"), 60)
    free = [
        sum(1 for a in range(16) for b in range(11) if 4 * a + 6 * b == w)
        for w in range(61)
    ]
    assert series == free


def test_disc10_cover_series():
    series = hilbert_series(load_presentation("disc10_cover"), 24)
    for w in range(25):
        if w % 2:
            assert series[w] == 0
            continue
        expect = w // 2 + 1  # monomials in two independent weight-2 forms
        if w >= 6:
            expect += (w - 6) // 2 + 1  # ... times the weight-6 form
        assert series[w] == expect


def test_load_presentation_errors():
    with pytest.raises(ValueError):
        load_presentation("nonexistent")


def test_rank_consistency_under_redundant_relations():
    # duplicating a relation must not change any graded dimension
    pres = load_presentation("disc6")
    doubled = GradedRingPresentation(
        pres.name, pres.generators, pres.relations + (2 * pres.relations[0],)
    )
    for w in range(0, 26, 2):
        assert graded_dimension(pres, w) == graded_dimension(doubled, w)
