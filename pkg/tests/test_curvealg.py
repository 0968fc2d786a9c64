"""Curve models: Moebius maps, form identities, dimension counts."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shimura_calc.arith import OO
from shimura_calc.curvealg import (
    MeromorphicForm,
    MoebiusMap,
    Poly,
    PolyQuotientRing,
    QuadFieldElem,
    ReductionRule,
    cover_genus,
    disc6_curve_ring,
    disc6_forms,
    disc10_curve_ring,
    disc10_deck_map,
    disc10_forms,
    disc10_relation_poly,
    disc10_sigma_substitution,
    disc10_supersingular_rhs,
    moebius_from_three_points,
    moebius_substitute,
    riemann_roch_dim,
    serre_h1_dim,
    supersingular_split_check,
    verify_identity_mod_curve,
)
from shimura_calc.polynomials import parse_polynomial
from shimura_calc.traceformula import dimension


def q(a, b=0, d=-3):
    return QuadFieldElem(Fraction(a), Fraction(b), d)


def test_quad_field_arithmetic():
    root = q(0, 1)
    assert root * root == -3
    assert (1 + root) * (1 - root) == 4
    assert (1 + root) / (1 - root) == q(Fraction(-1, 2), Fraction(1, 2))
    assert q(2, 1).norm() == 7
    assert 1 / q(2, 1) == q(Fraction(2, 7), Fraction(-1, 7))
    with pytest.raises(ValueError):
        QuadFieldElem(1, 1, 4)  # not square-free
    with pytest.raises(ValueError):
        q(1, 1) + QuadFieldElem(1, 1, -1)  # mixed fields
    with pytest.raises(ZeroDivisionError):
        QuadFieldElem(1, 1, 1 * -1) / QuadFieldElem(0, 0, -1)


def test_moebius_identity_and_evaluation():
    ident = moebius_from_three_points((0, 1, OO), (0, 1, OO))
    assert ident.is_scalar()
    m = moebius_from_three_points((1, OO, -1), (OO, -1, 1))
    assert m(1) == OO and m(OO) == -1 and m(-1) == 1
    # the deck transformation u -> (3+u)/(1-u)
    assert m.projectively_equal(disc10_deck_map())
    assert m(0) == 3
    assert m.order() == 3
    q2, q1, q0 = m.fixed_quadratic()
    assert q1 / q2 == 0 and q0 / q2 == 3  # u^2 + 3 = 0


def test_moebius_rejects_coincident_points():
    with pytest.raises(ValueError):
        moebius_from_three_points((0, 0, 1), (0, 1, OO))
    with pytest.raises(ValueError):
        moebius_from_three_points((0, 1, OO), (2, OO, 2))


def test_moebius_over_quadratic_field():
    root = q(0, 1)  # sqrt(-3)
    m = moebius_from_three_points((root, 0, OO), (0, 1, OO))
    assert m(root) == 0 and m(0) == 1 and m(OO) == OO
    assert m(-root) == 2


points = st.one_of(
    st.just(OO),
    st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3)),
)


@given(
    st.tuples(points, points, points).filter(lambda t: len(set(t)) == 3),
    st.tuples(points, points, points).filter(lambda t: len(set(t)) == 3),
)
def test_moebius_three_point_property(src, dst):
    m = moebius_from_three_points(src, dst)
    for s, t in zip(src, dst):
        got = m(s)
        assert got == t or (got == OO and t == OO)
    back = moebius_from_three_points(dst, src)
    assert back.compose(m).is_scalar()


def test_disc6_relation():
    ring = disc6_curve_ring()
    forms = disc6_forms()
    U, V, W = forms["U"], forms["V"], forms["W"]
    assert verify_identity_mod_curve(ring, U**4 + 3 * V**6 + 3 * W**2, 0)
    assert verify_identity_mod_curve(ring, U**4, -3 * V**6 - 3 * W**2)
    assert not verify_identity_mod_curve(ring, U**4 + 3 * V**6 + 2 * W**2, 0)


def test_denominator_in_ideal_rejected():
    ring = disc6_curve_ring()
    curve = parse_polynomial("x^2 + 3*y^2 + 3", ("x", "y"))
    one = Poly.const(("x", "y"), 1)
    with pytest.raises(ValueError):
        verify_identity_mod_curve(ring, MeromorphicForm(one, curve, 0), 0)


def test_mixed_dx_exponent_rejected():
    ring = disc6_curve_ring()
    forms = disc6_forms()
    with pytest.raises(ValueError):
        verify_identity_mod_curve(ring, forms["U"], forms["V"])
    with pytest.raises(ValueError):
        forms["U"] + forms["V"]


def test_disc10_relation_and_normalization():
    ring = disc10_curve_ring()
    forms = disc10_forms()
    U, V, W = forms["U"], forms["V"], forms["W"]
    rel = W**2 + 2 * (U**2 + V**2) * (U**2 + 2 * U * V + 5 * V**2) * (
        U**2 - 2 * U * V + 5 * V**2
    )
    assert verify_identity_mod_curve(ring, rel, 0)
    # without the factor 2 in the weight-6 denominator the identity fails
    bad_w = disc10_forms(half_w=False)["W"]
    bad = bad_w**2 + 2 * (U**2 + V**2) * (U**2 + 2 * U * V + 5 * V**2) * (
        U**2 - 2 * U * V + 5 * V**2
    )
    assert not verify_identity_mod_curve(ring, bad, 0)


def test_y_is_deck_invariant():
    ring = disc10_curve_ring()
    y = disc10_forms()["y"]
    sigma = disc10_deck_map()
    assert verify_identity_mod_curve(ring, moebius_substitute(y, "u", sigma), y)
    # a non-invariant function fails
    names = ("u", "z")
    u = MeromorphicForm(Poly.variable(names, "u"), Poly.const(names, 1), 0)
    assert not verify_identity_mod_curve(ring, moebius_substitute(u, "u", sigma), u)


def test_sigma_on_forms():
    rel = disc10_relation_poly()
    sub = disc10_sigma_substitution()
    assert rel.substitute(sub) == rel
    names = rel.names
    u, v = Poly.variable(names, "U"), Poly.variable(names, "V")
    cur = (u, v)
    for _ in range(3):
        cur = tuple(p.substitute(sub) for p in cur)
    assert cur == (u, v)
    once = (u.substitute(sub), v.substitute(sub))
    assert once != (u, v)


def test_reduction_rule_validation():
    names = ("x", "y")
    one = Poly.const(names, 1)
    x = Poly.variable(names, "x")
    with pytest.raises(ValueError):
        ReductionRule("x", 2, Poly(names, {}), one)
    with pytest.raises(ValueError):
        ReductionRule("x", 2, x, one)  # lead involves the variable
    with pytest.raises(ValueError):
        ReductionRule("x", 1, one, x)  # tail degree too big
    ring = PolyQuotientRing(names, [ReductionRule("x", 2, one, -one)])
    assert ring.reduce(x**5) == x  # x^2 = -1, so x^5 = x
    assert ring.reduce(x**3) == -x
    assert ring.is_zero(x**4 - 1)


def test_riemann_roch_dimensions():
    assert riemann_roch_dim(0, 6, [(2, 2), (3, 2)]) == 3
    assert riemann_roch_dim(0, 0, [(2, 2), (3, 2)]) == 1
    assert riemann_roch_dim(2, 1, []) == 2
    assert riemann_roch_dim(1, 1, [(2, 2)]) == 1
    disc6 = [riemann_roch_dim(0, t, [(2, 2), (3, 2)]) for t in range(12)]
    assert disc6 == [1, 0, 1, 1, 1, 1, 3, 1, 3, 3, 3, 3]
    with pytest.raises(ValueError):
        riemann_roch_dim(3, 1, [])
    with pytest.raises(ValueError):
        riemann_roch_dim(1, 2, [])  # flat degree-0 twist, not supported
    with pytest.raises(ValueError):
        riemann_roch_dim(0, 2, [(1, 1)])


@given(st.sampled_from([6, 10, 14]), st.integers(1, 20))
def test_riemann_roch_matches_trace_dimension(N, t):
    elliptic = {6: (0, [(2, 2), (3, 2)]), 10: (0, [(3, 4)]), 14: (1, [(2, 2)])}
    g, points = elliptic[N]
    assert riemann_roch_dim(g, t, points) == dimension(N, 2 * t)


def test_serre_duality_dimensions():
    assert serre_h1_dim(0, 1, [(2, 2), (3, 2)]) == 1
    assert serre_h1_dim(0, 2, [(2, 2), (3, 2)]) == 0
    assert serre_h1_dim(0, 3, [(2, 2), (3, 2)]) == 0
    assert serre_h1_dim(1, 4, [(2, 2)]) == 0
    assert serre_h1_dim(2, 3, []) == 0


def test_cover_genus():
    # degree-6 cyclic cover: six points of local degree 2 over the two
    # order-2 elliptic points, four of local degree 3 over the order-3 ones
    assert cover_genus(0, 6, [(6, 2), (4, 3)]) == 2
    assert cover_genus(0, 3, [(4, 3)]) == 2
    for g in (0, 1, 2, 3):
        assert cover_genus(g, 1, []) == g
    with pytest.raises(ValueError):
        cover_genus(0, 2, [(1, 2)])  # odd total ramification
    with pytest.raises(ValueError):
        cover_genus(0, 2, [])  # unramified double cover of P^1: genus -1


def test_supersingular_split_check():
    rhs = disc10_supersingular_rhs()
    assert rhs.constant_term == -50
    assert supersingular_split_check(rhs)
    assert not supersingular_split_check(Poly.const(("u",), 3))
    assert not supersingular_split_check(Poly.const(("u",), -1))
    assert not supersingular_split_check(Poly.const(("u",), 0))
