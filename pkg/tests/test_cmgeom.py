"""CM intersection exclusions and Atkin-Lehner fixed-point fields."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shimura_calc.arith import OO, prime_factors, squarefree_part
from shimura_calc.cmgeom import (
    CMPoint,
    al_fixed_cm_fields,
    check_curve_discriminant,
    intersection_primes,
)

# CM data of the divisors appearing on the three curves
ELLIPTIC_I = CMPoint(0, 1)  # d = -4
ELLIPTIC_OMEGA = CMPoint(1, 1)  # d = -3
W6_FIXED = CMPoint(0, 6)  # d = -24
W2_FIXED = CMPoint(0, 2)  # d = -8
W5_FIXED = CMPoint(0, 5)  # d = -20
W10_FIXED = CMPoint(0, 10)  # d = -40
W14_FIXED = CMPoint(0, 14)  # d = -56


def test_disc6_pairwise_excluded():
    for x, y in [
        (ELLIPTIC_I, ELLIPTIC_OMEGA),
        (ELLIPTIC_I, W6_FIXED),
        (ELLIPTIC_OMEGA, W6_FIXED),
    ]:
        assert intersection_primes(x, y, 6).primes == frozenset()


def test_disc14_pairwise_excluded():
    for x, y in [
        (ELLIPTIC_I, W2_FIXED),
        (ELLIPTIC_I, W14_FIXED),
        (W2_FIXED, W14_FIXED),
    ]:
        assert intersection_primes(x, y, 14).primes == frozenset()


def test_disc10_exclusions_and_the_prime_3():
    empty_pairs = [
        (W2_FIXED, W5_FIXED),
        (W2_FIXED, W10_FIXED),
        (W5_FIXED, W10_FIXED),
        (ELLIPTIC_OMEGA, W2_FIXED),
        (ELLIPTIC_OMEGA, W5_FIXED),
    ]
    for x, y in empty_pairs:
        assert intersection_primes(x, y, 10).primes == frozenset()
    report = intersection_primes(ELLIPTIC_OMEGA, W10_FIXED, 10)
    assert report.primes == frozenset({3})
    for m, ram in report.witnesses[3]:
        assert ram == {2, 3, 5, OO}


def test_rejects_isomorphic_fields():
    with pytest.raises(ValueError):
        intersection_primes(CMPoint(0, 1), CMPoint(0, 4), 6)
    with pytest.raises(ValueError):
        intersection_primes(CMPoint(1, 1), CMPoint(3, 3), 6)


def test_level_validation():
    assert check_curve_discriminant(1) == []
    assert check_curve_discriminant(6) == [2, 3]
    for bad in (0, 12, 30, 2):
        with pytest.raises(ValueError):
            check_curve_discriminant(bad)
    with pytest.raises(ValueError):
        CMPoint(2, 1)


cm_points = (
    st.tuples(st.integers(-6, 6), st.integers(1, 40))
    .filter(lambda tn: tn[0] * tn[0] - 4 * tn[1] < 0)
    .map(lambda tn: CMPoint(*tn))
)


@settings(max_examples=60, deadline=None)
@given(cm_points, cm_points, st.sampled_from([6, 10, 14]))
def test_symmetry_and_witness_shape(x, y, N):
    if squarefree_part(x.disc) == squarefree_part(y.disc):
        return
    fwd = intersection_primes(x, y, N)
    bwd = intersection_primes(y, x, N)
    assert fwd.primes == bwd.primes
    assert not fwd.clashes  # even prime count makes a clash impossible
    for p, wits in fwd.witnesses.items():
        assert N % p
        for m, ram in wits:
            assert OO in ram and len(ram) % 2 == 0
            assert ram == frozenset(prime_factors(p * N)) | {OO}


@settings(max_examples=40, deadline=None)
@given(cm_points, cm_points, st.sampled_from([6, 10, 14]))
def test_enumeration_bound_exhaustive(x, y, N):
    if squarefree_part(x.disc) == squarefree_part(y.disc):
        return
    assert intersection_primes(x, y, N) == intersection_primes(x, y, N, margin=10)


def test_al_fixed_cm_fields_frozen():
    assert al_fixed_cm_fields(2, 6) == [-4, -8]
    assert al_fixed_cm_fields(3, 6) == [-3]
    assert al_fixed_cm_fields(6, 6) == [-24]
    assert al_fixed_cm_fields(2, 14) == [-4, -8]
    assert al_fixed_cm_fields(7, 14) == [-7]
    assert al_fixed_cm_fields(14, 14) == [-56]
    assert al_fixed_cm_fields(2, 10) == [-4, -8]
    assert al_fixed_cm_fields(5, 10) == [-20]
    assert al_fixed_cm_fields(10, 10) == [-40]
    with pytest.raises(ValueError):
        al_fixed_cm_fields(4, 6)
    with pytest.raises(ValueError):
        al_fixed_cm_fields(1, 6)
