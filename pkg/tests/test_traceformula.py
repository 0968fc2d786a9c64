"""Trace formula against the published tables and closed forms."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shimura_calc.quadorders import QuadOrder, divisors
from shimura_calc.traceformula import (
    ARITHMETIC,
    GEOMETRIC,
    SignedInvolution,
    al_trace,
    al_trace_closed,
    dimension,
    eichler_symbol,
    full_involution_set,
    hecke_trace,
    invariant_dimension,
    renormalized_al_trace,
    signed_involution,
    weight_factor,
)

# geometric traces on kappa^t for t = 1..11 (the t = 0 column is the
# one-dimensional space of constants, handled at the table layer)
DISC6_ROWS = {
    1: [0, 1, 1, 1, 1, 3, 1, 3, 3, 3, 3],
    2: [0, -4, 8, 16, -32, -64, 128, 256, -512, -1024, 2048],
    3: [0, -9, -27, 81, 243, 729, -2187, -6561, -19683, 59049, 177147],
    6: [0, 36, -216, 1296, -7776, 46656, -279936, 1679616, -10077696,
        60466176, -362797056],
}


def test_weight_factor():
    assert weight_factor(0, 1, 4) == -1
    assert weight_factor(0, 6, 4) == -6
    assert weight_factor(1, 1, 4) == 0
    for t, n in [(0, 1), (1, 3), (-2, 7)]:
        assert weight_factor(t, n, 2) == 1
    with pytest.raises(ValueError):
        weight_factor(2, 1, 4)
    with pytest.raises(ValueError):
        weight_factor(0, 1, 3)


@given(st.integers(1, 30), st.integers(1, 12))
def test_weight_factor_trace_zero(n, j):
    # for X^2 + n the odd-index values alternate as (-n)^j
    assert weight_factor(0, n, 2 * j + 2) == (-n) ** j


def test_eichler_symbol():
    assert eichler_symbol(QuadOrder(-7, 2), 2) == 1  # conductor rule
    assert eichler_symbol(QuadOrder(-3, 1), 3) == 0
    assert eichler_symbol(QuadOrder(-3, 1), 2) == -1
    assert eichler_symbol(QuadOrder(-4, 1), 5) == 1


def test_disc6_table():
    for n, row in DISC6_ROWS.items():
        got = [hecke_trace(6, n, 2 * t, GEOMETRIC) for t in range(1, 12)]
        assert got == row, n


def test_dimensions_frozen():
    assert [dimension(6, 2 * t) for t in range(1, 12)] == DISC6_ROWS[1]
    assert dimension(6, 12) == 3
    assert dimension(14, 2) == 1  # genus of the discriminant-14 curve
    assert dimension(10, 2) == 0
    assert [dimension(14, 2 * t) for t in range(2, 12)] == [
        t if t % 2 == 0 else t - 1 for t in range(2, 12)
    ]


def test_disc14_al_traces():
    assert al_trace(14, 2, 2) == -2
    assert al_trace(14, 7, 2) == 7
    assert al_trace(14, 14, 2) == -14
    for t in range(2, 12):
        expect_w2 = (-1) ** t * 2 ** (t + 1) if t % 4 in (0, 1) else 0
        assert al_trace(14, 2, 2 * t) == expect_w2
        assert al_trace(14, 7, 2 * t) == 0
        assert al_trace(14, 14, 2 * t) == (-1) ** t * 2 * 14**t


def test_renormalization_signs_at_3():
    assert signed_involution(2, 3).sign == -1
    assert signed_involution(7, 3).sign == 1
    assert signed_involution(14, 3).sign == -1
    assert [i.sign for i in full_involution_set(10, 3)] == [-1, -1, 1]
    with pytest.raises(ValueError):
        SignedInvolution(2, 1, 3)  # +2 is not a square in Z_3
    with pytest.raises(ValueError):
        signed_involution(6, 5)  # both signs work at 5: must be explicit
    assert signed_involution(6, 5, sign=-1).sign == -1


def test_disc14_renormalized_traces():
    t2 = signed_involution(2, 3)
    t7 = signed_involution(7, 3)
    t14 = signed_involution(14, 3)
    for inv in (t2, t7, t14):
        assert renormalized_al_trace(14, inv, 2) == 1
    for t in range(2, 14):
        expect = 2 if t % 4 in (0, 1) else 0
        assert renormalized_al_trace(14, t2, 2 * t) == expect
        assert renormalized_al_trace(14, t7, 2 * t) == 0
        assert renormalized_al_trace(14, t14, 2 * t) == 2


def test_disc14_invariant_dimension():
    invs = full_involution_set(14, 3)
    for t in range(1, 21):
        assert invariant_dimension(14, 2 * t, invs) == 1 + t // 4


def test_disc6_t6_invariants_are_free_on_two_generators():
    # the fixed subring of t_6 at p=5 (sign -1) has the series of a free
    # polynomial ring on generators of weights 6 and 4
    inv = [signed_involution(6, 5, sign=-1)]
    for t in range(1, 16):
        expect = sum(
            1 for a in range(t + 1) for b in range(t + 1) if 6 * a + 4 * b == 2 * t
        )
        assert invariant_dimension(6, 2 * t, inv) == expect


def test_invariant_dimension_group_checks():
    assert invariant_dimension(14, 8, []) == dimension(14, 8)
    t2 = signed_involution(2, 3)
    t7 = signed_involution(7, 3)
    with pytest.raises(ValueError):
        invariant_dimension(14, 8, [t2, t7])  # missing t_14: not closed
    with pytest.raises(ValueError):
        invariant_dimension(14, 8, [t2, SignedInvolution(2, -1, 5)])
    bad14 = SignedInvolution(14, 1, 5)  # wrong sign product
    with pytest.raises(ValueError):
        invariant_dimension(
            14, 8, [SignedInvolution(2, -1, 5), SignedInvolution(7, -1, 5), bad14]
        )


def test_closed_al_form():
    for N in (6, 10, 14):
        for n in divisors(N):
            if n <= 3:
                continue
            for k in range(2, 22, 2):
                assert al_trace(N, n, k) == al_trace_closed(N, n, k)


def test_outside_placement_fails_calibration():
    # the outside reading of the local factors cannot reproduce the
    # published k=2 Atkin-Lehner traces
    assert al_trace(14, 7, 2, placement="outside") != 7
    assert al_trace(6, 3, 8, placement="outside") != al_trace(6, 3, 8)


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from([6, 10, 14]),
    st.integers(1, 20),
    st.integers(1, 12),
)
def test_geometric_is_n_times_arithmetic(N, n, t):
    k = 2 * t
    assert hecke_trace(N, n, k, GEOMETRIC) == n * hecke_trace(N, n, k, ARITHMETIC)


def test_validation():
    with pytest.raises(ValueError):
        hecke_trace(12, 1, 4)
    with pytest.raises(ValueError):
        hecke_trace(6, 0, 4)
    with pytest.raises(ValueError):
        hecke_trace(6, 1, 5)
    with pytest.raises(ValueError):
        hecke_trace(6, 1, 4, normalization="projective")
    with pytest.raises(ValueError):
        al_trace(6, 5, 4)
    with pytest.raises(ValueError):
        al_trace_closed(6, 2, 4)
