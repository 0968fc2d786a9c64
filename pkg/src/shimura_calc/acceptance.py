"""Acceptance suite: recomputes the headline results and compares exactly.

Every criterion recomputes one family of frozen reference values from
scratch through the public modules and compares with zero tolerance; all
arithmetic is exact.  run() returns one PASS/FAIL record per criterion,
in order, and never raises: a mismatch or an internal error is reported
as a FAIL with the message as detail.

The `placement` knob replays the calibration of the local-symbol factor
in the trace formula: the shipped "inside" placement reproduces every
table, while "outside" visibly breaks the trace-table criterion.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, List, Optional

from .arith import OO, hilbert_symbol, prime_factors, ramified_places
from .cmgeom import cm_point, intersection_primes
from .cohomss import (
    bockstein_cube,
    cyclic_cohomology,
    hfp_chart,
    homotopy_ranks,
    named_form_vector,
    page_turn,
    run_standard_differentials,
    standard_assignments,
    tate_chart,
)
from .curvealg import (
    curve_signature,
    disc6_curve_ring,
    disc6_forms,
    disc10_curve_ring,
    disc10_deck_map,
    disc10_forms,
    disc10_relation_poly,
    disc10_sigma_substitution,
    moebius_substitute,
    riemann_roch_dim,
    verify_identity_mod_curve,
)
from .oracles import class_number_oracle, hilbert_oracle
from .polynomials import (
    Poly,
    hilbert_series,
    load_presentation,
    parse_ring_presentation,
)
from .quadorders import class_number, divisors
from .traceformula import (
    GEOMETRIC,
    al_trace,
    dimension,
    full_involution_set,
    hecke_trace,
    invariant_dimension,
    renormalized_al_trace,
    signed_involution,
    trace_table,
)


@dataclass(frozen=True)
class CriterionResult:
    id: str
    name: str
    status: str  # PASS or FAIL
    detail: str

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


# discriminant-6 geometric traces of id, w2, w3, w6 on weight-2t forms
DISC6_TABLE = [
    [0, 1, 1, 1, 1],
    [1, 0, 0, 0, 0],
    [2, 1, -4, -9, 36],
    [3, 1, 8, -27, -216],
    [4, 1, 16, 81, 1296],
    [5, 1, -32, 243, -7776],
    [6, 3, -64, 729, 46656],
    [7, 1, 128, -2187, -279936],
    [8, 3, 256, -6561, 1679616],
    [9, 3, -512, -19683, -10077696],
    [10, 3, -1024, 59049, 60466176],
    [11, 3, 2048, 177147, -362797056],
]

# F_3 pattern carried by every positive cohomology line: beta^i s6^c W^e
# with the even part annihilated by (3, s4, sd)
POSITIVE_LINE_RING = """
ring positive_lines
generator s6 6
generator W 6
relation W^2 + s6^2
"""


def _check(cond: bool, message: str) -> None:
    if not cond:
        raise AssertionError(message)


def crit_trace_table(placement: str) -> str:
    got = trace_table(6, ("id", "w2", "w3", "w6"), 11, GEOMETRIC, placement)
    _check(got == DISC6_TABLE, f"trace table differs: {got!r}")
    return "48 table entries reproduced"


def crit_disc14_traces(placement: str) -> str:
    checks = 0
    for t in range(2, 21):
        expect = t if t % 2 == 0 else t - 1
        _check(dimension(14, 2 * t) == expect, f"dim at t={t}")
        checks += 1
    for t in range(2, 14):
        w2 = (-1) ** t * 2 ** (t + 1) if t % 4 in (0, 1) else 0
        _check(al_trace(14, 2, 2 * t, GEOMETRIC, placement) == w2,
               f"w2 trace at t={t}")
        _check(al_trace(14, 7, 2 * t, GEOMETRIC, placement) == 0,
               f"w7 trace at t={t}")
        _check(al_trace(14, 14, 2 * t, GEOMETRIC, placement)
               == (-1) ** t * 2 * 14 ** t, f"w14 trace at t={t}")
        checks += 3
    _check(al_trace(14, 2, 2, GEOMETRIC, placement) == -2, "w2 at weight 2")
    _check(al_trace(14, 7, 2, GEOMETRIC, placement) == 7, "w7 at weight 2")
    _check(al_trace(14, 14, 2, GEOMETRIC, placement) == -14, "w14 at weight 2")
    t2 = signed_involution(2, 3)
    t7 = signed_involution(7, 3)
    t14 = signed_involution(14, 3)
    for inv in (t2, t7, t14):
        _check(renormalized_al_trace(14, inv, 2) == 1,
               f"renormalized t{inv.d} at weight 2")
        checks += 1
    for t in range(2, 14):
        expect = 2 if t % 4 in (0, 1) else 0
        _check(renormalized_al_trace(14, t2, 2 * t) == expect,
               f"renormalized t2 at t={t}")
        _check(renormalized_al_trace(14, t7, 2 * t) == 0,
               f"renormalized t7 at t={t}")
        _check(renormalized_al_trace(14, t14, 2 * t) == 2,
               f"renormalized t14 at t={t}")
        checks += 3
    return f"{checks + 3} trace values reproduced"


def crit_triple_route(placement: str) -> str:
    series6 = hilbert_series(load_presentation("disc6"), 40)
    series14q = hilbert_series(load_presentation("disc14_quotient"), 40)
    invs14 = full_involution_set(14, 3)
    for N in (6, 10, 14):
        genus, elliptic = curve_signature(N)
        for t in range(1, 21):
            tr = hecke_trace(N, 1, 2 * t, GEOMETRIC, placement)
            rr = riemann_roch_dim(genus, t, elliptic)
            _check(tr == rr, f"trace {tr} != Riemann-Roch {rr} at N={N} t={t}")
            if N == 6:
                ser = series6[2 * t]
            elif N == 10:
                # sigma-invariant part of the presented level-cover ring
                ser = cyclic_cohomology(0, 2 * t).rank
            else:
                # the presented ring is the full quotient: compare it with
                # the invariant dimension from the same trace formula
                ser = series14q[2 * t]
                tr = invariant_dimension(14, 2 * t, invs14)
            _check(tr == ser, f"series {ser} != dimension {tr} at N={N} t={t}")
    return "3 routes agree for N in (6, 10, 14), t <= 20"


def crit_invariant_dims(placement: str) -> str:
    invs14 = full_involution_set(14, 3)
    for t in range(1, 21):
        got = invariant_dimension(14, 2 * t, invs14)
        _check(got == 1 + t // 4, f"quotient dim {got} at t={t}")
    invs10 = full_involution_set(10, 3)
    series = hilbert_series(load_presentation("disc10_invariants"), 60)
    for t in range(1, 31):
        got = invariant_dimension(10, 2 * t, invs10)
        _check(got == series[2 * t], f"invariant dim {got} at t={t}")
    return "50 invariant dimensions reproduced"


def crit_intersections(placement: str) -> str:
    cases = [
        (6, -4, -3, set()),
        (6, -4, -24, set()),
        (6, -3, -24, set()),
        (14, -4, -8, set()),
        (14, -4, -56, set()),
        (14, -8, -56, set()),
        (10, -8, -20, set()),
        (10, -8, -40, set()),
        (10, -20, -40, set()),
        (10, -3, -40, {3}),
        (10, -3, -8, set()),
        (10, -3, -20, set()),
    ]
    for N, dx, dy, expect in cases:
        got = set(intersection_primes(cm_point(dx), cm_point(dy), N).primes)
        _check(got == expect,
               f"primes {sorted(got)} for ({dx}, {dy}) on discriminant {N}")
    return "12 CM pairs checked"


def crit_form_relations(placement: str) -> str:
    ring6 = disc6_curve_ring()
    f6 = disc6_forms()
    U, V, W = f6["U"], f6["V"], f6["W"]
    _check(verify_identity_mod_curve(ring6, U**4 + 3 * V**6 + 3 * W**2, 0),
           "weight-24 identity fails")
    ring10 = disc10_curve_ring()
    f10 = disc10_forms()
    U, V, W = f10["U"], f10["V"], f10["W"]
    rel = W**2 + 2 * (U**2 + V**2) * (U**2 + 2 * U * V + 5 * V**2) * (
        U**2 - 2 * U * V + 5 * V**2
    )
    _check(verify_identity_mod_curve(ring10, rel, 0), "W^2 identity fails")
    y = f10["y"]
    sigma = disc10_deck_map()
    _check(verify_identity_mod_curve(
        ring10, moebius_substitute(y, "u", sigma), y), "y is not invariant")
    poly_rel = disc10_relation_poly()
    sub = disc10_sigma_substitution()
    _check(poly_rel.substitute(sub) == poly_rel,
           "rotation does not preserve the relation")
    names = poly_rel.names
    u, v = Poly.variable(names, "U"), Poly.variable(names, "V")
    once = (u.substitute(sub), v.substitute(sub))
    _check(once != (u, v), "rotation acts trivially")
    cur = once
    for _ in range(2):
        cur = tuple(p.substitute(sub) for p in cur)
    _check(cur == (u, v), "rotation does not have order 3")
    return "6 identities verified"


def crit_cohomology(placement: str) -> str:
    zero_line = hilbert_series(load_presentation("disc10_zero_line"), 48)
    positive = hilbert_series(parse_ring_presentation(POSITIVE_LINE_RING), 48)
    cells = 0
    for w in range(0, 49, 2):
        for s in range(7):
            g = cyclic_cohomology(s, w)
            if s == 0:
                _check(g.rank == zero_line[w] and not g.torsion,
                       f"invariant rank at weight {w}")
            else:
                base = w if s % 2 == 0 else w - 2
                count = positive[base] if 0 <= base <= 48 else 0
                _check(g.rank == 0 and g.torsion == (3,) * count,
                       f"group at s={s}, weight {w}")
            cells += 1
    a1 = cyclic_cohomology(1, 2)
    beta = cyclic_cohomology(2, 0)
    _check(a1.rank == 0 and a1.torsion == (3,), "filtration-1 class")
    _check(beta.rank == 0 and beta.torsion == (3,), "filtration-2 class")
    return f"{cells} bidegrees match the presented pattern"


def crit_bockstein(placement: str) -> str:
    b = bockstein_cube(2, (1, 0))
    g = cyclic_cohomology(2, 6)
    _, s6 = named_form_vector("s6")
    neg = g.classify(tuple(-x for x in s6))
    pos = g.classify(s6)
    got = g.classify(b)
    _check(not g.is_zero_class(b), "cube of the generator vanishes")
    _check(got in (neg, pos), f"cube lands at {got}, not at +-s6")
    sign = "-" if got == neg else "+"
    return f"triple Bockstein of the degree-1 class is {sign}beta*s6"


@lru_cache(maxsize=None)
def _final_charts():
    return (run_standard_differentials(tate_chart()),
            run_standard_differentials(hfp_chart()))


def crit_spectral_sequence(placement: str) -> str:
    tate_e6 = page_turn(tate_chart(), 5, standard_assignments(5))
    for s in range(-14, 15):
        for t in range(-96, 97):
            if s % 2 == 0:
                expect = 2 if (t - 6 * s) % 36 == 0 else 0
            else:
                expect = 2 if (t - 6 * s - 10) % 36 == 0 else 0
            _check(tate_e6.dim(s, t) == expect,
                   f"periodic page dimension at ({s}, {t})")
    tate_final, hfp_final = _final_charts()
    for s in range(-14, 15):
        for t in range(-96, 97):
            _check(tate_final.dim(s, t) == 0,
                   f"class survives to the terminal page at ({s}, {t})")
    for (s, t), cell in hfp_final.cells.items():
        if cell.integral or s < 10 or t - s < 0 or abs(t) > 96:
            continue
        if hfp_final.in_margin(s, t):
            continue
        _check(cell.dim == 0, f"class above the vanishing line at ({s}, {t})")
    pi = homotopy_ranks(hfp_final, 0, 14)
    _check(pi[3]["torsion"] == ((1, 1),), f"stem 3 is {pi[3]!r}")
    _check(pi[10]["torsion"] == ((2, 2),), f"stem 10 is {pi[10]!r}")
    return "terminal pages, vanishing line and stems 3, 10 as expected"


def crit_hilbert_properties(placement: str) -> str:
    places = [2, 3, 5, 7, OO]
    pairs = 0
    for a in range(-12, 13):
        for b in range(-12, 13):
            if a == 0 or b == 0:
                continue
            for v in places:
                _check(hilbert_symbol(a, b, v) == hilbert_oracle(a, b, v),
                       f"symbol ({a}, {b}) at {v}")
            ram = ramified_places(a, b)
            _check(len(ram) % 2 == 0, f"odd ramified set for ({a}, {b})")
            prod = 1
            for v in ram:
                prod *= hilbert_symbol(a, b, v)
            _check(prod == 1, f"reciprocity fails for ({a}, {b})")
            pairs += 1
    return f"{pairs} pairs against the oracle, reciprocity included"


def crit_class_numbers(placement: str) -> str:
    count = 0
    for d in range(-1000, 0):
        if d % 4 not in (0, 1):
            continue
        _check(class_number(d) == class_number_oracle(d),
               f"class number at {d}")
        count += 1
    return f"{count} discriminants against the reduction oracle"


def crit_trace_integrality(placement: str) -> str:
    count = 0
    for N in (6, 10, 14):
        for n in [1] + [d for d in divisors(N) if d > 1]:
            for t in range(1, 16):
                for norm in ("arithmetic", "geometric"):
                    value = hecke_trace(N, n, 2 * t, norm, placement)
                    _check(isinstance(value, int), f"trace at N={N} n={n}")
                    count += 1
    return f"{count} grid traces integral"


def crit_chart_laws(placement: str) -> str:
    for maker in (tate_chart, hfp_chart):
        chart = maker()
        pages = [chart]
        while pages[-1].page < 10:
            cur = pages[-1]
            pages.append(page_turn(cur, cur.page, standard_assignments(cur.page)))
        for earlier, later in zip(pages, pages[1:]):
            for (s, t), cell in later.cells.items():
                _check(cell.dim <= earlier.dim(s, t),
                       f"rank grows at ({s}, {t}) page {later.page}")
    # d o d = 0 holds by construction: turning each page with the shipped
    # assignments validates the cycle check cell by cell, and a violation
    # raises instead of producing a chart.
    return "10 pages per chart: ranks monotone, differentials square to zero"


CRITERIA = (
    ("C1", "disc6-geometric-trace-table", crit_trace_table),
    ("C2", "disc14-trace-family", crit_disc14_traces),
    ("C3", "dimension-triple-route", crit_triple_route),
    ("C4", "invariant-dimension-series", crit_invariant_dims),
    ("C5", "cm-intersection-exclusions", crit_intersections),
    ("C6", "curve-relation-identities", crit_form_relations),
    ("C7", "cyclic-cohomology-pattern", crit_cohomology),
    ("C8", "bockstein-cube-value", crit_bockstein),
    ("C9", "spectral-sequence-window", crit_spectral_sequence),
    ("C10a", "hilbert-reciprocity-oracle", crit_hilbert_properties),
    ("C10b", "class-number-oracle", crit_class_numbers),
    ("C10c", "trace-integrality-grid", crit_trace_integrality),
    ("C10d", "chart-page-laws", crit_chart_laws),
)


def run(only: Optional[str] = None,
        placement: str = "inside") -> List[CriterionResult]:
    """Run the (filtered) criteria; never raises.

    `only` selects by exact id when one matches, else by substring of the
    id or name.
    """
    needle = (only or "").lower()
    selected = list(CRITERIA)
    if needle:
        selected = [c for c in CRITERIA if c[0].lower() == needle]
        if not selected:
            selected = [c for c in CRITERIA
                        if needle in c[0].lower() or needle in c[1].lower()]
    results = []
    for cid, name, func in selected:
        try:
            detail = func(placement)
            results.append(CriterionResult(cid, name, "PASS", detail))
        except Exception as exc:  # noqa: BLE001 - reported, not suppressed
            results.append(CriterionResult(cid, name, "FAIL", str(exc)))
    return results
