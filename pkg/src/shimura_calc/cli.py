"""Command-line frontend: every computation as a subcommand.

All commands emit a single table in one of three formats (aligned text,
csv, json) chosen by --format; the json form follows the shipped table
schema and carries exactly the same cells.  Rational cells print as
"p/q" in text formats and as {"num", "den"} objects in json; no value is
ever a float.  Output is deterministic: the same argv produces the same
bytes.  Exit codes: 0 on success, 2 on input validation failure, 1 on an
internal assertion failure or a failed verification.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import acceptance
from .arith import (
    OO,
    field_splits_algebra,
    has_sqrt_in_Zp,
    hilbert_symbol,
    prime_factors,
    ramified_places,
    sort_places,
)
from .cmgeom import al_fixed_cm_fields, cm_point, intersection_primes
from .cohomss import (
    cyclic_cohomology,
    hfp_chart,
    page_turn,
    standard_assignments,
    tate_chart,
)
from .curvealg import (
    cover_genus,
    curve_signature,
    disc6_curve_ring,
    disc6_forms,
    disc10_curve_ring,
    disc10_deck_map,
    disc10_forms,
    disc10_relation_poly,
    disc10_sigma_substitution,
    moebius_substitute,
    verify_identity_mod_curve,
)
from .polynomials import Poly, hilbert_series, load_presentation
from .quadorders import QuadOrder, class_number, fundamental_decomposition, order_mass
from .traceformula import (
    al_trace,
    dimension,
    full_involution_set,
    hecke_trace,
    invariant_dimension,
    renormalized_al_trace,
    signed_involution,
    trace_table,
)

PLACEMENT_CHOICES = ("inside", "outside")


# ---------------------------------------------------------------------------
# output plumbing


def _cell_json(value):
    """Canonical JSON value for one table cell."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, str):
        return value
    raise AssertionError(f"unsupported cell {value!r}")


def _cell_text(value) -> str:
    if isinstance(value, dict):
        return f"{value['num']}/{value['den']}"
    return str(value)


def _payload(command: str, columns, rows) -> dict:
    return {
        "command": command,
        "columns": list(columns),
        "rows": [[_cell_json(c) for c in row] for row in rows],
    }


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    cells = [[_cell_text(c) for c in row] for row in payload["rows"]]
    header = payload["columns"]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [len(h) for h in header]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    for row in cells:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def _emit(args, command: str, columns, rows) -> int:
    text = _render(_payload(command, columns, rows), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _parse_place(text: str):
    if text == OO:
        return OO
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"place must be a prime or {OO!r}, got {text!r}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_hilbert(args) -> int:
    place = _parse_place(args.p)
    value = hilbert_symbol(args.a, args.b, place)
    return _emit(args, "hilbert", ["a", "b", "place", "symbol"],
                 [[args.a, args.b, place, value]])


def cmd_ramified(args) -> int:
    places = sort_places(ramified_places(args.a, args.b))
    return _emit(args, "ramified", ["place"], [[p] for p in places])


def cmd_splits(args) -> int:
    if args.disc is not None:
        ramified = set(prime_factors(args.disc))
    elif args.a is not None and args.b is not None:
        ramified = ramified_places(args.a, args.b)
    else:
        raise ValueError("give either --disc or both -a and -b")
    return _emit(args, "splits", ["d", "splits"],
                 [[args.d, field_splits_algebra(args.d, ramified)]])


def cmd_sqrtp(args) -> int:
    return _emit(args, "sqrtp", ["a", "p", "square"],
                 [[args.a, args.p, has_sqrt_in_Zp(args.a, args.p)]])


def cmd_classnum(args) -> int:
    return _emit(args, "classnum", ["d", "h"],
                 [[args.d, class_number(args.d)]])


def cmd_mass(args) -> int:
    d0, f = fundamental_decomposition(args.d)
    mass = order_mass(QuadOrder(d0, f))
    return _emit(args, "mass", ["d", "fundamental", "conductor", "mass"],
                 [[args.d, d0, f, mass]])


def cmd_intersect(args) -> int:
    report = intersection_primes(
        cm_point(args.x), cm_point(args.y), args.disc, margin=args.margin
    )
    return _emit(args, "intersect", ["prime"],
                 [[p] for p in sorted(report.primes)])


def cmd_alcm(args) -> int:
    fields = al_fixed_cm_fields(args.d, args.disc)
    return _emit(args, "alcm", ["field"], [[d] for d in fields])


def _single_trace(N: int, op: str, t: int, norm: str, p: int) -> int:
    if t == 0:
        return 1
    if op == "id":
        return hecke_trace(N, 1, 2 * t, norm)
    if op[:1] == "w" and op[1:].isdigit():
        return al_trace(N, int(op[1:]), 2 * t, norm)
    if op[:1] == "t" and op[1:].isdigit():
        return renormalized_al_trace(N, signed_involution(int(op[1:]), p), 2 * t)
    raise ValueError(f"unknown operator {op!r}")


def cmd_trace(args) -> int:
    value = _single_trace(args.disc, args.op, args.t, args.norm, args.p)
    return _emit(args, "trace", ["disc", "op", "t", "trace"],
                 [[args.disc, args.op, args.t, value]])


def cmd_trace_table(args) -> int:
    ops = [o for o in args.ops.split(",") if o]
    if not ops:
        raise ValueError("need at least one operator")
    rows = trace_table(args.disc, ops, args.tmax, args.norm)
    return _emit(args, "trace-table", ["t"] + ops, rows)


def cmd_dims(args) -> int:
    if args.quotient == "full":
        invs = full_involution_set(args.disc, args.p)
        rows = [[t, invariant_dimension(args.disc, 2 * t, invs)]
                for t in range(1, args.tmax + 1)]
    else:
        rows = [[t, dimension(args.disc, 2 * t)]
                for t in range(1, args.tmax + 1)]
    return _emit(args, "dims", ["t", "dim"], rows)


def _parse_involution(label: str, p: int):
    body, sign = label, None
    if ":" in label:
        body, stext = label.split(":", 1)
        if stext not in ("+1", "-1", "1"):
            raise ValueError(f"sign must be +1 or -1, got {stext!r}")
        sign = 1 if stext in ("+1", "1") else -1
    if body[:1] != "t" or not body[1:].isdigit():
        raise ValueError(f"unknown involution {label!r}")
    return signed_involution(int(body[1:]), p, sign)


def cmd_invdims(args) -> int:
    invs = [_parse_involution(s, args.p) for s in args.invs.split(",") if s]
    rows = [[t, invariant_dimension(args.disc, 2 * t, invs)]
            for t in range(1, args.tmax + 1)]
    return _emit(args, "invdims", ["t", "dim"], rows)


def cmd_hseries(args) -> int:
    series = hilbert_series(load_presentation(args.ring), args.wmax)
    rows = [[w, series[w]] for w in range(args.wmax + 1)]
    return _emit(args, "hseries", ["w", "dim"], rows)


def _disc6_relations():
    ring = disc6_curve_ring()
    forms = disc6_forms()
    U, V, W = forms["U"], forms["V"], forms["W"]
    yield "U^4 + 3V^6 + 3W^2 = 0", verify_identity_mod_curve(
        ring, U**4 + 3 * V**6 + 3 * W**2, 0)


def _disc10_relations():
    ring = disc10_curve_ring()
    forms = disc10_forms()
    U, V, W = forms["U"], forms["V"], forms["W"]
    rel = W**2 + 2 * (U**2 + V**2) * (U**2 + 2 * U * V + 5 * V**2) * (
        U**2 - 2 * U * V + 5 * V**2
    )
    yield "W^2 identity", verify_identity_mod_curve(ring, rel, 0)
    y = forms["y"]
    sigma = disc10_deck_map()
    yield "y invariant under the deck rotation", verify_identity_mod_curve(
        ring, moebius_substitute(y, "u", sigma), y)
    poly_rel = disc10_relation_poly()
    sub = disc10_sigma_substitution()
    yield "rotation preserves the relation", poly_rel.substitute(sub) == poly_rel
    names = poly_rel.names
    u, v = Poly.variable(names, "U"), Poly.variable(names, "V")
    cur = (u, v)
    for _ in range(3):
        cur = tuple(q.substitute(sub) for q in cur)
    nontrivial = (u.substitute(sub), v.substitute(sub)) != (u, v)
    yield "rotation has order 3 on U, V", cur == (u, v) and nontrivial


def cmd_verify_relation(args) -> int:
    battery = {"disc6": _disc6_relations, "disc10": _disc10_relations}
    rows = [[name, ok] for name, ok in battery[args.ring]()]
    code = _emit(args, "verify-relation", ["relation", "holds"], rows)
    if not all(row[1] for row in rows):
        raise AssertionError("a curve relation failed to verify")
    return code


def cmd_genus(args) -> int:
    genus, elliptic = curve_signature(args.disc)
    if args.cover_degree:
        ram = []
        for part in (args.ram or "").split(","):
            if not part:
                continue
            count, e = part.split(":", 1)
            ram.append((int(count), int(e)))
        g = cover_genus(genus, args.cover_degree, ram)
        return _emit(args, "genus",
                     ["disc", "genus", "cover_degree", "cover_genus"],
                     [[args.disc, genus, args.cover_degree, g]])
    points = " ".join(f"{order}:{count}" for order, count in elliptic)
    return _emit(args, "genus", ["disc", "genus", "elliptic"],
                 [[args.disc, genus, points]])


def _group_name(rank: int, torsion) -> str:
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    if torsion:
        assert set(torsion) == {3}
        k = len(torsion)
        parts.append("Z/3" if k == 1 else f"(Z/3)^{k}")
    return " x ".join(parts) if parts else "0"


def cmd_cohomology(args) -> int:
    rows = []
    for s in range(args.smax + 1):
        for w in range(0, args.wmax + 1, 2):
            g = cyclic_cohomology(s, w)
            if g.rank or g.torsion:
                rows.append([s, w, _group_name(g.rank, g.torsion)])
    return _emit(args, "cohomology", ["s", "w", "group"], rows)


def cmd_chart(args) -> int:
    from .chartio import chart_to_json, render_svg

    chart = hfp_chart() if args.kind == "hfp" else tate_chart()
    if not 2 <= args.page <= 10:
        raise ValueError("page must be between 2 and 10")
    while chart.page < args.page:
        chart = page_turn(chart, chart.page, standard_assignments(chart.page))
    if args.stems:
        lo, hi = (int(x) for x in args.stems.split(":", 1))
    else:
        lo, hi = (0, 48) if args.kind == "hfp" else (-48, 48)
    json_path = args.out + ".json"
    svg_path = args.out + ".svg"
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(chart_to_json(chart))
    render_svg(chart, svg_path, stems=(lo, hi))
    payload = _payload("chart", ["file"], [[json_path], [svg_path]])
    sys.stdout.write(_render(payload, args.format))
    return 0


def cmd_verify(args) -> int:
    results = acceptance.run(only=args.only, placement=args.eichler_placement)
    merged = [[r.id, r.status, f"{r.name}: {r.detail}"] for r in results]
    ok = all(r.passed for r in results)
    if args.format == "json":
        doc = {
            "ok": ok,
            "results": [
                {"id": i, "status": s, "detail": d} for i, s, d in merged
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _render(_payload("verify", ["criterion", "status", "detail"],
                                merged), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shimura-calc",
        description="Exact computations for the three small quaternionic curves.",
    )
    fmt_only = argparse.ArgumentParser(add_help=False)
    fmt_only.add_argument("--format", choices=("table", "csv", "json"),
                          default="table", help="output format")
    common = argparse.ArgumentParser(add_help=False, parents=[fmt_only])
    common.add_argument("--out", metavar="FILE", default=None,
                        help="write output to FILE instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", parents=[common],
                       help="Hilbert symbol (a, b) at a place")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("-p", required=True, help="prime or oo")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("ramified", parents=[common],
                       help="ramified places of the algebra (a, b)")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.set_defaults(func=cmd_ramified)

    p = sub.add_parser("splits", parents=[common],
                       help="does the field of discriminant d split the algebra")
    p.add_argument("-d", type=int, required=True,
                   help="negative field discriminant")
    p.add_argument("--disc", type=int, help="squarefree algebra discriminant")
    p.add_argument("-a", type=int, help="algebra parameter a")
    p.add_argument("-b", type=int, help="algebra parameter b")
    p.set_defaults(func=cmd_splits)

    p = sub.add_parser("sqrtp", parents=[common],
                       help="is the unit a a square in Z_p")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_sqrtp)

    p = sub.add_parser("classnum", parents=[common],
                       help="class number of the order of discriminant d")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_classnum)

    p = sub.add_parser("mass", parents=[common],
                       help="mass of the order of discriminant d")
    p.add_argument("-d", type=int, required=True)
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("intersect", parents=[common],
                       help="primes where two CM divisors may meet")
    p.add_argument("-x", type=int, required=True, help="first CM discriminant")
    p.add_argument("-y", type=int, required=True, help="second CM discriminant")
    p.add_argument("--disc", type=int, required=True, help="curve discriminant")
    p.add_argument("--margin", type=int, default=0,
                   help="widen the enumeration window")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("alcm", parents=[common],
                       help="CM fields fixed by the involution w_d")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(func=cmd_alcm)

    p = sub.add_parser("trace", parents=[common],
                       help="trace of one operator on weight-2t forms")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--op", required=True, help="id, w<d>, or renormalized t<d>")
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--norm", choices=("arithmetic", "geometric"),
                   default="geometric")
    p.add_argument("--p", type=int, default=3,
                   help="renormalization prime for t<d> operators")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("trace-table", parents=[common],
                       help="trace table over 0 <= t <= tmax")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--ops", required=True, help="comma list, e.g. id,w2,w3,w6")
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--norm", choices=("arithmetic", "geometric"),
                   default="geometric")
    p.set_defaults(func=cmd_trace_table)

    p = sub.add_parser("dims", parents=[common],
                       help="form dimensions, optionally on the full quotient")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--quotient", choices=("none", "full"), default="none")
    p.add_argument("--p", type=int, default=3,
                   help="renormalization prime for the quotient")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("invdims", parents=[common],
                       help="dimensions invariant under chosen involutions")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--invs", required=True,
                   help="comma list like t2,t5 (optional sign t6:-1)")
    p.add_argument("--tmax", type=int, required=True)
    p.add_argument("--p", type=int, default=3)
    p.set_defaults(func=cmd_invdims)

    p = sub.add_parser("hseries", parents=[common],
                       help="Hilbert series of a shipped or local .ring file")
    p.add_argument("--ring", required=True)
    p.add_argument("--wmax", type=int, required=True)
    p.set_defaults(func=cmd_hseries)

    p = sub.add_parser("verify-relation", parents=[common],
                       help="check the defining identities of a curve ring")
    p.add_argument("--ring", choices=("disc6", "disc10"), required=True)
    p.set_defaults(func=cmd_verify_relation)

    p = sub.add_parser("genus", parents=[common],
                       help="genus and elliptic points, or a cyclic cover genus")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--cover-degree", type=int, default=0)
    p.add_argument("--ram", help="ramification as count:e[,count:e...]")
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("cohomology", parents=[common],
                       help="cyclic cohomology groups of the cover action")
    p.add_argument("--wmax", type=int, required=True)
    p.add_argument("--smax", type=int, required=True)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("chart", parents=[fmt_only],
                       help="write a chart snapshot as .json and .svg")
    p.add_argument("--kind", choices=("hfp", "tate"), required=True)
    p.add_argument("--page", type=int, default=10)
    p.add_argument("--stems", help="stem range LO:HI for the drawing")
    p.add_argument("--out", required=True,
                   help="base path; .json and .svg are appended")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("verify", parents=[common],
                       help="run the acceptance suite")
    p.add_argument("--only", default=None,
                   help="run criteria whose id or name matches")
    p.add_argument("--eichler-placement", choices=PLACEMENT_CHOICES,
                   default="inside",
                   help="replay the local-symbol calibration")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
