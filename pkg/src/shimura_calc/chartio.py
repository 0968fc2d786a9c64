"""Serialization and rendering for bigraded charts.

JSON snapshots follow the shipped `chart.schema.json`: the current page, the
nonzero cells inside the reporting window with their basis names, and the
page differentials expressed in those bases.  Renderers use the Adams
convention, horizontal position t - s and vertical position s, one dot per
F_3 dimension, with lines of slope 1/3 for multiplication by the filtration-1
class of internal degree 4.
"""

import json
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .cohomss import (
    BigradedChart,
    Monomial,
    _derivation,
    _normalize_term,
    standard_assignments,
)

Vector = Tuple[int, ...]


def _solve_f3(columns: Sequence[Vector], target: Sequence[int]):
    """Solve sum x_j columns[j] = target over F_3; None when inconsistent."""
    w = len(target)
    n = len(columns)
    mat = [[columns[j][i] % 3 for j in range(n)] + [int(target[i]) % 3]
           for i in range(w)]
    pivots = []
    row = 0
    for col in range(n):
        sel = next((rr for rr in range(row, w) if mat[rr][col] % 3), None)
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        inv = 1 if mat[row][col] % 3 == 1 else 2
        mat[row] = [(x * inv) % 3 for x in mat[row]]
        for rr in range(w):
            if rr != row and mat[rr][col] % 3:
                f = mat[rr][col]
                mat[rr] = [(a - f * b) % 3 for a, b in zip(mat[rr], mat[row])]
        pivots.append((row, col))
        row += 1
        if row == w:
            break
    for rr in range(w):
        if mat[rr][n] % 3 and all(mat[rr][j] % 3 == 0 for j in range(n)):
            return None
    sol = [0] * n
    for rr, cc in pivots:
        sol[cc] = mat[rr][n]
    return sol


def _quotient_coordinates(value: Sequence[int], reps: Sequence[Vector],
                          boundary: Sequence[Vector]) -> Optional[Tuple[int, ...]]:
    """Coordinates of a lattice vector over chosen reps, modulo boundary.

    Returns None when the vector does not lie in the span of reps and
    boundary rows.
    """
    sol = _solve_f3(list(reps) + list(boundary), value)
    if sol is None:
        return None
    return tuple(sol[: len(reps)])


def _alpha1_image(mono: Monomial) -> Optional[Monomial]:
    """Monomial image under multiplication by the filtration-1 generator."""
    raised = list(mono)
    raised[5] += 1
    norm, coeff = _normalize_term(raised, 1)
    if norm is None or coeff % 3 == 0:
        return None
    return norm


def _report_cells(chart: BigradedChart):
    for key in sorted(chart.cells):
        cell = chart.cells[key]
        if chart.in_margin(*key) or cell.dim == 0:
            continue
        yield key, cell


def chart_to_dict(chart: BigradedChart,
                  assignments: Optional[Mapping[str, Mapping[Monomial, int]]] = None,
                  ) -> Dict[str, object]:
    """Snapshot of the chart with the differentials of its current page."""
    if assignments is None:
        assignments = standard_assignments(chart.page)
    deriv = _derivation(assignments)
    cells = []
    diffs = []
    for (s, t), cell in _report_cells(chart):
        names = list(cell.basis_names())
        cells.append({"s": s, "t": t, "dim": cell.dim, "basis": names})
        tkey = (s + chart.page, t + chart.page - 1)
        tcell = chart.cells.get(tkey)
        if tcell is None or chart.in_margin(*tkey) or tcell.dim == 0:
            continue
        treps = tcell.quotient_vectors()
        for i, rep in enumerate(cell.quotient_vectors()):
            acc: Dict[Monomial, int] = {}
            for k, coeff in enumerate(rep):
                if coeff % 3 == 0:
                    continue
                for mono, c in deriv(cell.lattice[k]).items():
                    acc[mono] = (acc.get(mono, 0) + coeff * c) % 3
            vec = [0] * len(tcell.lattice)
            seen = False
            for mono, c in acc.items():
                if c % 3 and mono in tcell.lattice:
                    vec[tcell.lattice.index(mono)] = c % 3
                    seen = True
            if not seen:
                continue
            coords = _quotient_coordinates(vec, treps, tcell.boundary)
            if coords is None or not any(coords):
                continue
            src = [0] * cell.dim
            src[i] = 1
            diffs.append({"from": [s, t, src], "to": [tkey[0], tkey[1], list(coords)]})
    return {"page": chart.page, "cells": cells, "diffs": diffs}


def chart_to_json(chart: BigradedChart, **kwargs) -> str:
    return json.dumps(chart_to_dict(chart, **kwargs), indent=2) + "\n"


def render_ascii(chart: BigradedChart,
                 stems: Tuple[int, int] = (0, 48)) -> str:
    """Plain-text dot chart over the given stem range."""
    lo, hi = stems
    if lo > hi:
        raise ValueError("empty stem range")
    rows = {}
    s_values = set()
    for (s, t), cell in _report_cells(chart):
        x = t - s
        if lo <= x <= hi:
            rows[(s, x)] = cell.dim
            s_values.add(s)
    if not s_values:
        s_values = {0}
    out_lines = []
    for s in sorted(s_values, reverse=True):
        line = []
        for x in range(lo, hi + 1):
            d = rows.get((s, x), 0)
            line.append("." if d == 0 else (str(d) if d < 10 else "+"))
        out_lines.append(f"{s:>4} | " + " ".join(line))
    ruler = []
    for x in range(lo, hi + 1):
        ruler.append("|" if x % 6 == 0 else " ")
    out_lines.append("     + " + " ".join(ruler))
    labels = {x: str(x) for x in range(lo, hi + 1) if x % 6 == 0}
    # leave room so the rightmost label is not cut off
    label_line = [" "] * (2 * (hi - lo) + 8)
    for x, text in labels.items():
        pos = 2 * (x - lo)
        for k, ch in enumerate(text):
            if pos + k < len(label_line):
                label_line[pos + k] = ch
    out_lines.append("       " + "".join(label_line).rstrip())
    return "\n".join(out_lines) + "\n"


def render_svg(chart: BigradedChart, path: str,
               stems: Tuple[int, int] = (0, 48)) -> str:
    """Draw the chart to an SVG file and return the path."""
    import matplotlib
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    lo, hi = stems
    if lo > hi:
        raise ValueError("empty stem range")
    dots = []          # (x, y, horizontal offset, integral)
    lines = []         # ((x1, y1), (x2, y2))
    s_seen = [0]
    for (s, t), cell in _report_cells(chart):
        x = t - s
        if not lo <= x <= hi:
            continue
        s_seen.append(s)
        for k in range(cell.dim):
            dots.append((x, s, k - (cell.dim - 1) / 2.0, cell.integral))
        # connect classes to their alpha1 multiples one filtration up
        tkey = (s + 1, t + 4)
        tcell = chart.cells.get(tkey)
        if tcell is None or chart.in_margin(*tkey) or tcell.dim == 0:
            continue
        treps = tcell.quotient_vectors()
        for rep in cell.quotient_vectors():
            vec = [0] * len(tcell.lattice)
            hit = False
            for k, coeff in enumerate(rep):
                if coeff % 3 == 0:
                    continue
                img = _alpha1_image(cell.lattice[k])
                if img is not None and img in tcell.lattice:
                    vec[tcell.lattice.index(img)] = coeff % 3
                    hit = True
            if not hit:
                continue
            coords = _quotient_coordinates(vec, treps, tcell.boundary)
            if coords is None or not any(coords):
                continue
            lines.append(((x, s), (t + 4 - (s + 1), s + 1)))

    y_min, y_max = min(s_seen), max(s_seen)
    with matplotlib.rc_context({"svg.hashsalt": "shimura-calc"}):
        fig = Figure(figsize=(max(4.0, (hi - lo) * 0.18),
                              max(3.0, (y_max - y_min + 2) * 0.3)))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot(111)
        for (x1, y1), (x2, y2) in lines:
            ax.plot([x1, x2], [y1, y2], color="#777777", linewidth=0.8,
                    zorder=1)
        for x, y, off, integral in dots:
            ax.plot([x + off * 0.22], [y], marker="s" if integral else "o",
                    markersize=4.5,
                    markerfacecolor="none" if integral else "#1f3b73",
                    markeredgecolor="#1f3b73", linestyle="none", zorder=2)
        ax.set_xlim(lo - 1, hi + 1)
        ax.set_ylim(y_min - 1, y_max + 1)
        ax.set_xticks([x for x in range(lo, hi + 1) if x % 6 == 0])
        ax.set_yticks(list(range(y_min, y_max + 1, 2)))
        ax.set_xlabel("t - s")
        ax.set_ylabel("s")
        ax.set_title(f"page {chart.page} ({chart.kind})")
        ax.grid(True, color="#dddddd", linewidth=0.4)
        ax.set_axisbelow(True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path
