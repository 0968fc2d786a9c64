"""Multivariate polynomials over the rationals, graded ring presentations,
and exact Hilbert series.

Polynomials are stored sparsely as {exponent tuple: Fraction} against a fixed
tuple of variable names.  All arithmetic is exact; nothing here ever touches
floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ._parallel import parallel_map

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\+|\-|\*|\(|\))")


class Poly:
    """A polynomial in a fixed ordered tuple of variables."""

    __slots__ = ("names", "coeffs")

    def __init__(self, names, coeffs=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "names", names)
        clean: dict = {}
        for mono, c in (coeffs or {}).items():
            c = Fraction(c)
            if not c:
                continue
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(names) or any(e < 0 for e in mono):
                raise ValueError("bad exponent tuple %r" % (mono,))
            clean[mono] = clean.get(mono, Fraction(0)) + c
        object.__setattr__(
            self, "coeffs", {m: c for m, c in clean.items() if c}
        )

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # constructors

    @classmethod
    def const(cls, names, c):
        names = tuple(names)
        return cls(names, {(0,) * len(names): Fraction(c)})

    @classmethod
    def variable(cls, names, name):
        names = tuple(names)
        i = names.index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(names)))
        return cls(names, {mono: Fraction(1)})

    # predicates and views

    def is_zero(self):
        return not self.coeffs

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * len(self.names), Fraction(0))

    def degree_in(self, name) -> int:
        i = self.names.index(name)
        return max((m[i] for m in self.coeffs), default=0)

    def coefficient_in(self, name, k) -> "Poly":
        """The coefficient of name**k, as a polynomial with that slot zeroed."""
        i = self.names.index(name)
        out = {}
        for m, c in self.coeffs.items():
            if m[i] == k:
                out[m[:i] + (0,) + m[i + 1 :]] = c
        return Poly(self.names, out)

    def homogeneous_weight(self, weights) -> int:
        """The common weight of all terms; raises if mixed or zero."""
        if self.is_zero():
            raise ValueError("the zero polynomial has no weight")
        ws = {
            sum(e * weights[n] for e, n in zip(m, self.names))
            for m in self.coeffs
        }
        if len(ws) != 1:
            raise ValueError("polynomial is not homogeneous: weights %s" % sorted(ws))
        return ws.pop()

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.names != self.names:
                raise ValueError("mixed variable contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.names, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.names, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.names, {m: c * other for m, c in self.coeffs.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = tuple(a + b for a, b in zip(m1, m2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Poly(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Poly.const(self.names, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.names, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.names == other.names and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.names, frozenset(self.coeffs.items())))

    def substitute(self, mapping) -> "Poly":
        """Replace variables by polynomials (or scalars) in the same context."""
        images = {}
        for name, value in mapping.items():
            if name not in self.names:
                raise ValueError("unknown variable %r" % name)
            if isinstance(value, (int, Fraction)):
                value = Poly.const(self.names, value)
            if value.names != self.names:
                raise ValueError("mixed variable contexts")
            images[name] = value
        out = Poly(self.names, {})
        for m, c in sorted(self.coeffs.items()):
            term = Poly.const(self.names, c)
            for e, name in zip(m, self.names):
                if not e:
                    continue
                base = images.get(name, Poly.variable(self.names, name))
                term = term * base**e
            out = out + term
        return out

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        for m, c in self.coeffs.items():
            val = c
            for e, name in zip(m, self.names):
                if e:
                    val *= Fraction(point[name]) ** e
            total += val
        return total

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for m in sorted(self.coeffs, reverse=True):
            c = self.coeffs[m]
            factors = []
            for e, name in zip(m, self.names):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append("%s^%d" % (name, e))
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = str(c) + "*" + "*".join(factors)
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += " - " + p[1:] if p.startswith("-") else " + " + p
        return text

    def __repr__(self):
        return "Poly(%s)" % self


def parse_polynomial(text: str, names) -> Poly:
    """Parse an infix integer-polynomial expression over the given variables.

    Grammar: sums and differences of terms, terms are products of factors
    joined by '*', factors are integers, variable names, parenthesized
    expressions, or any of these raised by '^' to a nonnegative integer.
    """
    names = tuple(names)
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError("bad character %r in polynomial" % text[pos])
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)  # sentinel
    idx = [0]

    def peek():
        return tokens[idx[0]]

    def take():
        tok = tokens[idx[0]]
        idx[0] += 1
        return tok

    def parse_expr():
        if peek() == "-":
            take()
            value = -parse_term()
        else:
            if peek() == "+":
                take()
            value = parse_term()
        while peek() in ("+", "-"):
            if take() == "+":
                value = value + parse_term()
            else:
                value = value - parse_term()
        return value

    def parse_term():
        value = parse_factor()
        while peek() == "*":
            take()
            value = value * parse_factor()
        return value

    def parse_factor():
        base = parse_base()
        if peek() == "^":
            take()
            tok = take()
            if tok is None or not tok.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            return base ** int(tok)
        return base

    def parse_base():
        tok = take()
        if tok is None:
            raise ValueError("unexpected end of polynomial")
        if tok == "(":
            value = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return value
        if tok == "-":
            return -parse_factor()
        if tok.isdigit():
            return Poly.const(names, int(tok))
        if tok in names:
            return Poly.variable(names, tok)
        raise ValueError("unknown variable %r (have %s)" % (tok, ", ".join(names)))

    result = parse_expr()
    if peek() is not None:
        raise ValueError("trailing tokens after polynomial")
    return result


@dataclass(frozen=True)
class GradedRingPresentation:
    """Generators with positive weights and homogeneous integer relations."""

    name: str
    generators: tuple  # of (name, weight)
    relations: tuple = ()
    relation_weights: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relations", tuple(self.relations))
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        weights = dict(self.generators)
        for n, w in self.generators:
            if not isinstance(w, int) or w <= 0:
                raise ValueError("weight of %s must be a positive integer" % n)
        rel_ws = []
        for rel in self.relations:
            if rel.names != names:
                raise ValueError("relation in wrong variable context")
            rel_ws.append(rel.homogeneous_weight(weights))
        object.__setattr__(self, "relation_weights", tuple(rel_ws))

    @property
    def names(self):
        return tuple(n for n, _ in self.generators)

    @property
    def weights(self):
        return tuple(w for _, w in self.generators)

    def monomials_of_weight(self, w: int):
        """All exponent tuples of the given weight, in lexicographic order."""
        weights = self.weights
        out = []

        def rec(i, remaining, prefix):
            if i == len(weights):
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            step = weights[i]
            for e in range(remaining // step + 1):
                rec(i + 1, remaining - e * step, prefix + [e])

        if w >= 0:
            rec(0, w, [])
        return out


def parse_ring_presentation(text: str) -> GradedRingPresentation:
    """Parse the declarative presentation format.

    Lines: `ring NAME`, `generator NAME WEIGHT`, `relation EXPRESSION`;
    blank lines and `#` comments are ignored.  Generators must all be
    declared before the first relation.
    """
    name = None
    generators = []
    relation_texts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "ring":
            if name is not None:
                raise ValueError("line %d: duplicate ring line" % lineno)
            if not rest:
                raise ValueError("line %d: ring needs a name" % lineno)
            name = rest
        elif head == "generator":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError("line %d: expected `generator NAME WEIGHT`" % lineno)
            if relation_texts:
                raise ValueError("line %d: generators must precede relations" % lineno)
            generators.append((parts[0], int(parts[1])))
        elif head == "relation":
            if not rest:
                raise ValueError("line %d: empty relation" % lineno)
            relation_texts.append(rest)
        else:
            raise ValueError("line %d: unknown directive %r" % (lineno, head))
    if name is None:
        raise ValueError("missing ring line")
    if not generators:
        raise ValueError("no generators declared")
    names = tuple(n for n, _ in generators)
    relations = tuple(parse_polynomial(t, names) for t in relation_texts)
    return GradedRingPresentation(name, tuple(generators), relations)


def load_presentation(name: str) -> GradedRingPresentation:
    """Load a shipped `.ring` presentation by name, or any path to one."""
    from importlib import resources
    import os

    if os.sep in name or name.endswith(".ring"):
        with open(name, "r", encoding="utf-8") as fh:
            return parse_ring_presentation(fh.read())
    ref = resources.files(__package__).joinpath("data", name + ".ring")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        shipped = sorted(
            p.name[: -len(".ring")]
            for p in resources.files(__package__).joinpath("data").iterdir()
            if p.name.endswith(".ring")
        )
        raise ValueError(
            "unknown presentation %r (shipped: %s)" % (name, ", ".join(shipped))
        )
    return parse_ring_presentation(text)


def _rank(rows) -> int:
    """Rank of a matrix of Fractions by exact Gaussian elimination."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                factor = rows[r][col] / lead
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def graded_dimension(pres: GradedRingPresentation, w: int) -> int:
    """Dimension over Q of the weight-w piece of the presented ring."""
    basis = pres.monomials_of_weight(w)
    if not basis:
        return 0
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for rel, rw in zip(pres.relations, pres.relation_weights):
        for m in pres.monomials_of_weight(w - rw):
            row = [Fraction(0)] * len(basis)
            for rm, c in rel.coeffs.items():
                key = tuple(a + b for a, b in zip(rm, m))
                row[index[key]] = c
            rows.append(row)
    return len(basis) - _rank(rows)


def hilbert_series(pres: GradedRingPresentation, max_weight: int):
    """Dimensions of the graded pieces for weights 0..max_weight."""
    if max_weight < 0:
        raise ValueError("max_weight must be nonnegative")
    return parallel_map(
        lambda w: graded_dimension(pres, w), range(max_weight + 1)
    )
