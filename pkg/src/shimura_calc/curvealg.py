"""Exact algebra on the explicit curve models: quadratic field elements,
Moebius maps, meromorphic forms modulo a plane-curve ideal, dimension
counts, and the supersingular splitting check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import OO, has_sqrt_in_Zp, is_prime, p_valuation, squarefree_part
from .polynomials import Poly, parse_polynomial


@dataclass(frozen=True)
class QuadFieldElem:
    """An element a + b*sqrt(d) of a fixed quadratic field."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d in (0, 1) or squarefree_part(self.d) != self.d:
            raise ValueError("field discriminant must be square-free and not 0, 1")

    def _coerce(self, other):
        if isinstance(other, QuadFieldElem):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadFieldElem(Fraction(other), Fraction(0), self.d)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadFieldElem(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadFieldElem(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadFieldElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if not n:
            raise ZeroDivisionError("element of norm zero")
        return QuadFieldElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def is_zero(self):
        return not self.a and not self.b

    def is_rational(self):
        return not self.b

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError("element is irrational")
        return self.a

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadFieldElem):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __str__(self):
        if not self.b:
            return str(self.a)
        root = "sqrt(%d)" % self.d
        if not self.a:
            return "%s*%s" % (self.b, root) if self.b != 1 else root
        return "%s + %s*%s" % (self.a, self.b, root)


def _as_elem(x, d) -> QuadFieldElem:
    if isinstance(x, QuadFieldElem):
        if x.d != d:
            raise ValueError("mixed quadratic fields")
        return x
    return QuadFieldElem(Fraction(x), Fraction(0), d)


def _homogeneous(point, d):
    """(x, z) coordinates of a point of the projective line; OO is (1, 0)."""
    one = QuadFieldElem(Fraction(1), Fraction(0), d)
    zero = QuadFieldElem(Fraction(0), Fraction(0), d)
    if point == OO:
        return one, zero
    return _as_elem(point, d), one


@dataclass(frozen=True)
class MoebiusMap:
    """x -> (a x + b) / (c x + d), stored projectively."""

    a: QuadFieldElem
    b: QuadFieldElem
    c: QuadFieldElem
    e: QuadFieldElem  # the lower-right entry; `d` names the field

    def __post_init__(self):
        fields = {m.d for m in (self.a, self.b, self.c, self.e)}
        if len(fields) != 1:
            raise ValueError("entries from mixed quadratic fields")
        if (self.a * self.e - self.b * self.c).is_zero():
            raise ValueError("degenerate map (zero determinant)")

    @property
    def field_disc(self) -> int:
        return self.a.d

    @classmethod
    def from_rows(cls, a, b, c, e, field_disc):
        return cls(
            _as_elem(a, field_disc),
            _as_elem(b, field_disc),
            _as_elem(c, field_disc),
            _as_elem(e, field_disc),
        )

    def __call__(self, point):
        x, z = _homogeneous(point, self.field_disc)
        num = self.a * x + self.b * z
        den = self.c * x + self.e * z
        if den.is_zero():
            if num.is_zero():
                raise ValueError("indeterminate image")
            return OO
        return num / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.e, -self.b, -self.c, self.a)

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.e

    def projectively_equal(self, other: "MoebiusMap") -> bool:
        mine = (self.a, self.b, self.c, self.e)
        theirs = (other.a, other.b, other.c, other.e)
        for i in range(4):
            for j in range(i + 1, 4):
                if not (mine[i] * theirs[j] - mine[j] * theirs[i]).is_zero():
                    return False
        return True

    def order(self, limit: int = 24):
        """Smallest k <= limit with the k-th power scalar, else None."""
        power = self
        for k in range(1, limit + 1):
            if power.is_scalar():
                return k
            power = self.compose(power)
        return None

    def fixed_quadratic(self):
        """Coefficients (q2, q1, q0) with fixed points q2 x^2 + q1 x + q0 = 0."""
        return (self.c, self.e - self.a, -self.b)

    def __str__(self):
        return "[[%s, %s], [%s, %s]]" % (self.a, self.b, self.c, self.e)


def moebius_from_three_points(src, dst, field_disc=None) -> MoebiusMap:
    """The unique map of the projective line carrying the source triple to
    the destination triple in order."""
    if len(src) != 3 or len(dst) != 3:
        raise ValueError("need exactly three source and three target points")
    d = field_disc
    for p in tuple(src) + tuple(dst):
        if isinstance(p, QuadFieldElem):
            if d is None:
                d = p.d
            elif d != p.d:
                raise ValueError("mixed quadratic fields among the points")
    if d is None:
        d = -1

    def to_standard(points):
        # The map sending the triple to (0, 1, oo).
        (x1, z1), (x2, z2), (x3, z3) = (_homogeneous(p, d) for p in points)
        for (xi, zi), (xj, zj) in (
            ((x1, z1), (x2, z2)),
            ((x1, z1), (x3, z3)),
            ((x2, z2), (x3, z3)),
        ):
            if (xi * zj - xj * zi).is_zero():
                raise ValueError("coincident points in a triple")
        l3_at_p2 = x2 * z3 - z2 * x3
        l1_at_p2 = x2 * z1 - z2 * x1
        return MoebiusMap(
            l3_at_p2 * z1, -(l3_at_p2 * x1), l1_at_p2 * z3, -(l1_at_p2 * x3)
        )

    return to_standard(dst).inverse().compose(to_standard(src))


@dataclass(frozen=True)
class ReductionRule:
    """The rewriting rule  lead * var**exponent -> tail.

    `lead` must not involve `var` and must avoid the curve ideal, so that
    multiplying through by it cannot create or destroy membership; `tail`
    has degree in `var` strictly below `exponent`.
    """

    var: str
    exponent: int
    lead: Poly
    tail: Poly

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("rule exponent must be positive")
        if self.lead.is_zero():
            raise ValueError("zero leading coefficient")
        if self.lead.degree_in(self.var) != 0:
            raise ValueError("leading coefficient must not involve the rule variable")
        if self.tail.degree_in(self.var) >= self.exponent:
            raise ValueError("tail must have lower degree than the rule")


class PolyQuotientRing:
    """Polynomials modulo plane-curve relations, with a deterministic
    pseudo-reduction zero test (exact on prime curve ideals)."""

    def __init__(self, names, rules):
        self.names = tuple(names)
        self.rules = tuple(rules)
        for rule in self.rules:
            if rule.lead.names != self.names or rule.tail.names != self.names:
                raise ValueError("rule in wrong variable context")
            if rule.var not in self.names:
                raise ValueError("unknown rule variable %r" % rule.var)

    def _reduce_once(self, p: Poly, rule: ReductionRule) -> Poly:
        var_index = self.names.index(rule.var)
        while p.degree_in(rule.var) >= rule.exponent:
            low = {}
            shifted = Poly(self.names, {})
            for mono, c in p.coeffs.items():
                k = mono[var_index]
                if k < rule.exponent:
                    low[mono] = c
                else:
                    dropped = (
                        mono[:var_index]
                        + (k - rule.exponent,)
                        + mono[var_index + 1 :]
                    )
                    shifted = shifted + Poly(self.names, {dropped: c}) * rule.tail
            p = Poly(self.names, low) * rule.lead + shifted
        return p

    def reduce(self, p: Poly) -> Poly:
        if p.names != self.names:
            raise ValueError("polynomial in wrong variable context")
        while True:
            before = p
            for rule in self.rules:
                p = self._reduce_once(p, rule)
            if p == before:
                return p

    def is_zero(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def polynomial(self, text: str) -> Poly:
        return parse_polynomial(text, self.names)


@dataclass(frozen=True)
class MeromorphicForm:
    """The form (num/den) * dx^t on a fixed curve chart."""

    num: Poly
    den: Poly
    t: int = 0

    def __post_init__(self):
        if self.den.is_zero():
            raise ValueError("zero denominator")
        if self.num.names != self.den.names:
            raise ValueError("numerator and denominator in different contexts")

    def _coerce(self, other):
        if isinstance(other, MeromorphicForm):
            return other
        if isinstance(other, (int, Fraction)):
            names = self.num.names
            return MeromorphicForm(
                Poly.const(names, other), Poly.const(names, 1), self.t
            )
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.t != other.t:
            raise ValueError("cannot add forms of different dx-exponent")
        return MeromorphicForm(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
            self.t,
        )

    __radd__ = __add__

    def __neg__(self):
        return MeromorphicForm(-self.num, self.den, self.t)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MeromorphicForm(self.num * other, self.den, self.t)
        if not isinstance(other, MeromorphicForm):
            return NotImplemented
        return MeromorphicForm(
            self.num * other.num, self.den * other.den, self.t + other.t
        )

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return MeromorphicForm(self.num**n, self.den**n, self.t * n)


def verify_identity_mod_curve(ring: PolyQuotientRing, lhs, rhs=0) -> bool:
    """True iff lhs = rhs as meromorphic forms modulo the curve ideal."""
    if isinstance(lhs, MeromorphicForm) and not isinstance(rhs, MeromorphicForm):
        rhs = lhs._coerce(rhs)
    elif isinstance(rhs, MeromorphicForm) and not isinstance(lhs, MeromorphicForm):
        lhs = rhs._coerce(lhs)
    if lhs.t != rhs.t:
        raise ValueError("sides have different dx-exponent")
    if ring.is_zero(lhs.den) or ring.is_zero(rhs.den):
        raise ValueError("denominator lies in the curve ideal")
    return ring.is_zero(lhs.num * rhs.den - rhs.num * lhs.den)


def moebius_substitute(form: MeromorphicForm, var: str, mmap: MoebiusMap) -> MeromorphicForm:
    """Substitute var -> (a var + b)/(c var + d) into a weight-0 function."""
    if form.t != 0:
        raise ValueError("substitution supported for functions only (t = 0)")
    names = form.num.names
    for other in names:
        if other != var and (
            form.num.degree_in(other) or form.den.degree_in(other)
        ):
            raise ValueError("form involves variables besides %r" % var)
    a, b, c, e = (
        entry.to_fraction() for entry in (mmap.a, mmap.b, mmap.c, mmap.e)
    )
    v = Poly.variable(names, var)
    lin_num = a * v + b
    lin_den = c * v + e
    var_index = names.index(var)
    degree = max(form.num.degree_in(var), form.den.degree_in(var))

    def push(p: Poly) -> Poly:
        out = Poly(names, {})
        for mono, coeff in p.coeffs.items():
            k = mono[var_index]
            out = out + coeff * lin_num**k * lin_den ** (degree - k)
        return out

    return MeromorphicForm(push(form.num), push(form.den), 0)


# --- the two explicit curve models -------------------------------------

def disc6_curve_ring() -> PolyQuotientRing:
    """Coordinates (x, y) with x^2 + 3y^2 + 3 = 0."""
    names = ("x", "y")
    one = Poly.const(names, 1)
    tail = parse_polynomial("-3*y^2 - 3", names)
    return PolyQuotientRing(names, [ReductionRule("x", 2, one, tail)])


def disc6_forms():
    """The generating forms U, V, W on the discriminant-6 chart."""
    names = ("x", "y")
    one = Poly.const(names, 1)
    x = Poly.variable(names, "x")
    y = Poly.variable(names, "y")
    return {
        "U": MeromorphicForm(one, x * y**5, 3),
        "V": MeromorphicForm(one, x * y**3, 2),
        "W": MeromorphicForm(one, x**3 * y**10, 6),
    }


def disc10_curve_ring() -> PolyQuotientRing:
    """Coordinates (u, z) with z^2 (u^2-1)^2 = -2(u^2+1)(u^2+2u+5)(u^2-2u+5)."""
    names = ("u", "z")
    lead = parse_polynomial("(u^2 - 1)^2", names)
    tail = parse_polynomial("-2*(u^2 + 1)*(u^2 + 2*u + 5)*(u^2 - 2*u + 5)", names)
    return PolyQuotientRing(names, [ReductionRule("z", 2, lead, tail)])


def disc10_forms(half_w: bool = True):
    """The forms U, V, W and the invariant coordinate y on the level cover.

    With half_w the weight-6 form is du^3 / (2 (u^2+1)(u^2+2u+5)(u^2-2u+5)),
    the normalization that satisfies the displayed W^2 relation exactly;
    half_w=False keeps the denominator without the factor 2.
    """
    names = ("u", "z")
    one = Poly.const(names, 1)
    u = Poly.variable(names, "u")
    z = Poly.variable(names, "z")
    sextic = parse_polynomial("(u^2 + 1)*(u^2 + 2*u + 5)*(u^2 - 2*u + 5)", names)
    w_den = 2 * sextic if half_w else sextic
    return {
        "U": MeromorphicForm(u, z * (u**2 - 1), 1),
        "V": MeromorphicForm(one, z * (u**2 - 1), 1),
        "W": MeromorphicForm(one, w_den, 3),
        "y": MeromorphicForm(u**3 - 9 * u, u**2 - 1, 0),
    }


def disc10_deck_map() -> MoebiusMap:
    """The order-3 deck transformation u -> (3+u)/(1-u)."""
    return MoebiusMap.from_rows(1, 3, -1, 1, -1)


def disc10_relation_poly(names=("U", "V", "W")) -> Poly:
    """W^2 + 2(U^2+V^2)(U^2+2UV+5V^2)(U^2-2UV+5V^2) on abstract generators."""
    return parse_polynomial(
        "W^2 + 2*(U^2 + V^2)*(U^2 + 2*U*V + 5*V^2)*(U^2 - 2*U*V + 5*V^2)", names
    )


def disc10_sigma_substitution(names=("U", "V", "W")):
    """The deck action U -> (-U-3V)/2, V -> (U-V)/2, W -> W."""
    u = Poly.variable(names, "U")
    v = Poly.variable(names, "V")
    half = Fraction(1, 2)
    return {
        "U": (-u - 3 * v) * half,
        "V": (u - v) * half,
        "W": Poly.variable(names, "W"),
    }


# --- dimension counts ----------------------------------------------------

def _pole_bound_sum(t: int, elliptic) -> int:
    total = 0
    for n, count in elliptic:
        if n < 2 or count < 0:
            raise ValueError("elliptic entries are (order >= 2, count >= 0)")
        total += count * (t * (n - 1) // n)
    return total


def riemann_roch_dim(genus: int, t: int, elliptic=()) -> int:
    """Sections of the t-th canonical power twisted by elliptic pole bounds."""
    if genus not in (0, 1, 2):
        raise ValueError("unsupported genus")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return 1
    degree = t * (2 * genus - 2) + _pole_bound_sum(t, elliptic)
    if degree > 2 * genus - 2:
        return degree + 1 - genus
    if genus == 0:
        return max(0, degree + 1)
    if t == 1 and degree == 2 * genus - 2:
        # the canonical bundle itself
        return genus
    raise ValueError("unsupported configuration")


def serre_h1_dim(genus: int, t: int, elliptic=()) -> int:
    """H^1 of the same twisted power, through duality with power 1 - t."""
    if genus not in (0, 1, 2):
        raise ValueError("unsupported genus")
    if t < 0:
        raise ValueError("t must be nonnegative")
    degree = (1 - t) * (2 * genus - 2) - _pole_bound_sum(t, elliptic)
    if genus == 0:
        return max(0, degree + 1)
    if degree < 0:
        return 0
    if degree > 2 * genus - 2:
        return degree + 1 - genus
    raise ValueError("unsupported configuration")


# genus and elliptic-point profile (order, count) of the three curves
_SIGNATURES = {
    6: (0, ((2, 2), (3, 2))),
    10: (0, ((3, 4),)),
    14: (1, ((2, 2),)),
}


def curve_signature(N: int):
    """Genus and elliptic points (order, count) of the discriminant-N curve."""
    if N not in _SIGNATURES:
        raise ValueError(f"no curve data for discriminant {N}")
    return _SIGNATURES[N]


def cover_genus(base_genus: int, degree: int, ramification=()) -> int:
    """Genus of a degree-n cover with the given ramification profile.

    Entries of `ramification` are (count of points on the cover, local
    degree e); each contributes count * (e - 1).
    """
    if base_genus < 0 or degree < 1:
        raise ValueError("invalid cover data")
    total = 0
    for count, e in ramification:
        if count < 0 or e < 1:
            raise ValueError("ramification entries are (count >= 0, e >= 1)")
        total += count * (e - 1)
    rhs = degree * (2 - 2 * base_genus) - total
    if rhs % 2:
        raise ValueError("ramification profile gives non-integral genus")
    genus = (2 - rhs) // 2
    if genus < 0:
        raise ValueError("ramification profile gives negative genus")
    return genus


def disc10_supersingular_rhs() -> Poly:
    """The right side of the completed local presentation at (3, u)."""
    return parse_polynomial(
        "-2*(u^2 + 1)*(u^2 + 2*u + 5)*(u^2 - 2*u + 5)", ("u",)
    )


def supersingular_split_check(rhs: Poly, p: int = 3) -> bool:
    """True iff the constant term of rhs is a p-adic unit and a square,
    so the square root splits the completed local ring."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    c = rhs.constant_term
    if not c:
        return False
    v, _ = p_valuation(c, p)
    if v != 0:
        return False
    # num/den and num*den share a p-adic square class
    c = Fraction(c)
    return has_sqrt_in_Zp(int(c.numerator * c.denominator), p)
