"""Local invariants of rational quaternion algebras.

Residue symbols, p-adic valuations, Hilbert symbols at every place of Q,
ramified place sets, and splitting tests for imaginary quadratic fields.
Inputs may be ints or Fractions; results are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = int | Fraction

#: Marker for the archimedean place of Q.  Finite places are prime ints.
OO = "oo"


def is_prime(n: int) -> bool:
    """Trial-division primality test (inputs here are always small)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_place(v) -> None:
    """Validate a place: a prime integer or the marker OO."""
    if v == OO:
        return
    if isinstance(v, int) and is_prime(v):
        return
    raise ValueError(f"not a place of Q: {v!r}")


def prime_factors(n: int) -> list[int]:
    """Sorted distinct prime divisors of n (n != 0)."""
    if n == 0:
        raise ValueError("0 has no prime factorization")
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker_symbol(d: int, p: int) -> int:
    """Kronecker symbol (d/p) for a discriminant d and a prime p.

    Only defined here for d = 0, 1 mod 4; the p = 2 value follows the
    standard rule: 0 for even d, +1 for d = +-1 mod 8, -1 for d = +-3 mod 8.
    """
    if d % 4 not in (0, 1):
        raise ValueError(f"not a discriminant: {d} (need d = 0, 1 mod 4)")
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    return legendre_symbol(d, p)


def p_valuation(x: Rational, p: int) -> tuple[int, Fraction]:
    """Return (v, u) with x = p**v * u and u a p-adic unit."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    if not is_prime(p):
        raise ValueError(f"not a prime: {p}")
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def squarefree_part(x: Rational) -> int:
    """The square-free integer representing x modulo nonzero rational squares."""
    if x == 0:
        raise ValueError("0 has no square class")
    x = Fraction(x)
    n = x.numerator * x.denominator  # same class: x = (num/den) * (den/den)^2-free
    sign = -1 if n < 0 else 1
    n = abs(n)
    f = 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
        f += 1
    return sign * n


def _unit_mod(u: Fraction, m: int) -> int:
    # u has numerator and denominator prime to m
    return u.numerator * pow(u.denominator, -1, m) % m


def hilbert_symbol(a: Rational, b: Rational, v) -> int:
    """Hilbert symbol (a,b)_v.

    Returns 1 iff z^2 = a*x^2 + b*y^2 has a solution other than (0,0,0)
    over the completion of Q at v, i.e. iff the quaternion algebra (a,b)
    splits at v.  Arguments are first reduced to square-free integer
    representatives, which the symbol only depends on.
    """
    if a == 0 or b == 0:
        raise ValueError("hilbert_symbol requires nonzero arguments")
    check_place(v)
    a = squarefree_part(a)
    b = squarefree_part(b)
    if v == OO:
        return -1 if a < 0 and b < 0 else 1
    p = v
    va, ua = p_valuation(Fraction(a), p)
    vb, ub = p_valuation(Fraction(b), p)
    if p == 2:
        u = _unit_mod(ua, 8)
        w = _unit_mod(ub, 8)
        eps_u, eps_w = (u - 1) // 2 % 2, (w - 1) // 2 % 2
        om_u, om_w = (u * u - 1) // 8 % 2, (w * w - 1) // 8 % 2
        e = eps_u * eps_w + va * om_w + vb * om_u
        return -1 if e % 2 else 1
    s = 1
    if va % 2 and vb % 2 and p % 4 == 3:
        s = -s
    if vb % 2:
        s *= legendre_symbol(_unit_mod(ua, p), p)
    if va % 2:
        s *= legendre_symbol(_unit_mod(ub, p), p)
    return s


def ramified_places(a: Rational, b: Rational) -> frozenset:
    """All places where the algebra (a,b) is a division algebra.

    Candidate finite primes are 2 and the primes dividing the square-free
    representatives of a and b.  Evenness of the result (Hilbert
    reciprocity) is asserted, not assumed.
    """
    if a == 0 or b == 0:
        raise ValueError("ramified_places requires nonzero arguments")
    sa = squarefree_part(a)
    sb = squarefree_part(b)
    candidates = {2} | set(prime_factors(sa)) | set(prime_factors(sb))
    ram = {p for p in candidates if hilbert_symbol(sa, sb, p) == -1}
    if hilbert_symbol(sa, sb, OO) == -1:
        ram.add(OO)
    assert len(ram) % 2 == 0, f"reciprocity violated for ({a},{b}): {ram}"
    return frozenset(ram)


def sort_places(places) -> list:
    """Finite places ascending, then the archimedean place."""
    return sorted((p for p in places if p != OO)) + ([OO] if OO in places else [])


def field_splits_algebra(d: int, ramified) -> bool:
    """Does the imaginary quadratic field of discriminant d split the algebra?

    `ramified` is a set of places as produced by ramified_places.  The
    criterion is that no finite ramified prime splits in the field:
    kronecker_symbol(d, p) != 1 for all finite p.  The archimedean place
    never obstructs an imaginary field.
    """
    if d >= 0:
        raise ValueError(f"need a negative discriminant, got {d}")
    return all(kronecker_symbol(d, p) != 1 for p in ramified if p != OO)


def has_sqrt_in_Zp(a: int, p: int) -> bool:
    """Whether the p-adic unit a is a square in Z_p.

    Hensel: for odd p this is the Legendre condition, for p = 2 it is
    a = 1 mod 8.  Non-units are rejected rather than answered.
    """
    if not is_prime(p):
        raise ValueError(f"not a prime: {p}")
    if a % p == 0:
        raise ValueError(f"{a} is not a unit at {p}")
    if p == 2:
        return a % 8 == 1
    return legendre_symbol(a, p) == 1


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The rational quaternion algebra with i^2 = a, j^2 = b, ij = -ji."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ValueError("a quaternion algebra needs nonzero a, b")

    def ramified(self) -> frozenset:
        return ramified_places(self.a, self.b)

    def discriminant(self) -> int:
        """Product of the finite ramified primes."""
        out = 1
        for p in self.ramified():
            if p != OO:
                out *= p
        return out
