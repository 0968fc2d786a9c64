"""Imaginary quadratic orders: class numbers, units, masses, ray-class counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import kronecker_symbol, prime_factors, squarefree_part


def check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {d}")


def is_fundamental(d: int) -> bool:
    """Fundamental discriminants: square-free d = 1 mod 4, or 4m with
    m = 2, 3 mod 4 square-free."""
    if d >= 0 or d % 4 not in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    m = d // 4
    return m % 4 in (2, 3) and squarefree_part(m) == m


def divisors(n: int) -> list[int]:
    """Sorted positive divisors."""
    if n < 1:
        raise ValueError(f"need a positive integer, got {n}")
    out = []
    f = 1
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            if f != n // f:
                out.append(n // f)
        f += 1
    return sorted(out)


@dataclass(frozen=True, order=True)
class QuadOrder:
    """Order of conductor f in the field of fundamental discriminant d_K."""

    d_K: int
    f: int = 1

    def __post_init__(self):
        if self.f < 1:
            raise ValueError(f"conductor must be positive, got {self.f}")
        if not is_fundamental(self.d_K):
            raise ValueError(f"{self.d_K} is not a fundamental discriminant")

    @property
    def discriminant(self) -> int:
        return self.f * self.f * self.d_K


def class_number(d: int) -> int:
    """Class number of the quadratic order of discriminant d < 0.

    Counts reduced primitive forms (a,b,c): b^2 - 4ac = d, |b| <= a <= c,
    gcd(a,b,c) = 1, with b >= 0 whenever |b| = a or a = c.
    """
    check_discriminant(d)
    count = 0
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            count += 1
    return count


def unit_count(d: int) -> int:
    """Order of the unit group of the quadratic order of discriminant d."""
    if d >= 0:
        raise ValueError(f"need d < 0, got {d}")
    if d == -3:
        return 6
    if d == -4:
        return 4
    return 2


def order_mass(order: QuadOrder) -> Fraction:
    """Mass of the ring class groupoid of the order.

    Equals (h(d_K)/w(d_K)) * f * prod_{p | f} (1 - kronecker(d_K,p)/p).
    """
    m = Fraction(class_number(order.d_K), unit_count(order.d_K)) * order.f
    for p in prime_factors(order.f) if order.f > 1 else []:
        m *= 1 - Fraction(kronecker_symbol(order.d_K, p), p)
    return m


def fundamental_decomposition(D: int) -> tuple[int, int]:
    """Write a discriminant D < 0 as f0^2 * d_K with d_K fundamental."""
    check_discriminant(D)
    s = squarefree_part(D)
    d_K = s if s % 4 == 1 else 4 * s
    f0 = isqrt(D // d_K)
    assert f0 * f0 * d_K == D, (D, d_K, f0)
    return d_K, f0


def orders_containing(t: int, n: int) -> list[QuadOrder]:
    """Orders containing Z[alpha] for alpha of trace t and norm n.

    t^2 - 4n = f0^2 * d_K; the conductors are exactly the divisors of f0.
    """
    D = t * t - 4 * n
    if D >= 0:
        raise ValueError(f"t^2 - 4n = {D} must be negative")
    d_K, f0 = fundamental_decomposition(D)
    return [QuadOrder(d_K, f) for f in divisors(f0)]


def ray_class_card(h: int, units_image: int, residue_units: int) -> int:
    """Cardinality h * residue_units / units_image of a ray class groupoid.

    The caller supplies the order of (O/a)^x and of the image of the unit
    group inside it; this function only performs the (checked) division.
    """
    if h < 1 or units_image < 1 or residue_units < 1:
        raise ValueError("all group orders must be positive")
    num = h * residue_units
    if num % units_image:
        raise ValueError(
            f"units image of order {units_image} does not divide {num}"
        )
    return num // units_image
