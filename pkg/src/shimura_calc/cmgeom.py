"""CM-point combinatorics on quaternionic Shimura curves.

Which imaginary quadratic fields arise as Atkin-Lehner fixed points, and
at which primes two CM divisors can share a supersingular reduction.  The
intersection criterion is an exclusion test: reported primes are the ones
not ruled out by the local obstruction, never certified intersections.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import isqrt

from .arith import OO, kronecker_symbol, prime_factors, ramified_places, squarefree_part
from .quadorders import fundamental_decomposition

log = logging.getLogger(__name__)


def check_curve_discriminant(N: int) -> list[int]:
    """Validate a square-free algebra discriminant with an even number of
    prime factors, returning those primes."""
    if N < 1:
        raise ValueError(f"discriminant must be positive, got {N}")
    ps = prime_factors(N) if N > 1 else []
    prod = 1
    for p in ps:
        prod *= p
    if prod != N:
        raise ValueError(f"discriminant {N} is not square-free")
    if len(ps) % 2:
        raise ValueError(f"discriminant {N} needs an even number of prime factors")
    return ps


@dataclass(frozen=True)
class CMPoint:
    """Reduced trace and norm of a generating endomorphism of a CM point."""

    tr: int
    nm: int

    def __post_init__(self):
        if self.disc >= 0:
            raise ValueError(f"tr^2 - 4 nm = {self.disc} must be negative")

    @property
    def disc(self) -> int:
        return self.tr * self.tr - 4 * self.nm


@dataclass(frozen=True)
class IntersectionReport:
    """Primes p not dividing N where intersection is not excluded.

    witnesses maps each reported prime to tuples (m, ramified set); the
    clashes list records m values whose ramified set was exactly
    {oo} U primes(N) (possible only for odd prime counts, kept for
    bookkeeping).
    """

    primes: frozenset
    witnesses: dict
    clashes: tuple = ()


def intersection_primes(
    x: CMPoint, y: CMPoint, N: int, margin: int = 0
) -> IntersectionReport:
    """Primes at which the CM divisors of x and y may meet on the curve
    of discriminant N.

    For each integer m with Delta = (2m + tr(x) tr(y))^2 - d_x d_y < 0 the
    quaternion algebra (Delta, d_y) is computed; p is reported when its
    ramified set is exactly {oo} U primes(p N) for some m.  `margin`
    widens the m-range beyond the Delta < 0 window (used to confirm the
    enumeration bound is exhaustive; out-of-window m never contribute).
    """
    base_primes = check_curve_discriminant(N)
    dx, dy = x.disc, y.disc
    if squarefree_part(dx) == squarefree_part(dy):
        raise ValueError(
            "the exclusion criterion requires non-isomorphic CM fields"
        )
    base = frozenset(base_primes) | {OO}
    T = x.tr * y.tr
    prod = dx * dy  # positive
    bound = isqrt(prod)
    witnesses: dict = {}
    clashes = []
    for s in range(-bound - 2 * margin, bound + 2 * margin + 1):
        if (s - T) % 2:
            continue  # s = 2m + T must match parity
        m = (s - T) // 2
        delta = s * s - prod
        if delta == 0:
            log.info("degenerate lattice at m=%d skipped (Delta = 0)", m)
            continue
        if delta > 0:
            continue
        ram = ramified_places(delta, dy)
        # the two ternary conditions in the source agree place by place
        assert ram == ramified_places(dx, delta), (x, y, m)
        if ram == base:
            clashes.append(m)
            continue
        extra = ram - base
        if ram > base and len(extra) == 1:
            (p,) = extra
            witnesses.setdefault(p, []).append((m, ram))
    return IntersectionReport(
        primes=frozenset(witnesses),
        witnesses={p: tuple(w) for p, w in witnesses.items()},
        clashes=tuple(clashes),
    )


def cm_point(d: int) -> CMPoint:
    """CM point whose endomorphism has discriminant d (negative, 0 or 1 mod 4)."""
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative quadratic discriminant")
    if d % 4 == 0:
        return CMPoint(0, -d // 4)
    return CMPoint(1, (1 - d) // 4)


def al_fixed_cm_fields(d: int, N: int) -> list[int]:
    """Fundamental CM discriminants of the fixed points of w_d.

    Enumerates traces t with t^2 - 4d < 0 and keeps the field
    discriminant of t^2 - 4d when no prime dividing d splits that field.
    """
    check_curve_discriminant(N)
    if d <= 1 or N % d:
        raise ValueError(f"d = {d} must be a divisor > 1 of N = {N}")
    found = set()
    for t in range(isqrt(4 * d - 1) + 1):
        d_K, _ = fundamental_decomposition(t * t - 4 * d)
        if all(kronecker_symbol(d_K, p) != 1 for p in prime_factors(d)):
            found.add(d_K)
    return sorted(found, reverse=True)
