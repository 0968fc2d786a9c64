"""Eichler-Selberg traces of Hecke and Atkin-Lehner operators.

Implements both normalizations of the trace formula on a quaternionic
curve of square-free discriminant N (even number of prime factors),
renormalized involutions t_d, and character-averaged invariant
dimensions.  Every returned value is an integer; non-integrality is a
hard error, since it signals a symbol-convention bug rather than bad
input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arith import has_sqrt_in_Zp, kronecker_symbol
from .cmgeom import check_curve_discriminant
from .quadorders import QuadOrder, divisors, order_mass, orders_containing

ARITHMETIC = "arithmetic"
GEOMETRIC = "geometric"

#: Local-factor placement.  "inside" multiplies each order's mass by
#: prod_p (1 - eichler_symbol(O, p)); "outside" applies the source's
#: displayed prod_p (1 - (t^2-4n / p)) to the whole mass sum.  Only the
#: inside placement reproduces the published tables; outside is kept for
#: the calibration comparison.
PLACEMENTS = ("inside", "outside")


def weight_factor(t: int, n: int, k: int) -> int:
    """The factor (alpha^{k-1} - beta^{k-1})/(alpha - beta) for the roots
    of X^2 + tX + n, as the integer Lucas-type value s_{k-1}."""
    if t * t - 4 * n >= 0:
        raise ValueError(f"t^2 - 4n = {t * t - 4 * n} must be negative")
    if k < 2 or k % 2:
        raise ValueError(f"weight must be even and >= 2, got {k}")
    prev, cur = 0, 1
    for _ in range(k - 2):
        prev, cur = cur, -t * cur - n * prev
    return cur


def eichler_symbol(order: QuadOrder, p: int) -> int:
    """The trace-formula local symbol: 1 at primes dividing the conductor,
    the Kronecker symbol of the fundamental discriminant elsewhere."""
    if order.f % p == 0:
        return 1
    return kronecker_symbol(order.d_K, p)


def _check_weight(k: int) -> None:
    if k < 2 or k % 2:
        raise ValueError(f"weight must be even and >= 2, got {k}")


def hecke_trace(
    N: int,
    n: int,
    k: int,
    normalization: str = ARITHMETIC,
    placement: str = "inside",
) -> int:
    """Trace of T(n) on forms of even weight k >= 2 for discriminant N."""
    ps = check_curve_discriminant(N)
    _check_weight(k)
    if n < 1:
        raise ValueError(f"Hecke index must be positive, got {n}")
    if normalization not in (ARITHMETIC, GEOMETRIC):
        raise ValueError(f"unknown normalization {normalization!r}")
    if placement not in PLACEMENTS:
        raise ValueError(f"unknown placement {placement!r}")

    total = Fraction(1 if k == 2 else 0)
    if isqrt(n) ** 2 == n:
        lead = Fraction(k - 1, 12) * n ** (k // 2 - 1)
        for p in ps:
            lead *= p - 1
        total += lead
    for t in range(-isqrt(4 * n - 1), isqrt(4 * n - 1) + 1):
        wf = weight_factor(t, n, k)
        if wf == 0:
            continue
        orders = orders_containing(t, n)
        if placement == "inside":
            local = Fraction(0)
            for order in orders:
                term = order_mass(order)
                for p in ps:
                    term *= 1 - eichler_symbol(order, p)
                local += term
        else:
            local = sum((order_mass(order) for order in orders), Fraction(0))
            for p in ps:
                local *= 1 - kronecker_symbol(t * t - 4 * n, p)
        total -= wf * local
    if normalization == GEOMETRIC:
        total *= n
    if total.denominator != 1:
        raise ArithmeticError(
            f"non-integral trace {total} for N={N}, n={n}, k={k}"
        )
    return int(total)


def dimension(N: int, k: int) -> int:
    """Dimension of the space of weight-k forms (k = 2 gives the genus)."""
    dim = hecke_trace(N, 1, k)
    if dim < 0:
        raise ArithmeticError(f"negative dimension {dim} for N={N}, k={k}")
    return dim


def al_trace(
    N: int, d: int, k: int, normalization: str = GEOMETRIC, placement: str = "inside"
) -> int:
    """Trace of the Atkin-Lehner involution w_d on weight-k forms."""
    if d <= 1 or N % d:
        raise ValueError(f"d = {d} must be a divisor > 1 of N = {N}")
    return hecke_trace(N, d, k, normalization, placement)


def al_trace_closed(N: int, n: int, k: int) -> int:
    """The compact w_n trace valid for n > 3 and even k: only t = 0
    contributes, so the whole sum collapses to the norm-n order masses."""
    ps = check_curve_discriminant(N)
    _check_weight(k)
    if n <= 3 or N % n:
        raise ValueError("closed form applies to divisors n > 3 only")
    mass = Fraction(0)
    for order in orders_containing(0, n):
        term = order_mass(order)
        for p in ps:
            term *= 1 - eichler_symbol(order, p)
        mass += term
    total = n * Fraction(1 if k == 2 else 0) + Fraction(-n) ** (k // 2) * mass
    if total.denominator != 1:
        raise ArithmeticError(f"non-integral closed trace {total}")
    return int(total)


@dataclass(frozen=True)
class SignedInvolution:
    """The renormalization t_d = (sqrt(sign*d))^{-1} w_d at the prime p.

    Exists only when sign*d has a square root in Z_p; construction
    enforces that.
    """

    d: int
    sign: int
    p: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +-1, got {self.sign}")
        if self.d <= 1:
            raise ValueError(f"need d > 1, got {self.d}")
        if not has_sqrt_in_Zp(self.sign * self.d, self.p):
            raise ValueError(
                f"{self.sign * self.d} is not a square in Z_{self.p}"
            )


def signed_involution(d: int, p: int, sign: int | None = None) -> SignedInvolution:
    """Build t_d at p, inferring the sign when exactly one choice works."""
    if sign is not None:
        return SignedInvolution(d, sign, p)
    valid = [s for s in (1, -1) if has_sqrt_in_Zp(s * d, p)]
    if len(valid) != 1:
        raise ValueError(
            f"sign of t_{d} at p={p} is not determined (candidates {valid});"
            " pass it explicitly"
        )
    return SignedInvolution(d, valid[0], p)


def renormalized_al_trace(N: int, inv: SignedInvolution, k: int) -> int:
    """Trace of t_d on weight-k forms: geometric w_d trace over (sign*d)^{k/2}."""
    _check_weight(k)
    tr = Fraction(
        al_trace(N, inv.d, k, GEOMETRIC), (inv.sign * inv.d) ** (k // 2)
    )
    if tr.denominator != 1:
        raise ArithmeticError(f"non-integral renormalized trace {tr}")
    return int(tr)


def full_involution_set(
    N: int, p: int, signs: dict[int, int] | None = None
) -> list[SignedInvolution]:
    """All t_d for divisors d > 1 of N, renormalized at p.

    `signs` may pin the sign for divisors where both work (p = 1 mod 4
    cases); the rest are inferred.
    """
    signs = signs or {}
    return [
        signed_involution(d, p, signs.get(d)) for d in divisors(N) if d > 1
    ]


def invariant_dimension(N: int, k: int, invs) -> int:
    """Dimension of the simultaneous +1-eigenspace of the given t_d set.

    The involutions together with the identity must form an elementary
    abelian 2-group; the dimension is the character average, and must be
    a nonnegative integer.
    """
    invs = list(invs)
    if not invs:
        return dimension(N, k)
    by_d = {}
    for inv in invs:
        if inv.d in by_d:
            raise ValueError(f"duplicate involution for d = {inv.d}")
        by_d[inv.d] = inv
    order = len(invs) + 1
    if order & (order - 1):
        raise ValueError(
            f"{len(invs)} involutions cannot form a group with the identity"
        )
    for i1 in invs:
        for i2 in invs:
            if i1.d == i2.d:
                continue
            if i1.p != i2.p:
                raise ValueError("involutions renormalized at different primes")
            g = gcd(i1.d, i2.d)
            d12 = i1.d * i2.d // (g * g)
            if d12 not in by_d or by_d[d12].sign != i1.sign * i2.sign:
                raise ValueError(
                    f"involution set not closed at t_{i1.d} * t_{i2.d}"
                )
    total = Fraction(dimension(N, k))
    for inv in invs:
        total += renormalized_al_trace(N, inv, k)
    avg = total / order
    if avg.denominator != 1 or avg < 0:
        raise ArithmeticError(f"character average {avg} is not a dimension")
    return int(avg)


def trace_table(
    N: int,
    ops,
    tmax: int,
    normalization: str = GEOMETRIC,
    placement: str = "inside",
) -> list[list[int]]:
    """Rows [t, tr(op), ...] on weight-2t forms for 0 <= t <= tmax.

    Operator labels are "id" or "wd" for a divisor d of N.  Weight 0 is
    the constants, where every operator has trace 1.
    """
    parsed = []
    for op in ops:
        if op == "id":
            parsed.append(1)
        elif op[:1] == "w" and op[1:].isdigit():
            parsed.append(int(op[1:]))
        else:
            raise ValueError(f"unknown operator {op!r}")
    if tmax < 0:
        raise ValueError("tmax must be nonnegative")
    rows = []
    for t in range(tmax + 1):
        row = [t]
        for n in parsed:
            if t == 0:
                row.append(1)
            elif n == 1:
                row.append(hecke_trace(N, 1, 2 * t, normalization, placement))
            else:
                row.append(al_trace(N, n, 2 * t, normalization, placement))
        rows.append(row)
    return rows
