"""Local arithmetic at the places of Q: valuations, square classes, Hilbert
symbols, Hensel lifting, and points of the surface over F_p and Z_p.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import factorint, isprime

from .errors import CriterionFails, NotOnSurface, NotSmooth

INFINITY = "inf"
HALF = Fraction(1, 2)
ZERO = Fraction(0)


def check_place(place):
    if place == INFINITY:
        return place
    if not isinstance(place, int) or not isprime(place):
        raise ValueError(f"{place!r} is not a place of Q")
    return place


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_valuation(n: int, p: int):
    """Return (v, u) with n = p^v * u and p not dividing u."""
    v = valuation(n, p)
    return v, n // p ** v


def factorize(n: int) -> dict:
    """Factor |n| by trial division up to 10^4, then sympy for the cofactor."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out = {}
    d = 2
    while d * d <= n and d < 10_000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        for q, e in factorint(n).items():
            out[q] = out.get(q, 0) + e
    return out


def squarefree_part(n) -> int:
    """Signed squarefree integer in the same class of Q^x / Q^x^2."""
    if isinstance(n, Fraction):
        n = n.numerator * n.denominator
    if n == 0:
        raise ValueError("zero has no square class")
    out = -1 if n < 0 else 1
    for q, e in factorize(n).items():
        if e % 2:
            out *= q
    return out


def is_rational_square(n) -> bool:
    if isinstance(n, Fraction):
        return is_rational_square(n.numerator) and is_rational_square(n.denominator)
    return n >= 0 and isqrt(n) ** 2 == n


def legendre(n: int, p: int) -> int:
    """Legendre symbol (n/p) for an odd prime p."""
    if p == 2 or not isprime(p):
        raise ValueError(f"{p} is not an odd prime")
    n %= p
    if n == 0:
        return 0
    # Jacobi reciprocity loop
    result = 1
    modulus = p
    while n:
        while n % 2 == 0:
            n //= 2
            if modulus % 8 in (3, 5):
                result = -result
        n, modulus = modulus, n
        if n % 4 == 3 and modulus % 4 == 3:
            result = -result
        n %= modulus
    return result if modulus == 1 else 0


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if legendre(u, p) == -1:
            return u
    raise ValueError(f"no non-residue mod {p}")


@lru_cache(maxsize=None)
def sqrt_table(p: int) -> dict:
    """Map each square residue mod p to its smallest square root."""
    table = {}
    for r in range(p):
        table.setdefault(r * r % p, r)
    return table


@dataclass(frozen=True)
class SquareClass:
    """Canonical representative of an element of Q_v^x / Q_v^x^2.

    Odd p: one of 1, u, p, u*p with u the smallest non-residue.
    p = 2: one of +-1, +-2, +-5, +-10.  Infinity: +-1.
    """

    place: object
    rep: int


def _unit_class_2(u: int) -> int:
    return {1: 1, 3: -5, 5: 5, 7: -1}[u % 8]


def square_class(r, place) -> SquareClass:
    place = check_place(place)
    r = Fraction(r)
    if r == 0:
        raise ValueError("zero has no square class")
    if place == INFINITY:
        return SquareClass(place, 1 if r > 0 else -1)
    n = r.numerator * r.denominator
    v, u = split_valuation(n, place)
    if place == 2:
        rep = _unit_class_2(u)
        return SquareClass(2, rep * 2 if v % 2 else rep)
    rep = 1 if legendre(u, place) == 1 else smallest_nonresidue(place)
    return SquareClass(place, rep * place if v % 2 else rep)


def is_local_square(r, place) -> bool:
    return square_class(r, place).rep == 1


@dataclass(frozen=True)
class PadicApprox:
    """An element of Z_p known modulo p^level."""

    p: int
    level: int
    residue: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be positive")
        if not 0 <= self.residue < self.p ** self.level:
            raise ValueError("residue out of range")

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    def known_valuation(self):
        """Valuation if the residue is nonzero, else None (at least ``level``)."""
        return None if self.residue == 0 else valuation(self.residue, self.p)


def approx_square_class(value: PadicApprox):
    """Square class of any element congruent to ``value``, or None when undetermined."""
    if value.residue == 0:
        return None
    v = valuation(value.residue, value.p)
    needed = v + (3 if value.p == 2 else 1)
    if value.level < needed:
        return None
    return square_class(value.residue, value.p)


def hilbert(u, v, place) -> Fraction:
    """Local invariant of the quaternion symbol (u, v) at ``place``: 0 or 1/2."""
    place = check_place(place)
    u, v = Fraction(u), Fraction(v)
    if u == 0 or v == 0:
        raise ValueError("Hilbert symbol arguments must be nonzero")
    if place == INFINITY:
        return HALF if (u < 0 and v < 0) else ZERO
    # same square classes, integral representatives
    u = u.numerator * u.denominator
    v = v.numerator * v.denominator
    p = place
    a, u1 = split_valuation(u, p)
    b, v1 = split_valuation(v, p)
    if p == 2:
        eps_u = ((u1 - 1) // 2) % 2
        eps_v = ((v1 - 1) // 2) % 2
        om_u = ((u1 * u1 - 1) // 8) % 2
        om_v = ((v1 * v1 - 1) // 8) % 2
        e = (eps_u * eps_v + a * om_v + b * om_u) % 2
    else:
        e = (a * b * ((p - 1) // 2)) % 2
        if b % 2 and legendre(u1, p) == -1:
            e ^= 1
        if a % 2 and legendre(v1, p) == -1:
            e ^= 1
    return HALF if e else ZERO


def bad_places(u, v):
    """Infinity and every prime dividing 2uv: the only places where (u, v) can be nontrivial."""
    u, v = Fraction(u), Fraction(v)
    n = 2 * u.numerator * u.denominator * v.numerator * v.denominator
    return [INFINITY] + sorted(factorize(n))


def hilbert_product_check(u, v, symbol=hilbert) -> bool:
    """Check that the local invariants of (u, v) sum to 0 mod 1."""
    total = sum((symbol(u, v, place) for place in bad_places(u, v)), Fraction(0))
    return total.denominator == 1


# ---------------------------------------------------------------------------
# Hensel lifting


def poly_eval(coeffs, t: int) -> int:
    """Evaluate an integer polynomial given by coefficients (low degree first)."""
    out = 0
    for c in reversed(coeffs):
        out = out * t + c
    return out


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _val_or_inf(n: int, p: int):
    return float("inf") if n == 0 else valuation(n, p)


def hensel_lift_root(coeffs, x0: int, p: int, level: int) -> PadicApprox:
    """Lift an approximate root of an integer polynomial to a root mod p^level.

    Requires v_p(f(x0)) > 2 v_p(f'(x0)).  The returned residue is congruent
    to the unique root r with |r - x0| <= |f(x0) / f'(x0)|.
    """
    deriv = poly_derivative(coeffs)
    fx, dfx = poly_eval(coeffs, x0), poly_eval(deriv, x0)
    vf, vd = _val_or_inf(fx, p), _val_or_inf(dfx, p)
    if vd == float("inf") and vf == float("inf"):
        return PadicApprox(p, level, x0 % p ** level)
    if not vf > 2 * vd:
        raise CriterionFails(f"v(f(x0))={vf} is not > 2*v(f'(x0))={2 * vd}")
    k = int(vd)
    modulus = p ** (level + 2 * k + 1)
    x = x0 % modulus
    # Newton steps keep v(f'(x)) = k and at least double v(f(x)) - 2k
    while True:
        fx = poly_eval(coeffs, x)
        if fx % p ** (level + k) == 0:
            break
        dfx = poly_eval(deriv, x)
        unit = (dfx // p ** k) % modulus
        step = (fx // p ** k) * pow(unit, -1, modulus)
        x = (x - step) % modulus
    return PadicApprox(p, level, x % p ** level)


def sqrt_padic(n: int, p: int, level: int, conjugate=False) -> PadicApprox:
    """Canonical square root of a local square n in Z_p, modulo p^level.

    The unit part's root is the smallest positive residue root mod p (mod 8
    for p = 2), Hensel lifted; ``conjugate`` returns its negative.
    """
    if n == 0:
        return PadicApprox(p, level, 0)
    v, u = split_valuation(n, p)
    if v % 2 or v < 0 or not is_local_square(u, p):
        raise ValueError(f"{n} is not a square in Z_{p}")
    half = v // 2
    if half >= level:
        return PadicApprox(p, level, 0)
    inner = level - half
    if p == 2:
        # f(t) = t^2 - u with t = 1: v(f) >= 3 > 2 v(f') = 2
        root = hensel_lift_root([-u, 0, 1], 1, 2, inner + 1).residue % 2 ** inner
    else:
        r0 = sqrt_table(p)[u % p]
        root = hensel_lift_root([-u, 0, 1], r0, p, inner).residue
    modulus = p ** level
    value = (p ** half * root) % modulus
    if conjugate:
        value = (-value) % modulus
    return PadicApprox(p, level, value)


# ---------------------------------------------------------------------------
# Points of U over F_p and Z_p


def surface_value(a: int, m: int, x: int, y: int, z: int) -> int:
    return a * x * x + y * y + z * z - x * y * z - m


def gradient(a: int, x: int, y: int, z: int):
    return (2 * a * x - y * z, 2 * y - x * z, 2 * z - x * y)


@dataclass(frozen=True)
class FpPoint:
    x: int
    y: int
    z: int
    singular: bool


def fp_points(a: int, m: int, p: int):
    """All solutions of the surface congruence mod p, tagged singular or smooth."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    out = []
    for x in range(p):
        for y in range(p):
            for z in range(p):
                if surface_value(a, m, x, y, z) % p == 0:
                    sing = all(g % p == 0 for g in gradient(a, x, y, z))
                    out.append(FpPoint(x, y, z, sing))
    return out


@dataclass(frozen=True)
class LocalPoint:
    """Residues of a point of U(Z_p) modulo p^level."""

    x: int
    y: int
    z: int
    p: int
    level: int

    def coords(self):
        return (self.x, self.y, self.z)

    def on_surface(self, a: int, m: int) -> bool:
        return surface_value(a, m, self.x, self.y, self.z) % self.p ** self.level == 0


def lift_point(pt, a: int, m: int, p: int, level: int) -> LocalPoint:
    """Hensel lift a smooth F_p point to a point of U(Z_p) known mod p^level.

    The coordinate with the first nonzero partial (x, y, z order) is solved
    for; the other two keep their residues.
    """
    coords = [c % p for c in ((pt.x, pt.y, pt.z) if hasattr(pt, "x") else pt)]
    if surface_value(a, m, *coords) % p:
        raise NotOnSurface(f"{tuple(coords)} is not on the surface mod {p}")
    grad = gradient(a, *coords)
    try:
        i = next(k for k in range(3) if grad[k] % p)
    except StopIteration:
        raise NotSmooth(f"{tuple(coords)} is singular mod {p}") from None
    others = [coords[k] for k in range(3) if k != i]
    if i == 0:
        y, z = others
        poly = [y * y + z * z - m, -y * z, a]
    elif i == 1:
        x, z = others
        poly = [a * x * x + z * z - m, -x * z, 1]
    else:
        x, y = others
        poly = [a * x * x + y * y - m, -x * y, 1]
    root = hensel_lift_root(poly, coords[i], p, level).residue
    out = list(coords)
    out[i] = root
    return LocalPoint(*out, p=p, level=level)


def field_degree(a: int, m: int) -> int:
    """Degree of Q(sqrt a, sqrt m, sqrt(m - 4a)) over Q."""
    values = (a, m, m - 4 * a)
    if any(v == 0 for v in values):
        raise ValueError("a, m and m - 4a must be nonzero")
    primes = sorted({q for v in values for q in factorize(v)})
    index = {q: i + 1 for i, q in enumerate(primes)}
    vectors = []
    for v in values:
        bits = 1 if v < 0 else 0
        for q, e in factorize(v).items():
            if e % 2:
                bits |= 1 << index[q]
        vectors.append(bits)
    return 2 ** _gf2_rank(vectors)


def _gf2_rank(vectors) -> int:
    pivots = {}  # leading bit -> basis vector
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
    return len(pivots)


def default_level(a: int, m: int, p: int) -> int:
    """Starting precision for lifts and profile searches at p."""
    level = valuation(4 * (m - 4 * a), p) + 8
    if a:
        level += valuation(4 * a, p)
    return level
