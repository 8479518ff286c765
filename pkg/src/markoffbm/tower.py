"""Exact arithmetic in Q[alpha, beta, gamma] / (alpha^2 - a, beta^2 - m, gamma^2 - (m - 4a))
and polynomial functions on the affine surface a x^2 + y^2 + z^2 - x y z = m.

The ring is never assumed to be a field: when a, m or m - 4a are squares (or
products of them are) some elements are zero divisors and ``inverse`` raises
``ZeroDivisor``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ParamMismatch, ZeroDivisor

# Serialization order {1, a, b, g, ab, ag, bg, abg}; each basis element is a
# bitmask over the generators (alpha=1, beta=2, gamma=4).
MASKS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)
INDEX = {mask: i for i, mask in enumerate(MASKS)}
BASIS_NAMES = ("1", "α", "β", "γ", "αβ", "αγ", "βγ", "αβγ")

ALPHA, BETA, GAMMA = 0b001, 0b010, 0b100

ZERO = Fraction(0)
ONE = Fraction(1)


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@lru_cache(maxsize=256)
def _mul_table(a: int, m: int):
    squares = {ALPHA: a, BETA: m, GAMMA: m - 4 * a}
    table = []
    for mi in MASKS:
        row = []
        for mj in MASKS:
            factor = 1
            for bit, sq in squares.items():
                if mi & mj & bit:
                    factor *= sq
            row.append((INDEX[mi ^ mj], factor))
        table.append(row)
    return table


def _sign(mask: int, flip: int) -> int:
    return -1 if bin(mask & flip).count("1") % 2 else 1


class TowerElement:
    """Element of the tower ring for fixed integer parameters (a, m)."""

    __slots__ = ("coords", "params")

    def __init__(self, coords, params):
        coords = tuple(_frac(c) for c in coords)
        if len(coords) != 8:
            raise ValueError("a tower element has exactly 8 coordinates")
        self.coords = coords
        self.params = (int(params[0]), int(params[1]))

    # -- constructors -----------------------------------------------------
    @classmethod
    def scalar(cls, value, params) -> "TowerElement":
        return cls((value,) + (0,) * 7, params)

    @classmethod
    def basis(cls, mask: int, params, coeff=1) -> "TowerElement":
        coords = [0] * 8
        coords[INDEX[mask]] = coeff
        return cls(coords, params)

    @classmethod
    def generators(cls, params):
        """Return (1, alpha, beta, gamma) for the given parameters."""
        return (cls.scalar(1, params), cls.basis(ALPHA, params),
                cls.basis(BETA, params), cls.basis(GAMMA, params))

    # -- helpers ----------------------------------------------------------
    def _coerce(self, other) -> "TowerElement":
        if isinstance(other, TowerElement):
            if other.params != self.params:
                raise ParamMismatch(f"{self.params} vs {other.params}")
            return other
        if isinstance(other, (int, Fraction)):
            return TowerElement.scalar(other, self.params)
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TowerElement([u + v for u, v in zip(self.coords, other.coords)], self.params)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement([-u for u in self.coords], self.params)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TowerElement([u - v for u, v in zip(self.coords, other.coords)], self.params)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElement([u * other for u in self.coords], self.params)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return tower_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return TowerElement([u / other for u in self.coords], self.params)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * tower_inverse(other)

    def __pow__(self, n: int):
        if n < 0:
            return tower_inverse(self) ** (-n)
        result = TowerElement.scalar(1, self.params)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TowerElement.scalar(other, self.params)
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.params == other.params and self.coords == other.coords

    def __hash__(self):
        return hash((self.coords, self.params))

    def inverse(self) -> "TowerElement":
        return tower_inverse(self)

    def conjugate(self, flip: int) -> "TowerElement":
        """Apply the sign change negating every generator whose bit is in ``flip``."""
        return TowerElement(
            [c * _sign(mask, flip) for c, mask in zip(self.coords, MASKS)], self.params)

    def specialize_gamma(self, c) -> "TowerElement":
        """Substitute gamma = c * alpha * beta (valid when c^2 a m = m - 4a)."""
        c = _frac(c)
        a, m = self.params
        if c * c * a * m != m - 4 * a:
            raise ValueError("c^2 * a * m must equal m - 4a")
        ab = TowerElement.basis(ALPHA | BETA, self.params)
        out = TowerElement.scalar(0, self.params)
        for coeff, mask in zip(self.coords, MASKS):
            if not coeff:
                continue
            term = TowerElement.basis(mask & ~GAMMA, self.params, coeff)
            if mask & GAMMA:
                term = term * ab * c
            out = out + term
        return out

    # -- serialization ----------------------------------------------------
    def to_json(self):
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]

    @classmethod
    def from_json(cls, data, params) -> "TowerElement":
        return cls([Fraction(s) for s in data], params)

    def __repr__(self):
        terms = []
        for c, name in zip(self.coords, BASIS_NAMES):
            if c:
                terms.append(str(c) if name == "1" else f"{c}*{name}")
        return "TowerElement(" + (" + ".join(terms) or "0") + f"; a={self.params[0]}, m={self.params[1]})"


def tower_mul(u: TowerElement, v: TowerElement) -> TowerElement:
    if u.params != v.params:
        raise ParamMismatch(f"{u.params} vs {v.params}")
    table = _mul_table(*u.params)
    out = [ZERO] * 8
    for i, ci in enumerate(u.coords):
        if not ci:
            continue
        row = table[i]
        for j, cj in enumerate(v.coords):
            if cj:
                k, factor = row[j]
                out[k] += ci * cj * factor
    return TowerElement(out, u.params)


def tower_inverse(u: TowerElement) -> TowerElement:
    """Invert ``u`` by solving the 8x8 system for multiplication by ``u``."""
    if u.is_zero():
        raise ZeroDivisor("zero is not invertible")
    if u.is_rational():
        return TowerElement.scalar(1 / u.coords[0], u.params)
    # column j of the matrix is u * e_j
    cols = [tower_mul(u, TowerElement.basis(mask, u.params)).coords for mask in MASKS]
    rows = [[cols[j][i] for j in range(8)] + [ONE if i == 0 else ZERO] for i in range(8)]
    solution = _solve_augmented(rows, 8)
    if solution is None:
        raise ZeroDivisor(f"{u!r} is a zero divisor")
    return TowerElement(solution, u.params)


def _solve_augmented(rows, n):
    """Gauss-Jordan over Q on an n x (n+1) augmented matrix; None if singular."""
    rows = [list(r) for r in rows]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [vr - f * vc for vr, vc in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Polynomials over the tower


class Poly:
    """Sparse polynomial in ``nvars`` variables with tower coefficients.

    Variables are (x, y, z) or (x, y, z, t); exponents are tuples.
    """

    __slots__ = ("terms", "params", "nvars")

    def __init__(self, terms, params, nvars=3):
        self.params = (int(params[0]), int(params[1]))
        self.nvars = nvars
        clean = {}
        for exps, coeff in dict(terms).items():
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            if not isinstance(coeff, TowerElement):
                coeff = TowerElement.scalar(coeff, self.params)
            elif coeff.params != self.params:
                raise ParamMismatch(f"{coeff.params} vs {self.params}")
            if not coeff.is_zero():
                clean[tuple(exps)] = coeff
        self.terms = clean

    @classmethod
    def const(cls, value, params, nvars=3) -> "Poly":
        return cls({(0,) * nvars: value}, params, nvars)

    @classmethod
    def var(cls, index: int, params, nvars=3) -> "Poly":
        exps = [0] * nvars
        exps[index] = 1
        return cls({tuple(exps): 1}, params, nvars)

    @classmethod
    def variables(cls, params, nvars=3):
        return tuple(cls.var(i, params, nvars) for i in range(nvars))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.params != self.params:
                raise ParamMismatch(f"{other.params} vs {self.params}")
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction, TowerElement)):
            return Poly.const(other, self.params, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return Poly(out, self.params, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()}, self.params, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Poly(out, self.params, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of polynomials are not supported")
        result = Poly.const(1, self.params, self.nvars)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.params, self.nvars, self.terms) == (other.params, other.nvars, other.terms)

    def __hash__(self):
        return hash((self.params, self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def conjugate(self, flip: int) -> "Poly":
        return Poly({e: c.conjugate(flip) for e, c in self.terms.items()}, self.params, self.nvars)

    def specialize_gamma(self, c) -> "Poly":
        return Poly({e: v.specialize_gamma(c) for e, v in self.terms.items()}, self.params, self.nvars)

    def evaluate(self, point) -> TowerElement:
        """Evaluate at a point whose coordinates are tower elements or rationals."""
        vals = [p if isinstance(p, TowerElement) else TowerElement.scalar(p, self.params)
                for p in point]
        total = TowerElement.scalar(0, self.params)
        powers = [[TowerElement.scalar(1, self.params)] for _ in vals]
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                while len(powers[i]) <= k:
                    powers[i].append(powers[i][-1] * vals[i])
                if k:
                    term = term * powers[i][k]
            total = total + term
        return total

    def homogenize(self) -> "Poly":
        """Homogenize a 3-variable polynomial with a fourth variable t."""
        if self.nvars != 3:
            raise ValueError("homogenize expects a polynomial in x, y, z")
        d = self.total_degree()
        return Poly({e + (d - sum(e),): c for e, c in self.terms.items()}, self.params, 4)

    def integer_terms(self):
        """Return [(exps, int)] when every coefficient is a rational integer."""
        out = []
        for e, c in sorted(self.terms.items()):
            if not c.is_rational() or c.coords[0].denominator != 1:
                raise ValueError("polynomial does not have integer coefficients")
            out.append((e, int(c.coords[0])))
        return out

    def to_json(self):
        return {",".join(map(str, e)): c.to_json() for e, c in sorted(self.terms.items())}

    def __repr__(self):
        names = "xyzt"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
            parts.append(f"({c.coords[0] if c.is_rational() else c})" + (f"*{mono}" if mono else ""))
        return "Poly(" + (" + ".join(parts) or "0") + ")"


class SurfaceFunction(Poly):
    """A polynomial on U in canonical form: z-degree at most 1."""

    __slots__ = ()

    def __init__(self, terms, params):
        super().__init__(terms, params, 3)
        if any(e[2] > 1 for e in self.terms):
            raise ValueError("SurfaceFunction requires z-degree <= 1; use reduce_z")

    @classmethod
    def from_json(cls, data, params) -> "SurfaceFunction":
        terms = {tuple(int(k) for k in key.split(",")): TowerElement.from_json(v, params)
                 for key, v in data.items()}
        return reduce_z(Poly(terms, params))


def surface_equation(params) -> Poly:
    """a x^2 + y^2 + z^2 - x y z - m."""
    a, m = params
    x, y, z = Poly.variables(params)
    return a * x * x + y * y + z * z - x * y * z - m


def reduce_z(poly) -> SurfaceFunction:
    """Rewrite z^2 = xyz - a x^2 - y^2 + m until the z-degree is at most 1."""
    if isinstance(poly, SurfaceFunction):
        return poly
    if poly.nvars != 3:
        raise ValueError("reduce_z expects a polynomial in x, y, z")
    a, m = poly.params
    out = {}
    pending = list(poly.terms.items())
    while pending:
        (i, j, k), c = pending.pop()
        if k <= 1:
            key = (i, j, k)
            out[key] = out[key] + c if key in out else c
            continue
        pending.append(((i + 1, j + 1, k - 1), c))
        pending.append(((i + 2, j, k - 2), c * (-a)))
        pending.append(((i, j + 2, k - 2), -c))
        pending.append(((i, j, k - 2), c * m))
    return SurfaceFunction(out, poly.params)


def surface_equal(p: Poly, q: Poly) -> bool:
    """True when p and q agree as functions on U (same canonical form)."""
    if p.params != q.params:
        raise ParamMismatch(f"{p.params} vs {q.params}")
    return reduce_z(p).terms == reduce_z(q).terms


def random_tower_element(params, rng, bound=5) -> TowerElement:
    return TowerElement([Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
                         for _ in range(8)], params)

