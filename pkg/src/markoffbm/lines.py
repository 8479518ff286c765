"""The 27 lines on the projective closure X: a x^2 t + y^2 t + z^2 t - x y z = m t^3,
incidence between them, and the rational-function identities behind the
order-4 Brauer class.

Lines are pairs of linear forms in (x, y, z, t) with coefficients in the
tower ring Q(sqrt a, sqrt m, sqrt(m - 4a)).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from math import isqrt

from .errors import DegenerateParameters, HypothesisViolation, ZeroDivisor
from .padic import is_rational_square
from .solubility import check_params
from .tower import ALPHA, BETA, GAMMA, Poly, TowerElement, surface_equal


@dataclass(frozen=True)
class Line:
    label: str
    forms: tuple  # two tuples of 4 TowerElements: coefficients of x, y, z, t

    def coefficient_matrix(self):
        return [list(f) for f in self.forms]


def _gens(params):
    one, al, be, ga = TowerElement.generators(params)
    return one, al, be, ga


def _form(params, x=0, y=0, z=0, t=0):
    return tuple(c if isinstance(c, TowerElement) else TowerElement.scalar(c, params)
                 for c in (x, y, z, t))


def line_label(i: int, eps: int, delta: int) -> str:
    return f"l{i}({eps:+d},{delta:+d})".replace("+1", "1")


def lines_catalog(a: int, m: int) -> dict:
    """All 27 lines keyed by label: H1..H3 and l_i(eps, delta)."""
    check_params(a, m)
    if a == 0:
        raise DegenerateParameters("a must be nonzero")
    params = (a, m)
    one, al, be, ga = _gens(params)
    half = Fraction(1, 2)
    F = lambda **kw: _form(params, **kw)  # noqa: E731
    out = {
        "H1": Line("H1", (F(x=1), F(t=1))),
        "H2": Line("H2", (F(y=1), F(t=1))),
        "H3": Line("H3", (F(z=1), F(t=1))),
    }
    for eps in (1, -1):
        for d in (1, -1):
            rows = {
                1: (F(x=1, t=-2 * eps), F(y=1, z=-eps, t=-d * ga)),
                2: (F(y=1, t=-2 * eps * al), F(z=1, x=-eps * al, t=-d * ga)),
                3: (F(z=1, t=-2 * eps * al), F(x=al, y=-eps, t=-d * ga)),
                4: (F(x=al, t=-eps * be), F(y=al, z=-(eps * be + d * ga) * half)),
                5: (F(y=1, t=-eps * be), F(z=1, x=-(eps * be + d * ga) * half)),
                6: (F(z=1, t=-eps * be), F(x=1, y=-(eps * be + d * ga) * Fraction(1, 2 * a))),
            }
            for i, forms in rows.items():
                label = line_label(i, eps, d)
                out[label] = Line(label, forms)
    return out


def _det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def line_points(L: Line):
    """Two points spanning L, found by inverting a 2x2 minor of its forms."""
    M = L.coefficient_matrix()
    params = M[0][0].params
    zero = TowerElement.scalar(0, params)
    last_error = None
    for i, j in combinations(range(4), 2):
        minor = [[M[0][i], M[0][j]], [M[1][i], M[1][j]]]
        try:
            inv_det = _det2(minor).inverse()
        except ZeroDivisor as exc:
            last_error = exc
            continue
        free = [k for k in range(4) if k not in (i, j)]
        pts = []
        for k in free:
            # solve minor * (p_i, p_j) = -(column k)
            r0, r1 = -M[0][k], -M[1][k]
            pi = (minor[1][1] * r0 - minor[0][1] * r1) * inv_det
            pj = (minor[0][0] * r1 - minor[1][0] * r0) * inv_det
            p = [zero] * 4
            p[i], p[j], p[k] = pi, pj, TowerElement.scalar(1, params)
            pts.append(p)
        return pts
    raise ZeroDivisor(f"no invertible 2x2 minor for {L.label}: {last_error}")


# sample parameters (u, v) at which a binary form of degree <= 3 is determined
_SAMPLES = [(1, 0), (0, 1), (1, 1), (1, -1)]


def _on_line(points, u, v):
    return [p * u + q * v for p, q in zip(*points)]


def cubic_form(params) -> Poly:
    a, m = params
    x, y, z, t = Poly.variables(params, 4)
    return a * x * x * t + y * y * t + z * z * t - x * y * z - m * t ** 3


def line_on_surface(L: Line, a: int, m: int) -> bool:
    F = cubic_form((a, m))
    pts = line_points(L)
    return all(F.evaluate(_on_line(pts, u, v)).is_zero() for u, v in _SAMPLES)


def det(M):
    """Determinant by Laplace expansion along permutations (for 4x4 tower matrices)."""
    n = len(M)
    params = M[0][0].params
    total = TowerElement.scalar(0, params)
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = TowerElement.scalar(sign, params)
        for i in range(n):
            term = term * M[i][perm[i]]
        total = total + term
    return total


def _vanishes_on(form, points) -> bool:
    zero = TowerElement.scalar(0, form[0].params)
    return all(sum((c * p for c, p in zip(form, pt)), zero).is_zero() for pt in points)


def incidence(L1: Line, L2: Line) -> int:
    """1 if the lines meet in P^3, else 0."""
    pts = line_points(L1)
    if all(_vanishes_on(f, pts) for f in L2.forms):
        raise ValueError(f"{L1.label} and {L2.label} are the same line")
    D = det(L1.coefficient_matrix() + L2.coefficient_matrix())
    if D.is_zero():
        return 1
    try:
        D.inverse()
    except ZeroDivisor as exc:
        raise ZeroDivisor(f"determinant for ({L1.label}, {L2.label}) is a zero divisor") from exc
    return 0


def incidence_matrix(labels, catalog):
    return [[None if u == v else incidence(catalog[u], catalog[v]) for v in labels] for u in labels]


# -- the order-4 class ------------------------------------------------------------


def f_g_functions(params):
    """The two affine quadrics whose zero loci carry the order-4 cocycle."""
    one, al, be, ga = _gens(params)
    x, y, z = Poly.variables(params)
    half = Fraction(1, 2)
    f = ((be - ga - 2 * al) * half) * x * y + ga * y + (2 * al - be) * z - (al * ga) * x + be * ga
    g = ((-be - ga - 2 * al) * half) * x * y + ga * y + (2 * al + be) * z - (al * ga) * x - be * ga
    return f, g


DIVISOR_SUPPORT = {
    "f": [(4, 1, 1), (5, -1, 1), (1, 1, -1), (2, -1, 1)],
    "g": [(5, 1, 1), (4, -1, 1), (1, 1, -1), (2, -1, 1)],
}


def vanishes_on_line(fn: Poly, L: Line) -> bool:
    """True if the affine polynomial fn vanishes on the affine part of L."""
    Fh = fn.homogenize()
    pts = line_points(L)
    return all(Fh.evaluate(_on_line(pts, u, v)).is_zero() for u, v in _SAMPLES)


def divisor_vanishing_check(name: str, a: int, m: int) -> bool:
    """The named function (f or g) vanishes on each of its four listed lines."""
    if name not in DIVISOR_SUPPORT:
        raise ValueError(f"unknown function {name!r}; expected 'f' or 'g'")
    params = (a, m)
    cat = lines_catalog(a, m)
    fn = dict(zip("fg", f_g_functions(params)))[name]
    return all(vanishes_on_line(fn, cat[line_label(*key)]) for key in DIVISOR_SUPPORT[name])


def vanishing_lines(name: str, a: int, m: int):
    """Labels of catalog lines (outside t = 0) on which f or g vanishes."""
    params = (a, m)
    cat = lines_catalog(a, m)
    fn = dict(zip("fg", f_g_functions(params)))[name]
    return sorted(label for label, L in cat.items()
                  if not label.startswith("H") and vanishes_on_line(fn, L))


def gamma_ratio(a: int, m: int) -> Fraction:
    """c with c^2 a m = m - 4a, after checking [Q(sqrt a, sqrt m):Q] = 4."""
    check_params(a, m)
    failed = []
    if a == 0:
        failed.append("a != 0")
    else:
        if is_rational_square(a):
            failed.append("sqrt(a) not rational")
        if is_rational_square(m):
            failed.append("sqrt(m) not rational")
        if is_rational_square(a * m):
            failed.append("sqrt(am) not rational")
        ratio = Fraction(m - 4 * a, m * a)
        if not (ratio > 0 and is_rational_square(ratio.numerator * ratio.denominator)):
            failed.append("(m-4a)/(ma) is a rational square")
    if failed:
        raise HypothesisViolation(failed)
    ratio = Fraction(m - 4 * a, m * a)
    return Fraction(isqrt(ratio.numerator), isqrt(ratio.denominator))


def quartic_fixtures(bound: int = 200):
    out = []
    for a in range(-bound, bound + 1):
        for m in range(-bound, bound + 1):
            if a == 0 or m == 0 or m == 4 * a:
                continue
            try:
                gamma_ratio(a, m)
            except HypothesisViolation:
                continue
            out.append((a, m))
    return out


SIGMA = ALPHA | GAMMA  # fixes sqrt(m)
TAU = ALPHA | BETA  # fixes sqrt(m - 4a)


@dataclass
class CocycleIdentityReport:
    a: int
    m: int
    c: Fraction
    identities: dict

    @property
    def ok(self) -> bool:
        return all(self.identities.values())


def cocycle_identity_check(a: int, m: int, c_sign: int = 1) -> CocycleIdentityReport:
    """Verify the four identities making (sqrt(m) y - m, R, x - sqrt(m)/sqrt(a))
    a 2-cocycle, where R = g (2 sqrt a - sqrt m + sqrt(m-4a)) / (f (2 sqrt a + sqrt m - sqrt(m-4a))).

    Multiplicative coboundaries are read as (1 + s) R = R s(R), (1 - t) h = h / t(h)
    and (s - 1) k = s(k) / k; each identity is cross-multiplied and compared
    in normal form modulo the surface equation.
    """
    c = gamma_ratio(a, m) * c_sign
    params = (a, m)
    one, al, be, ga = _gens(params)
    x, y, z = Poly.variables(params)
    f, g = f_g_functions(params)
    spec = lambda P: P.specialize_gamma(c)  # noqa: E731
    rn = spec(g * (2 * al - be + ga))
    rd = spec(f * (2 * al + be - ga))
    h = spec(be * y - m)
    k = spec(x - be * al * Fraction(1, a))

    def sig(P):
        return P.conjugate(SIGMA)

    def tau(P):
        return P.conjugate(TAU)

    ids = {
        "sigma fixes sqrt(m) y - m": surface_equal(sig(h), h),
        "tau fixes x - sqrt(m)/sqrt(a)": surface_equal(tau(k), k),
        "(1+sigma) R = (1-tau)(sqrt(m) y - m)":
            surface_equal(rn * sig(rn) * tau(h), h * rd * sig(rd)),
        "(1+tau) R = (sigma-1)(x - sqrt(m)/sqrt(a))":
            surface_equal(rn * tau(rn) * k, sig(k) * rd * tau(rd)),
    }
    return CocycleIdentityReport(a, m, c, ids)
