"""Parameterized families with a known Brauer-Manin verdict, and validators
that name each failed hypothesis."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import isprime

from .errors import HypothesisViolation
from .padic import factorize, field_degree, is_local_square, is_rational_square, legendre, valuation


def _prime_divisors(n: int):
    return sorted(factorize(abs(n))) if n else []


def _leg(a: int, p: int):
    """Legendre symbol, or None when p = 2 (where it is undefined)."""
    return legendre(a, p) if p != 2 else None


def _pm(p: int, mod: int, residues) -> bool:
    return any(p % mod == r % mod or p % mod == (-r) % mod for r in residues)


@dataclass(frozen=True)
class FamilySpec:
    key: str
    params: tuple  # parameter names
    equation: str
    designated_prime: int
    constant: str

    def to_json(self):
        return {"key": self.key, "params": list(self.params), "equation": self.equation,
                "designated_prime": self.designated_prime, "class": f"(x^2-4, {self.constant})"}


FAMILIES = {
    "3.6": FamilySpec("3.6", ("a", "d"), "a x^2 + y^2 + z^2 - xyz = 4a + 2d^2", 2, "2"),
    "3.7": FamilySpec("3.7", ("a", "d"), "a x^2 + y^2 + z^2 - xyz = 4a + 3d^2", 3, "3"),
    "3.8": FamilySpec("3.8", ("a", "d"), "a x^2 + y^2 + z^2 - xyz = 4a + 6d^2", 3, "6"),
    "3.9": FamilySpec("3.9", ("a", "d"), "a x^2 + y^2 + z^2 - xyz = 4a + 10d^2", 2, "10"),
    "3.10": FamilySpec("3.10", ("t", "q", "d"), "t q^2 x^2 + y^2 + z^2 - xyz = 4tq^2 + 2q^2d^2", 2, "2"),
    "3.11": FamilySpec("3.11", ("q",), "-q x^2 + y^2 + z^2 - xyz = -2q", 2, "2q"),
}


def _check(failed, cond: bool, clause: str):
    if not cond:
        failed.append(clause)


def _family_36(a, d):
    f = []
    _check(f, a % 2 == 1, "a odd")
    _check(f, d % 2 == 1, "d odd")
    _check(f, gcd(a, d) == 1, "gcd(a, d) = 1")
    _check(f, (a - 1) % 3 != 0, "3 does not divide a - 1")
    _check(f, not is_rational_square(a), "sqrt(a) not rational")
    for p in _prime_divisors(d):
        _check(f, _pm(p, 8, [1]) or _leg(a, p) == -1,
               f"prime {p} | d: p = +-1 mod 8 or (a/p) = -1")
    return (a, 4 * a + 2 * d * d), f


def _family_37(a, d):
    f = []
    m = 4 * a + 3 * d * d
    _check(f, d != 0, "d != 0")
    _check(f, a % 2 == 0, "a even")
    _check(f, a % 3 == 1, "a = 1 mod 3")
    _check(f, not is_rational_square(a), "sqrt(a) not rational")
    for p in _prime_divisors(d):
        _check(f, _pm(p, 12, [1]) or _leg(a, p) == -1,
               f"prime {p} | d: p = +-1 mod 12 or (a/p) = -1")
    _check(f, not is_rational_square(m), "sqrt(4a + 3d^2) not rational")
    return (a, m), f


def _family_38(a, d):
    f = []
    _check(f, d != 0, "d != 0")
    _check(f, a % 4 == 0, "4 | a")
    _check(f, a % 3 == 1, "a = 1 mod 3")
    _check(f, not is_rational_square(a), "sqrt(a) not rational")
    for p in _prime_divisors(d):
        ok = (_pm(p, 12, [1]) and _pm(p, 8, [1])) or (_pm(p, 12, [5]) and _pm(p, 8, [3]))
        _check(f, ok, f"prime {p} | d: (+-1 mod 12 and +-1 mod 8) or (+-5 mod 12 and +-3 mod 8)")
    return (a, 4 * a + 6 * d * d), f


def _family_39(a, d):
    f = []
    _check(f, a % 2 == 1, "a odd")
    _check(f, d % 2 == 1, "d odd")
    _check(f, gcd(a, d) == 1, "gcd(a, d) = 1")
    _check(f, a != 0 and valuation(a, 5) >= 2, "ord_5(a) >= 2")
    _check(f, not is_rational_square(a), "sqrt(a) not rational")
    for p in _prime_divisors(d):
        ok = (_pm(p, 8, [1]) and _pm(p, 5, [1])) or (_pm(p, 8, [3]) and _pm(p, 5, [2]))
        _check(f, ok, f"prime {p} | d: (+-1 mod 8 and +-1 mod 5) or (+-3 mod 8 and +-2 mod 5)")
    return (a, 4 * a + 10 * d * d), f


def _family_310(t, q, d):
    f = []
    _check(f, q > 2 and isprime(q), "q an odd prime")
    _check(f, t % 2 == 1, "t odd")
    _check(f, (t - 1) % 3 != 0, "3 does not divide t - 1")
    _check(f, not is_rational_square(t), "sqrt(t) not rational")
    _check(f, gcd(t, d) == 1, "gcd(t, d) = 1")
    for p in _prime_divisors(d):
        _check(f, _pm(p, 8, [1]), f"prime {p} | d: p = +-1 mod 8")
    a = t * q * q
    return (a, 4 * a + 2 * q * q * d * d), f


def _family_311(q):
    f = []
    _check(f, q > 2 and isprime(q), "q an odd prime")
    _check(f, _pm(q, 8, [3]), "q = +-3 mod 8")
    return (-q, -2 * q), f


_BUILDERS = {"3.6": _family_36, "3.7": _family_37, "3.8": _family_38, "3.9": _family_39,
             "3.10": _family_310, "3.11": _family_311}


def normalize_family_key(key: str) -> str:
    k = key.lower().removeprefix("prop").removeprefix("-")
    if k not in FAMILIES:
        raise KeyError(f"unknown family {key!r}; known: {', '.join(FAMILIES)}")
    return k


def family_instance(key: str, *params, strict=True):
    """(a, m) for the family member; raises HypothesisViolation naming failed clauses."""
    key = normalize_family_key(key)
    spec = FAMILIES[key]
    if len(params) != len(spec.params):
        raise TypeError(f"family {key} takes parameters {spec.params}")
    (a, m), failed = _BUILDERS[key](*params)
    if failed and strict:
        raise HypothesisViolation(failed)
    return a, m, failed


# -- no-obstruction settings ---------------------------------------------------


def surjectivity_hypotheses(a: int, m: int, p: int):
    """Failed clauses for the one-prime surjectivity setting: degree 8, p >= 5, p not | a,
    ord_p(m - 4a) odd."""
    f = []
    _check(f, a != 0 and field_degree(a, m) == 8, "[Q(sqrt a, sqrt m, sqrt(m-4a)):Q] = 8")
    _check(f, p >= 5 and isprime(p), "p >= 5 prime")
    _check(f, a % p != 0, "p does not divide a")
    c = m - 4 * a
    _check(f, c != 0 and valuation(c, p) % 2 == 1, "ord_p(m - 4a) odd")
    return f


def find_surjectivity_instance(bound: int = 30):
    """First locally soluble (a, m, p) satisfying the surjectivity hypotheses, scanning outward."""
    from .solubility import everywhere_locally_soluble

    pairs = sorted(((a, m) for a in range(-bound, bound + 1) for m in range(-bound, bound + 1)
                    if a and m and m != 4 * a),
                   key=lambda t: (abs(t[0]) + abs(t[1]), t))
    for a, m in pairs:
        for p in _prime_divisors(m - 4 * a):
            if p >= 5 and not surjectivity_hypotheses(a, m, p):
                if everywhere_locally_soluble(a, m).soluble:
                    return a, m, p
    return None


def _noncyclic_decomposition(a: int, m: int, q: int) -> bool:
    # Gal(Q(sqrt a, sqrt m)/Q) has a noncyclic decomposition group at q iff the
    # local extension has degree 4, i.e. none of a, m, am is a square in Q_q
    return not any(is_local_square(v, q) for v in (a, m, a * m))


def quartic_hypotheses(a: int, m: int, p: int):
    """Failed clauses for the order-4 class setting at the prime p."""
    f = []
    if a == 0 or m == 0 or m == 4 * a:
        return ["a, m, m - 4a nonzero"]
    _check(f, not any(is_rational_square(v) for v in (a, m, a * m)), "[Q(sqrt a, sqrt m):Q] = 4")
    r = Fraction(m - 4 * a, m * a)
    _check(f, r > 0 and is_rational_square(r.numerator * r.denominator),
           "sqrt(m-4a)/sqrt(ma) rational")
    bad = [q for q in sorted(set(factorize(2 * abs(a * m)))) if _noncyclic_decomposition(a, m, q)]
    _check(f, not bad, f"decomposition groups cyclic (fails at {bad})")
    _check(f, p >= 5 and isprime(p), "p >= 5 prime")
    if p >= 5 and isprime(p):
        _check(f, is_local_square(m, p), "p splits in Q(sqrt m)")
        _check(f, valuation(a, p) % 2 == 1, "p ramified in Q(sqrt a)")
    return f


def find_quartic_instances(bound: int = 200, limit: int | None = None):
    out = []
    for a in range(-bound, bound + 1):
        for m in range(-bound, bound + 1):
            if a == 0 or m == 0 or m == 4 * a:
                continue
            r = Fraction(m - 4 * a, m * a)
            if r <= 0 or not is_rational_square(r.numerator * r.denominator):
                continue
            for p in _prime_divisors(a):
                if p >= 5 and not quartic_hypotheses(a, m, p):
                    out.append((a, m, p))
                    if limit and len(out) >= limit:
                        return out
    return out
