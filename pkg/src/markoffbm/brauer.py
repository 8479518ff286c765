"""Quaternion Brauer classes on U: local evaluation, invariant profiles over
U(Z_p) and U(R), and Brauer-Manin verdicts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product

import sympy

from .errors import NotSplit
from .padic import (
    HALF, INFINITY, ZERO, LocalPoint, default_level, factorize, fp_points, gradient,
    hilbert, is_local_square, legendre, lift_point, sqrt_padic, squarefree_part,
    surface_value, valuation,
)
from .solubility import check_params, children, everywhere_locally_soluble, level_one_points
from .tower import Poly, reduce_z

VARIABLES = "xyz"


@dataclass(frozen=True)
class Representation:
    """One symbol pair (F, c): F an integer polynomial on U, c a nonzero rational."""

    terms: tuple  # ((i, j, k), coeff) with integer coefficients
    constant: Fraction
    text: str

    @property
    def involved(self) -> frozenset:
        return frozenset(i for e, _ in self.terms for i in range(3) if e[i])

    def value(self, x: int, y: int, z: int) -> int:
        total = 0
        for (i, j, k), c in self.terms:
            total += c * x ** i * y ** j * z ** k
        return total


def representation(poly: Poly, constant, text: str) -> Representation:
    return Representation(tuple(reduce_z(poly).integer_terms()), Fraction(constant), text)


@dataclass
class BrauerClass:
    label: str
    representations: list
    # odd primes p not dividing this integer give invariant 0 on all of U(Z_p)
    unramified_away_from: int | None = None
    # classes whose sum (in Br, exponent 2) equals this one; used when no
    # representation of this class is determined
    combination: tuple = ()

    def constants(self):
        return {r.constant for r in self.representations}

    def to_json(self):
        return {"label": self.label,
                "representations": [f"({r.text}, {r.constant})" for r in self.representations]}


def standard_classes(a: int, m: int):
    """B1 = (x-2, m-4a), B2 = (x+2, m-4a) and B = (x^2-4, m-4a) with its
    equivalent forms (y^2-4a, m-4a), (z^2-4a, m-4a)."""
    check_params(a, m)
    params = (a, m)
    c = m - 4 * a
    x, y, z = Poly.variables(params)
    b1 = BrauerClass("B1", [representation(x - 2, c, "x-2")], c)
    b2 = BrauerClass("B2", [representation(x + 2, c, "x+2")], c)
    b = BrauerClass("B", [
        representation(x * x - 4, c, "x^2-4"),
        representation(y * y - 4 * a, c, f"y^2-{4 * a}" if a >= 0 else f"y^2+{-4 * a}"),
        representation(z * z - 4 * a, c, f"z^2-{4 * a}" if a >= 0 else f"z^2+{-4 * a}"),
    ], c)
    b.combination = (b1, b2)
    b1.combination = (b, b2)
    b2.combination = (b, b1)
    return [b1, b2, b]


def pair_classes(a: int, m: int):
    """The pair ((x^2-4, m-4a), (x+2, m-4a)) used for realization at one prime."""
    b1, b2, b = standard_classes(a, m)
    return [b, b2]


# ---------------------------------------------------------------------------
# Evaluation on residue classes


def _determined_value(rep: Representation, point, prec: int, p: int):
    """Invariant of rep on every point congruent to ``point`` mod p^prec, or None."""
    value = rep.value(*point)
    if value % p ** prec == 0:
        return None
    # nonzero mod p^prec fixes the valuation; for odd p that fixes the square class
    symbol = hilbert(value, rep.constant, p)
    if p == 2:
        # the 2-adic square class needs 3 digits past the valuation; with
        # fewer, accept only if every completion gives the same symbol
        missing = valuation(value, 2) + 3 - prec
        if missing > 0 and any(hilbert(value + t * 2 ** prec, rep.constant, 2) != symbol
                               for t in range(1, 2 ** missing)):
            return None
    return symbol


def _own_value(cls: BrauerClass, point, prec: int, p: int):
    for rep in cls.representations:
        val = _determined_value(rep, point, prec, p)
        if val is not None:
            return val
    return None


def eval_class_at(cls: BrauerClass, point, prec: int, p: int):
    val = _own_value(cls, point, prec, p)
    if val is None and cls.combination:
        parts = [_own_value(c, point, prec, p) for c in cls.combination]
        if None not in parts:
            val = sum(parts, ZERO) % 1
    return val


def eval_class(cls: BrauerClass, pt: LocalPoint):
    """Local invariant of ``cls`` at a point of U(Z_p) known mod p^level, or None."""
    return eval_class_at(cls, pt.coords(), pt.level, pt.p)


# ---------------------------------------------------------------------------
# Profiles


class ProfileStatus(str, Enum):
    EXHAUSTIVE = "Exhaustive"
    SAMPLED = "Sampled"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class JointProfile:
    place: object
    labels: tuple
    achieved: frozenset  # of tuples of Fractions
    status: ProfileStatus
    rule: str | None = None
    nodes: int = 0
    max_level: int = 0

    def project(self, index: int) -> frozenset:
        return frozenset(t[index] for t in self.achieved)

    def is_full(self) -> bool:
        return len(self.achieved) == 2 ** len(self.labels)


@dataclass
class InvariantProfile:
    place: object
    label: str
    achieved: frozenset
    status: ProfileStatus
    rule: str | None = None

    def to_json(self):
        return {"p": self.place, "class": self.label,
                "achieved": [_fmt(v) for v in sorted(self.achieved)],
                "status": self.status.value, "rule": self.rule}


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(_fmt(u) for u in v) + ")"
    return "0" if v == 0 else f"{v.numerator}/{v.denominator}"


@dataclass
class Caps:
    """Search limits for profile enumeration; None means the default for (a, m, p)."""

    level_cap: int | None = None
    node_cap: int = 300_000

    def level_for(self, a: int, m: int, p: int) -> int:
        if self.level_cap is not None:
            return self.level_cap
        return 64 * default_level(a, m, p)


def _in_class_certificate(a: int, m: int, p: int, node, level: int) -> bool:
    """True when the class of ``node`` mod p^level certainly contains a point of U(Z_p)."""
    f = surface_value(a, m, *node)
    vf = math.inf if f == 0 else valuation(f, p)
    for g in gradient(a, *node):
        if g == 0:
            continue
        vg = valuation(g, p)
        if vf > 2 * vg and vf - vg >= level:
            return True
    return False


def joint_profile(classes, a: int, m: int, p, caps: Caps | None = None) -> JointProfile:
    """Set of value tuples (inv_p C_1(T), ..., inv_p C_r(T)) over T in U(Z_p)."""
    caps = caps or Caps()
    labels = tuple(c.label for c in classes)
    if p == INFINITY:
        return _real_joint_profile(classes, a, m)
    if p != 2:
        if all(c.unramified_away_from is not None and c.unramified_away_from % p != 0
               for c in classes):
            return JointProfile(p, labels, frozenset({(ZERO,) * len(classes)}),
                                ProfileStatus.EXHAUSTIVE, "unramified: odd p prime to m-4a")
    if all(all(is_local_square(k, p) for k in c.constants()) for c in classes):
        return JointProfile(p, labels, frozenset({(ZERO,) * len(classes)}),
                            ProfileStatus.EXHAUSTIVE, "constant is a local square")
    return _enumerate_profile(classes, a, m, p, caps)


def _enumerate_profile(classes, a, m, p, caps) -> JointProfile:
    labels = tuple(c.label for c in classes)
    full = 2 ** len(classes)
    level_cap = caps.level_for(a, m, p)
    achieved = set()
    nodes = level_one_points(a, m, p)
    visited = 0
    level = 1
    while True:
        pending = []
        for node in nodes:
            visited += 1
            values = tuple(eval_class_at(c, node, level, p) for c in classes)
            determined = None not in values
            if determined and values in achieved:
                continue
            if determined and _in_class_certificate(a, m, p, node, level):
                achieved.add(values)
                continue
            pending.append(node)
        if len(achieved) == full:
            return JointProfile(p, labels, frozenset(achieved), ProfileStatus.EXHAUSTIVE,
                                "enumeration (all tuples realized)", visited, level)
        if not pending:
            return JointProfile(p, labels, frozenset(achieved), ProfileStatus.EXHAUSTIVE,
                                "enumeration", visited, level)
        if level >= level_cap or len(pending) * p * p > caps.node_cap:
            return JointProfile(p, labels, frozenset(achieved), ProfileStatus.INCONCLUSIVE,
                                f"cap reached at level {level} with {len(pending)} open classes",
                                visited, level)
        nodes = [c for node in pending for c in children(a, m, p, node, level)]
        level += 1


def invariant_profile(cls: BrauerClass, a: int, m: int, p, caps: Caps | None = None) -> InvariantProfile:
    joint = joint_profile([cls], a, m, p, caps)
    return InvariantProfile(p, cls.label, joint.project(0), joint.status, joint.rule)


# -- the real place -----------------------------------------------------------


def _x_only_rep(cls: BrauerClass):
    for rep in cls.representations:
        if rep.involved <= {0}:
            return rep
    return None


def _real_fiber_nonempty(a: int, m: int, x) -> bool:
    """y^2 + z^2 - x y z = m - a x^2 has a real solution."""
    rhs = m - a * x * x
    if abs(x) > 2:
        return True
    if abs(x) == 2:
        return rhs >= 0  # form is (y -+ z)^2
    return rhs >= 0  # positive definite form


def _real_joint_profile(classes, a: int, m: int) -> JointProfile:
    labels = tuple(c.label for c in classes)
    if all(all(k > 0 for k in c.constants()) for c in classes):
        return JointProfile(INFINITY, labels, frozenset({(ZERO,) * len(classes)}),
                            ProfileStatus.EXHAUSTIVE, "m-4a > 0")
    reps = [_x_only_rep(c) for c in classes]
    if None in reps:
        return _sampled_real_profile(classes, a, m)
    # signs of x-only functions are constant between real roots; the
    # achievable x-set has breakpoints at +-2 and +-sqrt(m/a)
    t = sympy.Symbol("t")
    breaks = {sympy.Integer(2), sympy.Integer(-2)}
    for rep in reps:
        poly = sum(c * t ** e[0] for e, c in rep.terms)
        breaks.update(r for r in sympy.Poly(poly, t).real_roots())
    if a != 0 and sympy.Rational(m, a) > 0:
        r = sympy.sqrt(sympy.Rational(m, a))
        breaks.update({r, -r})
    pts = sorted(breaks, key=lambda v: float(v))
    tests = list(pts) + [pts[0] - 1, pts[-1] + 1]
    tests += [(u + v) / 2 for u, v in zip(pts, pts[1:])]
    achieved = set()
    for xv in tests:
        if not _real_fiber_nonempty(a, m, xv):
            continue
        vals = []
        for rep, cls in zip(reps, classes):
            fx = sum(c * xv ** e[0] for e, c in rep.terms)
            if fx == 0:
                break
            vals.append(HALF if (fx < 0 and rep.constant < 0) else ZERO)
        else:
            achieved.add(tuple(vals))
    return JointProfile(INFINITY, labels, frozenset(achieved), ProfileStatus.EXHAUSTIVE,
                        "sign analysis in x")


def _sampled_real_profile(classes, a, m) -> JointProfile:
    labels = tuple(c.label for c in classes)
    achieved = set()
    grid = [k / 4 for k in range(-40, 41)]
    for xv, yv in product(grid, grid):
        # z^2 - x y z + (a x^2 + y^2 - m) = 0
        disc = (xv * yv) ** 2 - 4 * (a * xv * xv + yv * yv - m)
        if disc < 0:
            continue
        for zv in ((xv * yv + math.sqrt(disc)) / 2, (xv * yv - math.sqrt(disc)) / 2):
            vals = []
            for cls in classes:
                rep = cls.representations[0]
                fv = sum(c * xv ** e[0] * yv ** e[1] * zv ** e[2] for e, c in rep.terms)
                if abs(fv) < 1e-9:
                    break
                vals.append(HALF if (fv < 0 and rep.constant < 0) else ZERO)
            else:
                achieved.add(tuple(vals))
    return JointProfile(INFINITY, labels, frozenset(achieved), ProfileStatus.SAMPLED,
                        "coarse real sampling")


# ---------------------------------------------------------------------------
# Witness realization


@dataclass
class Realization:
    prime: int
    labels: tuple
    witnesses: dict  # target tuple -> LocalPoint
    missing: list

    @property
    def complete(self) -> bool:
        return not self.missing

    def to_json(self):
        return {"p": self.prime, "classes": list(self.labels),
                "witnesses": {_fmt(k): list(v.coords()) + [v.level] for k, v in sorted(self.witnesses.items())},
                "not_realized": [_fmt(t) for t in self.missing]}


ALL_PAIRS = [(ZERO, ZERO), (HALF, ZERO), (ZERO, HALF), (HALF, HALF)]


def _template_points(a: int, m: int, p: int, setting: str):
    """Candidate F_p points from the explicit families, in a fixed order."""
    if setting == "pair":
        for t in range(p):
            yield (2, t, t)
        if legendre(a, p) == 1:
            ra = _sqrt_mod(a, p)
            for e in range(1, p):
                yield ((e - 2) % p, 2 * ra % p, (e - 2) * ra % p)
        else:
            for e in range(1, p):
                if legendre(a * e, p) == 1:
                    r = _sqrt_mod(a * e, p)
                    yield ((e - 2) % p, r, r)
    elif setting == "quartic":
        for s in range(1, p):
            yield (2, s, s)
        for l in range(1, p):
            if (l + 1) % p:
                x = (l * l + 1) * pow(l, -1, p) % p
                for s in range(1, p):
                    yield (x, s, l * s % p)


def _sqrt_mod(n: int, p: int) -> int:
    n %= p
    return next(r for r in range(p) if r * r % p == n)


def realize_pairs(a: int, m: int, p: int, targets=None, classes=None, setting="pair",
                  level: int | None = None) -> Realization:
    """Find lifted points of U(Z_p) whose invariant tuple hits each target.

    Template families are tried first, then every smooth F_p point.
    """
    targets = list(targets or ALL_PAIRS)
    level = level or default_level(a, m, p)
    if classes is None:
        classes = pair_classes(a, m) if setting == "pair" else quartic_pair_classes(a, m, p, level)
    labels = tuple(c.label for c in classes)
    found = {}
    seen = set()

    def consider(pt):
        pt = tuple(c % p for c in pt)
        if pt in seen:
            return
        seen.add(pt)
        if surface_value(a, m, *pt) % p or all(g % p == 0 for g in gradient(a, *pt)):
            return
        lp = lift_point(pt, a, m, p, level)
        values = tuple(eval_class(c, lp) for c in classes)
        if values in targets and values not in found:
            found[values] = lp

    for pt in _template_points(a, m, p, setting):
        consider(pt)
        if len(found) == len(targets):
            break
    else:
        for q in fp_points(a, m, p):
            if len(found) == len(targets):
                break
            consider((q.x, q.y, q.z))
    missing = [t for t in targets if t not in found]
    return Realization(p, labels, found, missing)


# -- the order-4 class ----------------------------------------------------------


@dataclass(frozen=True)
class QuarticValue:
    value: Fraction | None
    conjugate_value: Fraction | None

    @property
    def root_choice_matters(self) -> bool:
        return self.value != self.conjugate_value


def _check_split(m: int, p: int):
    if p == 2 or not sympy.isprime(p) or not is_local_square(m, p):
        raise NotSplit(f"m={m} is not a square in Q_{p}")


def quartic_class_eval(a: int, m: int, p: int, pt: LocalPoint) -> QuarticValue:
    """inv_p of (sqrt(m) y - m, a) at pt, for both choices of sqrt(m) in Z_p."""
    _check_split(m, p)
    out = []
    for conj in (False, True):
        s = sqrt_padic(m, p, pt.level, conjugate=conj).residue
        value = s * pt.y - m
        prec = pt.level
        if value % p ** prec == 0 or prec < valuation(value, p) + 1:
            out.append(None)
        else:
            out.append(hilbert(value, a, p))
    return QuarticValue(*out)


def quartic_pair_classes(a: int, m: int, p: int, level: int):
    """((x+2, a), (y - sqrt(m), a)) with sqrt(m) replaced by its residue mod p^level."""
    _check_split(m, p)
    s = sqrt_padic(m, p, level).residue
    params = (a, m)
    x, y, z = Poly.variables(params)
    return [BrauerClass("C1", [representation(x + 2, a, "x+2")]),
            BrauerClass("C2", [representation(y - s, a, "y-sqrt(m)")])]


# ---------------------------------------------------------------------------
# Verdicts


class Verdict(str, Enum):
    OBSTRUCTION = "ObstructionCertified"
    NO_OBSTRUCTION = "NoObstructionCertified"
    INCONCLUSIVE = "Inconclusive"
    LOCALLY_INSOLUBLE = "LocallyInsoluble"


@dataclass
class AdelicVerdict:
    a: int
    m: int
    verdict: Verdict
    relevant_places: list = field(default_factory=list)
    profiles: list = field(default_factory=list)  # InvariantProfile
    joint: list = field(default_factory=list)  # JointProfile of (B1, B2)
    obstructing: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)  # Realization
    reason: str = ""

    def profile(self, label: str, place):
        return next(pr for pr in self.profiles if pr.label == label and pr.place == place)

    def to_json(self):
        return {
            "a": self.a, "m": self.m,
            "places": [pr.to_json() for pr in self.profiles],
            "joint": [{"p": j.place, "classes": list(j.labels),
                       "achieved": [_fmt(t) for t in sorted(j.achieved)],
                       "status": j.status.value} for j in self.joint],
            "verdict": self.verdict.value,
            "obstructing": self.obstructing,
            "reason": self.reason,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def relevant_places(a: int, m: int):
    odd = sorted(q for q in factorize(m - 4 * a) if q != 2)
    return [INFINITY, 2] + odd


def _sum_set(sets):
    """All sums mod 1 (componentwise) choosing one tuple per place."""
    sums = {None}
    for s in sets:
        sums = {t if acc is None else tuple((u + v) % 1 for u, v in zip(acc, t))
                for acc in sums for t in s}
    return sums


def bm_verdict(a: int, m: int, caps: Caps | None = None, try_realization=True) -> AdelicVerdict:
    check_params(a, m)
    caps = caps or Caps()
    places = relevant_places(a, m)
    loc = everywhere_locally_soluble(a, m)
    if not loc.soluble:
        return AdelicVerdict(a, m, Verdict.LOCALLY_INSOLUBLE, places,
                             reason=f"no Z_p points at p in {loc.blocking_places}")
    b1, b2, b = standard_classes(a, m)
    c = m - 4 * a
    out = AdelicVerdict(a, m, Verdict.INCONCLUSIVE, places)

    # surjective evaluation at one prime kills every class in <B1, B2>
    if try_realization:
        for p in places[2:]:
            if p >= 5 and valuation(c, p) % 2 == 1 and a % p:
                real = realize_pairs(a, m, p)
                if real.complete:
                    out.witnesses.append(real)
                    out.verdict = Verdict.NO_OBSTRUCTION
                    out.reason = f"all four invariant pairs realized at p={p}"
                    return out

    joints = {}
    for p in places:
        joint = joint_profile([b1, b2], a, m, p, caps)
        joints[p] = joint
        out.joint.append(joint)
        if joint.is_full():
            out.verdict = Verdict.NO_OBSTRUCTION
            out.reason = f"joint evaluation of (B1, B2) is surjective at p={p}"
            _fill_single_profiles(out, [b1, b2, b], places, joints, a, m, caps)
            return out
    _fill_single_profiles(out, [b1, b2, b], places, joints, a, m, caps)

    for cls in (b1, b2, b):
        profs = [out.profile(cls.label, p) for p in places]
        if all(pr.status is ProfileStatus.EXHAUSTIVE for pr in profs):
            sums = _sum_set([{(v,) for v in pr.achieved} for pr in profs])
            if (ZERO,) not in sums:
                out.obstructing.append(cls.label)
    if all(j.status is ProfileStatus.EXHAUSTIVE for j in joints.values()):
        sums = _sum_set([j.achieved for j in joints.values()])
        if (ZERO, ZERO) not in sums:
            if not out.obstructing:
                out.obstructing.append("<B1,B2>")
            out.verdict = Verdict.OBSTRUCTION
            out.reason = "no adelic point is orthogonal to " + ", ".join(out.obstructing)
            return out
        out.verdict = Verdict.NO_OBSTRUCTION
        out.reason = "exhaustive profiles admit an orthogonal adelic point"
        return out
    if out.obstructing:
        out.verdict = Verdict.OBSTRUCTION
        out.reason = "no adelic point is orthogonal to " + ", ".join(out.obstructing)
        return out
    out.reason = "some profile is not exhaustive"
    return out


def _fill_single_profiles(out, classes, places, joints, a, m, caps):
    for cls in classes:
        for p in places:
            if cls.label in ("B1", "B2") and p in joints:
                j = joints[p]
                idx = j.labels.index(cls.label)
                out.profiles.append(InvariantProfile(p, cls.label, j.project(idx), j.status, j.rule))
            else:
                out.profiles.append(invariant_profile(cls, a, m, p, caps))


def thm11_consistency(a: int, m: int) -> bool:
    """Odd primes in the squarefree part of m - 4a lie in {3} and the primes dividing gcd(a, m)."""
    g = math.gcd(a, m)
    allowed = {3} | set(factorize(g)) if g else {3}
    core = squarefree_part(m - 4 * a)
    return all(q in allowed for q in factorize(core) if q != 2)
