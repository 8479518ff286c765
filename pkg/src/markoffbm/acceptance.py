"""The acceptance suite, shared by ``markoffbm selftest`` and the test run.

Each criterion returns a CriterionResult with status PASS, FAIL or
INCONCLUSIVE.  INCONCLUSIVE means a search cap (for example a low
``prec_cap``) stopped a profile before it was exhaustive; it is reported
separately from a failure.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .brauer import Caps, ProfileStatus, Verdict, bm_verdict, realize_pairs, thm11_consistency
from .cohomology import (
    BicyclicComplex, abelian_group_action, catalog_h1, class_order, h1_bicyclic,
    h1_finite_group, l5_l4_class, quartic_complex, quartic_family_class,
    random_commuting_involutions,
)
from .families import find_surjectivity_instance, surjectivity_hypotheses
from .lines import (
    cocycle_identity_check, divisor_vanishing_check, incidence, quartic_fixtures,
    line_label, line_on_surface, lines_catalog,
)
from .padic import INFINITY, bad_places, field_degree, hilbert, split_valuation
from .search import box_search
from .solubility import Solubility, everywhere_locally_soluble, soluble_closed_form, soluble_oracle

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass
class CriterionResult:
    number: int
    name: str
    status: str
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def line(self) -> str:
        return f"[{self.status}] criterion {self.number}: {self.name} ({self.detail}; {self.seconds:.1f}s)"

    def to_json(self):
        return {"criterion": self.number, "name": self.name, "status": self.status,
                "detail": self.detail}


@dataclass
class SuiteOptions:
    seed: int = 20240607
    prec_cap: int | None = None
    symbol: object = hilbert  # injectable Hilbert symbol, for mutation testing
    solubility_range: int = 20
    hilbert_pairs: int = 1000
    cohomology_pairs: int = 50
    sweep_range: int = 30
    box: int = 1000
    fixture_bound: int = 200

    def caps(self) -> Caps:
        return Caps(level_cap=self.prec_cap)


def mutated_hilbert(u, v, place) -> Fraction:
    """A deliberately wrong symbol: the 2-adic table loses its unit-unit term."""
    if place != 2:
        return hilbert(u, v, place)
    u, v = Fraction(u), Fraction(v)
    a, u1 = split_valuation(u.numerator * u.denominator, 2)
    b, v1 = split_valuation(v.numerator * v.denominator, 2)
    om_u = ((u1 * u1 - 1) // 8) % 2
    om_v = ((v1 * v1 - 1) // 8) % 2
    return Fraction((a * om_v + b * om_u) % 2, 2)


def _result(number, name, ok, detail, start, data=None):
    return CriterionResult(number, name, PASS if ok else FAIL, detail,
                           time.perf_counter() - start, data or {})


# -- 1, 2: local solubility ---------------------------------------------------------


def criterion_1(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    r = opts.solubility_range
    total = inconclusive = 0
    disagreements = []
    for a in range(-r, r + 1):
        for m in range(-r, r + 1):
            if m == 0 or m == 4 * a:
                continue
            for p in (2, 3, 5, 7, 11, 13):
                total += 1
                oracle = soluble_oracle(a, m, p, depth_cap=12).status
                if oracle is Solubility.INCONCLUSIVE:
                    inconclusive += 1
                elif oracle is not soluble_closed_form(a, m, p):
                    disagreements.append((a, m, p))
    rate = 1 - inconclusive / total
    ok = not disagreements and rate >= 0.99
    detail = f"{total} cases, {len(disagreements)} disagreements, {inconclusive} inconclusive"
    return _result(1, "closed-form solubility matches the oracle", ok, detail, start,
                   {"disagreements": disagreements[:10]})


def criterion_2(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    primes = [p for p in range(2, 60) if all(p % q for q in range(2, p))]
    found = {}
    for (a, m), expected in {(5, 3): [2], (7, 3): [3]}.items():
        by_oracle = [p for p in primes if soluble_oracle(a, m, p).status is Solubility.INSOLUBLE]
        by_formula = everywhere_locally_soluble(a, m).blocking_places
        found[(a, m)] = (by_oracle, by_formula)
    ok = found[(5, 3)] == ([2], [2]) and found[(7, 3)] == ([3], [3])
    detail = "; ".join(f"{k}: oracle {v[0]}, formula {v[1]}" for k, v in found.items())
    return _result(2, "blocking primes of (5,3) and (7,3)", ok, detail, start)


# -- 3: Hilbert symbol laws ---------------------------------------------------------


def _random_rational(rng: random.Random) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-5000, 5000)
    return Fraction(num, rng.randint(1, 300))


def criterion_3(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    h = opts.symbol
    rng = random.Random(opts.seed)
    failures = {"symmetry": 0, "bimultiplicativity": 0, "steinberg": 0, "product formula": 0}
    for _ in range(opts.hilbert_pairs):
        u, v, w = (_random_rational(rng) for _ in range(3))
        places = sorted(set(bad_places(u * w, v)) - {INFINITY}) + [INFINITY]
        for pl in places:
            if h(u, v, pl) != h(v, u, pl):
                failures["symmetry"] += 1
            if h(u * w, v, pl) != (h(u, v, pl) + h(w, v, pl)) % 1:
                failures["bimultiplicativity"] += 1
            if h(u, -u, pl) != 0 or (u != 1 and h(u, 1 - u, pl) != 0):
                failures["steinberg"] += 1
        total = sum((h(u, v, pl) for pl in bad_places(u, v)), Fraction(0))
        if total.denominator != 1:
            failures["product formula"] += 1
    ok = not any(failures.values())
    detail = f"{opts.hilbert_pairs} pairs; failures " + ", ".join(f"{k}={n}" for k, n in failures.items())
    return _result(3, "Hilbert symbol laws", ok, detail, start, {"failures": failures})


# -- 4, 5: cohomology ------------------------------------------------------------------


def criterion_4(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    got = {key: catalog_h1(key) for key in
           ("prop2.2-case1", "prop2.2-case2", "prop2.2-case3", "prop2.2-case4", "prop2.3", "lemma5.1")}
    ok = all(got[f"prop2.2-case{i}"].is_trivial() for i in range(1, 5))
    ok &= got["prop2.3"].invariant_factors == (2, 2) and not got["prop2.3"].free_rank
    ok &= got["lemma5.1"].invariant_factors == (2, 4) and not got["lemma5.1"].free_rank
    cx = quartic_complex()
    base = class_order(l5_l4_class(), cx)
    family = [class_order(quartic_family_class(x1, x2, y1, y2), cx)
              for y2 in (1, 3, 5) for x1 in (0, 1) for x2 in (0, 1) for y1 in (0, 1)]
    ok &= base == 4 and all(o == 4 for o in family)
    detail = (", ".join(f"{k}: {g}" for k, g in got.items())
              + f"; order of (l5, l4) = {base}; family orders {sorted(set(family))} over {len(family)} members")
    return _result(4, "cohomology table", ok, detail, start)


def criterion_5(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(opts.seed + 5)
    mismatches = []
    for i in range(opts.cohomology_pairs):
        rank = rng.randint(1, 6)
        S, T = random_commuting_involutions(rank, rng)
        bi = h1_bicyclic(S, T, 2, 2)
        fg = h1_finite_group(abelian_group_action([S, T], [2, 2]))
        if bi != fg or not BicyclicComplex(S, 2, T, 2).h1() == bi:
            mismatches.append(i)
    ok = not mismatches
    detail = f"{opts.cohomology_pairs} random pairs, {len(mismatches)} mismatches"
    return _result(5, "bicyclic H^1 matches the group-cocycle H^1", ok, detail, start)


# -- 6, 10: geometry ---------------------------------------------------------------


def criterion_6(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    problems = []
    for a, m in ((2, 3), (3, 14), (5, 7)):
        cat = lines_catalog(a, m)
        if len(cat) != 27:
            problems.append(f"({a},{m}): {len(cat)} lines")
        off = [lab for lab, L in cat.items() if not line_on_surface(L, a, m)]
        if off:
            problems.append(f"({a},{m}): not on X {off}")
        ls = [cat[line_label(i, 1, 1)] for i in range(1, 7)]
        meets = sum(incidence(ls[i], ls[j]) for i in range(6) for j in range(i + 1, 6))
        if meets:
            problems.append(f"({a},{m}): {meets} incidences among l_i(1,1)")
        for j in (1, 2, 3):
            for i in range(1, 7):
                expected = int((i - j) % 6 in (0, 3))
                if incidence(cat[f"H{j}"], ls[i - 1]) != expected:
                    problems.append(f"({a},{m}): (H{j}, l{i}(1,1)) != {expected}")
    detail = "; ".join(problems) if problems else "27 lines on X, zero l_i(1,1) incidences, H pattern as expected"
    return _result(6, "27 lines and incidences", not problems, detail, start)


def criterion_10(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    fixtures = quartic_fixtures(opts.fixture_bound)
    problems = []
    for a, m in [(2, 3)] + fixtures:
        for name in ("f", "g"):
            if not divisor_vanishing_check(name, a, m):
                problems.append(f"{name} at ({a},{m})")
    for a, m in fixtures:
        for sign in (1, -1):
            rep = cocycle_identity_check(a, m, sign)
            if not rep.ok:
                problems.append(f"identities at ({a},{m}), c sign {sign}")
    ok = bool(fixtures) and not problems
    detail = (f"{len(fixtures)} fixtures with |a|,|m| <= {opts.fixture_bound}, first {fixtures[:3]}; "
              + (f"problems: {problems[:5]}" if problems else "all checks pass"))
    if not fixtures:
        detail += "; no fixtures found"
    return _result(10, "divisor and cocycle identities", ok, detail, start)


# -- 7, 8, 9: Brauer-Manin verdicts --------------------------------------------------


OBSTRUCTION_INSTANCES = {(3, 14): 2, (10, 43): 3, (-3, -6): 2}


def criterion_7(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    problems, inconclusive = [], []
    for (a, m), designated in OBSTRUCTION_INSTANCES.items():
        v = bm_verdict(a, m, opts.caps())
        profs = [pr for pr in v.profiles if pr.label == "B"]
        if any(pr.status is not ProfileStatus.EXHAUSTIVE for pr in profs):
            inconclusive.append(f"({a},{m})")
            continue
        if v.verdict is not Verdict.OBSTRUCTION:
            problems.append(f"({a},{m}) verdict {v.verdict.value}")
        for pr in profs:
            want = {Fraction(1, 2)} if pr.place == designated else {Fraction(0)}
            if set(pr.achieved) != want:
                problems.append(f"({a},{m}) profile at {pr.place} is {sorted(pr.achieved)}")
        pts = box_search(a, m, opts.box)
        if pts:
            problems.append(f"({a},{m}) has integral points {pts[:3]}")
    detail = (f"problems: {problems}" if problems else
              f"3 instances obstructed, designated profiles {{1/2}}, box {opts.box} empty")
    if inconclusive and not problems:
        detail = f"profiles not exhaustive for {', '.join(inconclusive)}"
        return CriterionResult(7, "obstruction instances", INCONCLUSIVE, detail,
                               time.perf_counter() - start)
    return _result(7, "obstruction instances", not problems and not inconclusive, detail, start)


def criterion_8(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    inst = find_surjectivity_instance()
    if inst is None:
        return _result(8, "no-obstruction realization", False, "no instance found", start)
    a, m, p = inst
    real = realize_pairs(a, m, p)
    v = bm_verdict(a, m, opts.caps())
    ok = not surjectivity_hypotheses(a, m, p) and real.complete and v.verdict is Verdict.NO_OBSTRUCTION
    detail = (f"(a,m,p)=({a},{m},{p}): {len(real.witnesses)}/4 pairs realized, "
              f"verdict {v.verdict.value}")
    return _result(8, "no-obstruction realization", ok, detail, start)


def criterion_9(opts: SuiteOptions) -> CriterionResult:
    start = time.perf_counter()
    r = opts.sweep_range
    counts = {}
    exceptions = []
    for a in range(-r, r + 1):
        for m in range(-r, r + 1):
            if a == 0 or m == 0 or m == 4 * a or field_degree(a, m) != 8:
                continue
            v = bm_verdict(a, m, opts.caps())
            counts[v.verdict.value] = counts.get(v.verdict.value, 0) + 1
            if v.verdict is Verdict.OBSTRUCTION and not thm11_consistency(a, m):
                exceptions.append((a, m))
    n_inc = counts.get(Verdict.INCONCLUSIVE.value, 0)
    detail = (", ".join(f"{k}={n}" for k, n in sorted(counts.items()))
              + f"; {len(exceptions)} exceptions")
    if exceptions:
        return _result(9, "obstructions satisfy the prime condition", False,
                       detail + f" {exceptions[:5]}", start)
    if n_inc:
        return CriterionResult(9, "obstructions satisfy the prime condition", INCONCLUSIVE,
                               detail, time.perf_counter() - start, {"counts": counts})
    return _result(9, "obstructions satisfy the prime condition", True, detail, start,
                   {"counts": counts})


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def run_suite(opts: SuiteOptions | None = None, only=None, echo=None):
    """Run the selected criteria in order; ``echo`` receives each result as it finishes."""
    opts = opts or SuiteOptions()
    results = []
    for n, fn in CRITERIA.items():
        if only and n not in only:
            continue
        res = fn(opts)
        results.append(res)
        if echo:
            echo(res)
    return results
