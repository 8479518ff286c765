"""Existence of points of U over R and Z_p.

``soluble_closed_form`` is the congruence criterion (only p = 2 and p = 3 can
block); ``soluble_oracle`` decides the same question independently by a
breadth-first search over residue classes with a Hensel certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from sympy import isprime

from .errors import DegenerateParameters
from .padic import INFINITY, LocalPoint, gradient, surface_value, valuation


class Solubility(str, Enum):
    SOLUBLE = "Soluble"
    INSOLUBLE = "Insoluble"
    INCONCLUSIVE = "Inconclusive"


def check_params(a: int, m: int) -> None:
    if m == 0 or m == 4 * a:
        raise DegenerateParameters(f"degenerate parameters a={a}, m={m} (need m != 0, 4a)")


def soluble_closed_form(a: int, m: int, p: int) -> Solubility:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2 and a % 4 == 1 and m % 4 == 3:
        return Solubility.INSOLUBLE
    if p == 3 and a % 3 == 1 and m % 9 in (3, 6):
        return Solubility.INSOLUBLE
    return Solubility.SOLUBLE


@dataclass
class OracleResult:
    status: Solubility
    level: int
    witness: LocalPoint | None = None
    nodes_visited: int = 0


def _val(n: int, p: int) -> float:
    return math.inf if n == 0 else valuation(n, p)


def hensel_certified(a: int, m: int, p: int, x: int, y: int, z: int):
    """Index of a coordinate along which (x, y, z) lifts to a Z_p point, or None.

    The criterion is v(F) > 2 v(dF/dcoord) at the integer point itself.
    """
    vf = _val(surface_value(a, m, x, y, z), p)
    for i, g in enumerate(gradient(a, x, y, z)):
        vg = _val(g, p)
        if vg != math.inf and vf > 2 * vg:
            return i
    return None


def level_one_points(a: int, m: int, p: int):
    """Solutions of the surface congruence mod p (solves the quadratic in z)."""
    if p == 2:
        return [(x, y, z) for x in range(2) for y in range(2) for z in range(2)
                if surface_value(a, m, x, y, z) % 2 == 0]
    roots = {}
    for r in range(p):
        roots.setdefault(r * r % p, []).append(r)
    inv2 = (p + 1) // 2
    out = []
    for x in range(p):
        for y in range(p):
            disc = (x * x * y * y - 4 * (a * x * x + y * y - m)) % p
            for r in roots.get(disc, ()):
                z = (x * y + r) * inv2 % p
                out.append((x, y, z))
    out.sort()
    return out


def children(a: int, m: int, p: int, node, level: int):
    """Lifts of a residue class mod p^level to classes mod p^(level+1) on U.

    For level >= 1 the condition is linear mod p in the new digits.
    """
    x, y, z = node
    step = p ** level
    f = surface_value(a, m, x, y, z)
    if f % step:
        raise ValueError("node is not on the surface at its level")
    c0 = (f // step) % p
    gx, gy, gz = (g % p for g in gradient(a, x, y, z))
    out = []
    for i in range(p):
        for j in range(p):
            rest = (c0 + i * gx + j * gy) % p
            if gz:
                l = (-rest * pow(gz, -1, p)) % p
                out.append((x + step * i, y + step * j, z + step * l))
            elif rest == 0:
                for l in range(p):
                    out.append((x + step * i, y + step * j, z + step * l))
    return out


def soluble_oracle(a: int, m: int, p: int, depth_cap: int = 12, node_cap: int = 500_000) -> OracleResult:
    """Decide U(Z_p) != empty by refining residue classes until a class either
    carries a Hensel certificate or no class survives.

    Refining the class of (0, 0, 0) mod 3 enumerates exactly the scaled points
    (3x', 3y', 3z'), so the 9 | m recursion needs no special case.
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    nodes = level_one_points(a, m, p)
    visited = 0
    for level in range(1, depth_cap + 1):
        if not nodes:
            return OracleResult(Solubility.INSOLUBLE, level, None, visited)
        for node in nodes:
            visited += 1
            if hensel_certified(a, m, p, *node) is not None:
                return OracleResult(Solubility.SOLUBLE, level, LocalPoint(*node, p=p, level=level), visited)
        if level == depth_cap or len(nodes) * p ** 2 > node_cap:
            break
        nodes = [c for node in nodes for c in children(a, m, p, node, level)]
    return OracleResult(Solubility.INCONCLUSIVE, level, None, visited)


def real_point(a: int, m: int):
    """A real point (x, y, y) of U: y^2 = (m - a x^2) / (2 - x) for a suitable integer x."""
    for k in range(1, 10 ** 6):
        for x in (2 + k, 2 - k):
            value = (m - a * x * x) / (2 - x)
            if value >= 0:
                y = math.sqrt(value)
                return (float(x), y, y)
    raise AssertionError("unreachable: a real point always exists")


@dataclass
class LocalSolubilityReport:
    a: int
    m: int
    soluble: bool
    blocking_places: list = field(default_factory=list)
    real_witness: tuple | None = None

    def to_json(self):
        return {"soluble": self.soluble, "blocking_places": list(self.blocking_places),
                "real_witness": list(self.real_witness) if self.real_witness else None}


def everywhere_locally_soluble(a: int, m: int) -> LocalSolubilityReport:
    """U(R) x prod_p U(Z_p) is nonempty iff neither p = 2 nor p = 3 blocks."""
    check_params(a, m)
    blocking = [p for p in (2, 3) if soluble_closed_form(a, m, p) is Solubility.INSOLUBLE]
    return LocalSolubilityReport(a, m, not blocking, blocking, real_point(a, m))


__all__ = [
    "INFINITY", "LocalSolubilityReport", "OracleResult", "Solubility", "check_params",
    "children", "everywhere_locally_soluble", "hensel_certified", "level_one_points",
    "real_point", "soluble_closed_form", "soluble_oracle",
]
