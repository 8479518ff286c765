"""Cohomology of finite groups acting on integer lattices.

Matrices act on column vectors: column j of a generator matrix is the image
of basis vector j.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product

from .errors import MarkoffError, NotCocycle, RelationError
from .linalg import (
    block, hstack, identity, is_zero, kernel_basis, matadd, matmul, matpow, matvec,
    membership_order, quotient_invariants, scalar, vstack, zeros,
)


@dataclass(frozen=True)
class CohomologyGroup:
    invariant_factors: tuple = ()
    free_rank: int = 0

    @property
    def order(self) -> int:
        if self.free_rank:
            return 0
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def to_json(self):
        return list(self.invariant_factors)

    def __str__(self):
        if self.is_trivial():
            return "0"
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts)


def _group(kernel, image) -> CohomologyGroup:
    factors, free = quotient_invariants(kernel, image)
    return CohomologyGroup(tuple(factors), free)


def _columns(A):
    return [list(c) for c in zip(*A)] if A and A[0] else []


def element_order(T, cap: int = 64) -> int:
    n = len(T)
    P = [list(r) for r in T]
    I = identity(n)
    for k in range(1, cap + 1):
        if P == I:
            return k
        P = matmul(P, T)
    raise RelationError("matrix has no finite order below the cap")


def _check_order(T, n: int):
    if matpow(T, n) != identity(len(T)):
        raise RelationError(f"T^{n} != I")


def norm(T, n: int):
    out = zeros(len(T), len(T))
    P = identity(len(T))
    for _ in range(n):
        out = matadd(out, P)
        P = matmul(P, T)
    return out


def delta(T):
    return matadd(identity(len(T)), T, -1)


# -- cyclic groups ----------------------------------------------------------------


def h1_cyclic(T, n: int | None = None) -> CohomologyGroup:
    """ker(N) / im(1 - T) for the cyclic group generated by T."""
    n = n or element_order(T)
    _check_order(T, n)
    return _group(kernel_basis(norm(T, n)), _columns(delta(T)))


def h2_cyclic(T, n: int | None = None) -> CohomologyGroup:
    """ker(1 - T) / im(N): fixed vectors modulo norms."""
    n = n or element_order(T)
    _check_order(T, n)
    return _group(kernel_basis(delta(T)), _columns(norm(T, n)))


# -- bicyclic groups Z/n x Z/m with generators t, s -----------------------------


@dataclass
class BicyclicComplex:
    """M -> M^2 -> M^3 -> M^4 with the standard differentials for Z/n x Z/m."""

    t: list
    n: int
    s: list
    m: int

    def __post_init__(self):
        _check_order(self.t, self.n)
        _check_order(self.s, self.m)
        if matmul(self.t, self.s) != matmul(self.s, self.t):
            raise RelationError("generators do not commute")
        r = len(self.t)
        self.rank = r
        Z = zeros(r, r)
        dt, ds = delta(self.t), delta(self.s)
        nt, ns = norm(self.t, self.n), norm(self.s, self.m)
        neg = lambda A: scalar(A, -1)  # noqa: E731
        self.d0 = block([[dt], [ds]])
        self.d1 = block([[nt, Z], [ds, neg(dt)], [Z, ns]])
        self.d2 = block([[dt, Z, Z], [ds, neg(nt), Z], [Z, ns, dt], [Z, Z, ds]])

    def cocycles(self):
        return kernel_basis(self.d1)

    def coboundaries(self):
        return _columns(self.d0)

    def h1(self) -> CohomologyGroup:
        return _group(self.cocycles(), self.coboundaries())

    def is_cocycle(self, a, b) -> bool:
        return not any(matvec(self.d1, list(a) + list(b)))


def h1_bicyclic(t, s, n: int | None = None, m: int | None = None) -> CohomologyGroup:
    n = n or element_order(t)
    m = m or element_order(s)
    return BicyclicComplex(t, n, s, m).h1()


@dataclass(frozen=True)
class CocycleClass:
    a: tuple
    b: tuple


def class_order(c: CocycleClass, complex_: BicyclicComplex) -> int:
    """Least k >= 1 with k (a, b) a coboundary."""
    vec = list(c.a) + list(c.b)
    if not complex_.is_cocycle(c.a, c.b):
        raise NotCocycle(f"{c} is not in Z^1")
    k = membership_order(complex_.cocycles(), complex_.coboundaries(), vec)
    if k == 0:
        raise MarkoffError("class has infinite order")
    return k


# -- general finite groups -----------------------------------------------------------


@dataclass
class FiniteGroupAction:
    """A finite group given by a multiplication table, with a matrix per element."""

    table: list  # table[i][j] = index of g_i g_j
    matrices: list
    labels: list = field(default_factory=list)

    MAX_ORDER = 16

    def __post_init__(self):
        n = len(self.table)
        if n > self.MAX_ORDER:
            raise ValueError(f"group order {n} exceeds {self.MAX_ORDER}")
        for i, j in product(range(n), repeat=2):
            if matmul(self.matrices[i], self.matrices[j]) != self.matrices[self.table[i][j]]:
                raise RelationError(f"action is not a homomorphism at ({i}, {j})")


def abelian_group_action(generators, orders) -> FiniteGroupAction:
    """Z/n_1 x ... x Z/n_k acting through the given commuting matrices."""
    for T, n in zip(generators, orders):
        _check_order(T, n)
    elements = list(product(*(range(n) for n in orders)))
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[tuple((u + v) % n for u, v, n in zip(e, f, orders))] for f in elements]
             for e in elements]
    r = len(generators[0])
    mats = []
    for e in elements:
        M = identity(r)
        for T, k in zip(generators, e):
            M = matmul(M, matpow(T, k))
        mats.append(M)
    return FiniteGroupAction(table, mats, [str(e) for e in elements])


def h1_finite_group(action: FiniteGroupAction) -> CohomologyGroup:
    """Crossed homomorphisms c(gh) = c(g) + g c(h) modulo c(g) = g v - v."""
    n = len(action.table)
    r = len(action.matrices[0])
    I = identity(r)
    rows = []
    for g, h in product(range(n), repeat=2):
        gh = action.table[g][h]
        blocks = [zeros(r, r) for _ in range(n)]
        blocks[gh] = matadd(blocks[gh], I)
        blocks[g] = matadd(blocks[g], I, -1)
        blocks[h] = matadd(blocks[h], action.matrices[g], -1)
        rows.append(hstack(blocks))
    constraints = vstack(rows)
    z1 = kernel_basis(constraints)
    b1 = _columns(vstack([matadd(M, I, -1) for M in action.matrices]))
    return _group(z1, b1)


# -- catalog ---------------------------------------------------------------------------


@dataclass
class LatticeAction:
    key: str
    basis: list
    generators: dict  # name -> matrix
    orders: dict
    commuting: list = field(default_factory=list)
    notes: str = ""

    def validate(self):
        for name, M in self.generators.items():
            _check_order(M, self.orders[name])
        for u, v in self.commuting:
            A, B = self.generators[u], self.generators[v]
            if matmul(A, B) != matmul(B, A):
                raise RelationError(f"{u} and {v} do not commute")
        return self

    def matrix(self, name):
        return self.generators[name]


def _from_images(basis, images):
    """Matrix whose column j is the image of basis[j], images given as {name: coeff}."""
    r = len(basis)
    M = zeros(r, r)
    for j, name in enumerate(basis):
        for target, coeff in images[name].items():
            M[basis.index(target)][j] += coeff
    return M


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(l\d?)")


def _images(spec: str):
    """Parse 'l1: l1; l2: l - l3 - l4; ...' into {name: {name: coeff}}."""
    out = {}
    for item in spec.split(";"):
        item = item.strip()
        if not item:
            continue
        src, expr = (s.strip() for s in item.split(":"))
        coeffs = {}
        for sign, num, name in _TERM.findall(expr):
            k = int(num or 1) * (-1 if sign == "-" else 1)
            coeffs[name] = coeffs.get(name, 0) + k
        out[src] = coeffs
    return out


PIC_X = ["l", "l1", "l2", "l3", "l4", "l5", "l6"]
PIC_U = ["l1", "l2", "l3", "l4"]

_INVOLUTION_CASES = {
    "prop2.2-case1": "l1: l1; l2: l - l3 - l4; l3: l - l2 - l4; l4: l - l2 - l3; l5: l5; l6: l6;"
                     " l: 2l - l2 - l3 - l4",
    "prop2.2-case2": "l1: 2l - l1 - l2 - l3 - l5 - l6; l2: l - l1 - l6; l3: l - l1 - l5;"
                     " l4: l - l5 - l6; l5: 2l - l1 - l3 - l4 - l5 - l6;"
                     " l6: 2l - l1 - l2 - l4 - l5 - l6; l: 4l - 2l1 - 2l5 - 2l6 - l2 - l3 - l4",
    "prop2.2-case3": "l1: l1; l2: l - l3 - l4; l3: l - l2 - l4; l4: 2l - l2 - l3 - l4 - l5 - l6;"
                     " l5: l - l4 - l6; l6: l - l4 - l5; l: 3l - l2 - l3 - 2l4 - l5 - l6",
    "prop2.2-case4": "l1: 2l - l1 - l2 - l3 - l5 - l6; l2: l - l1 - l6; l3: l - l1 - l5; l4: l4;"
                     " l5: l - l1 - l3; l6: l - l1 - l2; l: 3l - 2l1 - l2 - l3 - l5 - l6",
}

_TRIPLE_ACTION = {
    "sigma": "l1: l1; l2: l1 - l3; l3: l1 - l2; l4: l1 + l4 - l2 - l3",
    "theta": "l1: -l1; l2: l3 - l1; l3: l2 - l1; l4: l2 + l3 - l1 - l4",
    "tau": "l1: l1; l2: l1 - l3; l3: l1 - l2; l4: -l4",
}

_QUARTIC_ACTION = {
    "sigma": "l1: -l1; l2: l3 - l1; l3: l2 - l1; l4: l2 + l3 - l1 - l4",
    "tau": "l1: l1; l2: l1 - l3; l3: l1 - l2; l4: -l4",
}

CATALOG_KEYS = ["prop2.2-case1", "prop2.2-case2", "prop2.2-case3", "prop2.2-case4",
                "prop2.3", "lemma5.1"]


def picard_action_catalog() -> dict:
    out = {}
    for key, spec in _INVOLUTION_CASES.items():
        M = _from_images(PIC_X, _images(spec))
        out[key] = LatticeAction(key, PIC_X, {"sigma": M}, {"sigma": 2},
                                 notes="basis l, l1..l6 of Pic(X); (l,l)=1, (l,l_i)=0")
    out["prop2.3"] = LatticeAction(
        "prop2.3", PIC_U,
        {k: _from_images(PIC_U, _images(v)) for k, v in _TRIPLE_ACTION.items()},
        {"sigma": 2, "tau": 2, "theta": 2},
        [("sigma", "tau"), ("sigma", "theta"), ("tau", "theta")],
        notes="Pic(U) = Z<l, l1..l6> / (l - l_j - l_{j+3}), basis l1..l4",
    )
    out["lemma5.1"] = LatticeAction(
        "lemma5.1", PIC_U,
        {k: _from_images(PIC_U, _images(v)) for k, v in _QUARTIC_ACTION.items()},
        {"sigma": 2, "tau": 2}, [("sigma", "tau")],
        notes="sigma flips sqrt(a), sqrt(m-4a); tau flips sqrt(a), sqrt(m)",
    )
    return {k: out[k].validate() for k in CATALOG_KEYS}


def catalog_h1(key: str) -> CohomologyGroup:
    cat = picard_action_catalog()
    if key not in cat:
        raise KeyError(f"unknown catalog key {key!r}; known: {', '.join(CATALOG_KEYS)}")
    act = cat[key]
    names = list(act.generators)
    if len(names) == 1:
        return h1_cyclic(act.generators[names[0]], act.orders[names[0]])
    if len(names) == 2:
        t, s = names
        return h1_bicyclic(act.generators[t], act.generators[s], act.orders[t], act.orders[s])
    fa = abelian_group_action([act.generators[n] for n in names], [act.orders[n] for n in names])
    return h1_finite_group(fa)


def quartic_complex() -> BicyclicComplex:
    act = picard_action_catalog()["lemma5.1"]
    return BicyclicComplex(act.matrix("sigma"), 2, act.matrix("tau"), 2)


def quartic_family_class(x1: int, x2: int, y1: int, y2: int) -> CocycleClass:
    """(x1 l1 + x2 (l3 - l1 - l2) - y2 (l3 - l4), y1 (l1 - l2 - l3) + y2 l4)."""
    a = (x1 - x2, -x2, x2 - y2, y2)
    b = (y1, -y1, -y1, y2)
    return CocycleClass(a, b)


def l5_l4_class() -> CocycleClass:
    """(l5, l4) with l5 = l1 + l4 - l2 in Pic(U)."""
    return CocycleClass((1, -1, 0, 1), (0, 0, 0, 1))


# -- random test modules ---------------------------------------------------------------


def random_commuting_involutions(rank: int, rng: random.Random):
    """A commuting pair of integer involutions of the given rank.

    Built as P B P^-1 and P B' P^-1 with B, B' block diagonal of +-1 and swap
    blocks sharing one block structure, and P a random unimodular matrix.
    """
    blocks = []
    left = rank
    while left:
        size = 2 if left >= 2 and rng.random() < 0.5 else 1
        blocks.append(size)
        left -= size
    B1, B2 = zeros(rank, rank), zeros(rank, rank)
    pos = 0
    for size in blocks:
        for B in (B1, B2):
            if size == 1:
                B[pos][pos] = rng.choice([1, -1])
            else:
                sign = rng.choice([1, -1])
                if rng.random() < 0.5:
                    B[pos][pos + 1] = B[pos + 1][pos] = sign
                else:
                    B[pos][pos] = B[pos + 1][pos + 1] = sign
        pos += size
    P, Pinv = identity(rank), identity(rank)
    for _ in range(2 * rank):
        i, j = rng.sample(range(rank), 2) if rank > 1 else (0, 0)
        if i == j:
            break
        k = rng.choice([-1, 1])
        # P <- P E_ij(k), Pinv <- E_ij(-k) Pinv
        for row in P:
            row[j] += k * row[i]
        Pinv[i] = [u - k * v for u, v in zip(Pinv[i], Pinv[j])]
    S = matmul(matmul(P, B1), Pinv)
    T = matmul(matmul(P, B2), Pinv)
    return S, T


def complex_property(cx: BicyclicComplex) -> bool:
    return is_zero(matmul(cx.d1, cx.d0)) and is_zero(matmul(cx.d2, cx.d1))
