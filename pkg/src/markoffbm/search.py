"""Integral points on a x^2 + y^2 + z^2 - x y z = m by box enumeration and
Vieta moves."""
from __future__ import annotations

from collections import deque
from math import isqrt

import numpy as np

from .errors import NotOnSurface
from .padic import surface_value


def _int64_safe(a: int, m: int, bound: int) -> bool:
    # x^2 y^2 + 4 (|a| x^2 + y^2 + |m|) must stay well inside int64
    return bound ** 4 + 4 * (abs(a) * bound ** 2 + bound ** 2 + abs(m)) < 2 ** 60


def _exact_sqrt(d):
    """Vectorized floor square root of nonnegative int64 values, corrected exactly."""
    r = np.floor(np.sqrt(d.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        r -= (r * r > d)
        r += ((r + 1) * (r + 1) <= d)
    return r


def box_search(a: int, m: int, bound: int):
    """All integral points with max(|x|, |y|, |z|) <= bound, sorted.

    For fixed x the y-loop is vectorized: the equation is a quadratic in z
    with discriminant x^2 y^2 - 4 (a x^2 + y^2 - m), and only exact square
    discriminants survive.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    dtype = np.int64 if _int64_safe(a, m, bound) else object
    ys = np.arange(-bound, bound + 1).astype(dtype)
    out = []
    for x in range(-bound, bound + 1):
        disc = x * x * ys * ys - 4 * (a * x * x + ys * ys - m)
        idx = np.nonzero(disc >= 0)[0]
        if idx.size == 0:
            continue
        d = disc[idx]
        if dtype is object:
            r = np.array([isqrt(int(v)) for v in d], dtype=object)
        else:
            r = _exact_sqrt(d)
        good = np.nonzero(r * r == d)[0]
        for i in good.tolist():
            y, rr = int(ys[idx[i]]), int(r[i])
            for s in {rr, -rr}:
                num = x * y + s
                if num % 2 == 0 and abs(num // 2) <= bound:
                    out.append((x, y, num // 2))
    return sorted(set(out))


def vieta_neighbors(a: int, pt):
    x, y, z = pt
    return [(x, x * z - y, z), (x, y, x * y - z), (x, z, y)]


def vieta_orbit(seed, a: int, m: int, depth: int, cap: int = 10 ** 6):
    """Closure of seed under y -> xz - y, z -> xy - z and y <-> z, up to depth moves.

    Depth 0 still includes the swap of the seed.  The x-move is omitted: the
    conjugate root yz/a - x need not be an integer.
    """
    seed = tuple(int(c) for c in seed)
    if surface_value(a, m, *seed) != 0:
        raise NotOnSurface(f"{seed} is not on the surface")
    seen = {seed, (seed[0], seed[2], seed[1])}
    frontier = deque((p, 0) for p in seen)
    while frontier:
        pt, d = frontier.popleft()
        if d >= depth:
            continue
        for q in vieta_neighbors(a, pt):
            if q not in seen:
                if len(seen) >= cap:
                    return seen
                seen.add(q)
                frontier.append((q, d + 1))
    return seen
