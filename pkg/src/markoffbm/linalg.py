"""Integer matrix routines: Smith normal form, kernels, lattice quotients.

Matrices are lists of rows of Python ints.
"""
from __future__ import annotations

from math import gcd


def identity(n: int):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int):
    return [[0] * c for _ in range(r)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def matadd(A, B, sign=1):
    return [[a + sign * b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scalar(A, k):
    return [[k * a for a in row] for row in A]


def matpow(A, n: int):
    out = identity(len(A))
    for _ in range(n):
        out = matmul(out, A)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def block(rows):
    """Assemble a block matrix from a grid of equally sized blocks."""
    out = []
    for brow in rows:
        height = len(brow[0])
        for i in range(height):
            out.append([x for blk in brow for x in blk[i]])
    return out


def hstack(cols):
    return [sum((c[i] for c in cols), []) for i in range(len(cols[0]))]


def vstack(rows):
    return [list(r) for m in rows for r in m]


def is_zero(A) -> bool:
    return all(x == 0 for row in A for x in row)


def smith_normal_form(A):
    """Return (U, D, V) with U A V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(r) for r in A]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    def add_row(M, src, dst, k):  # row dst += k * row src
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, k):
        for r in M:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        swap_rows(D, t, i)
        swap_rows(U, t, i)
        swap_cols(D, t, j)
        swap_cols(V, t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                q = D[i][t] // D[t][t]
                if q:
                    add_row(D, t, i, -q)
                    add_row(U, t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = D[t][j] // D[t][t]
                if q:
                    add_col(D, t, j, -q)
                    add_col(V, t, j, -q)
                if D[t][j]:
                    done = False
            if done:
                # divisibility with the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if D[i][j] % D[t][t]), None)
                if bad is None:
                    break
                add_row(D, bad[0], t, 1)
                add_row(U, bad[0], t, 1)
                continue
            # move the smallest entry of row/column t to the pivot
            cands = [(abs(D[i][t]), i, t) for i in range(t, rows) if D[i][t]]
            cands += [(abs(D[t][j]), t, j) for j in range(t, cols) if D[t][j]]
            _, i, j = min(cands)
            swap_rows(D, t, i)
            swap_rows(U, t, i)
            swap_cols(D, t, j)
            swap_cols(V, t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def rank(A) -> int:
    if not A or not A[0]:
        return 0
    return len(diagonal(smith_normal_form(A)[1]))


def kernel_basis(A, ncols: int | None = None):
    """Columns spanning {x in Z^n : A x = 0}, as a list of vectors (saturated)."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [list(r) for r in identity(n)]
    _, D, V = smith_normal_form(A)
    r = len(diagonal(D))
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def solve_in_basis(basis, vectors):
    """Coordinates of each vector w.r.t. a saturated basis (list of column vectors)."""
    if not basis:
        for v in vectors:
            if any(v):
                raise ValueError("vector not in the lattice")
        return [[] for _ in vectors]
    B = transpose(basis)  # n x k
    U, D, V = smith_normal_form(B)
    k = len(basis)
    out = []
    for v in vectors:
        w = matvec(U, v)
        y = []
        for i in range(len(w)):
            d = D[i][i] if i < k else 0
            if i < k and d:
                if w[i] % d:
                    raise ValueError("vector not in the lattice")
                y.append(w[i] // d)
            elif w[i]:
                raise ValueError("vector not in the lattice")
        y += [0] * (k - len(y))
        out.append(matvec(V, y[:k]))
    return out


def quotient_invariants(kernel, image):
    """Invariant factors (> 1) and free rank of span(kernel) / span(image)."""
    k = len(kernel)
    if k == 0:
        return [], 0
    coords = solve_in_basis(kernel, image) if image else []
    if not coords:
        return [], k
    M = transpose(coords)  # k x (number of image generators)
    d = diagonal(smith_normal_form(M)[1])
    return [x for x in d if x > 1], k - len(d)


def membership_order(kernel, image, vector) -> int:
    """Least k >= 1 with k * vector in span(image); 0 if no such k."""
    c = solve_in_basis(kernel, [vector])[0]
    if not image:
        return 1 if not any(c) else 0
    M = transpose(solve_in_basis(kernel, image))
    U, D, _ = smith_normal_form(M)
    w = matvec(U, c)
    order = 1
    for i, wi in enumerate(w):
        d = D[i][i] if i < len(D[0]) else 0
        if d == 0:
            if wi:
                return 0
            continue
        need = d // gcd(d, wi)
        order = order * need // gcd(order, need)
    return order
