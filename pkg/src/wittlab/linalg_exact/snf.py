"""Smith normal form over the integers, with unimodular transforms."""

from __future__ import annotations

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Dense integer product; ``inner`` is needed when ``a`` has no rows."""
    if not a:
        return []
    k = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * cols
        for t in range(k):
            c = row[t]
            if c:
                brow = b[t]
                for j in range(cols):
                    if brow[j]:
                        acc[j] += c * brow[j]
        out.append(acc)
    return out


def det(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D diagonal.

    The diagonal entries d1 | d2 | ... are nonnegative.

    >>> U, D, V = smith_normal_form([[2, 4], [6, 8]])
    >>> [D[0][0], D[1][1]]
    [2, 4]
    """
    U, D, V, _ = _snf(m, ncols, want_inverse=False)
    return U, D, V


def smith_with_inverse(m: Matrix, ncols: int | None = None):
    """Like :func:`smith_normal_form` but also returns V^-1."""
    return _snf(m, ncols, want_inverse=True)


def _snf(m: Matrix, ncols: int | None, want_inverse: bool):
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    a = [list(r) for r in m]
    U = identity(rows)
    V = identity(cols)
    Vi = identity(cols) if want_inverse else None

    def row_add(dst, src, q):  # row dst -= q * row src
        ad, as_ = a[dst], a[src]
        for j in range(cols):
            if as_[j]:
                ad[j] -= q * as_[j]
        ud, us = U[dst], U[src]
        for j in range(rows):
            if us[j]:
                ud[j] -= q * us[j]

    def col_add(dst, src, q):  # col dst -= q * col src
        for i in range(rows):
            if a[i][src]:
                a[i][dst] -= q * a[i][src]
        for i in range(cols):
            if V[i][src]:
                V[i][dst] -= q * V[i][src]
        if Vi is not None:
            # inverse transform: row src += q * row dst
            rd, rs = Vi[dst], Vi[src]
            for j in range(cols):
                if rd[j]:
                    rs[j] += q * rd[j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            ai = a[i]
            for j in range(t, cols):
                v = ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            changed = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(i, t, q)
                    if a[i][t]:
                        row_swap(i, t)
                        changed = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(j, t, q)
                    if a[t][j]:
                        col_swap(j, t)
                        changed = True
            if changed:
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row into row t and redo the elimination
            row_add(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, a, V, Vi


def elementary_divisors(m: Matrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, D, _ = smith_normal_form(m)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(D[i][i])
    return out
