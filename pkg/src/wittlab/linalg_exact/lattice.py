"""Row-span computations over Z, Z/m and F_p.

A solver from :func:`span_solver` is built once from a list of row vectors and then
answers membership and coordinate queries.  ``left_kernel`` returns a
generating set of the row-vector solutions of ``x * A = 0``.

Over Z/m everything is lifted to Z by appending ``m * I``; over a prime
field small enough for int64 a numpy elimination is used instead.
"""

from __future__ import annotations

import numpy as np

from .snf import Matrix

_NUMPY_PRIME_LIMIT = 1 << 30


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _use_numpy(modulus: int) -> bool:
    return modulus > 1 and modulus < _NUMPY_PRIME_LIMIT and is_prime(modulus)


# ---------------------------------------------------------------- integers


def integer_echelon(rows: Matrix, ncols: int, key_cols: int | None = None):
    """Gcd-based row echelon form over Z.

    Only the first ``key_cols`` columns drive the elimination; the rest are
    carried along.  Returns (echelon rows, pivot columns).  Rows past the
    pivot rows are zero on the key columns and are kept.
    """
    kc = ncols if key_cols is None else key_cols
    a = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(kc):
        if r >= len(a):
            break
        piv = None
        for i in range(r, len(a)):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            b = a[i][c]
            if not b:
                continue
            x = a[r][c]
            if b % x == 0:
                q = b // x
                ai, ar = a[i], a[r]
                for j in range(c, ncols):
                    if ar[j]:
                        ai[j] -= q * ar[j]
                continue
            g, s, t = xgcd(x, b)
            xg, bg = x // g, b // g
            ar, ai = a[r], a[i]
            a[r] = [s * u + t * v for u, v in zip(ar, ai)]
            a[i] = [xg * v - bg * u for u, v in zip(ar, ai)]
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
        pivots.append(c)
        r += 1
    # reduce above pivots
    for k, c in enumerate(pivots):
        p = a[k][c]
        for i in range(k):
            q = a[i][c] // p
            if q:
                ai, ak = a[i], a[k]
                for j in range(c, ncols):
                    if ak[j]:
                        ai[j] -= q * ak[j]
    return a, pivots


def hermite_basis(rows: Matrix, ncols: int) -> Matrix:
    """Canonical Hermite basis of the Z-row lattice spanned by ``rows``."""
    a, piv = integer_echelon(rows, ncols)
    return a[: len(piv)]


class _IntSolver:
    def __init__(self, rows: Matrix, ncols: int, modulus: int = 0):
        self.ncols = ncols
        self.modulus = modulus
        gens = [list(r) for r in rows]
        self.ngens = len(gens)
        if modulus:
            gens = [[x % modulus for x in r] for r in gens]
            gens += [[modulus if i == j else 0 for j in range(ncols)] for i in range(ncols)]
        n = len(gens)
        aug = [g + [1 if i == j else 0 for j in range(n)] for i, g in enumerate(gens)]
        ech, piv = integer_echelon(aug, ncols + n, key_cols=ncols)
        self.pivots = piv
        self.basis = [row[:ncols] for row in ech[: len(piv)]]
        self.transform = [row[ncols:] for row in ech[: len(piv)]]
        self.kernel_rows = [row[ncols:] for row in ech[len(piv):]]

    def reduce(self, v):
        """Return (coefficients on basis, remainder)."""
        rem = list(v)
        coeff = []
        for k, c in enumerate(self.pivots):
            p = self.basis[k][c]
            q = rem[c] // p
            coeff.append(q)
            if q:
                b = self.basis[k]
                for j in range(c, self.ncols):
                    if b[j]:
                        rem[j] -= q * b[j]
        return coeff, rem

    def contains(self, v) -> bool:
        _, rem = self.reduce(v)
        return not any(rem)

    def solve(self, v):
        """Coefficients x over the original rows with x*rows = v, or None."""
        coeff, rem = self.reduce(v)
        if any(rem):
            return None
        x = [0] * len(self.transform[0]) if self.transform else [0] * (self.ngens + (self.ncols if self.modulus else 0))
        for q, t in zip(coeff, self.transform):
            if q:
                for j, tj in enumerate(t):
                    if tj:
                        x[j] += q * tj
        x = x[: self.ngens]
        if self.modulus:
            x = [c % self.modulus for c in x]
        return x

    def rank(self) -> int:
        return len(self.pivots)


# ---------------------------------------------------------------- prime fields


def _rref_modp(a: np.ndarray, p: int, key_cols: int):
    """In-place RREF over F_p on the first ``key_cols`` columns."""
    a = a % p
    rows = a.shape[0]
    pivots = []
    r = 0
    for c in range(key_cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


class _ModpSolver:
    def __init__(self, rows: Matrix, ncols: int, p: int):
        self.ncols = ncols
        self.modulus = p
        self.ngens = len(rows)
        self._rows = rows
        self._transform = None
        self._kernel = None
        if self.ngens == 0 or ncols == 0:
            self.pivots = []
            self.basis = np.zeros((0, ncols), dtype=np.int64)
            return
        a = to_array(rows, p, ncols)
        a, piv = _rref_modp(a, p, ncols)
        self.pivots = piv
        self.basis = a[: len(piv)]

    def _augmented(self):
        n, ncols, p = self.ngens, self.ncols, self.modulus
        a = np.zeros((n, ncols + n), dtype=np.int64)
        if ncols:
            a[:, :ncols] = to_array(self._rows, p, ncols)
        a[:, ncols:] = np.eye(n, dtype=np.int64)
        a, piv = _rref_modp(a, p, ncols)
        k = len(piv)
        self._transform = a[:k, ncols:]
        self._kernel = [list(map(int, r)) for r in a[k:, ncols:]]

    @property
    def kernel_rows(self):
        if self._kernel is None:
            if self.ngens == 0:
                self._kernel = []
            else:
                self._augmented()
        return self._kernel

    def _coeffs(self, v):
        arr = np.array([int(x) % self.modulus for x in v], dtype=np.int64)
        if not self.pivots:
            return np.zeros(0, dtype=np.int64), arr
        y = arr[self.pivots]
        rem = (arr - y @ self.basis) % self.modulus
        return y, rem

    def contains(self, v) -> bool:
        _, rem = self._coeffs(v)
        return not rem.any()

    def contains_many(self, vs: np.ndarray) -> bool:
        if vs.shape[0] == 0:
            return True
        vs = vs % self.modulus
        if not self.pivots:
            return not vs.any()
        y = vs[:, self.pivots]
        rem = (vs - (y @ self.basis) % self.modulus) % self.modulus
        return not rem.any()

    def solve(self, v):
        y, rem = self._coeffs(v)
        if rem.any():
            return None
        if not self.pivots:
            return [0] * self.ngens
        if self._transform is None:
            self._augmented()
        x = (y @ self._transform) % self.modulus
        return [int(c) for c in x]

    def rank(self) -> int:
        return len(self.pivots)


def to_array(rows, p: int, ncols: int) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        return rows.astype(np.int64) % p
    a = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x:
                a[i, j] = x % p
    return a


def nullspace_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0} over F_p."""
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = _rref_modp(a.astype(np.int64), p, cols)
    free = [j for j in range(cols) if j not in set(piv)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, c in enumerate(piv):
            out[k, c] = (-r[i, f]) % p
    return out


def rank_modp(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(_rref_modp(a.astype(np.int64), p, a.shape[1])[1])


def span_solver(rows: Matrix, ncols: int, modulus: int = 0):
    """Solver for the span of ``rows`` over Z (modulus 0) or Z/modulus."""
    if _use_numpy(modulus):
        return _ModpSolver(rows, ncols, modulus)
    return _IntSolver(rows, ncols, modulus)


def left_kernel(rows: Matrix, ncols: int, modulus: int = 0) -> Matrix:
    """Generators of {x : x * rows = 0} (over Z or Z/modulus)."""
    n = len(rows)
    if n == 0:
        return []
    s = span_solver(rows, ncols, modulus)
    ker = [r[:n] for r in s.kernel_rows]
    if modulus:
        ker = [[c % modulus for c in r] for r in ker]
    return [r for r in ker if any(r)]


def rank(rows: Matrix, ncols: int, modulus: int = 0) -> int:
    return span_solver(rows, ncols, modulus).rank()
