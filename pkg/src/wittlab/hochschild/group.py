"""Homology of a cyclic group with trivial coefficients, and THH_*(Z, M).

``cyclic_group_homology`` uses the two-periodic complex.  The oracle
``group_homology_bar`` computes the same groups from the normalized bar
resolution of Z[C_m], one cyclic summand of M at a time; prime-power
summands are handled by a Smith form over Z/p^k.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from ..linalg_exact import FPModule, is_prime, torsion_and_quotient
from ..ring_core import GradedModule, PolyQuotRing
from .complexes import ChainComplex, ComplexError


def cyclic_group_homology(M: FPModule, m: int, i: int) -> FPModule:
    """H_i(C_m, M) for the trivial action."""
    if m == 0:
        raise ValueError("group order m must be positive")
    if m < 0 or i < 0:
        raise ValueError("group order and degree must be nonnegative")
    if i == 0:
        return M
    tors, quo = torsion_and_quotient(M, m)
    return quo if i % 2 else tors


def bokstedt_thh_z(M: FPModule, n: int) -> FPModule:
    """THH_n(Z, M): M for n = 0, M/mM for n = 2m-1, M[m] for n = 2m > 0."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return M
    m = (n + 1) // 2
    tors, quo = torsion_and_quotient(M, m)
    return quo if n % 2 else tors


def as_integer_module(M: FPModule) -> GradedModule:
    """An abelian group as a module over the ring Z (no variables)."""
    Z = PolyQuotRing(M.base, [])
    return GradedModule(Z, 0, {0: M}, {})


def bokstedt_via_tor(M: FPModule, n: int) -> FPModule:
    """Tor_0 / Tor_1 over Z of (Z/m, M), the identification behind the table."""
    from .tor import TorComplex, FreeResolution

    if n == 0:
        return M
    m = (n + 1) // 2
    ring = PolyQuotRing(0, [])
    X = GradedModule.from_presentation(ring, [0], [[m]], 0)
    T = TorComplex(FreeResolution(X, 2), as_integer_module(M))
    return T.module(0 if n % 2 else 1)


# ---------------------------------------------------------------- bar oracle

def _bar_words(m: int, n: int):
    return list(itertools.product(range(1, m), repeat=n))


def group_bar_matrix(m: int, n: int) -> np.ndarray:
    """Integer matrix of d_n on the normalized bar complex of C_m, trivial coefficients."""
    src = _bar_words(m, n)
    tgt = {w: k for k, w in enumerate(_bar_words(m, n - 1))}
    D = np.zeros((len(src), len(tgt)), dtype=np.int64)
    for r, w in enumerate(src):
        D[r, tgt[w[1:]]] += 1
        for i in range(1, n):
            g = (w[i - 1] + w[i]) % m
            if g:
                D[r, tgt[w[: i - 1] + (g,) + w[i + 1:]]] += (-1) ** i
        D[r, tgt[w[:-1]]] += (-1) ** n
    return D


def _local_smith(D: np.ndarray, p: int, k: int, track: bool = True):
    """Row and column reduction of D over Z/p^k to a diagonal.

    Returns the pivot valuations (list of (row, v)) and, when ``track``, the
    inverse row transform Uinv with D = Uinv * S * V for the reduced form S
    and some invertible V, so x * D = 0 exactly when (x * Uinv) * S = 0.
    """
    q = p ** k
    A = D.copy() % q
    rows, cols = A.shape
    Uinv = np.eye(rows, dtype=np.int64) if track else None
    piv = []
    for r in range(min(rows, cols)):
        sub = A[r:, r:]
        found = None
        for v in range(k):
            mask = sub % p ** (v + 1) != 0
            flat = int(np.argmax(mask))
            if mask.flat[flat]:
                found = (v, *divmod(flat, sub.shape[1]))
                break
        if found is None:
            break
        v, i, c = found
        i += r
        c += r
        if i != r:
            A[[r, i]] = A[[i, r]]
            if track:
                Uinv[:, [r, i]] = Uinv[:, [i, r]]
        if c != r:
            A[:, [r, c]] = A[:, [c, r]]
        pv = p ** v
        unit = (int(A[r, r]) // pv) % q
        A[r] = (A[r] * pow(unit, -1, q)) % q
        if track:
            Uinv[:, r] = (Uinv[:, r] * unit) % q
        col = A[:, r].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            factors = (col[nzr] // pv) % q
            A[nzr] = (A[nzr] - np.outer(factors, A[r])) % q
            if track:
                # row_i -= f_i row_r  means  Uinv[:, r] += Uinv[:, nzr] @ f
                Uinv[:, r] = (Uinv[:, r] + Uinv[:, nzr] @ factors) % q
        # column operations clear the rest of row r
        A[r] = 0
        A[r, r] = pv
        piv.append((r, v))
    return piv, Uinv, A


@functools.lru_cache(maxsize=None)
def _homology_prime_power(m: int, n: int, p: int, k: int) -> list[int]:
    """Invariant factors of H_n(C_m; Z/p^k) from the bar complex."""
    q = p ** k
    size = (m - 1) ** n
    if size == 0:
        return []
    if n >= 1:
        D = group_bar_matrix(m, n) % q
        piv, Uinv, _ = _local_smith(D, p, k, track=True)
    else:
        piv, Uinv = [], np.eye(size, dtype=np.int64)
    val = {row: v for row, v in piv}
    # kernel generators in y = x * Uinv coordinates: p^(k-v) e_i or e_i
    orders = []
    scale = []
    for i in range(size):
        v = val.get(i)
        if v is None:
            orders.append(k)
            scale.append(1)
        elif v < k:
            orders.append(v)
            scale.append(p ** (k - v))
        else:
            orders.append(k)
            scale.append(1)
    keep = [i for i in range(size) if orders[i] > 0]
    B = group_bar_matrix(m, n + 1) % q if (m - 1) ** (n + 1) else np.zeros((0, size), dtype=np.int64)
    # entries are below q and the inner dimension is small, so float64 is exact
    Y = np.rint(B.astype(np.float64) @ Uinv.astype(np.float64)).astype(np.int64) % q
    Z = np.zeros((Y.shape[0], len(keep)), dtype=np.int64)
    for col, i in enumerate(keep):
        Z[:, col] = Y[:, i] // scale[i]
    rels = [Z]
    for col, i in enumerate(keep):
        if orders[i] < k:
            row = np.zeros((1, len(keep)), dtype=np.int64)
            row[0, col] = p ** orders[i]
            rels.append(row)
    R = np.vstack(rels) if keep else np.zeros((0, 0), dtype=np.int64)
    if not keep:
        return []
    piv2, _, _ = _local_smith(R % q, p, k, track=False)
    used = len(piv2)
    out = [p ** v for _, v in piv2 if 0 < v < k]
    out += [q] * (len(keep) - used)
    return tuple(sorted(out))


def _prime_power_split(d: int):
    out = []
    p = 2
    while d > 1:
        if d % p == 0:
            k = 0
            while d % p == 0:
                d //= p
                k += 1
            out.append((p, k))
        p += 1
    return out


def _integer_bar_homology(m: int, n: int) -> FPModule:
    mods = [FPModule.free(0, (m - 1) ** j) for j in range(n + 2)]
    diffs = [group_bar_matrix(m, j).tolist() for j in range(1, n + 2)]
    return ChainComplex(mods, diffs).homology(n).module


def group_homology_bar(M: FPModule, m: int, n: int) -> FPModule:
    """H_n(C_m, M) from the normalized bar resolution (trivial action).

    M is split into cyclic summands; free summands use the integer complex,
    so they are limited to small degrees.
    """
    if m <= 0:
        raise ValueError("group order m must be positive")
    if M.base:
        raise ComplexError("the oracle expects an abelian group over Z")
    if n == 0:
        return FPModule.from_invariants(0, *M.invariants)
    f, tors = M.invariants
    free_part = 0
    torsion: list[int] = []
    if f:
        if (m - 1) ** (n + 1) > 4096:
            raise ComplexError("free summands are limited to small degrees in the oracle")
        H = _integer_bar_homology(m, n)
        hf, ht = H.invariants
        free_part += f * hf
        torsion += list(ht) * f
    for d in tors:
        for p, k in _prime_power_split(d):
            if (m - 1) ** n == 0:
                continue
            if k == 1 and is_prime(p):
                torsion += [p] * _field_dimension(m, n, p)
            else:
                torsion += list(_homology_prime_power(m, n, p, k))
    return FPModule.from_invariants(0, free_part, [t for t in torsion if t > 1])


@functools.lru_cache(maxsize=None)
def _field_dimension(m: int, n: int, p: int) -> int:
    from ..linalg_exact.lattice import rank_modp

    size = (m - 1) ** n
    r_in = rank_modp(group_bar_matrix(m, n) % p, p) if n >= 1 else 0
    r_out = rank_modp(group_bar_matrix(m, n + 1) % p, p)
    return size - r_in - r_out


def same_group(A: FPModule, B: FPModule) -> bool:
    """Isomorphism of finitely generated abelian groups via primary decomposition."""
    return _primary(A) == _primary(B)


def _primary(M: FPModule):
    f, tors = M.invariants
    parts = []
    for d in tors:
        for p, k in _prime_power_split(d):
            parts.append(p ** k)
    return f, tuple(sorted(parts))

