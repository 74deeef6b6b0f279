"""Howell normal form of a matrix over Z/m.

The Howell form is the unique echelon basis of a row span over Z/m such
that pivots divide m, entries above a pivot are reduced below it, and
every span element vanishing on the first j columns is a combination of
the rows whose pivot lies at column >= j.  Two matrices have the same row
span iff their Howell forms are identical.
"""

from __future__ import annotations

from math import gcd

from .lattice import xgcd
from .snf import Matrix


def _unit_normaliser(a: int, m: int) -> int:
    """A unit u mod m with u*a = gcd(a, m) (mod m)."""
    g = gcd(a, m)
    mm = m // g
    if mm == 1:
        return 1
    u0 = pow(a // g, -1, mm)
    u = u0
    while gcd(u, m) != 1:
        u += mm
    return u % m


def howell_form(rows: Matrix, m: int, ncols: int | None = None) -> Matrix:
    """Canonical generating set of the row span of ``rows`` over Z/m.

    >>> howell_form([[2, 2]], 4)
    [[2, 2]]
    >>> howell_form([[1, 0], [0, 1]], 4)
    [[1, 0], [0, 1]]
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pending = [[x % m for x in r] for r in rows]
    pending = [r for r in pending if any(r)]
    out: Matrix = []
    pivcols: list[int] = []
    for c in range(ncols):
        lead = [r for r in pending if r[c]]
        rest = [r for r in pending if not r[c]]
        if not lead:
            pending = rest
            continue
        piv = lead[0]
        for r in lead[1:]:
            a, b = piv[c], r[c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [(s * x + t * y) % m for x, y in zip(piv, r)]
            other = [(ag * y - bg * x) % m for x, y in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[c] == 0:
            # combination collapsed mod m; keep whatever survived
            if any(piv):
                rest.append(piv)
            pending = rest
            continue
        u = _unit_normaliser(piv[c], m)
        piv = [(u * x) % m for x in piv]
        ann = m // piv[c]
        extra = [(ann * x) % m for x in piv]
        if any(extra):
            rest.append(extra)
        out.append(piv)
        pivcols.append(c)
        pending = rest
    # reduce entries above each pivot
    for k, c in enumerate(pivcols):
        p = out[k][c]
        for i in range(k):
            q = out[i][c] // p
            if q:
                out[i] = [(x - q * y) % m for x, y in zip(out[i], out[k])]
    return out
