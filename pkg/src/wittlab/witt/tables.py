"""Universal Witt structure polynomials.

For a truncation set S the coordinates of a+b, a*b, -a and F_m(a) are
integer polynomials in the coordinates of a and b.  They are found by
solving the ghost equations

    w_n(c) = sum_{d | n} d * c_d^(n/d)

recursively in n, dividing exactly by n at each step.  Tables are cached in
memory and as ``witt_table_S{...}.json`` under ``$WITTLAB_TABLE_DIR``.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading

from ..ring_core import poly as P
from .truncation import TruncationSet

TABLE_VERSION = 1

_cache: dict = {}
_cache_lock = threading.Lock()
_key_locks: dict = {}


class WittTableError(RuntimeError):
    """Raised when a ghost equation does not divide exactly (an internal bug)."""


def table_dir() -> str:
    return os.environ.get("WITTLAB_TABLE_DIR") or os.path.join(os.path.expanduser("~"), ".cache", "wittlab")


def ghost_poly(coords: list, n: int, S: TruncationSet, nvars: int) -> dict:
    """w_n of a vector whose coordinates are the given polynomials."""
    out: dict = {}
    for d in S:
        if d > n:
            break
        if n % d == 0:
            out = P.padd(out, P.pscale(P.ppow(coords[S.index(d)], n // d, nvars), d))
    return out


def _solve(S: TruncationSet, targets: dict, nvars: int) -> list:
    """Coordinates c with w_n(c) = targets[n] for every n in S."""
    coords: list = []
    for n in S:
        rest = dict(targets[n])
        for d in S:
            if d >= n:
                break
            if n % d == 0:
                rest = P.psub(rest, P.pscale(P.ppow(coords[S.index(d)], n // d, nvars), d))
        c = {}
        for e, v in rest.items():
            q, r = divmod(v, n)
            if r:
                raise WittTableError(f"ghost equation for index {n} is not integral")
            c[e] = q
        coords.append(c)
    return coords


class WittTable:
    """Structure polynomials for one truncation set.

    ``add``/``mul`` use variables a_s (first |S|) then b_s; ``neg`` and
    ``frob[m]`` use a_s only.  Each entry is a list indexed like S (or S/m).
    """

    def __init__(self, S: TruncationSet, add, mul, neg, frob):
        self.S = S
        self.add = add
        self.mul = mul
        self.neg = neg
        self.frob = frob
        self._compiled: dict = {}

    @classmethod
    def compute(cls, S: TruncationSet) -> "WittTable":
        k = len(S)
        two = 2 * k
        a2 = [P.var(i, two) for i in range(k)]
        b2 = [P.var(k + i, two) for i in range(k)]
        ga = {n: ghost_poly(a2, n, S, two) for n in S}
        gb = {n: ghost_poly(b2, n, S, two) for n in S}
        add = _solve(S, {n: P.padd(ga[n], gb[n]) for n in S}, two)
        mul = _solve(S, {n: P.pmul(ga[n], gb[n]) for n in S}, two)
        a1 = [P.var(i, k) for i in range(k)]
        g1 = {n: ghost_poly(a1, n, S, k) for n in S}
        neg = _solve(S, {n: P.pscale(g1[n], -1) for n in S}, k)
        frob = {}
        for m in S:
            if m == 1:
                continue
            T = S.divided(m)
            frob[m] = _solve(T, {n: g1[n * m] for n in T}, k)
        return cls(S, add, mul, neg, frob)

    # -- serialization
    @staticmethod
    def _enc(polys):
        return [[[list(e), c] for e, c in sorted(p.items(), key=lambda t: P.grlex_key(t[0]))] for p in polys]

    @staticmethod
    def _dec(data):
        return [{tuple(e): int(c) for e, c in p} for p in data]

    def to_json(self) -> dict:
        return {
            "version": TABLE_VERSION,
            "S": list(self.S.elements),
            "add": self._enc(self.add),
            "mul": self._enc(self.mul),
            "neg": self._enc(self.neg),
            "frob": {str(m): self._enc(v) for m, v in sorted(self.frob.items())},
        }

    @classmethod
    def from_json(cls, data, S: TruncationSet) -> "WittTable":
        if data.get("version") != TABLE_VERSION or tuple(data.get("S", ())) != S.elements:
            raise ValueError("table file does not match the truncation set")
        frob = {int(m): cls._dec(v) for m, v in data["frob"].items()}
        return cls(S, cls._dec(data["add"]), cls._dec(data["mul"]), cls._dec(data["neg"]), frob)

    # -- specialization
    def compiled(self, op: str, modulus: int):
        """Polynomials with coefficients reduced mod ``modulus`` as term lists."""
        key = (op, modulus)
        got = self._compiled.get(key)
        if got is None:
            if op.startswith("frob"):
                polys = self.frob[int(op[4:])]
            else:
                polys = getattr(self, op)
            got = []
            for p in polys:
                terms = []
                for e, c in sorted(p.items(), key=lambda t: P.grlex_key(t[0])):
                    if modulus:
                        c %= modulus
                        if c > modulus // 2:
                            c -= modulus
                    if c:
                        terms.append((c, tuple((i, x) for i, x in enumerate(e) if x)))
                got.append(terms)
            self._compiled[key] = got
        return got

    def evaluate(self, op: str, values: list, ring) -> list:
        """Specialize the ``op`` family at ring elements ``values``."""
        m = ring.base.modulus
        fam = self.compiled(op, m)
        powers: dict = {}

        def pw(i, x):
            key = (i, x)
            v = powers.get(key)
            if v is None:
                v = values[i] if x == 1 else pw(i, x - 1) * values[i]
                powers[key] = v
            return v

        out = []
        zero = ring.zero()
        for terms in fam:
            acc = {}
            for c, mono in terms:
                t = None
                for i, x in mono:
                    v = values[i]
                    if v.is_zero():
                        t = zero
                        break
                    v = pw(i, x)
                    t = v if t is None else t * v
                    if t.is_zero():
                        break
                if t is None:
                    acc = P.padd(acc, P.const(c, ring.nvars), m)
                elif not t.is_zero():
                    acc = P.padd(acc, P.pscale(t.poly, c, m), m)
            out.append(ring.normal_form(acc))
        return out


def _file_for(S: TruncationSet) -> str:
    return os.path.join(table_dir(), f"witt_table_S{S.label()}.json")


def _load_or_compute(S: TruncationSet) -> WittTable:
    path = _file_for(S)
    if os.path.exists(path):
        try:
            with open(path) as fh:
                return WittTable.from_json(json.load(fh), S)
        except (OSError, ValueError, KeyError, TypeError):
            pass
    table = WittTable.compute(S)
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(table.to_json(), fh)
        os.replace(tmp, path)
    except OSError:
        pass  # read-only cache dir: keep the table in memory only
    return table


def universal_table(S: TruncationSet) -> WittTable:
    """The table for S, computed at most once per process and key."""
    key = (table_dir(), S.elements)
    t = _cache.get(key)
    if t is not None:
        return t
    with _cache_lock:
        lock = _key_locks.setdefault(key, threading.Lock())
    with lock:
        t = _cache.get(key)
        if t is None:
            t = _load_or_compute(S)
            _cache[key] = t
    return t


def clear_memory_cache():
    with _cache_lock:
        _cache.clear()
        _key_locks.clear()


def verify_table(table: WittTable) -> bool:
    """Check every ghost identity of the table over the integers."""
    S = table.S
    k = len(S)
    two = 2 * k
    a2 = [P.var(i, two) for i in range(k)]
    b2 = [P.var(k + i, two) for i in range(k)]
    a1 = [P.var(i, k) for i in range(k)]
    for n in S:
        ga, gb = ghost_poly(a2, n, S, two), ghost_poly(b2, n, S, two)
        if ghost_poly(table.add, n, S, two) != P.padd(ga, gb):
            return False
        if ghost_poly(table.mul, n, S, two) != P.pmul(ga, gb):
            return False
        if ghost_poly(table.neg, n, S, k) != P.pscale(ghost_poly(a1, n, S, k), -1):
            return False
    for m, polys in table.frob.items():
        T = S.divided(m)
        for n in T:
            if ghost_poly(polys, n, T, k) != ghost_poly(a1, n * m, S, k):
                return False
    return True
