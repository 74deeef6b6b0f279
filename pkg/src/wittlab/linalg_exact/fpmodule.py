"""Finitely presented modules over Z and Z/m, and maps between them.

Elements are row vectors over the generators; a map is a matrix with one
row per source generator, acting as ``x -> x * matrix``.  For the base
Z/m the relations ``m * e_i`` are implicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .lattice import is_prime, left_kernel, span_solver, _use_numpy
from .snf import Matrix, smith_with_inverse


def _base_tag(base: int):
    return "Z" if base == 0 else {"ZmodN": base}


def parse_base(tag) -> int:
    if tag == "Z" or tag == 0:
        return 0
    if isinstance(tag, dict) and set(tag) == {"ZmodN"}:
        m = int(tag["ZmodN"])
        if m < 2:
            raise ValueError("ZmodN needs modulus >= 2")
        return m
    if isinstance(tag, int) and tag >= 2:
        return tag
    raise ValueError(f"bad base tag {tag!r}")


@dataclass(frozen=True, eq=False)
class FPModule:
    """Module with ``gens`` generators and relation rows ``rels``.

    ``base`` is 0 for Z and m >= 2 for Z/m.
    """

    base: int
    gens: int
    rels: tuple = field(default=())

    def __post_init__(self):
        if self.base == 1 or self.base < 0:
            raise ValueError("base must be 0 (Z) or a modulus >= 2")
        rels = []
        for r in self.rels:
            r = tuple(int(x) for x in r)
            if len(r) != self.gens:
                raise ValueError("relation length does not match generator count")
            if self.base:
                r = tuple(x % self.base for x in r)
            if any(r):
                rels.append(r)
        object.__setattr__(self, "rels", tuple(rels))

    # -- constructors
    @classmethod
    def free(cls, base: int, n: int) -> "FPModule":
        return cls(base, n, ())

    @classmethod
    def zero(cls, base: int = 0) -> "FPModule":
        return cls(base, 0, ())

    @classmethod
    def cyclic(cls, base: int, order: int) -> "FPModule":
        """Z/order (order 0 means free of rank one)."""
        return cls(base, 1, ((order,),) if order else ())

    @classmethod
    def from_invariants(cls, base: int, free_rank: int, torsion) -> "FPModule":
        torsion = list(torsion)
        n = free_rank + len(torsion)
        rels = []
        for i, d in enumerate(torsion):
            row = [0] * n
            row[free_rank + i] = d
            rels.append(row)
        if base:
            rels = []
            sizes = [base] * free_rank + torsion
            for i, d in enumerate(sizes):
                if d != base:
                    row = [0] * n
                    row[i] = d
                    rels.append(row)
        return cls(base, n, tuple(rels))

    # -- structure
    @cached_property
    def solver(self):
        """Span solver for the full relation lattice."""
        return span_solver(list(self.rels), self.gens, self.base)

    def full_relations(self) -> Matrix:
        rows = [list(r) for r in self.rels]
        if self.base:
            rows += [[self.base if i == j else 0 for j in range(self.gens)] for i in range(self.gens)]
        return rows

    @cached_property
    def _smith(self):
        rows = self.full_relations()
        U, D, V, Vi = smith_with_inverse(rows, self.gens)
        diag = []
        for i in range(self.gens):
            d = D[i][i] if i < len(D) else 0
            diag.append(d)
        return diag, V, Vi

    @cached_property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, invariant factors) of the module.

        Over Z the torsion list is the SNF divisor chain above 1.  Over Z/m
        the free rank counts cyclic summands of order m and the torsion list
        holds the proper factors, so a vector space over F_p reports its
        dimension as free rank.
        """
        if _use_numpy(self.base):
            dim = self.gens - self.solver.rank()
            return dim, ()
        diag, _, _ = self._smith
        free = 0
        tors = []
        for d in diag:
            if d == 0 or (self.base and d == self.base):
                free += 1
            elif d != 1:
                tors.append(d)
        tors.sort()
        return free, tuple(tors)

    @property
    def free_rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants[1]

    def is_zero(self) -> bool:
        f, t = self.invariants
        return f == 0 and not t

    def order(self) -> int | None:
        """Cardinality, or None if infinite."""
        f, t = self.invariants
        if self.base == 0 and f:
            return None
        n = 1
        for d in t:
            n *= d
        if self.base:
            n *= self.base ** f
        return n

    def dimension(self) -> int:
        """Dimension over a prime field base."""
        if not is_prime(self.base):
            raise ValueError("dimension is defined only over a prime field")
        return self.invariants[0]

    def isomorphic(self, other: "FPModule") -> bool:
        return self.base == other.base and self.invariants == other.invariants

    def cyclic_decomposition(self) -> list[int]:
        """Orders of a prime-power cyclic decomposition (0 = infinite cyclic)."""
        f, t = self.invariants
        pieces = []
        for d in list(t) + ([self.base] * f if self.base else []):
            pieces.extend(_prime_power_parts(d))
        if self.base:
            return sorted(pieces)
        return [0] * f + sorted(pieces)

    def element_is_zero(self, v) -> bool:
        return self.solver.contains(list(v))

    def reduce(self, v):
        if self.base:
            return [x % self.base for x in v]
        return list(v)

    def simplify(self) -> tuple["FPModule", "ModuleMap", "ModuleMap"]:
        """Minimal presentation with isomorphisms to and from it."""
        if _use_numpy(self.base):
            return _simplify_field(self)
        diag, V, Vi = self._smith
        keep = [i for i, d in enumerate(diag) if d != 1]
        rels = []
        for k, i in enumerate(keep):
            d = diag[i]
            if d and not (self.base and d == self.base):
                row = [0] * len(keep)
                row[k] = d
                rels.append(row)
        small = FPModule(self.base, len(keep), tuple(rels))
        to = [[V[r][i] for i in keep] for r in range(self.gens)]
        back = [list(Vi[i]) for i in keep]
        return small, ModuleMap(self, small, to), ModuleMap(small, self, back)

    def direct_sum(self, other: "FPModule") -> "FPModule":
        return direct_sum([self, other])

    def to_json(self) -> dict:
        return {"base": _base_tag(self.base), "gens": self.gens, "rels": [list(r) for r in self.rels]}

    def invariants_json(self) -> dict:
        f, t = self.invariants
        return {"free_rank": f, "torsion": list(t)}

    @classmethod
    def from_json(cls, data) -> "FPModule":
        if isinstance(data, str):
            data = json.loads(data)
        unknown = set(data) - {"base", "gens", "rels"}
        if unknown:
            raise ValueError(f"unknown keys {sorted(unknown)}")
        return cls(parse_base(data["base"]), int(data["gens"]), tuple(tuple(r) for r in data.get("rels", [])))

    def __repr__(self):
        f, t = self.invariants
        base = "Z" if self.base == 0 else f"Z/{self.base}"
        return f"FPModule({base}, free_rank={f}, torsion={list(t)})"


def _prime_power_parts(d: int) -> list[int]:
    out = []
    q = 2
    while q * q <= d:
        if d % q == 0:
            pk = 1
            while d % q == 0:
                d //= q
                pk *= q
            out.append(pk)
        q += 1
    if d > 1:
        out.append(d)
    return out


def _simplify_field(mod: FPModule):
    p = mod.base
    s = mod.solver
    piv = list(s.pivots)
    pivset = set(piv)
    free = [j for j in range(mod.gens) if j not in pivset]
    small = FPModule(p, len(free), ())
    index = {j: k for k, j in enumerate(free)}
    to = [[0] * len(free) for _ in range(mod.gens)]
    for j in free:
        to[j][index[j]] = 1
    basis = s.basis
    for i, c in enumerate(piv):
        row = basis[i]
        for j in free:
            v = int(row[j])
            if v:
                to[c][index[j]] = (-v) % p
    back = [[1 if i == j else 0 for i in range(mod.gens)] for j in free]
    return small, ModuleMap(mod, small, to), ModuleMap(small, mod, back)


def direct_sum(mods: list[FPModule]) -> FPModule:
    if not mods:
        return FPModule.zero()
    base = mods[0].base
    n = sum(m.gens for m in mods)
    rels = []
    off = 0
    for m in mods:
        if m.base != base:
            raise ValueError("base mismatch in direct sum")
        for r in m.rels:
            row = [0] * n
            row[off:off + m.gens] = r
            rels.append(row)
        off += m.gens
    return FPModule(base, n, tuple(rels))


class ModuleMap:
    """Homomorphism given on generators; well-definedness is checked."""

    def __init__(self, source: FPModule, target: FPModule, matrix, check: bool = True):
        if source.base != target.base:
            raise ValueError("base mismatch between source and target")
        mat = [list(map(int, r)) for r in matrix]
        if len(mat) != source.gens or any(len(r) != target.gens for r in mat):
            raise ValueError(
                f"matrix shape {len(mat)}x{len(mat[0]) if mat else '?'} does not fit "
                f"{source.gens} -> {target.gens}"
            )
        if target.base:
            mat = [[x % target.base for x in r] for r in mat]
        self.source = source
        self.target = target
        self.matrix = mat
        if check and not self.is_well_defined():
            raise ValueError("matrix does not send relations into the target relation span")

    @property
    def base(self) -> int:
        return self.source.base

    def apply(self, v) -> list[int]:
        out = [0] * self.target.gens
        for c, row in zip(v, self.matrix):
            if c:
                for j, x in enumerate(row):
                    if x:
                        out[j] += c * x
        return self.target.reduce(out)

    def is_well_defined(self) -> bool:
        s = self.target.solver
        for r in self.source.rels:
            if not s.contains(self.apply(r)):
                return False
        return True

    def is_zero(self) -> bool:
        s = self.target.solver
        return all(s.contains(row) for row in self.matrix)

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        if other.target.gens != self.source.gens:
            raise ValueError("cannot compose")
        mat = [self.apply(row) for row in other.matrix]
        return ModuleMap(other.source, self.target, mat, check=False)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return self.compose(other)

    @classmethod
    def identity(cls, m: FPModule) -> "ModuleMap":
        return cls(m, m, [[1 if i == j else 0 for j in range(m.gens)] for i in range(m.gens)], check=False)

    @classmethod
    def zero(cls, s: FPModule, t: FPModule) -> "ModuleMap":
        return cls(s, t, [[0] * t.gens for _ in range(s.gens)], check=False)

    @classmethod
    def scalar(cls, m: FPModule, c: int) -> "ModuleMap":
        return cls(m, m, [[c if i == j else 0 for j in range(m.gens)] for i in range(m.gens)], check=False)

    def equals(self, other: "ModuleMap") -> bool:
        s = self.target.solver
        for a, b in zip(self.matrix, other.matrix):
            if not s.contains([x - y for x, y in zip(a, b)]):
                return False
        return True

    def lift(self, v):
        """Some x with self(x) = v in the target, or None."""
        rows = self.matrix + self.target.full_relations()
        s = span_solver(rows, self.target.gens, 0 if not self.base else self.base)
        x = s.solve(list(v))
        if x is None:
            return None
        return x[: self.source.gens]


def kernel(f: ModuleMap) -> tuple[FPModule, ModuleMap]:
    """Kernel module with its inclusion into the source."""
    S, T = f.source, f.target
    base = f.base
    stacked = f.matrix + [list(r) for r in T.rels]
    ker = left_kernel(stacked, T.gens, base) if stacked else []
    gens = [r[: S.gens] for r in ker]
    if base == 0 or _use_numpy(base):
        sub = span_solver(gens, S.gens, base)
        basis = [list(map(int, b)) for b in sub.basis] if len(sub.pivots) else []
    else:
        from .howell import howell_form

        basis = howell_form(gens, base, S.gens)
    if not basis:
        K = FPModule(base, 0, ())
        return K, ModuleMap(K, S, [], check=False)
    # relations: combinations of the basis landing in the source relations
    stacked = [list(b) for b in basis] + [list(r) for r in S.rels]
    rels = [r[: len(basis)] for r in left_kernel(stacked, S.gens, base)]
    K = FPModule(base, len(basis), tuple(rels))
    inc = ModuleMap(K, S, basis, check=False)
    return K, inc


def cokernel(f: ModuleMap) -> tuple[FPModule, ModuleMap]:
    """Cokernel module with its projection from the target."""
    T = f.target
    C = FPModule(T.base, T.gens, tuple(T.rels) + tuple(tuple(r) for r in f.matrix))
    proj = ModuleMap(T, C, [[1 if i == j else 0 for j in range(T.gens)] for i in range(T.gens)], check=False)
    return C, proj


def image(f: ModuleMap) -> FPModule:
    """Image of f as a module (isomorphic to source / kernel)."""
    K, inc = kernel(f)
    C, _ = cokernel(inc)
    return C


def multiplication(m: FPModule, c: int) -> ModuleMap:
    return ModuleMap.scalar(m, c)


def torsion_and_quotient(M: FPModule, m: int) -> tuple[FPModule, FPModule]:
    """(M[m], M/mM)."""
    if m == 0:
        raise ValueError("m must be nonzero")
    f = ModuleMap.scalar(M, m)
    K, _ = kernel(f)
    C, _ = cokernel(f)
    return K, C


def _p_part(d: int, p: int) -> int:
    q = 1
    while d % p == 0:
        d //= p
        q *= p
    return q


def p_completion_data(M: FPModule, p: int) -> tuple[FPModule, FPModule]:
    """(Tate module, Ext^1(Q_p/Z_p, M)) for a finitely presented abelian group.

    The Tate module is always zero here because p-power torsion of a finitely
    generated group is bounded.  The second entry is the p-completion, given
    by its invariants over Z_p: the free rank of M and the p-parts of its
    torsion factors.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if M.base:
        raise ValueError("p_completion_data expects a module over Z")
    f, t = M.invariants
    parts = [q for q in (_p_part(d, p) for d in t) if q > 1]
    return FPModule.zero(0), FPModule.from_invariants(0, f, parts)


def bounded_torsion_exponent(M: FPModule, p: int) -> int:
    """Least c with p^c killing every M[p^r]."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    f, t = M.invariants
    if M.base:
        t = tuple(t) + (M.base,) * f
    c = 0
    for d in t:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        c = max(c, e)
    return c
