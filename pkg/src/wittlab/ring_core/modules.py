"""Modules over a PolyQuotRing, stored as base modules split by internal degree.

A graded module keeps one FPModule over the base ring per internal degree
``0..bound`` and, for every variable, the matrix of multiplication by that
variable from degree d to degree d+1.  Multiplication into degree
``bound + 1`` is dropped, so the stored object is the honest quotient
M / M_{>bound}.  Kernels, cokernels and quotients by ideals commute with
this truncation in every degree <= bound.

Rings whose defining ideal is not homogeneous are handled as ungraded:
everything sits in degree 0 and the ring must have finite rank.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..linalg_exact import FPModule, ModuleMap, cokernel, kernel, span_solver
from ..linalg_exact.fpmodule import direct_sum
from .rings import PolyQuotRing, RingElement


def _zero_matrix(r, c):
    return [[0] * c for _ in range(r)]


def _matmul(a, b, ncols, modulus=0):
    out = []
    for row in a:
        acc = [0] * ncols
        for c, brow in zip(row, b):
            if c:
                for j, x in enumerate(brow):
                    if x:
                        acc[j] += c * x
        if modulus:
            acc = [x % modulus for x in acc]
        out.append(acc)
    return out


class GradedModule:
    """Finitely generated module over ``ring`` truncated at internal degree ``bound``."""

    def __init__(self, ring: PolyQuotRing, bound: int, pieces: dict, action: dict, labels: dict | None = None):
        self.ring = ring
        self.graded = ring.is_graded
        self.bound = bound if self.graded else 0
        self.pieces = {d: pieces.get(d, FPModule.zero(ring.base.modulus)) for d in self.degrees()}
        self.action = action
        self.labels = labels or {}
        self._mono_cache: dict = {}

    @property
    def base(self) -> int:
        return self.ring.base.modulus

    def degrees(self):
        return range(0, self.bound + 1)

    def step(self, d: int, k: int = 1) -> int | None:
        """Degree reached from d by multiplying with a form of degree k."""
        if not self.graded:
            return 0
        t = d + k
        return t if t <= self.bound else None

    def piece(self, d: int) -> FPModule:
        if d in self.pieces:
            return self.pieces[d]
        return FPModule.zero(self.base)

    # -- constructors
    @classmethod
    def free(cls, ring: PolyQuotRing, gen_degrees, bound: int) -> "GradedModule":
        """Free module with generators in the given degrees."""
        gen_degrees = list(gen_degrees)
        graded = ring.is_graded
        if not graded:
            gen_degrees = [0] * len(gen_degrees)
            bound = 0
        labels = {}
        for d in range(bound + 1):
            lab = []
            for j, a in enumerate(gen_degrees):
                if graded:
                    monos = ring.basis_in_degree(d - a) if d >= a else []
                else:
                    monos = ring.module_basis()
                lab.extend((j, e) for e in monos)
            labels[d] = lab
        m = ring.base.modulus
        pieces = {d: FPModule.free(m, len(labels[d])) for d in labels}
        index = {d: {lab: k for k, lab in enumerate(labels[d])} for d in labels}
        action = {}
        for i in range(ring.nvars):
            for d in labels:
                t = (d + 1) if graded else 0
                if graded and t > bound:
                    action[(i, d)] = _zero_matrix(len(labels[d]), 0)
                    continue
                mat = []
                for (j, e) in labels[d]:
                    row = [0] * len(labels[t])
                    f = list(e)
                    f[i] += 1
                    prod = ring.engine.reduce({tuple(f): 1}, m)
                    for g, c in prod.items():
                        row[index[t][(j, g)]] = c
                    mat.append(row)
                action[(i, d)] = mat
        mod = cls(ring, bound, pieces, action, labels)
        mod.gen_degrees = gen_degrees
        return mod

    @classmethod
    def from_presentation(cls, ring: PolyQuotRing, gen_degrees, relations, bound: int) -> "GradedModule":
        """R^g (shifted) modulo the submodule generated by ``relations``.

        Each relation is a list of g ring elements (or polynomial strings)
        and must be homogeneous when the ring is graded.
        """
        F = cls.free(ring, gen_degrees, bound)
        gens: dict = {}
        for rel in relations:
            for d, v in F.element_vector(rel).items():
                gens.setdefault(d, []).append(v)
        return F.quotient_by_elements(gens)

    @classmethod
    def ring_module(cls, ring: PolyQuotRing, bound: int) -> "GradedModule":
        return cls.free(ring, [0], bound)

    # -- elements
    def element_vector(self, entries) -> dict:
        """Vector(s) of the free module for a tuple of ring elements, by degree."""
        ring = self.ring
        entries = [ring.normal_form(a) if not isinstance(a, RingElement) else a for a in entries]
        index = {d: {lab: k for k, lab in enumerate(self.labels[d])} for d in self.labels}
        out: dict = {}
        for j, a in enumerate(entries):
            for e, c in a.poly.items():
                d = (sum(e) + self.gen_degrees[j]) if self.graded else 0
                if d > self.bound:
                    continue
                vec = out.setdefault(d, [0] * len(self.labels[d]))
                vec[index[d][(j, e)]] += c
        return out

    def monomial_action(self, e: tuple, d: int):
        """Matrix of multiplication by the monomial x^e on degree d (or None)."""
        key = (e, d)
        if key in self._mono_cache:
            return self._mono_cache[key]
        n = self.piece(d).gens
        mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        cur = d
        for i, k in enumerate(e):
            for _ in range(k):
                t = self.step(cur)
                if t is None:
                    self._mono_cache[key] = None
                    return None
                mat = _matmul(mat, self.action[(i, cur)], self.piece(t).gens, self.base)
                cur = t
        self._mono_cache[key] = (cur, mat)
        return self._mono_cache[key]

    def element_action(self, a, d: int) -> dict:
        """Multiplication by a ring element on degree d, as {target degree: matrix}."""
        if not isinstance(a, RingElement):
            a = self.ring.normal_form(a)
        out: dict = {}
        n = self.piece(d).gens
        for e, c in a.poly.items():
            res = self.monomial_action(e, d)
            if res is None:
                continue
            t, mat = res
            acc = out.setdefault(t, _zero_matrix(n, self.piece(t).gens))
            for r, row in zip(acc, mat):
                for j, x in enumerate(row):
                    if x:
                        r[j] += c * x
        if self.base:
            for t in out:
                out[t] = [[x % self.base for x in r] for r in out[t]]
        return out

    # -- submodules and quotients
    def closure(self, gens: dict) -> dict:
        """Spanning rows (per degree) of the submodule generated by ``gens``."""
        out = {d: [list(v) for v in gens.get(d, [])] for d in self.degrees()}
        if self.graded:
            for d in self.degrees():
                if not out[d]:
                    continue
                basis = _span_basis(out[d], self.piece(d))
                out[d] = basis
                t = self.step(d)
                if t is None:
                    continue
                for i in range(self.ring.nvars):
                    out[t].extend(_matmul(basis, self.action[(i, d)], self.piece(t).gens, self.base))
            return out
        rows = out[0]
        piece = self.piece(0)
        while True:
            basis = _span_basis(rows, piece)
            new = list(basis)
            for i in range(self.ring.nvars):
                new.extend(_matmul(basis, self.action[(i, 0)], piece.gens, self.base))
            nb = _span_basis(new, piece)
            if len(nb) == len(basis) and _same_span(nb, basis, piece):
                return {0: basis}
            rows = nb

    def quotient_by_elements(self, gens: dict) -> "GradedModule":
        """Quotient by the submodule generated by the given vectors."""
        cl = self.closure(gens)
        pieces = {}
        for d in self.degrees():
            M = self.piece(d)
            pieces[d] = FPModule(M.base, M.gens, tuple(M.rels) + tuple(tuple(r) for r in cl[d]))
        out = GradedModule(self.ring, self.bound, pieces, self.action, self.labels)
        if hasattr(self, "gen_degrees"):
            out.gen_degrees = self.gen_degrees
        return out

    def ideal_submodule(self, ideal_gens) -> dict:
        """Spanning rows of I*M for I generated by ``ideal_gens``."""
        rows: dict = {d: [] for d in self.degrees()}
        for g in ideal_gens:
            for d in self.degrees():
                for t, mat in self.element_action(g, d).items():
                    rows[t].extend(mat)
        return rows

    def quotient_by_ideal(self, ideal_gens) -> "GradedModule":
        """M / I M."""
        return self.quotient_by_elements(self.ideal_submodule(ideal_gens))

    def identity(self) -> "GradedMap":
        return GradedMap(self, self, {d: ModuleMap.identity(self.piece(d)).matrix for d in self.degrees()}, check=False)

    def scalar(self, c: int) -> "GradedMap":
        return GradedMap(self, self, {d: ModuleMap.scalar(self.piece(d), c).matrix for d in self.degrees()}, check=False)

    def torsion(self, m: int) -> tuple["GradedModule", "GradedMap"]:
        """(M[m], inclusion)."""
        return graded_kernel(self.scalar(m))

    def mod(self, m: int) -> tuple["GradedModule", "GradedMap"]:
        """(M/mM, projection)."""
        return graded_cokernel(self.scalar(m))

    # -- summaries
    def flat(self) -> FPModule:
        return direct_sum([self.piece(d) for d in self.degrees()]) if self.bound >= 0 else FPModule.zero(self.base)

    def is_zero(self) -> bool:
        return all(self.piece(d).is_zero() for d in self.degrees())

    def invariants_by_degree(self) -> dict:
        return {d: self.piece(d).invariants for d in self.degrees()}

    def check_action(self) -> bool:
        """Variables commute and preserve relations (spot check of the module axioms)."""
        for d in self.degrees():
            t = self.step(d)
            if t is None:
                continue
            for i in range(self.ring.nvars):
                ModuleMap(self.piece(d), self.piece(t), self.action[(i, d)])
                u = self.step(t)
                if u is None:
                    continue
                for j in range(i + 1, self.ring.nvars):
                    a = _matmul(self.action[(i, d)], self.action[(j, t)], self.piece(u).gens, self.base)
                    b = _matmul(self.action[(j, d)], self.action[(i, t)], self.piece(u).gens, self.base)
                    if not ModuleMap(self.piece(d), self.piece(u), a, check=False).equals(
                        ModuleMap(self.piece(d), self.piece(u), b, check=False)
                    ):
                        return False
        return True


def _span_basis(rows, piece: FPModule):
    if not rows:
        return []
    s = span_solver(rows, piece.gens, piece.base)
    return [list(map(int, b)) for b in s.basis] if s.rank() else []


def _same_span(a, b, piece):
    sa = span_solver(a + [list(r) for r in piece.rels], piece.gens, piece.base)
    return all(sa.contains(r) for r in b)


@dataclass
class GradedMap:
    """Degree-preserving homomorphism of graded modules, one matrix per degree."""

    source: GradedModule
    target: GradedModule
    blocks: dict
    check: bool = True

    def __post_init__(self):
        for d in self.source.degrees():
            if d not in self.blocks:
                self.blocks[d] = _zero_matrix(self.source.piece(d).gens, self.target.piece(d).gens)
        self.maps = {
            d: ModuleMap(self.source.piece(d), self.target.piece(d), self.blocks[d], check=self.check)
            for d in self.source.degrees()
        }

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        return GradedMap(
            other.source,
            self.target,
            {d: self.maps[d].compose(other.maps[d]).matrix for d in other.source.degrees()},
            check=False,
        )

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())

    def is_linear(self) -> bool:
        """Commutes with every variable action."""
        S, T = self.source, self.target
        for d in S.degrees():
            t = S.step(d)
            if t is None:
                continue
            for i in range(S.ring.nvars):
                a = ModuleMap(S.piece(d), T.piece(t), _matmul(S.action[(i, d)], self.blocks[t], T.piece(t).gens, T.base), check=False)
                b = ModuleMap(S.piece(d), T.piece(t), _matmul(self.blocks[d], T.action[(i, d)], T.piece(t).gens, T.base), check=False)
                if not a.equals(b):
                    return False
        return True

    def flat(self) -> ModuleMap:
        S, T = self.source, self.target
        rows = []
        toff = {}
        off = 0
        for d in T.degrees():
            toff[d] = off
            off += T.piece(d).gens
        for d in S.degrees():
            for r in self.blocks[d]:
                row = [0] * off
                row[toff[d]:toff[d] + len(r)] = r
                rows.append(row)
        return ModuleMap(S.flat(), T.flat(), rows, check=False)


def graded_kernel(f: GradedMap) -> tuple[GradedModule, GradedMap]:
    S = f.source
    pieces, incs = {}, {}
    for d in S.degrees():
        K, inc = kernel(f.maps[d])
        pieces[d], incs[d] = K, inc
    action = {}
    for d in S.degrees():
        t = S.step(d)
        for i in range(S.ring.nvars):
            if t is None:
                action[(i, d)] = _zero_matrix(pieces[d].gens, 0)
                continue
            img = _matmul(incs[d].matrix, S.action[(i, d)], S.piece(t).gens, S.base)
            action[(i, d)] = [_lift(incs[t], v) for v in img]
    K = GradedModule(S.ring, S.bound, pieces, action)
    inc = GradedMap(K, S, {d: incs[d].matrix for d in S.degrees()}, check=False)
    return K, inc


def _lift(inc: ModuleMap, v):
    x = inc.lift(v)
    if x is None:
        raise ArithmeticError("vector does not lie in the submodule")
    return x


def graded_cokernel(f: GradedMap) -> tuple[GradedModule, GradedMap]:
    T = f.target
    pieces, projs = {}, {}
    for d in T.degrees():
        C, pr = cokernel(f.maps[d])
        pieces[d], projs[d] = C, pr
    C = GradedModule(T.ring, T.bound, pieces, T.action, T.labels)
    proj = GradedMap(T, C, {d: projs[d].matrix for d in T.degrees()}, check=False)
    return C, proj


def lift_through(inc: GradedMap, f: GradedMap) -> GradedMap:
    """Factor f through the injective map inc (same target)."""
    blocks = {}
    for d in f.source.degrees():
        blocks[d] = [_lift(inc.maps[d], row) for row in f.blocks[d]]
    return GradedMap(f.source, inc.source, blocks, check=False)


def quotient_map(source: GradedModule, target: GradedModule) -> GradedMap:
    """Identity on generators, for a target that is a quotient of the source."""
    return GradedMap(source, target, {d: ModuleMap.identity(source.piece(d)).matrix for d in source.degrees()})
