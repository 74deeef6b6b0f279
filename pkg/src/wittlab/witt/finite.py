"""Finite Witt rings W_S(A) for a finite coefficient ring A.

Besides ring arithmetic this gives an additive presentation: the group is
filtered by Fil_n = {w : a_k = 0 for k < n}, each graded piece is a copy of
A, so the elements V_n[b_j] (b_j a monomial basis of A over Z/m) generate,
and m*g minus the coordinates of m*g generate the relations.
"""

from __future__ import annotations

import itertools

from ..linalg_exact import FPModule, hermite_basis, span_solver
from ..ring_core import PolyQuotRing
from .truncation import TruncationSet
from .vectors import WittError, WittVector, teichmuller, vshift


class FiniteWittRing:
    def __init__(self, ring: PolyQuotRing, S):
        S = S if isinstance(S, TruncationSet) else TruncationSet(S)
        if ring.base.modulus == 0 or ring.cardinality() is None:
            raise WittError("a finite coefficient ring is required")
        self.ring = ring
        self.S = S
        self.m = ring.base.modulus
        self.basis = ring.module_basis()
        basis_el = [ring.normal_form({e: 1}) for e in self.basis]
        self.gen_labels = [(n, e) for n in S for e in self.basis]
        self.gens = [vshift(n, teichmuller(b, S)) for n in S for b in basis_el]
        self._rels = None
        self._group = None

    # -- basic ring data
    @property
    def cardinality(self) -> int:
        return self.ring.cardinality() ** len(self.S)

    def zero(self) -> WittVector:
        return WittVector.zero(self.ring, self.S)

    def one(self) -> WittVector:
        return WittVector.one(self.ring, self.S)

    def elements(self):
        els = list(self.ring.elements())
        for tup in itertools.product(els, repeat=len(self.S)):
            yield WittVector(self.ring, self.S, list(tup))

    def vector(self, coeffs) -> WittVector:
        return WittVector(self.ring, self.S, coeffs)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    # -- additive coordinates
    def coords(self, w: WittVector) -> tuple:
        """Integer coordinates c with w = sum c_g g, each c_g in [0, m)."""
        if w.trunc != self.S:
            raise WittError("vector lives on another truncation set")
        rest = w
        out = []
        k = len(self.basis)
        for idx, n in enumerate(self.S):
            a = rest.coeff(n)
            c = self.ring.coordinates(a)
            out.extend(c)
            if any(c):
                for j in range(k):
                    if c[j]:
                        rest = rest - self.gens[idx * k + j].scale(c[j])
        if not rest.is_zero():
            raise WittError("additive peeling left a nonzero remainder")
        return tuple(out)

    def element(self, c) -> WittVector:
        total = self.zero()
        for g, k in zip(self.gens, c):
            if k:
                total = total + g.scale(k)
        return total

    def relations(self) -> list[list[int]]:
        if self._rels is None:
            rels = []
            for i, g in enumerate(self.gens):
                row = [-x for x in self.coords(g.scale(self.m))]
                row[i] += self.m
                rels.append(row)
            self._rels = rels
        return self._rels

    def additive_group(self) -> FPModule:
        if self._group is None:
            self._group = FPModule(0, self.ngens, tuple(tuple(r) for r in self.relations()))
        return self._group

    # -- subgroups and ideals (given by generating coordinate rows)
    def span(self, elements) -> "AdditiveSubgroup":
        return AdditiveSubgroup(self, [self.coords(e) for e in elements])

    def ideal(self, elements) -> "AdditiveSubgroup":
        """The W-ideal generated by the given elements."""
        return self.span([e * g for e in elements for g in self.gens])

    def witt_ideal(self, ideal_gens) -> "AdditiveSubgroup":
        """W_S(J) for the ideal J of A generated by ``ideal_gens``."""
        ring = self.ring
        spanning = []
        seen = set()
        for g in ideal_gens:
            g = ring.normal_form(g)
            for e in self.basis:
                b = g * ring.normal_form({e: 1})
                if not b.is_zero() and b not in seen:
                    seen.add(b)
                    spanning.append(b)
        return self.span([vshift(n, teichmuller(b, self.S)) for n in self.S for b in spanning])

    def p_multiple(self, k: int) -> "AdditiveSubgroup":
        """k * W_S(A)."""
        return self.span([g.scale(k) for g in self.gens])

    def whole(self) -> "AdditiveSubgroup":
        return self.span(self.gens)

    # -- the classical identification W_r(F_p) = Z/p^r
    def integer_map(self, k: int) -> WittVector:
        return self.one().scale(k)

    def check_isomorphic_to_integers_mod(self, n: int) -> bool:
        """Exhaustively check that k -> k*[1] is a ring isomorphism Z/n -> W."""
        if self.cardinality != n:
            return False
        images = []
        acc = self.zero()
        one = self.one()
        for _ in range(n):
            images.append(acc)
            acc = acc + one
        if not acc.is_zero():
            return False
        if len(set(images)) != n:
            return False
        index = {w: k for k, w in enumerate(images)}
        for a in range(n):
            for b in range(n):
                if index.get(images[a] + images[b]) != (a + b) % n:
                    return False
                if index.get(images[a] * images[b]) != (a * b) % n:
                    return False
        return True


class AdditiveSubgroup:
    """Subgroup of a finite Witt ring spanned by coordinate rows."""

    def __init__(self, W: FiniteWittRing, rows):
        self.W = W
        n = W.ngens
        lattice = [list(r) for r in rows] + [list(r) for r in W.relations()]
        self.rows = [r for r in hermite_basis(lattice, n)]
        self._solver = span_solver(self.rows, n, 0)

    def contains(self, w) -> bool:
        c = w if isinstance(w, (tuple, list)) else self.W.coords(w)
        return self._solver.contains(list(c))

    def contains_subgroup(self, other: "AdditiveSubgroup") -> bool:
        return all(self._solver.contains(r) for r in other.rows)

    def elements(self) -> list[WittVector]:
        return [self.W.element(r) for r in self.rows]

    def times(self, other: "AdditiveSubgroup") -> "AdditiveSubgroup":
        """Additive span of products, i.e. the product ideal for two ideals."""
        A = self.elements()
        B = other.elements()
        return self.W.span([a * b for a in A for b in B])

    def power(self, s: int) -> "AdditiveSubgroup":
        if s < 1:
            raise ValueError("power must be positive")
        out = self
        for _ in range(s - 1):
            out = out.times(self)
        return out

    def order(self) -> int:
        """Number of elements of the subgroup."""
        quotient = FPModule(0, self.W.ngens, tuple(tuple(r) for r in self.rows))
        return self.W.cardinality // quotient.order()

    def __eq__(self, other):
        return isinstance(other, AdditiveSubgroup) and self.contains_subgroup(other) and other.contains_subgroup(self)


def witt_ring_as_finite_ring(ring: PolyQuotRing, S) -> FiniteWittRing:
    return FiniteWittRing(ring, S)
