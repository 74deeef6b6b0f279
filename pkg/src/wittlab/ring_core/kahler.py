"""Kaehler differentials of a PolyQuotRing over its base ring.

Omega^1 is presented as (sum_i R dx_i) / (df : f in the defining ideal)
and Omega^n as the n-th exterior power of that presentation:
(sum_{|I|=n} R dx_I) / (df ^ dx_J : |J| = n-1).  Differential forms have
internal degree (polynomial degree) + n.
"""

from __future__ import annotations

import itertools

from ..linalg_exact import FPModule
from . import poly as P
from .modules import GradedModule
from .rings import PolyQuotRing, RingElement


def _sort_sign(idx):
    """Sign of the permutation sorting idx, and the sorted tuple (0 if repeated)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


class KahlerForms:
    """Omega^n_{R/k} as an R-module truncated at an internal-degree bound.

    ``bound`` is mandatory for rings of infinite rank; for finite rank it
    defaults to the top degree of the ring plus n.
    """

    def __init__(self, ring: PolyQuotRing, n: int, bound: int | None = None):
        if n < 0:
            raise ValueError("form degree must be nonnegative")
        if bound is None:
            if not ring.is_finite_rank:
                raise ValueError("an internal-degree bound is required for a ring of infinite rank")
            bound = (ring.top_degree + n) if ring.is_graded else 0
        self.ring = ring
        self.n = n
        self.bound = bound
        d = ring.nvars
        self.index_sets = list(itertools.combinations(range(d), n))
        self.position = {I: k for k, I in enumerate(self.index_sets)}
        gen_deg = [n] * len(self.index_sets)
        rels = []
        if n >= 1:
            for f in self._ideal_generators():
                df = [RingElement(ring, ring.engine.reduce(P.derivative(f, i), ring.base.modulus), True) for i in range(d)]
                for J in itertools.combinations(range(d), n - 1):
                    vec = [ring.zero() for _ in self.index_sets]
                    for i in range(d):
                        if df[i].is_zero():
                            continue
                        s, I = _sort_sign((i,) + J)
                        if s:
                            vec[self.position[I]] = vec[self.position[I]] + (df[i] if s > 0 else -df[i])
                    if any(not v.is_zero() for v in vec):
                        rels.append(vec)
        self.module = GradedModule.from_presentation(ring, gen_deg, rels, bound)

    def _ideal_generators(self):
        eng = self.ring.engine
        if eng.kind == "monomial":
            return [{e: 1} for e in eng.leads]
        return list(eng.basis)

    # -- symbolic d
    def d(self, a) -> list[RingElement]:
        """da as a coordinate list over dx_1..dx_d (n = 1 shape)."""
        a = self.ring.normal_form(a)
        return [a.derivative(i) for i in range(self.ring.nvars)]

    def form(self, a, factors) -> list[RingElement]:
        """Coordinates of a da_1 ^ ... ^ da_n over the dx_I."""
        ring = self.ring
        a = ring.normal_form(a)
        if len(factors) != self.n:
            raise ValueError("wrong number of factors")
        grads = [self.d(b) for b in factors]
        out = [ring.zero() for _ in self.index_sets]
        for choice in itertools.product(range(ring.nvars), repeat=self.n):
            s, I = _sort_sign(choice)
            if not s:
                continue
            term = a
            for g, i in zip(grads, choice):
                term = term * g[i]
                if term.is_zero():
                    break
            if not term.is_zero():
                out[self.position[I]] = out[self.position[I]] + (term if s > 0 else -term)
        return out

    def vector(self, coords) -> dict:
        """Per-degree vectors of a form given by coordinates over the dx_I."""
        return self.module.element_vector(coords)

    def is_zero(self, coords) -> bool:
        vec = self.vector(coords)
        return all(self.module.piece(t).element_is_zero(v) for t, v in vec.items())

    def base_module(self) -> FPModule:
        """Omega^n as a module over the base ring (direct sum over degrees)."""
        return self.module.flat()


def kahler_differentials(ring: PolyQuotRing, n: int, bound: int | None = None) -> KahlerForms:
    return KahlerForms(ring, n, bound)
