"""The naive cotangent complex J/J^2 -> sum_i A dx_i of A = k[x]/J.

Its cokernel is Omega^1_A and its kernel is the first homology D_1.  J/J^2
is computed inside B = k[x]/J^2, degree by degree for graded rings and in
one piece for ungraded rings of finite rank.
"""

from __future__ import annotations

from ..linalg_exact import FPModule, ModuleMap, cokernel, direct_sum, kernel, left_kernel
from ..ring_core import GradedModule, PolyQuotRing
from ..ring_core import poly as P


class NaiveCotangent:
    """Degreewise conormal maps J/J^2 -> Omega_P tensor A and their (co)kernels."""

    def __init__(self, ring: PolyQuotRing, bound: int | None = None):
        m = ring.base.modulus
        gens = list(ring.ideal_gens)
        squares = [P.pmul(f, g, m) for i, f in enumerate(gens) for g in gens[i:]]
        B = PolyQuotRing(ring.base, ring.vars, [s for s in squares if s])
        self.ring = ring
        self.square_ring = B
        graded = ring.is_graded
        if bound is None:
            if not ring.is_finite_rank:
                raise ValueError("an internal-degree bound is required for a ring of infinite rank")
            bound = max(B.top_degree, ring.top_degree + 1) if graded else 0
        self.bound = bound if graded else 0
        self.forms = GradedModule.free(ring, [1] * ring.nvars, self.bound)
        self.conormal: dict[int, ModuleMap] = {}
        self.h0: dict[int, FPModule] = {}
        self.h1: dict[int, FPModule] = {}
        for d in range(self.bound + 1):
            f = self._conormal_map(d)
            self.conormal[d] = f
            self.h1[d] = kernel(f)[0]
            self.h0[d] = cokernel(f)[0]

    def _conormal_map(self, d: int) -> ModuleMap:
        ring, B = self.ring, self.square_ring
        m = ring.base.modulus
        graded = ring.is_graded
        basis = B.basis_in_degree(d) if graded else B.module_basis()
        index = {e: k for k, e in enumerate(basis)}
        rows, polys = [], []
        for f in ring.ideal_gens:
            a = P.degree(f)
            if graded:
                monos = B.basis_in_degree(d - a) if d >= a else []
            else:
                monos = B.module_basis()
            for e in monos:
                g = B.engine.reduce(P.pmul({e: 1}, f, m), m)
                if not g:
                    continue
                row = [0] * len(basis)
                for mono, c in g.items():
                    row[index[mono]] = c
                rows.append(row)
                polys.append(g)
        rels = _row_relations(rows, len(basis), m)
        source = FPModule(m, len(rows), tuple(tuple(r) for r in rels))
        tgt_labels = self.forms.labels[d]
        tgt_index = {lab: k for k, lab in enumerate(tgt_labels)}
        target = self.forms.piece(d)
        mat = []
        for g in polys:
            out = [0] * len(tgt_labels)
            for i in range(ring.nvars):
                h = ring.engine.reduce(P.derivative(g, i), m)
                for mono, c in h.items():
                    out[tgt_index[(i, mono)]] += c
            mat.append([x % m for x in out] if m else out)
        return ModuleMap(source, target, mat)

    def d0(self) -> FPModule:
        return direct_sum([self.h0[d] for d in sorted(self.h0)])

    def d1(self) -> FPModule:
        return direct_sum([self.h1[d] for d in sorted(self.h1)])


def _row_relations(rows, ncols: int, modulus: int):
    """All c with sum_k c_k rows[k] = 0."""
    if not rows:
        return []
    return left_kernel(rows, ncols, modulus)


def naive_cotangent(ring: PolyQuotRing, bound: int | None = None) -> tuple[FPModule, FPModule]:
    """(D_0, D_1) = (Omega^1_A, ker(J/J^2 -> sum A dx_i)) as base modules."""
    N = NaiveCotangent(ring, bound)
    return N.d0(), N.d1()
