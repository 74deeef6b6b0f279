"""The bar complex C_q = M (x) A^{(x)q} of a commutative algebra A over its base.

Coefficients are symmetric bimodules given as graded modules (one base
module per internal degree with variable actions).  Every face map
preserves internal degree, so the complex splits into one finite complex
per internal degree; rings of infinite rank need an explicit bound.

The normalized variant replaces A^{(x)q} by Abar^{(x)q} with Abar = A/k.1.
It has the same homology and is much smaller.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


from ..linalg_exact import FPModule, ModuleMap, cokernel, direct_sum, is_prime, kernel
from ..linalg_exact.lattice import _rref_modp, integer_echelon, to_array
from ..ring_core import GradedModule, KahlerForms, PolyQuotRing, UnsupportedIdealError
from ..ring_core import poly as P
from .complexes import ChainComplex, ComplexError, finite_coefficients, homology_json, induced_map, universal_coefficient_check


class FlatnessError(ValueError):
    """The usual bar complex only computes Hochschild homology for A free over k."""


@dataclass(frozen=True)
class GradedTruncation:
    """Internal-degree truncation for graded rings of infinite rank.

    Only the standard grading (every variable of weight 1) is supported.
    """

    internal_degree_bound: int
    weights: tuple | None = None

    def __post_init__(self):
        if self.internal_degree_bound < 0:
            raise ValueError("the internal degree bound must be nonnegative")
        if self.weights is not None and any(w != 1 for w in self.weights):
            raise ValueError("only the standard grading is supported")


def require_free(ring_or_spec) -> PolyQuotRing:
    """Build (or accept) a ring and insist that it is free over its base."""
    if isinstance(ring_or_spec, PolyQuotRing):
        return ring_or_spec
    try:
        return PolyQuotRing.from_json(ring_or_spec)
    except UnsupportedIdealError as exc:
        raise FlatnessError(
            "Hochschild homology is computed by the usual bar complex only when A is flat "
            f"(here: free) over the base ring; this presentation is not supported ({exc})"
        ) from exc


def _bound_of(trunc) -> int | None:
    if trunc is None:
        return None
    if isinstance(trunc, GradedTruncation):
        return trunc.internal_degree_bound
    return int(trunc)


def default_bound(ring: PolyQuotRing, top: int) -> int:
    """Bound covering every nonzero internal degree of C_0..C_top for finite rank."""
    if not ring.is_finite_rank:
        raise ComplexError("an internal-degree bound is required for a ring of infinite rank")
    if not ring.is_graded:
        return 0
    return max(ring.top_degree, 0) * (top + 1)


def _unit_echelon(piece: FPModule):
    """Reduced echelon rows of the relations when every pivot is 1, else None."""
    p, n = piece.base, piece.gens
    if not piece.rels:
        return [], []
    if is_prime(p):
        R, piv = _rref_modp(to_array(list(piece.rels), p, n), p, n)
        return [list(map(int, r)) for r in R[: len(piv)]], list(piv)
    if p == 0:
        R, piv = integer_echelon([list(r) for r in piece.rels], n)
        R = R[: len(piv)]
        if all(r[c] == 1 for r, c in zip(R, piv)):
            return R, piv
    return None


def is_freeable(M: GradedModule) -> bool:
    """Every piece is free on a subset of its generators (unit pivots)."""
    return any(M.piece(d).rels for d in M.degrees()) and all(
        _unit_echelon(M.piece(d)) is not None for d in M.degrees()
    )


def _free_presentation(M: GradedModule):
    """Replace every piece by a basis of the quotient on kept generators.

    Works over a prime field, and over Z when the relations have unit
    pivots.  Returns the new module and, per degree, the kept generator
    indices and the projection matrix from old generators onto the kept ones.
    """
    p = M.base
    keep, proj, pieces = {}, {}, {}
    for d in M.degrees():
        piece = M.piece(d)
        n = piece.gens
        R, piv = _unit_echelon(piece)
        pset = set(piv)
        kept = [i for i in range(n) if i not in pset]
        col = {c: k for k, c in enumerate(kept)}
        mat = [[0] * len(kept) for _ in range(n)]
        for i in kept:
            mat[i][col[i]] = 1
        for row, c in zip(R, piv):
            for i in kept:
                if row[i]:
                    mat[c][col[i]] = (-int(row[i])) % p if p else -int(row[i])
        keep[d], proj[d] = kept, mat
        pieces[d] = FPModule.free(p, len(kept))
    action = {}
    for (i, d), mat in M.action.items():
        t = M.step(d)
        rows = [mat[k] for k in keep[d]]
        if t is None:
            action[(i, d)] = [[] for _ in rows]
            continue
        action[(i, d)] = _mul(rows, proj[t], len(keep[t]), p)
    labels = {d: [M.labels[d][k] for k in keep[d]] for d in keep} if M.labels else None
    out = GradedModule(M.ring, M.bound, pieces, action, labels)
    return out, keep, proj


def _mul(a, b, ncols, modulus=0):
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


class BarComplex:
    """Bar complex of ``ring`` with coefficients ``coeff`` up to degree ``top``.

    ``coeff`` defaults to the ring itself.  ``trunc`` is a GradedTruncation
    (or an integer bound); it is mandatory for rings of infinite rank.
    """

    def __init__(self, ring: PolyQuotRing, coeff: GradedModule | None = None, top: int = 2,
                 trunc=None, normalized: bool = False, check_symmetry: bool = True):
        if top < 0:
            raise ComplexError("top degree must be nonnegative")
        ring = require_free(ring)
        bound = _bound_of(trunc)
        if not ring.is_graded:
            if not ring.is_finite_rank:
                raise ComplexError("ungraded rings must have finite rank over the base")
            bound = 0
        elif bound is None:
            bound = default_bound(ring, top)
        self.ring = ring
        self.top = top
        self.bound = bound
        self.normalized = normalized
        self.base = ring.base.modulus
        if coeff is None:
            coeff = GradedModule.ring_module(ring, bound)
            self.coeff_label = "A"
        else:
            self.coeff_label = "M"
            if coeff.bound < bound and ring.is_graded:
                raise ComplexError("the coefficient module is truncated below the internal bound")
        if check_symmetry and not coeff.check_action():
            raise ComplexError("coefficient actions do not commute; a symmetric bimodule is required")
        self.original_coeff = coeff
        if is_freeable(coeff):
            coeff, self._keep, self._proj = _free_presentation(coeff)
        else:
            self._keep = {d: list(range(coeff.piece(d).gens)) for d in coeff.degrees()}
            self._proj = None
        self.coeff = coeff
        self._complexes: dict = {}

    # -- bases
    def degrees(self):
        return range(0, self.bound + 1)

    @cached_property
    def _abar(self) -> dict:
        """Monomial basis of Abar (or A when unnormalized) by internal degree."""
        ring = self.ring
        one = (0,) * ring.nvars
        out: dict = {}
        if ring.is_graded:
            for k in range(0 if not self.normalized else 1, self.bound + 1):
                monos = ring.basis_in_degree(k)
                if monos:
                    out[k] = monos
        else:
            monos = [e for e in ring.module_basis() if not (self.normalized and e == one)]
            if monos:
                out[0] = monos
        return out

    @cached_property
    def _tuples(self) -> list:
        """T[q][t] = tensor words of length q and total internal degree t."""
        T = [{0: [()]}]
        for q in range(1, self.top + 2):
            cur: dict = {}
            for t, words in T[-1].items():
                for k, monos in self._abar.items():
                    if t + k > self.bound:
                        continue
                    bucket = cur.setdefault(t + k, [])
                    for w in words:
                        for e in monos:
                            bucket.append(w + (e,))
            T.append(cur)
        return T

    def basis(self, q: int, d: int) -> list:
        """Generators (d0, j, word) of C_q in internal degree d."""
        out = []
        for t, words in sorted(self._tuples[q].items()):
            d0 = d - t
            if d0 < 0 or t > d:
                continue
            if not self.ring.is_graded:
                d0 = 0
            n = self.coeff.piece(d0).gens
            for w in words:
                for j in range(n):
                    out.append((d0, j, w))
            if not self.ring.is_graded:
                break
        return out

    def _index(self, q: int, d: int) -> dict:
        key = ("index", q, d)
        if key not in self._complexes:
            self._complexes[key] = {b: k for k, b in enumerate(self.basis(q, d))}
        return self._complexes[key]

    def _module(self, q: int, d: int) -> FPModule:
        basis = self.basis(q, d)
        index = self._index(q, d)
        rels = []
        seen = set()
        for (d0, j, w) in basis:
            if (d0, w) in seen:
                continue
            seen.add((d0, w))
            for r in self.coeff.piece(d0).rels:
                row = [0] * len(basis)
                for k, c in enumerate(r):
                    if c:
                        row[index[(d0, k, w)]] = c
                rels.append(row)
        return FPModule(self.base, len(basis), tuple(tuple(r) for r in rels))

    # -- differentials
    def _act(self, e, d0):
        return self.coeff.monomial_action(e, d0)

    def _reduce_mono(self, e) -> dict:
        return self.ring.engine.reduce({e: 1}, self.base)

    def _differential(self, q: int, d: int) -> list:
        src = self.basis(q, d)
        tgt = self._index(q - 1, d)
        one = (0,) * self.ring.nvars
        width = len(tgt)
        rows = []
        for (d0, j, w) in src:
            row = [0] * width
            # first face: m a_1 (x) a_2 ...
            res = self._act(w[0], d0)
            if res is not None:
                t, mat = res
                for k, c in enumerate(mat[j]):
                    if c:
                        row[tgt[(t, k, w[1:])]] += c
            # middle faces
            for i in range(1, q):
                sign = -1 if i % 2 else 1
                prod = self._reduce_mono(P.mono_mul(w[i - 1], w[i]))
                for f, c in prod.items():
                    if self.normalized and f == one:
                        continue
                    row[tgt[(d0, j, w[: i - 1] + (f,) + w[i + 1:])]] += sign * c
            # last face: a_q m (x) a_1 ... a_{q-1}
            res = self._act(w[-1], d0)
            if res is not None:
                t, mat = res
                sign = -1 if q % 2 else 1
                for k, c in enumerate(mat[j]):
                    if c:
                        row[tgt[(t, k, w[:-1])]] += sign * c
            if self.base:
                row = [x % self.base for x in row]
            rows.append(row)
        return rows

    def complex(self, d: int) -> ChainComplex:
        """The finite complex in internal degree d, degrees 0..top."""
        if d < 0 or d > self.bound:
            raise ComplexError(f"internal degree {d} outside 0..{self.bound}")
        key = ("complex", d)
        if key not in self._complexes:
            mods = [self._module(q, d) for q in range(self.top + 1)]
            diffs = [self._differential(q, d) for q in range(1, self.top + 1)]
            self._complexes[key] = ChainComplex(mods, diffs)
        return self._complexes[key]

    def homology(self, n: int, d: int):
        if n >= self.top:
            raise ComplexError(f"H_{n} needs the complex up to degree {n + 1}")
        return self.complex(d).homology(n)

    def coefficient_row(self, d0: int, vec) -> list:
        """Coordinates of an element of the original coefficient piece in stored generators."""
        if self._proj is None:
            return list(vec)
        return _mul([list(vec)], self._proj[d0], len(self._keep[d0]), self.base)[0]

    def original_generator(self, d0: int, j: int) -> int:
        return self._keep[d0][j]

    def ranks(self, d: int | None = None) -> list[int]:
        """Ranks of C_0..C_top (summed over internal degrees when d is None)."""
        degs = [d] if d is not None else list(self.degrees())
        return [sum(len(self.basis(q, e)) for e in degs) for q in range(self.top + 1)]


def bar_complex(ring, coeff=None, top: int = 2, trunc=None, normalized: bool = False) -> BarComplex:
    return BarComplex(ring, coeff, top, trunc, normalized)


# ------------------------------------------------------------------ homology

class HochschildHomology:
    """HH_n(A, M) split by internal degree."""

    def __init__(self, bar: BarComplex, n: int, modulus: int | None = None):
        self.bar = bar
        self.n = n
        self.modulus = modulus
        self._cache: dict = {}

    def complex(self, d: int) -> ChainComplex:
        C = self.bar.complex(d)
        if self.modulus:
            key = ("mod", d)
            if key not in self._cache:
                self._cache[key] = finite_coefficients(C, self.modulus)
            return self._cache[key]
        return C

    def piece(self, d: int):
        return self.complex(d).homology(self.n)

    @property
    def by_degree(self) -> dict:
        return {d: self.piece(d).module for d in self.bar.degrees()}

    @property
    def module(self) -> FPModule:
        pieces = [self.piece(d).module for d in self.bar.degrees()]
        return direct_sum(pieces) if pieces else FPModule.zero(self.base)

    @property
    def base(self) -> int:
        return self.modulus or self.bar.base

    def check_universal_coefficients(self) -> bool:
        if not self.modulus:
            return True
        return all(
            universal_coefficient_check(self.bar.complex(d), self.modulus, self.n, self.complex(d))
            for d in self.bar.degrees()
        )

    def to_json(self) -> dict:
        coeff = self.bar.coeff_label
        if self.modulus:
            coeff += f" (x) Z/{self.modulus}"
        return {
            "ring": repr(self.bar.ring),
            "coeff": coeff,
            "degree": self.n,
            "invariants": homology_json(self.module),
        }


def hochschild_homology(ring, n: int, coeff=None, trunc=None, normalized: bool = False) -> HochschildHomology:
    """HH_n^k(A, M) with k the base ring of A."""
    if n < 0:
        raise ComplexError("homological degree must be nonnegative")
    bar = BarComplex(ring, coeff, n + 1, trunc, normalized)
    return HochschildHomology(bar, n)


def homology_with_coeffs(ring, n: int, q: int, coeff=None, trunc=None, normalized: bool = False,
                         check: bool = True) -> HochschildHomology:
    """HH_n(A, M; Z/q) for A over Z; the universal coefficient sequence is verified."""
    ring = require_free(ring)
    if ring.base.modulus != 0:
        raise ComplexError("finite coefficients are defined for algebras over Z")
    bar = BarComplex(ring, coeff, n + 1, trunc, normalized)
    H = HochschildHomology(bar, n, q)
    if check and not H.check_universal_coefficients():
        raise ComplexError("universal coefficient sequence failed")
    return H


# ------------------------------------------------------------------ chain maps

def quotient_ring_map(src: PolyQuotRing, tgt: PolyQuotRing):
    """Monomial -> polynomial map of the quotient A/J -> A/J' (same variables)."""
    if src.vars != tgt.vars or src.base.modulus != tgt.base.modulus:
        raise ValueError("rings must share variables and base")
    m = tgt.base.modulus

    def phi(e):
        return tgt.engine.reduce({e: 1}, m)

    return phi


def bar_chain_map(src: BarComplex, tgt: BarComplex, ring_map, coeff_map: dict, q: int, d: int) -> list:
    """Matrix of C_q(src) -> C_q(tgt) in internal degree d.

    ``ring_map`` sends a monomial of the source ring to a polynomial (dict)
    of the target ring; ``coeff_map[d0]`` is the matrix of the coefficient
    map on the original generators of degree d0.  Both must preserve
    internal degree.
    """
    one = (0,) * tgt.ring.nvars
    index = tgt._index(q, d)
    rows = []
    for (d0, j, w) in src.basis(q, d):
        row = [0] * len(index)
        orig = src.original_generator(d0, j)
        cvec = tgt.coefficient_row(d0, coeff_map[d0][orig])
        expansions = [ring_map(e) for e in w]
        if all(expansions):
            for combo in itertools.product(*[list(x.items()) for x in expansions]):
                word = tuple(f for f, _ in combo)
                if tgt.normalized and any(f == one for f in word):
                    continue
                c = 1
                for _, k in combo:
                    c *= k
                for k, x in enumerate(cvec):
                    if x:
                        row[index[(d0, k, word)]] += c * x
        if tgt.base:
            row = [x % tgt.base for x in row]
        rows.append(row)
    return rows


def identity_coeff_map(M: GradedModule) -> dict:
    return {d: [[1 if i == j else 0 for j in range(M.piece(d).gens)] for i in range(M.piece(d).gens)] for d in M.degrees()}


def induced_hh_map(src: HochschildHomology, tgt: HochschildHomology, ring_map, coeff_map: dict, d: int) -> ModuleMap:
    """Map HH_n(src) -> HH_n(tgt) in internal degree d induced by ring and coefficient maps."""
    n = src.n
    f = bar_chain_map(src.bar, tgt.bar, ring_map, coeff_map, n, d)
    if tgt.modulus:
        f = [[x % tgt.modulus for x in r] for r in f]
    return induced_map(f, src.piece(d), tgt.piece(d))


# ------------------------------------------------------------- antisymmetrization

def _sign(perm) -> int:
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


class Antisymmetrization:
    """Omega^n_{A/k} -> HH_n^k(A), a da_1 ^ ... ^ da_n -> sum sgn(s) a (x) a_s(1) (x) ... ."""

    def __init__(self, ring, n: int, trunc=None, normalized: bool = True, modulus: int | None = None):
        ring = require_free(ring)
        self.ring = ring
        self.n = n
        if modulus:
            self.hh = homology_with_coeffs(ring, n, modulus, trunc=trunc, normalized=normalized)
        else:
            self.hh = hochschild_homology(ring, n, trunc=trunc, normalized=normalized)
        self.bar = self.hh.bar
        self.forms = KahlerForms(ring, n, self.bar.bound)
        self.modulus = modulus
        self._maps: dict = {}

    def chain(self, coeff_mono, var_indices, d: int) -> list:
        """The cycle sum_s sgn(s) x^e (x) x_{i_s(1)} (x) ... in C_n(d)."""
        bar = self.bar
        ring = self.ring
        one = (0,) * ring.nvars
        index = bar._index(self.n, d)
        vec = [0] * len(index)
        d0 = sum(coeff_mono) if ring.is_graded else 0
        labels = bar.coeff.labels[d0]
        j = labels.index((0, coeff_mono))
        for perm in itertools.permutations(range(self.n)):
            sgn = _sign(perm)
            exps = [bar._reduce_mono(tuple(1 if k == var_indices[i] else 0 for k in range(ring.nvars))) for i in perm]
            for combo in itertools.product(*[list(x.items()) for x in exps]):
                word = tuple(f for f, _ in combo)
                if bar.normalized and any(f == one for f in word):
                    continue
                c = sgn
                for _, k in combo:
                    c *= k
                vec[index[(d0, j, word)]] += c
        q = self.modulus or self.bar.base
        if q:
            vec = [x % q for x in vec]
        return vec

    def map(self, d: int) -> ModuleMap:
        """The antisymmetrization in internal degree d; relations are checked to map to zero."""
        if d not in self._maps:
            omega = self.forms.module
            piece = omega.piece(d)
            if self.modulus:
                piece = FPModule(self.modulus, piece.gens, piece.rels)
            H = self.hh.piece(d)
            rows = []
            for (I, mono) in omega.labels[d]:
                rows.append(H.classify(self.chain(mono, self.forms.index_sets[I], d)))
            self._maps[d] = ModuleMap(piece, H.module, rows)
        return self._maps[d]

    def is_isomorphism(self, d: int) -> bool:
        f = self.map(d)
        K, _ = kernel(f)
        C, _ = cokernel(f)
        return K.is_zero() and C.is_zero()


def antisymmetrization(ring, n: int, trunc=None, normalized: bool = True) -> Antisymmetrization:
    return Antisymmetrization(ring, n, trunc, normalized)


def hkr_report(ring, n: int, trunc=None) -> dict:
    """Per internal degree: dimensions of Omega^n and HH_n and whether the map is an isomorphism."""
    anti = Antisymmetrization(ring, n, trunc)
    out = {}
    for d in anti.bar.degrees():
        f = anti.map(d)
        out[d] = {
            "omega": homology_json(f.source),
            "hh": homology_json(f.target),
            "iso": anti.is_isomorphism(d),
        }
    return out
