"""Tor over a PolyQuotRing through degreewise free resolutions.

A resolution is built by iterated kernels: in each internal degree the
kernel of the previous differential is covered by the submodule generated
in lower degrees plus new generators.  Over Z or Z/m the resolution need
not be minimal, which does not affect Tor.
"""

from __future__ import annotations

from ..linalg_exact import FPModule, ModuleMap, direct_sum, kernel, span_solver
from ..ring_core import GradedModule, PolyQuotRing
from .bar import _free_presentation, _mul, is_freeable
from .complexes import ChainComplex, ComplexError, induced_map


class ResolutionError(ComplexError):
    pass


def _vec_times_mono(F: GradedModule, vec, deg: int, e: tuple):
    """x^e * vec for vec in piece ``deg``; None when beyond the bound."""
    if not any(e):
        return deg, list(vec)
    res = F.monomial_action(e, deg)
    if res is None:
        return None
    t, mat = res
    return t, _mul([list(vec)], mat, F.piece(t).gens, F.base)[0]


def free_map_block(F: GradedModule, target: GradedModule, images: list, d: int) -> list:
    """Matrix in degree d of the map F -> target sending generator j to images[j].

    F is free with ``gen_degrees``; images[j] is a vector in target degree gen_degrees[j].
    """
    rows = []
    width = target.piece(d).gens
    for (j, e) in F.labels[d]:
        res = _vec_times_mono(target, images[j], F.gen_degrees[j], e)
        rows.append(res[1] if res is not None else [0] * width)
    return rows


def _in_span(rows, v, piece: FPModule) -> bool:
    s = span_solver(list(rows) + piece.full_relations(), piece.gens, piece.base)
    return s.contains(list(v))


class FreeResolution:
    """F_length -> ... -> F_0 -> X -> 0, exact in internal degrees <= X.bound."""

    def __init__(self, X: GradedModule, length: int):
        if length < 0:
            raise ResolutionError("length must be nonnegative")
        self.ring = X.ring
        self.X = X
        self.bound = X.bound
        self.length = length
        self.free: list[GradedModule] = []
        self.images: list[list] = []   # images[k][j]: image of generator j of F_k
        self._blocks: dict = {}
        for k in range(length + 1):
            if k == 0:
                Y, cover = X, None
            else:
                Y = self.free[k - 1]
                lower = X if k == 1 else self.free[k - 2]
                cover = {}
                for d in X.degrees():
                    f = ModuleMap(Y.piece(d), lower.piece(d), self._block(k - 1, d), check=False)
                    cover[d] = kernel(f)[1].matrix
            degs, imgs = self._choose_generators(Y, cover)
            self.free.append(GradedModule.free(self.ring, degs, self.bound))
            self.images.append(imgs)

    def _block(self, k: int, d: int) -> list:
        """Matrix of F_k -> F_{k-1} (or F_0 -> X) in degree d."""
        key = (k, d)
        if key not in self._blocks:
            target = self.X if k == 0 else self.free[k - 1]
            self._blocks[key] = free_map_block(self.free[k], target, self.images[k], d)
        return self._blocks[key]

    def _choose_generators(self, Y: GradedModule, cover: dict | None):
        """Generators (degrees, vectors in Y) of the submodule spanned by cover[d] in degree d.

        ``cover`` None means all of Y.
        """
        degs, imgs = [], []
        generated = {d: [] for d in Y.degrees()}
        graded = self.ring.is_graded
        for d in Y.degrees():
            piece = Y.piece(d)
            if graded and d >= 1:
                t = d - 1
                for i in range(self.ring.nvars):
                    if generated[t]:
                        generated[d].extend(_mul(generated[t], Y.action[(i, t)], piece.gens, Y.base))
            if cover is None:
                cand = [[1 if a == b else 0 for b in range(piece.gens)] for a in range(piece.gens)]
            else:
                cand = [list(r) for r in cover[d]]
            for v in cand:
                if not any(v):
                    continue
                if generated[d] and _in_span(generated[d], v, piece):
                    continue
                if not generated[d] and piece.element_is_zero(v):
                    continue
                degs.append(d)
                imgs.append(list(v))
                if graded:
                    generated[d].append(list(v))
                else:
                    generated = Y.closure({0: imgs})
                    generated = {0: generated[0]}
        return degs, imgs

    def check_exact(self) -> bool:
        """d^2 = 0, the augmentation is onto with kernel im d_1, and F is acyclic below the top.

        F_0 / im d_1 -> X is onto, so equal invariants make it an isomorphism
        (finitely generated modules are Hopfian).
        """
        for d in self.X.degrees():
            mods = [self.free[k].piece(d) for k in range(self.length + 1)]
            diffs = [self._block(k, d) for k in range(1, self.length + 1)]
            C = ChainComplex(mods, diffs)
            aug = ModuleMap(mods[0], self.X.piece(d), self._block(0, d), check=False)
            img = FPModule(self.X.base, self.X.piece(d).gens, tuple(self.X.piece(d).rels) + tuple(tuple(r) for r in aug.matrix))
            if not img.is_zero():
                return False
            if C.homology(0).module.invariants != self.X.piece(d).invariants:
                return False
            for k in range(1, self.length):
                if not C.homology(k).module.is_zero():
                    return False
        return True


def _coefficient_piece_map(N: GradedModule):
    if is_freeable(N):
        return _free_presentation(N)
    return N, None, None


class TorComplex:
    """F tensor_A N in each internal degree, with F a free resolution of X."""

    def __init__(self, resolution: FreeResolution, N: GradedModule):
        if N.bound < resolution.bound and N.ring.is_graded:
            raise ResolutionError("coefficient module is truncated below the resolution bound")
        self.res = resolution
        self.original = N
        self.N, self._keep, self._proj = _coefficient_piece_map(N)
        self._complexes: dict = {}

    @property
    def ring(self) -> PolyQuotRing:
        return self.res.ring

    def degrees(self):
        return range(0, self.res.bound + 1)

    def layout(self, k: int, d: int) -> list:
        """Blocks (j, d - deg g_j, offset) of (F_k tensor N)_d."""
        F = self.res.free[k]
        out = []
        off = 0
        for j, a in enumerate(F.gen_degrees):
            t = d - a if self.ring.is_graded else 0
            if t < 0:
                continue
            out.append((j, t, off))
            off += self.N.piece(t).gens
        return out

    def _module(self, k: int, d: int) -> FPModule:
        lay = self.layout(k, d)
        n = sum(self.N.piece(t).gens for _, t, _ in lay)
        rels = []
        for (_, t, off) in lay:
            for r in self.N.piece(t).rels:
                row = [0] * n
                row[off:off + len(r)] = r
                rels.append(row)
        return FPModule(self.N.base, n, tuple(tuple(r) for r in rels))

    def _coeffs(self, k: int, j: int) -> dict:
        """d(g_j) in F_k as {j': {monomial: coefficient}}."""
        F_prev = self.res.free[k - 1]
        a = self.res.free[k].gen_degrees[j]
        vec = self.res.images[k][j]
        out: dict = {}
        for c, (jj, e) in zip(vec, F_prev.labels[a]):
            if c:
                out.setdefault(jj, {})[e] = c
        return out

    def _differential(self, k: int, d: int) -> list:
        src = self.layout(k, d)
        tgt = {j: (t, off) for j, t, off in self.layout(k - 1, d)}
        width = sum(self.N.piece(t).gens for _, t, _ in self.layout(k - 1, d))
        N = self.N
        rows = []
        for (j, t, off) in src:
            n_t = N.piece(t).gens
            block = [[0] * width for _ in range(n_t)]
            for jj, poly in self._coeffs(k, j).items():
                if jj not in tgt:
                    continue
                t2, off2 = tgt[jj]
                for e, c in poly.items():
                    res = N.monomial_action(e, t) if any(e) else (t, None)
                    if res is None:
                        continue
                    if res[1] is None:
                        for l in range(n_t):
                            block[l][off2 + l] += c
                        continue
                    tt, mat = res
                    for l in range(n_t):
                        for m, x in enumerate(mat[l]):
                            if x:
                                block[l][off2 + m] += c * x
            rows.extend(block)
        if N.base:
            rows = [[x % N.base for x in r] for r in rows]
        return rows

    def complex(self, d: int, top: int | None = None) -> ChainComplex:
        top = self.res.length if top is None else top
        key = (d, top)
        if key not in self._complexes:
            mods = [self._module(k, d) for k in range(top + 1)]
            diffs = [self._differential(k, d) for k in range(1, top + 1)]
            self._complexes[key] = ChainComplex(mods, diffs)
        return self._complexes[key]

    def homology(self, n: int, d: int):
        if n >= self.res.length:
            raise ResolutionError(f"Tor_{n} needs a resolution of length {n + 1}")
        return self.complex(d).homology(n)

    def module(self, n: int) -> FPModule:
        pieces = [self.homology(n, d).module for d in self.degrees()]
        return direct_sum(pieces)

    def by_degree(self, n: int) -> dict:
        return {d: self.homology(n, d).module for d in self.degrees()}

    def coefficient_row(self, t: int, vec) -> list:
        if self._proj is None:
            return list(vec)
        return _mul([list(vec)], self._proj[t], len(self._keep[t]), self.N.base)[0]

    def original_generator(self, t: int, l: int) -> int:
        return self._keep[t][l] if self._keep is not None else l


def tor(ring: PolyQuotRing, M: GradedModule, N: GradedModule, n: int) -> FPModule:
    """Tor_n^A(M, N) in internal degrees <= M.bound (resolving M)."""
    if n < 0:
        raise ResolutionError("n must be nonnegative")
    if M.ring is not ring and not M.ring.same_as(ring):
        raise ResolutionError("module is over another ring")
    return TorComplex(FreeResolution(M, n + 1), N).module(n)


# ------------------------------------------------------------------ maps

def lift_resolution_map(src: FreeResolution, tgt: FreeResolution, psi: dict) -> list:
    """Generator images of a chain map F -> F' lifting psi: X -> X' (psi[d] matrices)."""
    out = []
    for k in range(src.length + 1):
        F = src.free[k]
        Ft = tgt.free[k]
        imgs = []
        for j, a in enumerate(F.gen_degrees):
            if k == 0:
                v = _mul([src.images[0][j]], psi[a], tgt.X.piece(a).gens, tgt.X.base)[0]
                lower = tgt.X.piece(a)
            else:
                # phi_{k-1}(d g_j) in F'_{k-1}
                block = free_map_block(src.free[k - 1], tgt.free[k - 1], out[k - 1], a)
                v = _mul([src.images[k][j]], block, tgt.free[k - 1].piece(a).gens, tgt.X.base)[0]
                lower = tgt.free[k - 1].piece(a)
            dmat = tgt._block(k, a)
            rows = dmat + lower.full_relations()
            s = span_solver(rows, lower.gens, lower.base)
            x = s.solve(v)
            if x is None:
                raise ResolutionError("could not lift the comparison map")
            imgs.append([int(c) for c in x[: Ft.piece(a).gens]])
        out.append(imgs)
    return out


def tor_chain_map(src: TorComplex, tgt: TorComplex, gen_images: list | None, coeff_map: dict, k: int, d: int) -> list:
    """Matrix of (F_k tensor N)_d -> (F'_k tensor N')_d.

    ``gen_images[k][j]`` is the image of generator j under the resolution map
    (None means the two resolutions coincide and the map is the identity);
    ``coeff_map[t]`` is the coefficient map on original generators in degree t.
    """
    src_lay = src.layout(k, d)
    tgt_lay = {j: (t, off) for j, t, off in tgt.layout(k, d)}
    width = sum(tgt.N.piece(t).gens for _, t, _ in tgt.layout(k, d))
    Ft = tgt.res.free[k]
    rows = []
    base = tgt.N.base
    for (j, t, off) in src_lay:
        n_t = src.N.piece(t).gens
        if gen_images is None:
            terms = {j: {(0,) * src.ring.nvars: 1}}
        else:
            a = src.res.free[k].gen_degrees[j]
            terms = {}
            for c, (jj, e) in zip(gen_images[k][j], Ft.labels[a]):
                if c:
                    terms.setdefault(jj, {})[e] = c
        for l in range(n_t):
            row = [0] * width
            orig = src.original_generator(t, l)
            image_orig = coeff_map[t][orig]
            for jj, poly in terms.items():
                if jj not in tgt_lay:
                    continue
                t2, off2 = tgt_lay[jj]
                for e, c in poly.items():
                    if any(e):
                        res = _vec_times_mono(tgt.original, image_orig, t, e)
                        if res is None:
                            continue
                        vec = res[1]
                    else:
                        vec = image_orig
                    vec = tgt.coefficient_row(t2, vec)
                    for m, x in enumerate(vec):
                        if x:
                            row[off2 + m] += c * x
            if base:
                row = [x % base for x in row]
            rows.append(row)
    return rows


def tor_map(src: TorComplex, tgt: TorComplex, n: int, d: int, coeff_map: dict, gen_images=None) -> ModuleMap:
    f = tor_chain_map(src, tgt, gen_images, coeff_map, n, d)
    return induced_map(f, src.homology(n, d), tgt.homology(n, d))
