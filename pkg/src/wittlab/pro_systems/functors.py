"""Completion-type functors s -> M/I^sM, their Witt analogue, and Tor systems."""

from __future__ import annotations

from ..hochschild.tor import FreeResolution, TorComplex, lift_resolution_map, tor_map
from ..linalg_exact import FPModule, ModuleMap, direct_sum, kernel, span_solver
from ..ring_core import GradedModule, PolyQuotRing, ideal_power
from ..witt import FiniteWittRing, frobenius_power
from .core import ProMapError, ProModule, _Memo


class CapExceeded(ArithmeticError):
    pass


def power_gens(ring: PolyQuotRing, I_gens, s: int) -> list:
    gens = [ring.normal_form(g) for g in I_gens]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return []
    return [g for g in ideal_power(ring.ideal(gens), s).gens if not g.is_zero()]


def quotient_ring(ring: PolyQuotRing, I_gens, s: int) -> PolyQuotRing:
    """A/I^s with the same variables."""
    extra = [g.poly for g in power_gens(ring, I_gens, s)]
    return PolyQuotRing(ring.base, ring.vars, list(ring.ideal_gens) + extra)


def block_diagonal(src: FPModule, tgt: FPModule, blocks: list) -> ModuleMap:
    """Direct sum of per-degree maps (in degree order) between flattened modules."""
    rows = []
    off = 0
    for b in blocks:
        for r in b.matrix:
            row = [0] * tgt.gens
            row[off:off + len(r)] = r
            rows.append(row)
        off += b.target.gens
    return ModuleMap(src, tgt, rows)


def identity_on_generators(src: FPModule, tgt: FPModule) -> ModuleMap:
    return ModuleMap(src, tgt, ModuleMap.identity(src).matrix)


# ------------------------------------------------------------------ M/I^sM

def graded_quotients(M: GradedModule, I_gens) -> _Memo:
    """s -> M/I^sM as a graded module (memoized)."""
    return _Memo(lambda s: M.quotient_by_ideal(power_gens(M.ring, I_gens, s)))


def base_change_functor(M: GradedModule, I_gens, name: str = "") -> ProModule:
    """{M tensor_A A/I^s}_s with the natural surjections."""
    if not M.check_action():
        raise ValueError("the module action is not well defined")
    levels = graded_quotients(M, I_gens)
    return ProModule.quotients(lambda s: levels(s).flat(), name or "M/I^sM")


# ------------------------------------------------------------------ Witt modules

class WittModule:
    """An abelian group with an action of a finite Witt ring W.

    ``action[k]`` is the matrix of the k-th additive generator of W acting
    on the group (row-vector convention).
    """

    def __init__(self, W: FiniteWittRing, group: FPModule, action: list, check: bool = True):
        if group.base != 0:
            raise ValueError("Witt modules are stored as groups over Z")
        self.W = W
        self.group = group
        self.action = [ModuleMap(group, group, a, check=check) for a in action]
        if check:
            self.check()

    def act(self, coords) -> ModuleMap:
        """Action of the element of W with additive coordinates ``coords``."""
        n = self.group.gens
        mat = [[0] * n for _ in range(n)]
        for c, a in zip(coords, self.action):
            if c:
                for r, row in zip(mat, a.matrix):
                    for j, x in enumerate(row):
                        if x:
                            r[j] += c * x
        return ModuleMap(self.group, self.group, mat, check=False)

    def check(self):
        """Additive relations of W act by zero and the action is multiplicative."""
        for rel in self.W.relations():
            if not self.act(rel).is_zero():
                raise ValueError("a relation of W acts nontrivially")
        one = self.act(self.W.coords(self.W.one()))
        if not one.equals(ModuleMap.identity(self.group)):
            raise ValueError("the unit of W does not act as the identity")
        for i, g in enumerate(self.W.gens):
            for j, h in enumerate(self.W.gens):
                lhs = self.action[i].compose(self.action[j])
                rhs = self.act(self.W.coords(g * h))
                if not lhs.equals(rhs):
                    raise ValueError("the action is not multiplicative")

    @classmethod
    def regular(cls, W: FiniteWittRing) -> "WittModule":
        group = W.additive_group()
        action = []
        for g in W.gens:
            action.append([list(W.coords(h * g)) for h in W.gens])
        return cls(W, group, action, check=False)

    @classmethod
    def free(cls, W: FiniteWittRing, rank: int) -> "WittModule":
        R = cls.regular(W)
        n = W.ngens
        rels = []
        for b in range(rank):
            for r in R.group.rels:
                row = [0] * (n * rank)
                row[b * n:(b + 1) * n] = r
                rels.append(row)
        group = FPModule(0, n * rank, tuple(tuple(r) for r in rels))
        action = []
        for a in R.action:
            mat = [[0] * (n * rank) for _ in range(n * rank)]
            for b in range(rank):
                for i, row in enumerate(a.matrix):
                    mat[b * n + i][b * n:(b + 1) * n] = row
            action.append(mat)
        return cls(W, group, action, check=False)

    @classmethod
    def via_frobenius(cls, W: FiniteWittRing, p: int, r: int) -> "WittModule":
        """A with w acting as multiplication by F^{r-1}(w) in W_1(A) = A."""
        ring = W.ring
        basis = [ring.normal_form({e: 1}) for e in ring.module_basis()]
        m = ring.base.modulus
        k = len(basis)
        group = FPModule(0, k, tuple(tuple(m if i == j else 0 for j in range(k)) for i in range(k)))
        action = []
        for g in W.gens:
            a = frobenius_power(g, p, r - 1).coeff(1)
            action.append([list(ring.coordinates(b * a)) for b in basis])
        return cls(W, group, action)

    def submodule(self, inc: ModuleMap) -> "WittModule":
        """The W-stable subgroup given by an injective inclusion."""
        solver = span_solver(inc.matrix + self.group.full_relations(), self.group.gens, 0)
        action = []
        for a in self.action:
            rows = []
            for v in a.compose(inc).matrix:
                x = solver.solve(v)
                if x is None:
                    raise ProMapError("subgroup is not stable under W")
                rows.append([int(c) for c in x[: inc.source.gens]])
            action.append(rows)
        return WittModule(self.W, inc.source, action, check=False)

    def quotient(self, rows) -> "WittModule":
        group = FPModule(0, self.group.gens, tuple(self.group.rels) + tuple(tuple(r) for r in rows))
        return WittModule(self.W, group, [a.matrix for a in self.action], check=False)

    def ideal_times(self, subgroup) -> list:
        """Spanning rows of J*M for an additive subgroup J of W."""
        rows = []
        for c in subgroup.rows:
            rows.extend(self.act(c).matrix)
        return rows


def witt_ideal_power(W: FiniteWittRing, I_gens, s: int):
    """W(I^s) inside W."""
    return W.witt_ideal(power_gens(W.ring, I_gens, s) or [W.ring.zero()])


def witt_base_change(M: WittModule, I_gens, name: str = "") -> ProModule:
    """{M tensor_W W(A/I^s)}_s = {M / W(I^s) M}_s."""
    W = M.W

    def level(s):
        return M.quotient(M.ideal_times(witt_ideal_power(W, I_gens, s))).group

    return ProModule.quotients(level, name or "M/W(I^s)M")


def frobenius_ideal(W: FiniteWittRing, I_gens, p: int, r: int, s: int) -> list:
    """Generators of the A-ideal F^{r-1}(W(I^s)) A."""
    sub = witt_ideal_power(W, I_gens, s)
    out = []
    for w in sub.elements():
        a = frobenius_power(w, p, r - 1).coeff(1)
        if not a.is_zero():
            out.append(a)
    return out


# ------------------------------------------------------------------ Tor systems

class TorSystem:
    """{Tor_n^A(A/I^s, M_s)} with M_s = M or M/I^sM, truncated at M.bound."""

    def __init__(self, M: GradedModule, I_gens, n: int, reduce_module: bool = False):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.M = M
        self.ring = M.ring
        self.I_gens = list(I_gens)
        self.n = n
        self.reduce_module = reduce_module
        self.bound = M.bound
        self._coeff = graded_quotients(M, I_gens)
        self._tor = _Memo(self._build)
        self._gen_images = _Memo(self._lift)
        self.system = ProModule(self.level, self.transition, f"Tor_{n}")

    def _X(self, s):
        A = GradedModule.ring_module(self.ring, self.bound)
        return A.quotient_by_ideal(power_gens(self.ring, self.I_gens, s))

    def coefficient(self, s):
        return self._coeff(s) if self.reduce_module else self.M

    def _build(self, s):
        res = FreeResolution(self._X(s), self.n + 1)
        return TorComplex(res, self.coefficient(s))

    def _lift(self, s):
        src, tgt = self._tor(s + 1), self._tor(s)
        psi = {d: ModuleMap.identity(src.res.X.piece(d)).matrix for d in src.res.X.degrees()}
        return lift_resolution_map(src.res, tgt.res, psi)

    def level(self, s) -> FPModule:
        T = self._tor(s)
        return direct_sum([T.homology(self.n, d).module for d in T.degrees()])

    def transition(self, s) -> ModuleMap:
        src, tgt = self._tor(s + 1), self._tor(s)
        gen = self._gen_images(s)
        N = src.original
        coeff = {d: ModuleMap.identity(N.piece(d)).matrix for d in N.degrees()}
        blocks = [tor_map(src, tgt, self.n, d, coeff, gen) for d in src.degrees()]
        return block_diagonal(self.level(s + 1), self.level(s), blocks)


def tor_system(M: GradedModule, I_gens, n: int, reduce_module: bool = False) -> ProModule:
    return TorSystem(M, I_gens, n, reduce_module).system


def artin_rees_witness(M: GradedModule, I_gens, n: int, r: int, cap: int, reduce_module: bool = False) -> int:
    """Least s in [r, cap] with Tor_n(A/I^s, M) -> Tor_n(A/I^r, M) zero."""
    P = tor_system(M, I_gens, n, reduce_module)
    last = None
    for s in range(r, cap + 1):
        f = P.composite(s, r)
        if f.is_zero():
            return s
        last = f
    K, _ = kernel(last)
    raise CapExceeded(
        f"no vanishing transition onto level {r} up to stage {cap}; "
        f"last composite has rank data source={last.source.invariants}, kernel={K.invariants}"
    )
