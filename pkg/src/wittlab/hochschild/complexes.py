"""Chain complexes of finitely presented modules and their homology.

Differentials follow the row-vector convention of ``linalg_exact``: the
matrix of d_n has one row per generator of C_n and one column per
generator of C_{n-1}.
"""

from __future__ import annotations

import numpy as np

from ..linalg_exact import FPModule, ModuleMap, direct_sum, is_prime, kernel, span_solver, torsion_and_quotient
from ..linalg_exact.lattice import _rref_modp, nullspace_modp, to_array


class ComplexError(ValueError):
    pass


class NotACycleError(ArithmeticError):
    pass


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


class ChainComplex:
    """C_0 <- C_1 <- ... <- C_top with d_n : C_n -> C_{n-1} for n >= 1."""

    def __init__(self, modules, differentials, check: bool = True):
        self.modules = list(modules)
        if not self.modules:
            raise ComplexError("a chain complex needs at least C_0")
        base = self.modules[0].base
        if any(m.base != base for m in self.modules):
            raise ComplexError("all modules must share the base ring")
        self.base = base
        mats = [None]
        for n, d in enumerate(differentials, start=1):
            mat = d.matrix if isinstance(d, ModuleMap) else d
            mat = [list(map(int, r)) for r in mat]
            if len(mat) != self.modules[n].gens or any(len(r) != self.modules[n - 1].gens for r in mat):
                raise ComplexError(f"d_{n} has the wrong shape")
            if base:
                mat = [[x % base for x in r] for r in mat]
            mats.append(mat)
        if len(mats) != len(self.modules):
            raise ComplexError("one differential per positive degree is required")
        self.matrices = mats
        self._homology: dict = {}
        if check:
            self.check()

    @property
    def top(self) -> int:
        return len(self.modules) - 1

    def differential(self, n: int) -> ModuleMap:
        if n < 1 or n > self.top:
            raise ComplexError(f"no differential d_{n}")
        return ModuleMap(self.modules[n], self.modules[n - 1], self.matrices[n], check=False)

    def check(self):
        """d_n is well defined and d_{n-1} d_n = 0."""
        for n in range(1, self.top + 1):
            if self.modules[n].rels and not self.differential(n).is_well_defined():
                raise ComplexError(f"d_{n} does not respect relations")
            if n >= 2:
                comp = _matmul(self.matrices[n], self.matrices[n - 1], self.modules[n - 2].gens, self.base)
                target = self.modules[n - 2]
                if any(any(r) for r in comp) and not all(target.solver.contains(r) for r in comp):
                    raise ComplexError(f"d_{n - 1} d_{n} is not zero")

    def is_free(self) -> bool:
        return all(not m.rels for m in self.modules)

    def homology(self, n: int) -> "Homology":
        """H_n; the top degree is only valid as cycles (no incoming boundaries)."""
        if n < 0 or n > self.top:
            raise ComplexError(f"degree {n} outside 0..{self.top}")
        if n not in self._homology:
            if is_prime(self.base) and self.modules[n].rels == () and self._free_around(n):
                self._homology[n] = _field_homology(self, n)
            else:
                self._homology[n] = _generic_homology(self, n)
        return self._homology[n]

    def _free_around(self, n: int) -> bool:
        return all(not self.modules[k].rels for k in range(max(0, n - 1), min(self.top, n + 1) + 1))

    def reduce_mod(self, q: int) -> "ChainComplex":
        return finite_coefficients(self, q)


class Homology:
    """H_n with chosen cycle representatives and a classifier for cycles."""

    def __init__(self, module: FPModule, reps, classify):
        self.module = module
        self.reps = reps
        self._classify = classify

    def classify(self, z) -> list[int]:
        return self._classify(z)

    @property
    def invariants(self):
        return self.module.invariants

    def is_zero(self) -> bool:
        return self.module.is_zero()


def _field_homology(C: ChainComplex, n: int) -> Homology:
    p = C.base
    a = C.modules[n].gens
    if a == 0:
        return Homology(FPModule.zero(p), [], lambda z: [])
    if n >= 1 and C.modules[n - 1].gens:
        D = to_array(C.matrices[n], p, C.modules[n - 1].gens)
        Z = nullspace_modp(D.T.copy(), p)
    else:
        Z = np.eye(a, dtype=np.int64)
    if n + 1 <= C.top and C.modules[n + 1].gens:
        B, bpiv = _rref_modp(to_array(C.matrices[n + 1], p, a), p, a)
        B = B[: len(bpiv)]
    else:
        B, bpiv = np.zeros((0, a), dtype=np.int64), []

    def reduce(v):
        if not bpiv:
            return v % p
        return (v - (v[..., bpiv] @ B) % p) % p

    R = reduce(Z) if Z.size else Z
    if R.size:
        H, hpiv = _rref_modp(R.copy(), p, a)
        H = H[: len(hpiv)]
    else:
        H, hpiv = np.zeros((0, a), dtype=np.int64), []
    reps = [list(map(int, r)) for r in H]

    def classify(z):
        v = reduce(np.array([int(x) % p for x in z], dtype=np.int64))
        if not hpiv:
            if v.any():
                raise NotACycleError("vector is not a cycle")
            return []
        y = v[hpiv]
        if ((v - y @ H) % p).any():
            raise NotACycleError("vector is not a cycle")
        return [int(c) for c in y]

    return Homology(FPModule.free(p, len(hpiv)), reps, classify)


def _generic_homology(C: ChainComplex, n: int) -> Homology:
    base = C.base
    Cn = C.modules[n]
    if n >= 1:
        K, inc = kernel(C.differential(n))
    else:
        K, inc = Cn, ModuleMap.identity(Cn)
    solver = span_solver(inc.matrix + Cn.full_relations(), Cn.gens, base)
    k = K.gens

    def lift(v):
        x = solver.solve(list(v))
        if x is None:
            raise NotACycleError("vector is not a cycle")
        return [int(c) for c in x[:k]]

    rels = [list(r) for r in K.rels]
    if n + 1 <= C.top:
        rels += [lift(row) for row in C.matrices[n + 1]]
    H = FPModule(base, k, tuple(tuple(r) for r in rels))
    return Homology(H, [list(r) for r in inc.matrix], lift)


def induced_map(f_n, H_src: Homology, H_tgt: Homology) -> ModuleMap:
    """Map on homology from a chain map component given as a matrix C_n -> C'_n."""
    rows = []
    width = len(f_n[0]) if f_n else 0
    for rep in H_src.reps:
        img = [0] * width
        for c, row in zip(rep, f_n):
            if c:
                for j, x in enumerate(row):
                    if x:
                        img[j] += c * x
        rows.append(H_tgt.classify(img))
    return ModuleMap(H_src.module, H_tgt.module, rows)


def check_chain_map(C: ChainComplex, D: ChainComplex, maps: dict) -> bool:
    """f_{n-1} d_n = d'_n f_n wherever both components are given."""
    base = D.base
    for n in range(1, min(C.top, D.top) + 1):
        if n not in maps or n - 1 not in maps:
            continue
        width = D.modules[n - 1].gens
        left = _matmul(C.matrices[n], maps[n - 1], width, base)
        right = _matmul(maps[n], D.matrices[n], width, base)
        target = D.modules[n - 1]
        for a, b in zip(left, right):
            diff = [x - y for x, y in zip(a, b)]
            if any(diff) and not target.solver.contains(diff):
                return False
    return True


# ------------------------------------------------------------ finite coefficients

def finite_coefficients(C: ChainComplex, q: int) -> ChainComplex:
    """C tensor Z/q for a complex of free Z-modules."""
    if C.base != 0:
        raise ComplexError("finite coefficients need a complex over Z")
    if q < 2:
        raise ComplexError("the coefficient modulus must be at least 2")
    for n, m in enumerate(C.modules):
        if m.rels:
            raise ComplexError(f"C_{n} is not free over Z")
    mods = [FPModule.free(q, m.gens) for m in C.modules]
    return ChainComplex(mods, [[[x % q for x in r] for r in C.matrices[n]] for n in range(1, C.top + 1)])


def _as_base(M: FPModule, q: int) -> FPModule:
    """A Z-module killed by q, viewed over Z/q."""
    return FPModule(q, M.gens, M.rels)


def universal_coefficient_check(C: ChainComplex, q: int, n: int, Cq: ChainComplex | None = None) -> bool:
    """H_n(C; Z/q) is isomorphic to H_n(C)/q + H_{n-1}(C)[q].

    The universal coefficient sequence splits, so comparing invariants of
    the middle term with the direct sum of the outer terms is exact.
    """
    Cq = Cq or finite_coefficients(C, q)
    mid = Cq.homology(n).module
    _, quo = torsion_and_quotient(C.homology(n).module, q)
    parts = [_as_base(quo, q)]
    if n >= 1:
        tors, _ = torsion_and_quotient(C.homology(n - 1).module, q)
        parts.append(_as_base(tors, q))
    return mid.invariants == direct_sum(parts).invariants


def homology_json(M: FPModule) -> dict:
    f, t = M.invariants
    return {"free_rank": f, "torsion": list(t)}
