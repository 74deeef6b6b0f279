"""N-indexed inverse systems of finitely presented modules and strict maps.

Levels are indexed by s >= 1; ``transition(s)`` goes from level s+1 to
level s.  A system is pro-zero when every level r is killed by some
composite transition level(s) -> level(r); the search is bounded by a
stage bound N (the r to decide) and a cap on s (default 2N).
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..linalg_exact import FPModule, ModuleMap, cokernel, kernel, span_solver


class ProMapError(ValueError):
    pass


class _Memo:
    """Once-per-key evaluation that is safe under concurrent access."""

    def __init__(self, fn):
        self._fn = fn
        self._values: dict = {}
        self._locks: dict = {}
        self._guard = threading.Lock()

    def __call__(self, key):
        if key in self._values:
            return self._values[key]
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._values:
                self._values[key] = self._fn(key)
        return self._values[key]

    def materialized(self):
        return sorted(self._values)


def _lift(inc: ModuleMap, v, solver=None):
    s = solver or span_solver(inc.matrix + inc.target.full_relations(), inc.target.gens, inc.base)
    x = s.solve(list(v))
    if x is None:
        raise ProMapError("vector does not lie in the submodule")
    return [int(c) for c in x[: inc.source.gens]]


class ProModule:
    """{level(s)}_{s >= 1} with transitions level(s+1) -> level(s).

    ``direct`` optionally gives composite maps level(s) -> level(r) computed
    another way; ``check_coherence`` compares the two when both exist.
    """

    def __init__(self, level, transition, name: str = "", direct=None):
        self.name = name
        self._level = _Memo(lambda s: level(s))
        self._transition = _Memo(lambda s: transition(s))
        self._composite: dict = {}
        self._guard = threading.Lock()
        self._direct = direct

    def level(self, s: int) -> FPModule:
        if s < 1:
            raise ValueError("levels are indexed by s >= 1")
        return self._level(s)

    def transition(self, s: int) -> ModuleMap:
        if s < 1:
            raise ValueError("transitions are indexed by s >= 1")
        return self._transition(s)

    def composite(self, s: int, r: int) -> ModuleMap:
        """The map level(s) -> level(r) for s >= r."""
        if s < r:
            raise ValueError("composite needs s >= r")
        key = (s, r)
        if key in self._composite:
            return self._composite[key]
        if s == r:
            out = ModuleMap.identity(self.level(r))
        else:
            out = self.composite(s - 1, r).compose(self.transition(s - 1))
        with self._guard:
            self._composite[key] = out
        return out

    def check_coherence(self, s: int) -> bool:
        """transition(s) after transition(s+1) against the direct two-step map."""
        two = self.transition(s).compose(self.transition(s + 1))
        if self._direct is None:
            return True
        return two.equals(self._direct(s + 2, s))

    def materialized_stages(self) -> list[int]:
        return self._level.materialized()

    def stage_table(self, N: int) -> list[dict]:
        out = []
        for s in range(1, N + 1):
            f, t = self.level(s).invariants
            out.append({"s": s, "free_rank": f, "torsion": list(t)})
        return out

    # -- constructors
    @classmethod
    def constant(cls, M: FPModule, name: str = "constant") -> "ProModule":
        return cls(lambda s: M, lambda s: ModuleMap.identity(M), name)

    @classmethod
    def with_zero_transitions(cls, M: FPModule, name: str = "zero transitions") -> "ProModule":
        return cls(lambda s: M, lambda s: ModuleMap.zero(M, M), name)

    @classmethod
    def quotients(cls, level, name: str = "") -> "ProModule":
        """Levels that are successive quotients on the same generators."""
        memo = _Memo(level)

        def trans(s):
            src = memo(s + 1)
            return ModuleMap(src, memo(s), ModuleMap.identity(src).matrix)

        return cls(memo, trans, name)


def reindex(P: ProModule, phi, name: str = "") -> ProModule:
    """s -> P(phi(s)) for a strictly increasing phi."""
    def trans(s):
        a, b = phi(s), phi(s + 1)
        if b <= a:
            raise ValueError("reindexing needs a strictly increasing function")
        return P.composite(b, a)

    return ProModule(lambda s: P.level(phi(s)), trans, name or f"{P.name} reindexed")


class ProMap:
    """Level-preserving map with components f_s : source(s) -> target(s)."""

    def __init__(self, source: ProModule, target: ProModule, component, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self._component = _Memo(lambda s: component(s))

    def component(self, s: int) -> ModuleMap:
        return self._component(s)

    def commutes_at(self, s: int) -> bool:
        """f_s after the source transition equals the target transition after f_{s+1}."""
        a = self.component(s).compose(self.source.transition(s))
        b = self.target.transition(s).compose(self.component(s + 1))
        return a.equals(b)

    def check_commutes(self, stages) -> None:
        for s in stages:
            if not self.commutes_at(s):
                raise ProMapError(f"components do not commute with transitions at stage {s}")

    @classmethod
    def identity(cls, P: ProModule) -> "ProMap":
        return cls(P, P, lambda s: ModuleMap.identity(P.level(s)), "identity")

    def compose(self, other: "ProMap") -> "ProMap":
        """self after other."""
        return ProMap(other.source, self.target, lambda s: self.component(s).compose(other.component(s)))


def kernel_system(f: ProMap) -> ProModule:
    data = _Memo(lambda s: kernel(f.component(s)))

    def trans(s):
        K1, inc1 = data(s + 1)
        K0, inc0 = data(s)
        if not K1.gens:
            return ModuleMap.zero(K1, K0)
        img = f.source.transition(s).compose(inc1).matrix
        solver = span_solver(inc0.matrix + inc0.target.full_relations(), inc0.target.gens, inc0.base)
        return ModuleMap(K1, K0, [_lift(inc0, v, solver) for v in img])

    return ProModule(lambda s: data(s)[0], trans, f"ker({f.name})")


def cokernel_system(f: ProMap) -> ProModule:
    data = _Memo(lambda s: cokernel(f.component(s)))

    def trans(s):
        C1, _ = data(s + 1)
        C0, pr0 = data(s)
        return ModuleMap(C1, C0, pr0.compose(f.target.transition(s)).matrix)

    return ProModule(lambda s: data(s)[0], trans, f"coker({f.name})")


def homology_system(f: ProMap, g: ProMap) -> ProModule:
    """Levelwise ker(g_s) / im(f_s) for composable maps with g f = 0."""
    def build(s):
        fs, gs = f.component(s), g.component(s)
        if not gs.compose(fs).is_zero():
            raise ProMapError(f"composite is not zero at stage {s}")
        K, inc = kernel(gs)
        solver = span_solver(inc.matrix + inc.target.full_relations(), inc.target.gens, inc.base)
        rows = [_lift(inc, v, solver) for v in fs.matrix]
        H = FPModule(K.base, K.gens, tuple(K.rels) + tuple(tuple(r) for r in rows))
        return H, inc, solver

    data = _Memo(build)

    def trans(s):
        H1, inc1, _ = data(s + 1)
        H0, inc0, solver0 = data(s)
        if not H1.gens:
            return ModuleMap.zero(H1, H0)
        img = f.target.transition(s).compose(inc1).matrix
        return ModuleMap(H1, H0, [_lift(inc0, v, solver0) for v in img])

    return ProModule(lambda s: data(s)[0], trans, f"H({f.name}, {g.name})")


# ------------------------------------------------------------------ verdicts

@dataclass
class ProZero:
    witness: dict
    stage_bound: int
    cap: int
    kind: str = field(default="ProZero", init=False)
    decided = True

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "stage_bound": self.stage_bound,
            "cap": self.cap,
            "witness": [[r, s] for r, s in sorted(self.witness.items())],
        }


@dataclass
class ProIso:
    kernel: ProZero
    cokernel: ProZero
    stage_bound: int
    kind: str = field(default="ProIso", init=False)
    decided = True

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "stage_bound": self.stage_bound,
            "kernel": self.kernel.to_json(),
            "cokernel": self.cokernel.to_json(),
        }


@dataclass
class NotDecidedBy:
    stage_bound: int
    cap: int
    undecided: list
    part: str = ""
    kind: str = field(default="NotDecidedBy", init=False)
    decided = False

    def to_json(self) -> dict:
        out = {
            "verdict": self.kind,
            "stage_bound": self.stage_bound,
            "cap": self.cap,
            "undecided_levels": list(self.undecided),
        }
        if self.part:
            out["part"] = self.part
        return out


def _default_cap(N: int, cap: int | None) -> int:
    return max(N, cap if cap is not None else 2 * N)


def _first_zero(P: ProModule, r: int, cap: int):
    for s in range(r, cap + 1):
        if P.composite(s, r).is_zero():
            return s
    return None


def verify_witness(P: ProModule, r: int, s: int) -> bool:
    """Recompose transitions from scratch and test the zero map."""
    mat = ModuleMap.identity(P.level(s))
    for t in range(s - 1, r - 1, -1):
        mat = P.transition(t).compose(mat)
    return mat.is_zero()


def is_pro_zero_up_to(P: ProModule, N: int, cap: int | None = None, jobs: int = 1):
    """ProZero with a witness r -> s for r = 1..N, or NotDecidedBy(N)."""
    if N < 1:
        raise ValueError("the stage bound must be at least 1")
    cap = _default_cap(N, cap)
    rs = list(range(1, N + 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            found = list(ex.map(lambda r: _first_zero(P, r, cap), rs))
    else:
        found = [_first_zero(P, r, cap) for r in rs]
    missing = [r for r, s in zip(rs, found) if s is None]
    if missing:
        return NotDecidedBy(N, cap, missing)
    witness = dict(zip(rs, found))
    for r, s in witness.items():
        if not verify_witness(P, r, s):
            raise ProMapError(f"witness {r} -> {s} failed re-verification")
    return ProZero(witness, N, cap)


def is_pro_iso_up_to(f: ProMap, N: int, cap: int | None = None, jobs: int = 1):
    """ProIso when the kernel and cokernel systems are both pro-zero."""
    if N < 1:
        raise ValueError("the stage bound must be at least 1")
    cap = _default_cap(N, cap)
    f.check_commutes(range(1, cap))
    k = is_pro_zero_up_to(kernel_system(f), N, cap, jobs)
    c = is_pro_zero_up_to(cokernel_system(f), N, cap, jobs)
    if not k.decided:
        k.part = "kernel"
        return k
    if not c.decided:
        c.part = "cokernel"
        return c
    return ProIso(k, c, N)
