"""Named pro-isomorphism and pro-vanishing checks.

Each checker builds strict pro-maps between degreewise-truncated systems
and returns a CheckResult holding the verdicts and an evidence table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..hochschild.bar import (
    Antisymmetrization,
    BarComplex,
    HochschildHomology,
    bar_chain_map,
    identity_coeff_map,
    induced_hh_map,
    quotient_ring_map,
)
from ..hochschild.complexes import induced_map
from ..hochschild.group import cyclic_group_homology, same_group
from ..hochschild.periodic import truncated_polynomial_hh_dims
from ..linalg_exact import FPModule, ModuleMap, cokernel, direct_sum, kernel
from ..ring_core import GradedMap, GradedModule, PolyQuotRing, graded_kernel
from ..ring_core.modules import lift_through
from ..witt import FiniteWittRing
from .core import (
    ProMap,
    ProMapError,
    ProModule,
    _Memo,
    homology_system,
    is_pro_iso_up_to,
    is_pro_zero_up_to,
    kernel_system,
)
from .functors import (
    WittModule,
    base_change_functor,
    block_diagonal,
    frobenius_ideal,
    graded_quotients,
    identity_on_generators,
    quotient_ring,
    tor_system,
    witt_base_change,
    witt_ideal_power,
)


class PreconditionError(ValueError):
    pass


@dataclass
class CheckResult:
    name: str
    verdicts: dict
    evidence: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return all(v.decided for v in self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "decided": self.decided,
            "verdicts": {k: v.to_json() for k, v in self.verdicts.items()},
            "evidence": self.evidence,
            "notes": self.notes,
        }


def _invariants(M: FPModule) -> dict:
    f, t = M.invariants
    return {"free_rank": f, "torsion": list(t)}


def map_evidence(f: ProMap, N: int, label: str) -> list:
    """Per-stage invariants of source, target, kernel and cokernel."""
    rows = []
    for s in range(1, N + 1):
        g = f.component(s)
        rows.append({
            "map": label,
            "s": s,
            "source": _invariants(g.source),
            "target": _invariants(g.target),
            "kernel": _invariants(kernel(g)[0]),
            "cokernel": _invariants(cokernel(g)[0]),
        })
    return rows


def system_evidence(P: ProModule, N: int, label: str) -> list:
    return [{"system": label, "s": s, "level": _invariants(P.level(s))} for s in range(1, N + 1)]


def label_map(src: GradedModule, tgt: GradedModule, d: int) -> list:
    """Send each labelled generator (j, x^e) of src to (j, x^e) reduced in tgt's ring."""
    ring = tgt.ring
    m = ring.base.modulus
    index = {lab: k for k, lab in enumerate(tgt.labels[d])}
    rows = []
    for (j, e) in src.labels[d]:
        row = [0] * len(index)
        for f, c in ring.engine.reduce({e: 1}, m).items():
            row[index[(j, f)]] += c
        rows.append([x % m for x in row] if m else row)
    return rows


def _require_graded(ring: PolyQuotRing, what: str):
    if not ring.is_graded:
        raise PreconditionError(f"{what} needs a graded presentation")


# ------------------------------------------------------------------ pro-HKR

class ProHKR:
    """{Omega^n(A/I^s)} -> {HH_n(A/I^s)} in internal degrees <= bound."""

    def __init__(self, ring: PolyQuotRing, I_gens, n: int, bound: int):
        self.ring = ring
        self.I_gens = list(I_gens)
        self.n = n
        self.bound = bound
        self.rings = _Memo(lambda s: quotient_ring(ring, I_gens, s))
        self.anti = _Memo(lambda s: Antisymmetrization(self.rings(s), n, trunc=bound, normalized=True))
        self.omega = ProModule(self._omega_level, self._omega_transition, f"Omega^{n}(A/I^s)")
        self.hh = ProModule(self._hh_level, self._hh_transition, f"HH_{n}(A/I^s)")
        self.map = ProMap(self.omega, self.hh, self._component, "antisymmetrization")

    def degrees(self):
        return range(self.bound + 1)

    def _omega_level(self, s):
        return self.anti(s).forms.module.flat()

    def _hh_level(self, s):
        H = self.anti(s).hh
        return direct_sum([H.piece(d).module for d in self.degrees()])

    def _omega_transition(self, s):
        src, tgt = self.anti(s + 1).forms.module, self.anti(s).forms.module
        blocks = [ModuleMap(src.piece(d), tgt.piece(d), label_map(src, tgt, d)) for d in self.degrees()]
        return block_diagonal(self._omega_level(s + 1), self._omega_level(s), blocks)

    def _hh_transition(self, s):
        src, tgt = self.anti(s + 1).hh, self.anti(s).hh
        phi = quotient_ring_map(self.rings(s + 1), self.rings(s))
        cs, ct = src.bar.original_coeff, tgt.bar.original_coeff
        coeff = {d: label_map(cs, ct, d) for d in self.degrees()}
        blocks = [induced_hh_map(src, tgt, phi, coeff, d) for d in self.degrees()]
        return block_diagonal(self._hh_level(s + 1), self._hh_level(s), blocks)

    def _component(self, s):
        a = self.anti(s)
        return block_diagonal(self._omega_level(s), self._hh_level(s), [a.map(d) for d in self.degrees()])

    def periodic_cross_check(self, stages) -> bool | None:
        """Compare HH levels of F_p[x]/(x^s) with the hypersurface formula (None when not applicable)."""
        ring = self.ring
        if ring.nvars != 1 or ring.ideal_gens or not ring.base.is_field:
            return None
        gens = [ring.normal_form(g) for g in self.I_gens]
        if [g.poly for g in gens] != [{(1,): 1}]:
            return None
        for s in stages:
            H = self.anti(s).hh
            expect = truncated_polynomial_hh_dims(ring.base.modulus, s, self.n, self.bound)
            if any(H.piece(d).module.dimension() != expect[d] for d in self.degrees()):
                return False
        return True


def pro_hkr_check(ring: PolyQuotRing, I_gens, n: int, N: int, bound: int,
                  claims_regular: bool = True, cap: int | None = None, jobs: int = 1) -> CheckResult:
    if not claims_regular:
        raise PreconditionError("pro-HKR needs an instance flagged claims_regular")
    if ring.base.modulus != 0 and not ring.base.is_field:
        raise PreconditionError("pro-HKR instances are over a field or Z")
    _require_graded(ring, "pro-HKR")
    H = ProHKR(ring, I_gens, n, bound)
    for s in range(1, N + 1):
        if not H.rings(s).is_finite_rank:
            raise PreconditionError(f"A/I^{s} is not finite over the base")
    v = is_pro_iso_up_to(H.map, N, cap, jobs)
    oracle = H.periodic_cross_check(range(1, N + 1))
    if oracle is False:
        raise ProMapError("HH levels disagree with the periodic resolution")
    evidence = map_evidence(H.map, N, "antisymmetrization") + system_evidence(H.hh, N, f"HH_{n}")
    notes = {"internal_bound": bound, "degree": n, "periodic_oracle": "agrees" if oracle else "not applicable"}
    return CheckResult("pro_hkr", {"antisymmetrization": v}, evidence, notes)


# ------------------------------------------------------------------ continuity

def hh_as_graded_module(H: HochschildHomology) -> GradedModule:
    """HH_n(A, M) as a graded A-module, with A acting through the coefficients."""
    bar = H.bar
    _require_graded(bar.ring, "the coefficient action on HH")
    C = bar.coeff
    q = H.n
    m = H.modulus or bar.base
    pieces = {d: H.piece(d).module for d in bar.degrees()}
    action = {}
    for i in range(bar.ring.nvars):
        for d in bar.degrees():
            if d + 1 > bar.bound:
                action[(i, d)] = [[] for _ in range(pieces[d].gens)]
                continue
            index = bar._index(q, d + 1)
            rows = []
            for (d0, j, w) in bar.basis(q, d):
                row = [0] * len(index)
                for k, c in enumerate(C.action[(i, d0)][j]):
                    if c:
                        row[index[(d0 + 1, k, w)]] += c
                rows.append([x % m for x in row] if m else row)
            action[(i, d)] = induced_map(rows, H.piece(d), H.piece(d + 1)).matrix
    return GradedModule(bar.ring, bar.bound, pieces, action)


class Continuity:
    """(i) {HH_n(A, M_s)} -> {HH_n(A/I^s, M_s)} and (ii) {HH_n(A, M)/I^s} -> {HH_n(A, M_s)}, M_s = M/I^sM."""

    def __init__(self, ring: PolyQuotRing, I_gens, M: GradedModule, n: int, bound: int, modulus: int | None = None):
        if modulus and ring.base.modulus != 0:
            raise PreconditionError("finite coefficients need an algebra over Z")
        _require_graded(ring, "the continuity check")
        self.ring = ring
        self.I_gens = list(I_gens)
        self.n = n
        self.bound = bound
        self.modulus = modulus
        self.M = M
        self.Ms = graded_quotients(M, I_gens)
        self.rings = _Memo(lambda s: quotient_ring(ring, I_gens, s))
        self.src_hh = _Memo(lambda s: self._hh(ring, self.Ms(s)))
        self.tgt_hh = _Memo(lambda s: self._hh(self.rings(s), self._over(self.rings(s), self.Ms(s))))
        self.src = ProModule(lambda s: self._level(self.src_hh(s)), self._src_transition, "HH_n(A, M/I^sM)")
        self.tgt = ProModule(lambda s: self._level(self.tgt_hh(s)), self._tgt_transition, "HH_n(A/I^s, M/I^sM)")
        self.restriction = ProMap(self.src, self.tgt, self._restriction, "restriction")

    def degrees(self):
        return range(self.bound + 1)

    def _hh(self, ring, coeff):
        bar = BarComplex(ring, coeff, self.n + 1, self.bound, normalized=True)
        return HochschildHomology(bar, self.n, self.modulus)

    @staticmethod
    def _over(ring, M: GradedModule) -> GradedModule:
        return GradedModule(ring, M.bound, M.pieces, M.action, M.labels)

    def _level(self, H):
        return direct_sum([H.piece(d).module for d in self.degrees()])

    def _hh_map(self, src, tgt, phi):
        coeff = identity_coeff_map(src.bar.original_coeff)
        blocks = [induced_hh_map(src, tgt, phi, coeff, d) for d in self.degrees()]
        return block_diagonal(self._level(src), self._level(tgt), blocks)

    def _src_transition(self, s):
        return self._hh_map(self.src_hh(s + 1), self.src_hh(s), quotient_ring_map(self.ring, self.ring))

    def _tgt_transition(self, s):
        return self._hh_map(self.tgt_hh(s + 1), self.tgt_hh(s), quotient_ring_map(self.rings(s + 1), self.rings(s)))

    def _restriction(self, s):
        return self._hh_map(self.src_hh(s), self.tgt_hh(s), quotient_ring_map(self.ring, self.rings(s)))

    def completion(self) -> ProMap:
        full = self._hh(self.ring, self.M)
        H = hh_as_graded_module(full)
        if not H.check_action():
            raise ProMapError("HH_n(A, M) is not a module under the coefficient action")
        quot = graded_quotients(H, self.I_gens)
        left = ProModule.quotients(lambda s: quot(s).flat(), "HH_n(A, M)/I^s")
        phi = quotient_ring_map(self.ring, self.ring)
        coeff = identity_coeff_map(full.bar.original_coeff)

        def component(s):
            tgt = self.src_hh(s)
            blocks = []
            for d in self.degrees():
                f = bar_chain_map(full.bar, tgt.bar, phi, coeff, self.n, d)
                if self.modulus:
                    f = [[x % self.modulus for x in r] for r in f]
                g = induced_map(f, full.piece(d), tgt.piece(d))
                blocks.append(ModuleMap(quot(s).piece(d), g.target, g.matrix))
            return block_diagonal(left.level(s), self._level(tgt), blocks)

        return ProMap(left, self.src, component, "completion")


def continuity_restriction_check(ring: PolyQuotRing, I_gens, M: GradedModule | None, n: int, N: int,
                                 bound: int, modulus: int | None = None, aq_finite: bool = False,
                                 cap: int | None = None, jobs: int = 1) -> CheckResult:
    if M is None:
        M = GradedModule.ring_module(ring, bound)
    C = Continuity(ring, I_gens, M, n, bound, modulus)
    verdicts = {"restriction": is_pro_iso_up_to(C.restriction, N, cap, jobs)}
    evidence = map_evidence(C.restriction, N, "restriction")
    if aq_finite:
        comp = C.completion()
        total = C.restriction.compose(comp)
        total.name = "composite"
        verdicts["completion"] = is_pro_iso_up_to(comp, N, cap, jobs)
        verdicts["composite"] = is_pro_iso_up_to(total, N, cap, jobs)
        evidence += map_evidence(comp, N, "completion") + map_evidence(total, N, "composite")
    notes = {"internal_bound": bound, "degree": n}
    if modulus:
        notes["coefficients"] = f"Z/{modulus}"
    return CheckResult("continuity", verdicts, evidence, notes)


# ------------------------------------------------------------------ torsion and group homology

class TorsionMaps:
    """{M[m]/I^s} -> {(M/I^sM)[m]} and {(M/mM)/I^s} -> {M/(mM + I^sM)}."""

    def __init__(self, M: GradedModule, I_gens, m: int):
        if m == 0:
            raise PreconditionError("m must be nonzero")
        self.M = M
        self.m = m
        self.Ms = graded_quotients(M, I_gens)
        self.K, self.inc = M.torsion(m)
        Kq = graded_quotients(self.K, I_gens)
        Qq = graded_quotients(M.mod(m)[0], I_gens)
        self.Kq = Kq
        self.right_tors = _Memo(lambda s: self.Ms(s).torsion(m))
        self.right_quot = _Memo(lambda s: self.Ms(s).mod(m)[0])
        self.tors_left = ProModule.quotients(lambda s: Kq(s).flat(), "M[m]/I^s")
        self.tors_right = ProModule(lambda s: self.right_tors(s)[0].flat(), self._tors_transition, "(M/I^sM)[m]")
        self.quot_left = ProModule.quotients(lambda s: Qq(s).flat(), "(M/mM)/I^s")
        self.quot_right = ProModule.quotients(lambda s: self.right_quot(s).flat(), "M/(mM+I^sM)")
        self.torsion_map = ProMap(self.tors_left, self.tors_right, self._tors_component, "torsion")
        self.quotient_map = ProMap(
            self.quot_left, self.quot_right,
            lambda s: identity_on_generators(self.quot_left.level(s), self.quot_right.level(s)), "quotient")

    def _tors_transition(self, s):
        K1, inc1 = self.right_tors(s + 1)
        _, inc0 = self.right_tors(s)
        into = GradedMap(K1, self.Ms(s), dict(inc1.blocks), check=False)
        return lift_through(inc0, into).flat()

    def _tors_component(self, s):
        _, inc0 = self.right_tors(s)
        into = GradedMap(self.Kq(s), self.Ms(s), dict(self.inc.blocks), check=False)
        return lift_through(inc0, into).flat()

    def group_homology_cross_check(self, n: int, stages) -> bool:
        """Right-hand levels agree degreewise with H_n(C_m, M/I^sM)."""
        for s in stages:
            Ms = self.Ms(s)
            if n == 0:
                mine = Ms
            elif n % 2:
                mine = self.right_quot(s)
            else:
                mine = self.right_tors(s)[0]
            for d in Ms.degrees():
                if not same_group(cyclic_group_homology(Ms.piece(d), self.m, n), mine.piece(d)):
                    return False
        return True


def torsion_pro_check(M: GradedModule, I_gens, m: int, N: int, cap: int | None = None, jobs: int = 1) -> CheckResult:
    T = TorsionMaps(M, I_gens, m)
    verdicts = {
        "torsion": is_pro_iso_up_to(T.torsion_map, N, cap, jobs),
        "quotient": is_pro_iso_up_to(T.quotient_map, N, cap, jobs),
    }
    evidence = map_evidence(T.torsion_map, N, "torsion") + map_evidence(T.quotient_map, N, "quotient")
    return CheckResult("torsion", verdicts, evidence, {"m": m})


def group_homology_pro_check(M: GradedModule, I_gens, m: int, n: int, N: int,
                             cap: int | None = None, jobs: int = 1) -> CheckResult:
    """{H_n(C_m, M) tensor A/I^s} -> {H_n(C_m, M/I^sM)} for the trivial action."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    T = TorsionMaps(M, I_gens, m)
    if n == 0:
        f = ProMap.identity(base_change_functor(M, I_gens))
    elif n % 2:
        f = T.quotient_map
    else:
        f = T.torsion_map
    if not T.group_homology_cross_check(n, range(1, N + 1)):
        raise ProMapError("levels disagree with the cyclic group homology formula")
    v = is_pro_iso_up_to(f, N, cap, jobs)
    return CheckResult("group_homology", {f"H_{n}": v}, map_evidence(f, N, f"H_{n}"), {"m": m, "degree": n})


# ------------------------------------------------------------------ Tor systems

def artin_rees_check(M: GradedModule, I_gens, degrees, N: int, reduce_module: bool = False,
                     cap: int | None = None, jobs: int = 1) -> CheckResult:
    verdicts, evidence = {}, []
    for n in degrees:
        P = tor_system(M, I_gens, n, reduce_module)
        key = f"Tor_{n}"
        verdicts[key] = is_pro_zero_up_to(P, N, cap, jobs)
        evidence += system_evidence(P, N, key)
    return CheckResult("tor", verdicts, evidence, {"coefficients": "M/I^sM" if reduce_module else "M"})


# ------------------------------------------------------------------ Witt systems

def as_integer_group(M: FPModule) -> FPModule:
    """A Z/m-module viewed as an abelian group."""
    if M.base == 0:
        return M
    rels = [list(r) for r in M.rels] + [[M.base if i == j else 0 for j in range(M.gens)] for i in range(M.gens)]
    return FPModule(0, M.gens, tuple(tuple(r) for r in rels))


def witt_power_check(W: FiniteWittRing, I_gens, N: int, cap: int | None = None) -> CheckResult:
    """{W/W(I)^s} -> {W/W(I^s)}, identity on elements."""
    WI = W.witt_ideal(I_gens)
    rels = [list(r) for r in W.relations()]

    def quotient(rows):
        return FPModule(0, W.ngens, tuple(tuple(r) for r in rels + [list(x) for x in rows]))

    L = ProModule.quotients(lambda s: quotient(WI.power(s).rows), "W/W(I)^s")
    R = ProModule.quotients(lambda s: quotient(witt_ideal_power(W, I_gens, s).rows), "W/W(I^s)")
    f = ProMap(L, R, lambda s: identity_on_generators(L.level(s), R.level(s)), "identity")
    v = is_pro_iso_up_to(f, N, cap)
    return CheckResult("witt_powers", {"identity": v}, map_evidence(f, N, "identity"))


def frobenius_completion_check(W: FiniteWittRing, I_gens, p: int, r: int, N: int,
                               cap: int | None = None) -> CheckResult:
    """{A/F^{r-1}(W_r(I^s))A} -> {A/I^s}, and Phi_r(A) with A a module via F^{r-1} against {A/I^s}."""
    ring = W.ring
    _require_graded(ring, "the Frobenius completion check")
    A = GradedModule.ring_module(ring, ring.top_degree)
    right_mod = graded_quotients(A, I_gens)
    right = ProModule.quotients(lambda s: as_integer_group(right_mod(s).flat()), "A/I^s")
    jmod = _Memo(lambda s: A.quotient_by_ideal(frobenius_ideal(W, I_gens, p, r, s)))
    left = ProModule.quotients(lambda s: as_integer_group(jmod(s).flat()), "A/J_s")
    f = ProMap(left, right, lambda s: identity_on_generators(left.level(s), right.level(s)), "identity")

    # WittModule.via_frobenius orders generators by the module basis
    flat_index = {}
    for d in A.degrees():
        for (_, e) in A.labels[d]:
            flat_index[e] = len(flat_index)
    perm = [[1 if flat_index[e] == k else 0 for k in range(len(flat_index))] for e in ring.module_basis()]
    phi = witt_base_change(WittModule.via_frobenius(W, p, r), I_gens, "Phi_r(A)")
    g = ProMap(phi, right, lambda s: ModuleMap(phi.level(s), right.level(s), perm), "Phi_r")
    for s in range(1, N + 1):
        if not same_group(phi.level(s), left.level(s)):
            raise ProMapError(f"Phi_r(A) and A/J_s differ at stage {s}")
    verdicts = {"frobenius_ideal": is_pro_iso_up_to(f, N, cap), "phi": is_pro_iso_up_to(g, N, cap)}
    evidence = map_evidence(f, N, "frobenius_ideal") + map_evidence(g, N, "phi")
    return CheckResult("frobenius_completion", verdicts, evidence, {"p": p, "r": r})


# ------------------------------------------------------------------ exactness

def _random_scalar(ring: PolyQuotRing, rng: random.Random) -> int:
    m = ring.base.modulus
    return rng.randrange(m) if m else rng.randrange(-2, 3)


def random_graded_ses(ring: PolyQuotRing, bound: int, rng: random.Random, a: int = 2, b: int = 3, max_deg: int = 2):
    """(K, inc, F, Q) with F free, K the kernel of a random homogeneous F -> A^a and Q = F/K."""
    _require_graded(ring, "random graded sequences")
    degs = [rng.randrange(max_deg + 1) for _ in range(b)]
    F = GradedModule.free(ring, degs, bound)
    T = GradedModule.free(ring, [0] * a, bound)
    images = []
    for j in range(b):
        row = []
        for _ in range(a):
            poly = {e: _random_scalar(ring, rng) for e in ring.basis_in_degree(degs[j]) if rng.random() < 0.6}
            row.append(ring.normal_form(poly))
        images.append(row)
    blocks = {}
    for d in F.degrees():
        rows = []
        for (j, e) in F.labels[d]:
            x = ring.normal_form({e: 1})
            vec = T.element_vector([x * y for y in images[j]])
            rows.append(vec.get(d, [0] * T.piece(d).gens))
        blocks[d] = rows
    K, inc = graded_kernel(GradedMap(F, T, blocks))
    Q = F.quotient_by_elements({d: inc.blocks[d] for d in F.degrees()})
    return K, inc, F, Q


def base_change_exactness_check(K, inc, F, Q, I_gens, N: int, cap: int | None = None) -> CheckResult:
    """K/I^sK -> F/I^sF -> Q/I^sQ: pro-zero kernel on the left and homology in the middle."""
    Kq, Fq, Qq = (graded_quotients(X, I_gens) for X in (K, F, Q))
    KP = ProModule.quotients(lambda s: Kq(s).flat(), "K/I^sK")
    FP = ProModule.quotients(lambda s: Fq(s).flat(), "F/I^sF")
    QP = ProModule.quotients(lambda s: Qq(s).flat(), "Q/I^sQ")

    def incl(s):
        return GradedMap(Kq(s), Fq(s), dict(inc.blocks), check=False).flat()

    f = ProMap(KP, FP, incl, "inclusion")
    g = ProMap(FP, QP, lambda s: identity_on_generators(FP.level(s), QP.level(s)), "projection")
    verdicts = {
        "left": is_pro_zero_up_to(kernel_system(f), N, cap),
        "middle": is_pro_zero_up_to(homology_system(f, g), N, cap),
    }
    return CheckResult("exactness", verdicts)


def random_witt_ses(W: FiniteWittRing, rng: random.Random, a: int = 1, b: int = 2):
    """(K, inc, F, Q) with F = W^b, K the kernel of a random W-linear F -> W^a and Q = F/K."""
    F = WittModule.free(W, b)
    T = WittModule.free(W, a)
    elements = list(W.elements())
    mat = [[rng.choice(elements) for _ in range(a)] for _ in range(b)]
    rows = []
    for i in range(b):
        for g in W.gens:
            row = []
            for j in range(a):
                row.extend(W.coords(g * mat[i][j]))
            rows.append(row)
    _, inc = kernel(ModuleMap(F.group, T.group, rows))
    return F.submodule(inc), inc, F, F.quotient(inc.matrix)


def witt_exactness_check(K: WittModule, inc: ModuleMap, F: WittModule, Q: WittModule, I_gens, N: int,
                         cap: int | None = None) -> CheckResult:
    KP = witt_base_change(K, I_gens, "K")
    FP = witt_base_change(F, I_gens, "F")
    QP = witt_base_change(Q, I_gens, "Q")
    f = ProMap(KP, FP, lambda s: ModuleMap(KP.level(s), FP.level(s), inc.matrix), "inclusion")
    g = ProMap(FP, QP, lambda s: identity_on_generators(FP.level(s), QP.level(s)), "projection")
    verdicts = {
        "left": is_pro_zero_up_to(kernel_system(f), N, cap),
        "middle": is_pro_zero_up_to(homology_system(f, g), N, cap),
    }
    return CheckResult("witt_exactness", verdicts)
