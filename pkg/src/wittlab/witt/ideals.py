"""Witt ideals W_S(I) and constructive containment bounds between them.

Each witness function returns the bound together with a record of the
checks that were run.  A failed check raises WitnessError: the bounds are
theorems, so a failure means a bug here, not a property of the input.

Generic checks work over A[u, v] with fresh variables u, v, so a single
computation covers every coefficient a = u in A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ring_core import Ideal, PolyQuotRing, RingElement, ideal_power
from .finite import FiniteWittRing
from .truncation import TruncationSet
from .vectors import WittVector, frobenius, teichmuller, vshift


class WitnessError(AssertionError):
    pass


@dataclass
class Witness:
    bound: int
    checks: list = field(default_factory=list)

    def record(self, name: str, ok: bool, detail: str = ""):
        self.checks.append({"check": name, "ok": bool(ok), "detail": detail})
        if not ok:
            raise WitnessError(f"{name} failed: {detail}")

    def to_json(self) -> dict:
        return {"bound": self.bound, "checks": self.checks}


class WittIdeal:
    """W_S(I): vectors all of whose coordinates lie in I."""

    def __init__(self, ideal: Ideal, S):
        self.ideal = ideal
        self.trunc = S if isinstance(S, TruncationSet) else TruncationSet(S)

    def contains(self, w: WittVector) -> bool:
        return w.trunc == self.trunc and all(self.ideal.contains(c) for c in w.coeffs)

    __contains__ = contains


def witt_ideal_membership(w: WittVector, WI: WittIdeal) -> bool:
    return WI.contains(w)


def _gens(ring: PolyQuotRing, gens) -> list[RingElement]:
    out = [ring.normal_form(g) for g in gens]
    if not out:
        raise ValueError("an ideal needs at least one generator")
    return out


def _generic_ring(ring: PolyQuotRing, names=("u", "v")):
    fresh = []
    for base in names:
        name = base
        while name in ring.vars or name in fresh:
            name += "_"
        fresh.append(name)
    big = ring.extend(fresh)
    return big, [big.gen(n) for n in fresh]


def _lift(ring, big, xs):
    return [ring.embed(x, big) for x in xs]


def power_generators(ring: PolyQuotRing, gens, s: int) -> list[RingElement]:
    return ideal_power(Ideal(ring, gens), s).gens


# ---------------------------------------------------------------- ideal calculus

def check_product_rule(ring: PolyQuotRing, I_gens, J_gens, S) -> Witness:
    """W_S(I) W_S(J) inside W_S(IJ), on generic generators V_i[u t] V_j[v t']."""
    S = S if isinstance(S, TruncationSet) else TruncationSet(S)
    big, (u, v) = _generic_ring(ring)
    I = _lift(ring, big, _gens(ring, I_gens))
    J = _lift(ring, big, _gens(ring, J_gens))
    IJ = WittIdeal(Ideal(big, [a * b for a in I for b in J]), S)
    wit = Witness(0)
    for i in S:
        for j in S:
            for t in I:
                for t2 in J:
                    prod = vshift(i, teichmuller(u * t, S)) * vshift(j, teichmuller(v * t2, S))
                    wit.record("product in W(IJ)", IJ.contains(prod), f"V_{i}[u*({t})] V_{j}[v*({t2})]")
    return wit


def check_power_rule(ring: PolyQuotRing, I_gens, S, N: int) -> Witness:
    """W_S(I)^s inside W_S(I^s) for s <= N, by induction through the product rule."""
    wit = Witness(N)
    I_gens = _gens(ring, I_gens)
    for s in range(2, N + 1):
        sub = check_product_rule(ring, I_gens, power_generators(ring, I_gens, s - 1), S)
        wit.checks.extend(sub.checks)
    if N < 2:
        wit.record("power rule", True, "N = 1 is the definition")
    return wit


def check_sum_rule(ring: PolyQuotRing, I_gens, J_gens, S) -> Witness:
    """W_S(I) + W_S(J) = W_S(I+J).

    One inclusion is a coordinate check on generic sums.  For the other,
    [x+y] - [x] - [y] must lie in W_S(IJ), which lets V_i[x+y] be peeled
    into W_S(I) + W_S(J) one filtration step at a time.
    """
    S = S if isinstance(S, TruncationSet) else TruncationSet(S)
    big, (u, v) = _generic_ring(ring)
    I = _lift(ring, big, _gens(ring, I_gens))
    J = _lift(ring, big, _gens(ring, J_gens))
    IpJ = WittIdeal(Ideal(big, I + J), S)
    IJ = WittIdeal(Ideal(big, [a * b for a in I for b in J]), S)
    wit = Witness(0)
    for i in S:
        for j in S:
            for t in I:
                for t2 in J:
                    total = vshift(i, teichmuller(u * t, S)) + vshift(j, teichmuller(v * t2, S))
                    wit.record("sum in W(I+J)", IpJ.contains(total), f"i={i} j={j}")
    for t in I:
        for t2 in J:
            x, y = u * t, v * t2
            defect = teichmuller(x + y, S) - teichmuller(x, S) - teichmuller(y, S)
            wit.record("Teichmueller defect in W(IJ)", IJ.contains(defect), f"{t}, {t2}")
    return wit


def _generic_identity(ring, S, t, i, Np) -> bool:
    """V_i[u t^(N' i)] = [t]^N' V_i[u] in W_S(A[u])."""
    big, (u, _) = _generic_ring(ring)
    tb = ring.embed(t, big)
    lhs = vshift(i, teichmuller(u * tb ** (Np * i), S))
    rhs = teichmuller(tb, S) ** Np * vshift(i, teichmuller(u, S))
    return lhs == rhs


def witt_ideal_power_witness(ring: PolyQuotRing, I_gens, S, N: int, verify: bool = True) -> Witness:
    """M with W_S(I^M) inside <[t_1], ..., [t_m]>^N, hence inside W_S(I)^N.

    M = m (N l - 1) + 1 with l = lcm(S) and m the number of generators.
    """
    if N < 1:
        raise ValueError("N must be positive")
    S = S if isinstance(S, TruncationSet) else TruncationSet(S)
    gens = _gens(ring, I_gens)
    m = len(gens)
    ell = S.lcm()
    Mp = N * ell
    M = m * (Mp - 1) + 1
    wit = Witness(M)
    if not verify:
        return wit
    # I^M lies in (t_1^Mp, ..., t_m^Mp) by pigeonhole on exponents
    frob_ideal = Ideal(ring, [t ** Mp for t in gens])
    for g in power_generators(ring, gens, M):
        wit.record("I^M inside I^(Mp)", frob_ideal.contains(g), str(g))
    # each additive generator V_i[a t_j^Mp] is [t_j]^N' V_i[a] with N' = Mp/i >= N
    for i in S:
        Np = Mp // i
        for t in gens:
            wit.record("V_i[u t^(N'i)] = [t]^N' V_i[u]", _generic_identity(ring, S, t, i, Np), f"i={i}, t={t}, N'={Np}")
            wit.record("N' >= N", Np >= N, f"N'={Np}")
    if ring.base.modulus and ring.is_finite_rank:
        W = FiniteWittRing(ring, S)
        small = W.witt_ideal(power_generators(ring, gens, M))
        big = W.ideal([teichmuller(t, S) for t in gens]).power(N)
        wit.record("exact containment in the finite Witt ring", big.contains_subgroup(small), f"M={M}, N={N}")
    return wit


# ---------------------------------------------------------------- intertwining

def intertwining_witness(ring: PolyQuotRing, I_gens, S, N: int) -> dict:
    """For s <= N: W_S(I^M(s)) inside W_S(I)^s, and W_S(I)^s inside W_S(I^s)."""
    S = S if isinstance(S, TruncationSet) else TruncationSet(S)
    gens = _gens(ring, I_gens)
    out = {}
    finite = bool(ring.base.modulus) and ring.is_finite_rank
    W = FiniteWittRing(ring, S) if finite else None
    WI = W.witt_ideal(gens) if finite else None
    for s in range(1, N + 1):
        up = witt_ideal_power_witness(ring, gens, S, s)
        down = check_power_rule(ring, gens, S, s)
        if finite:
            power = WI.power(s)
            down.record("exact W(I)^s inside W(I^s)", W.witt_ideal(power_generators(ring, gens, s)).contains_subgroup(power), f"s={s}")
        out[s] = {"M": up.bound, "up": up.checks, "down": down.checks}
    return out


# ---------------------------------------------------------------- p-adic intertwining

def p_adic_intertwining_witness(ring: PolyQuotRing, p: int, r: int) -> Witness:
    """p^r W_r(A) inside W_r(pA), and W_r(pA)^M inside p W_r(A) with M = p^r.

    Needs a finite A.  Also checks that the square of V W_{r-1}(A) lies in
    p W_r(A) and that [p]^p does.
    """
    S = TruncationSet.p_typical(p, r)
    W = FiniteWittRing(ring, S)
    pW = W.p_multiple(p)
    WpA = W.witt_ideal([p])
    M = p ** r
    wit = Witness(M)
    wit.record("p^r in W_r(pA)", WpA.contains(W.one().scale(p ** r)), f"p={p}, r={r}")
    wit.record("W_r(pA)^M inside pW_r(A)", pW.contains_subgroup(WpA.power(M)), f"M={M}")
    # W_r(p^M A) inside [p]^p W_r(A)
    tp = teichmuller(ring.normal_form(p), S) ** p
    wit.record("W_r(p^M A) inside [p]^p W_r(A)", W.ideal([tp]).contains_subgroup(W.witt_ideal([p ** M])), f"M={M}")
    wit.record("[p]^p in pW_r(A)", pW.contains(tp), "")
    if r >= 2:
        VW = W.span([g for (n, _), g in zip(W.gen_labels, W.gens) if n > 1])
        wit.record("(V W_{r-1})^2 inside pW_r(A)", pW.contains_subgroup(VW.times(VW)), "")
    return wit


def p_nilpotence_exponent(ring: PolyQuotRing, p: int, r: int) -> int:
    """Smallest e with p^e = 0 in W_r(A); needs p nilpotent in a finite A."""
    S = TruncationSet.p_typical(p, r)
    one = WittVector.one(ring, S)
    x = one
    for e in range(1, 64 * r + 1):
        x = x.scale(p)
        if x.is_zero():
            return e
    raise WitnessError("p does not look nilpotent in W_r(A)")


# ---------------------------------------------------------------- Frobenius ideal

def frobenius_power(w: WittVector, p: int, k: int) -> WittVector:
    """F^k = F_p applied k times."""
    for _ in range(k):
        w = frobenius(p, w)
    return w


def frobenius_ideal_witness(ring: PolyQuotRing, I_gens, p: int, r: int, verify: bool = True) -> Witness:
    """M with I^M inside the ideal of A generated by F^(r-1) W_r(I).

    M = m (p^(r-1) - 1) + 1, using F^(r-1)[t] = t^(p^(r-1)).
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    gens = _gens(ring, I_gens)
    m = len(gens)
    q = p ** (r - 1)
    M = m * (q - 1) + 1
    wit = Witness(M)
    if not verify:
        return wit
    S = TruncationSet.p_typical(p, r)
    images = []
    for t in gens:
        img = frobenius_power(teichmuller(t, S), p, r - 1)
        wit.record("F^(r-1)[t] = t^(p^(r-1))", img.coeffs[0] == t ** q, str(t))
        images.append(img.coeffs[0])
    target = Ideal(ring, images)
    for g in power_generators(ring, gens, M):
        wit.record("I^M inside <F^(r-1) W_r(I)>", target.contains(g), str(g))
    return wit


def check_frobenius_image_inside(ring: PolyQuotRing, I_gens, p: int, r: int, s: int) -> Witness:
    """F^(r-1) W_r(I^s) A inside I^s: generic F^(r-1) V_i[u g] for g generating I^s."""
    S = TruncationSet.p_typical(p, r)
    big, (u, _) = _generic_ring(ring)
    gens = power_generators(ring, _gens(ring, I_gens), s)
    target = Ideal(big, _lift(ring, big, gens))
    wit = Witness(s)
    for i in S:
        for g in gens:
            img = frobenius_power(vshift(i, teichmuller(u * ring.embed(g, big), S)), p, r - 1)
            wit.record("F^(r-1) W_r(I^s) inside I^s", target.contains(img.coeffs[0]), f"i={i}, g={g}")
    return wit
