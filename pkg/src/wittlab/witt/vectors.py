"""Big Witt vectors W_S(A) over a PolyQuotRing A."""

from __future__ import annotations

from ..ring_core import PolyQuotRing, RingElement
from ..ring_core import poly as P
from .tables import universal_table
from .truncation import TruncationSet


class WittError(ValueError):
    pass


class TorsionBaseError(WittError):
    """The ghost map is only faithful over a torsion-free coefficient ring."""


def _as_trunc(S) -> TruncationSet:
    return S if isinstance(S, TruncationSet) else TruncationSet(S)


class WittVector:
    """Element of W_S(A) given by its coordinates (a_n)_{n in S}."""

    __slots__ = ("ring", "trunc", "coeffs")

    def __init__(self, ring: PolyQuotRing, trunc, coeffs):
        trunc = _as_trunc(trunc)
        if isinstance(coeffs, dict):
            coeffs = [coeffs.get(n, 0) for n in trunc]
        coeffs = list(coeffs)
        if len(coeffs) != len(trunc):
            raise WittError("one coordinate per element of the truncation set is required")
        self.ring = ring
        self.trunc = trunc
        self.coeffs = tuple(ring.normal_form(c) for c in coeffs)

    # -- constructors
    @classmethod
    def zero(cls, ring, S) -> "WittVector":
        S = _as_trunc(S)
        return cls(ring, S, [ring.zero()] * len(S))

    @classmethod
    def one(cls, ring, S) -> "WittVector":
        return teichmuller(ring.one(), S)

    @classmethod
    def p_typical(cls, ring, p: int, coords) -> "WittVector":
        """(a_0, ..., a_{r-1}) in W_r(A), stored on S = {1, p, ..., p^(r-1)}."""
        return cls(ring, TruncationSet.p_typical(p, len(coords)), coords)

    @classmethod
    def from_int(cls, ring, S, k: int) -> "WittVector":
        return cls.one(ring, S).scale(k)

    def coeff(self, n: int) -> RingElement:
        return self.coeffs[self.trunc.index(n)]

    # -- arithmetic
    def _check(self, other: "WittVector"):
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if other.trunc != self.trunc:
            raise WittError(f"truncation sets differ: {self.trunc.label()} vs {other.trunc.label()}")
        if other.ring is not self.ring and not other.ring.same_as(self.ring):
            raise WittError("coefficient rings differ")

    def _new(self, coeffs) -> "WittVector":
        w = object.__new__(WittVector)
        w.ring, w.trunc, w.coeffs = self.ring, self.trunc, tuple(coeffs)
        return w

    def __add__(self, other):
        if isinstance(other, int):
            other = WittVector.from_int(self.ring, self.trunc, other)
        self._check(other)
        if all(c.is_zero() for c in other.coeffs):
            return self
        if all(c.is_zero() for c in self.coeffs):
            return other
        tab = universal_table(self.trunc)
        return self._new(tab.evaluate("add", list(self.coeffs) + list(other.coeffs), self.ring))

    __radd__ = __add__

    def __neg__(self):
        tab = universal_table(self.trunc)
        return self._new(tab.evaluate("neg", list(self.coeffs), self.ring))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        tab = universal_table(self.trunc)
        return self._new(tab.evaluate("mul", list(self.coeffs) + list(other.coeffs), self.ring))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, k: int) -> "WittVector":
        """k * w by double-and-add."""
        if k < 0:
            return (-self).scale(-k)
        result = WittVector.zero(self.ring, self.trunc)
        base = self
        while k:
            if k & 1:
                result = result + base
            k >>= 1
            if k:
                base = base + base
        return result

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = WittVector.one(self.ring, self.trunc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.trunc == other.trunc and all(a.poly == b.poly for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.trunc, tuple(hash(c) for c in self.coeffs)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    # -- operators
    def verschiebung(self, m: int) -> "WittVector":
        return verschiebung(m, self)

    def frobenius(self, m: int) -> "WittVector":
        return frobenius(m, self)

    def restriction(self, T) -> "WittVector":
        return restriction(T, self)

    def ghost(self) -> list[RingElement]:
        return ghost_map(self)

    def __str__(self):
        return format_witt(self)

    __repr__ = __str__


def teichmuller(a, S) -> WittVector:
    """[a] = (a, 0, 0, ...)."""
    S = _as_trunc(S)
    if not isinstance(a, RingElement):
        raise TypeError("teichmuller expects a ring element")
    ring = a.ring
    return WittVector(ring, S, [a] + [ring.zero()] * (len(S) - 1)) if len(S) else WittVector(ring, S, [])


def verschiebung(m: int, w: WittVector, target=None) -> WittVector:
    """V_m : W_{S/m}(A) -> W_S(A), (V_m a)_n = a_{n/m} if m | n else 0.

    ``target`` is S; when omitted it is the smallest truncation set T with
    T/m containing the source set (so V_m W_S lands in W_{mS ∪ divisors}).
    """
    if m < 1:
        raise WittError("V_m needs a positive m")
    src = w.trunc
    if target is None:
        els = set()
        for n in src:
            for d in range(1, n * m + 1):
                if (n * m) % d == 0:
                    els.add(d)
        target = TruncationSet(els, max_lcm=None, max_size=None)
    target = _as_trunc(target)
    if target.divided(m) != src:
        raise WittError(f"V_{m} maps W_{target.divided(m).label()}, not W_{src.label()}")
    ring = w.ring
    coeffs = [w.coeff(n // m) if n % m == 0 else ring.zero() for n in target]
    return WittVector(ring, target, coeffs)


def vshift(m: int, w: WittVector) -> WittVector:
    """V_m viewed inside the same truncation set: W_S -> W_S via R_{S/m} first.

    This is the composite W_S -> W_{S/m} -> W_S used when S is fixed, for
    example V_i[a] as an element of W_S(A).
    """
    S = w.trunc
    return verschiebung(m, restriction(S.divided(m), w), target=S)


def frobenius(m: int, w: WittVector) -> WittVector:
    """F_m : W_S(A) -> W_{S/m}(A), a ring homomorphism."""
    if m < 1:
        raise WittError("F_m needs a positive m")
    S = w.trunc
    T = S.divided(m)
    if m == 1:
        return w
    if not len(T):
        return WittVector(w.ring, T, [])
    tab = universal_table(S)
    return WittVector(w.ring, T, tab.evaluate(f"frob{m}", list(w.coeffs), w.ring))


def restriction(T, w: WittVector) -> WittVector:
    """R_T : W_S(A) -> W_T(A) for a truncation set T contained in S."""
    T = _as_trunc(T) if not isinstance(T, TruncationSet) else T
    if not T.issubset(w.trunc):
        raise WittError(f"{T.label()} is not contained in {w.trunc.label()}")
    return WittVector(w.ring, T, [w.coeff(n) for n in T])


def _torsion_free(ring: PolyQuotRing) -> bool:
    # integer base with a monomial ideal: the ring is a free Z-module
    return ring.base.modulus == 0 and ring.engine.kind == "monomial"


def ghost_map_unchecked(w: WittVector) -> list[RingElement]:
    ring = w.ring
    out = []
    for n in w.trunc:
        acc = ring.zero()
        for d in w.trunc:
            if d > n:
                break
            if n % d == 0:
                acc = acc + (w.coeff(d) ** (n // d)) * d
        out.append(acc)
    return out


def ghost_map(w: WittVector) -> list[RingElement]:
    """Ghost components w_n = sum_{d | n} d a_d^(n/d), n in S."""
    if not _torsion_free(w.ring):
        raise TorsionBaseError("ghost map requested over a ring with torsion")
    return ghost_map_unchecked(w)


def decompose(w: WittVector) -> list[tuple[int, RingElement]]:
    """Write w = sum_i V_i[a_i] by peeling off the smallest index first.

    Returns the nonzero terms (i, a_i) in increasing i.
    """
    S = w.trunc
    rest = w
    out = []
    for i in S:
        a = rest.coeff(i)
        if a.is_zero():
            continue
        out.append((i, a))
        rest = rest - vshift(i, teichmuller(a, S))
    if not rest.is_zero():
        raise WittError("decomposition did not terminate at zero")
    return out


def recompose(ring: PolyQuotRing, S, terms) -> WittVector:
    S = _as_trunc(S)
    total = WittVector.zero(ring, S)
    for i, a in terms:
        total = total + vshift(i, teichmuller(ring.normal_form(a), S))
    return total


def format_element(a: RingElement) -> str:
    """Compact display: coefficient glued to its monomial, e.g. ``2x``."""
    s = P.format_poly(a.poly, list(a.ring.vars))
    out = []
    for tok in s.split(" "):
        head, sep, tail = tok.partition("*")
        if sep and head.isdigit():
            tok = head + tail
        out.append(tok)
    return " ".join(out)


def format_witt(w: WittVector) -> str:
    return "(" + ", ".join(format_element(c) for c in w.coeffs) + ")"


def coerce_trunc(S) -> TruncationSet:
    return _as_trunc(S)
