"""Quotients of polynomial rings over Z, Z/m and F_p with normal forms."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import gcd

from ..linalg_exact.lattice import is_prime
from . import poly as P


class UnsupportedIdealError(ValueError):
    """The normal-form engines cannot certify this ideal."""


class InfiniteRankError(ValueError):
    """The ring is not finitely generated as a module over its base."""


@dataclass(frozen=True)
class BaseRing:
    """Z (modulus 0) or Z/m; the field flag is set exactly when m is prime."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus == 1 or self.modulus < 0:
            raise ValueError("modulus must be 0 or at least 2")

    @property
    def is_field(self) -> bool:
        return is_prime(self.modulus)

    @property
    def characteristic(self) -> int:
        return self.modulus

    def is_unit(self, c: int) -> bool:
        if self.modulus == 0:
            return c in (1, -1)
        return gcd(c, self.modulus) == 1

    def inverse(self, c: int) -> int:
        if self.modulus == 0:
            if c in (1, -1):
                return c
            raise ZeroDivisionError(c)
        return pow(c, -1, self.modulus)

    def to_json(self):
        if self.modulus == 0:
            return "Z"
        if self.is_field:
            return {"Fp": self.modulus}
        return {"ZmodN": self.modulus}

    @classmethod
    def from_json(cls, tag) -> "BaseRing":
        if tag == "Z":
            return cls(0)
        if isinstance(tag, dict) and len(tag) == 1:
            (k, v), = tag.items()
            if k == "ZmodN":
                return cls(int(v))
            if k == "Fp":
                if not is_prime(int(v)):
                    raise ValueError(f"Fp needs a prime, got {v}")
                return cls(int(v))
        raise ValueError(f"bad base ring tag {tag!r}")

    def __str__(self):
        if self.modulus == 0:
            return "Z"
        return f"F_{self.modulus}" if self.is_field else f"Z/{self.modulus}"


class _MonomialEngine:
    """Division by a monomial ideal: a term survives iff no generator divides it."""

    kind = "monomial"

    def __init__(self, monos: list[tuple]):
        monos = sorted(set(monos), key=P.grlex_key)
        minimal = []
        for m in monos:
            if not any(P.divides(g, m) for g in minimal):
                minimal.append(m)
        self.leads = minimal

    def reduce(self, p, modulus):
        leads = self.leads
        return {e: c for e, c in P.clean(p, modulus).items() if not any(P.divides(g, e) for g in leads)}


class _GroebnerEngine:
    """Reduced Groebner basis over a prime field (grlex)."""

    kind = "groebner"

    def __init__(self, gens: list, p: int):
        self.p = p
        self.basis = _buchberger(gens, p)
        self.leads = [P.leading(g)[0] for g in self.basis]

    def reduce(self, f, modulus):
        p = self.p
        f = P.clean(f, p)
        out = {}
        basis = self.basis
        leads = self.leads
        while f:
            e, c = P.leading(f)
            for g, le in zip(basis, leads):
                if P.divides(le, e):
                    shift = tuple(a - b for a, b in zip(e, le))
                    # g is monic
                    for ge, gc in g.items():
                        t = P.mono_mul(ge, shift)
                        f[t] = (f.get(t, 0) - c * gc) % p
                        if not f[t]:
                            del f[t]
                    break
            else:
                out[e] = c
                del f[e]
        return out


def _monic(g, p):
    e, c = P.leading(g)
    inv = pow(c, -1, p)
    return P.clean({k: v * inv for k, v in g.items()}, p)


def _reduce_by(f, basis, p):
    eng = _GroebnerEngine.__new__(_GroebnerEngine)
    eng.p = p
    eng.basis = basis
    eng.leads = [P.leading(g)[0] for g in basis]
    return eng.reduce(f, p)


def _buchberger(gens, p):
    G = [_monic(g, p) for g in (P.clean(g, p) for g in gens) if g]
    if not G:
        return []
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        i, j = pairs.pop()
        (ei, _), (ej, _) = P.leading(G[i]), P.leading(G[j])
        lcm = tuple(max(a, b) for a, b in zip(ei, ej))
        if all(a + b == c for a, b, c in zip(ei, ej, lcm)):
            continue  # coprime leading terms
        si = {P.mono_mul(e, tuple(a - b for a, b in zip(lcm, ei))): c for e, c in G[i].items()}
        sj = {P.mono_mul(e, tuple(a - b for a, b in zip(lcm, ej))): c for e, c in G[j].items()}
        s = P.psub(si, sj, p)
        r = _reduce_by(s, G, p)
        if r:
            G.append(_monic(r, p))
            k = len(G) - 1
            pairs.extend((k, t) for t in range(k))
    # minimise and inter-reduce
    G.sort(key=lambda g: P.grlex_key(P.leading(g)[0]))
    minimal = []
    for g in G:
        le = P.leading(g)[0]
        if not any(P.divides(P.leading(h)[0], le) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        le, lc = P.leading(g)
        tail = {e: c for e, c in g.items() if e != le}
        tail = _reduce_by(tail, others, p) if others else tail
        reduced.append(P.clean({le: 1, **tail}, p))
    reduced.sort(key=lambda g: P.grlex_key(P.leading(g)[0]))
    return reduced


class PolyQuotRing:
    """k[x_1..x_d]/J with a canonical normal form.

    Engines: monomial division (any base, monomial J with unit
    coefficients) or a reduced Groebner basis (prime field base).
    """

    def __init__(self, base: BaseRing | int, variables, ideal=()):
        if isinstance(base, int):
            base = BaseRing(base)
        self.base = base
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        n = len(self.vars)
        m = base.modulus
        gens = []
        for g in ideal:
            if isinstance(g, str):
                g = P.parse_poly(g, list(self.vars), m)
            elif isinstance(g, RingElement):
                g = g.poly
            g = P.clean(dict(g), m)
            if g:
                gens.append(g)
        self.ideal_gens = tuple(gens)
        self.nvars = n
        self.engine = self._build_engine(gens)

    def _build_engine(self, gens):
        m = self.base.modulus
        monos = []
        all_mono = True
        for g in gens:
            if len(g) == 1:
                (e, c), = g.items()
                if self.base.is_unit(c):
                    monos.append(e)
                    continue
            all_mono = False
            break
        if all_mono:
            return _MonomialEngine(monos)
        if self.base.is_field:
            return _GroebnerEngine(gens, m)
        raise UnsupportedIdealError(
            "only monomial ideals are supported over a non-field base"
        )

    # -- basic element handling
    def normal_form(self, f) -> "RingElement":
        if isinstance(f, str):
            f = P.parse_poly(f, list(self.vars), self.base.modulus)
        elif isinstance(f, RingElement):
            f = f.poly
        elif isinstance(f, int):
            f = P.const(f, self.nvars)
        return RingElement(self, self.engine.reduce(dict(f), self.base.modulus), _trusted=True)

    def __call__(self, f) -> "RingElement":
        return self.normal_form(f)

    def zero(self) -> "RingElement":
        return RingElement(self, {}, _trusted=True)

    def one(self) -> "RingElement":
        return self.normal_form(1)

    def gen(self, name_or_index) -> "RingElement":
        i = self.vars.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        return self.normal_form(P.var(i, self.nvars))

    def gens(self) -> list["RingElement"]:
        return [self.gen(i) for i in range(self.nvars)]

    @property
    def is_zero_ring(self) -> bool:
        return not self.one().poly

    # -- grading and bases
    @cached_property
    def is_graded(self) -> bool:
        """True when the defining ideal is homogeneous for the standard grading."""
        if self.engine.kind == "monomial":
            return True
        return all(P.is_homogeneous(g) for g in self.engine.basis)

    def _standard(self, e) -> bool:
        return not any(P.divides(g, e) for g in self.engine.leads)

    def basis_in_degree(self, d: int) -> list[tuple]:
        """Standard monomials of total degree d (grlex descending)."""
        if self.is_zero_ring or d < 0:
            return []
        out = [e for e in _compositions(d, self.nvars) if self._standard(e)]
        out.sort(key=P.grlex_key)
        return out

    @cached_property
    def is_finite_rank(self) -> bool:
        if self.is_zero_ring:
            return True
        for i in range(self.nvars):
            if not any(all(k == 0 for j, k in enumerate(g) if j != i) and g[i] > 0 for g in self.engine.leads):
                return False
        return True

    @cached_property
    def top_degree(self) -> int:
        """Largest degree of a standard monomial (finite rank only)."""
        if not self.is_finite_rank:
            raise InfiniteRankError("ring has infinite rank over its base")
        if self.is_zero_ring:
            return -1
        bound = 0
        for i in range(self.nvars):
            bound += min(g[i] for g in self.engine.leads if all(k == 0 for j, k in enumerate(g) if j != i) and g[i] > 0) - 1
        top = -1
        for d in range(bound + 1):
            if self.basis_in_degree(d):
                top = d
        return top

    def module_basis(self) -> list[tuple]:
        """Ordered monomial basis over the base (finite rank only)."""
        return list(self._module_basis)

    @cached_property
    def _module_basis(self) -> tuple:
        if not self.is_finite_rank:
            raise InfiniteRankError(
                "ring has infinite rank over its base; use a graded truncation instead"
            )
        out = []
        for d in range(self.top_degree + 1):
            out.extend(self.basis_in_degree(d))
        return tuple(out)

    def rank(self) -> int:
        return len(self.module_basis())

    def multiplication_tensor(self):
        """Structure constants c[i][j] = coordinates of b_i * b_j in the basis."""
        basis = self.module_basis()
        index = {e: k for k, e in enumerate(basis)}
        m = self.base.modulus
        out = []
        for a in basis:
            row = []
            for b in basis:
                prod = self.engine.reduce({P.mono_mul(a, b): 1}, m)
                vec = [0] * len(basis)
                for e, c in prod.items():
                    vec[index[e]] = c
                row.append(vec)
            out.append(row)
        return out

    def cardinality(self) -> int | None:
        if self.base.modulus == 0 or not self.is_finite_rank:
            return None if not self.is_zero_ring else 1
        return self.base.modulus ** len(self.module_basis())

    def elements(self):
        """All elements of a finite ring, in a fixed order."""
        m = self.base.modulus
        if not m:
            raise InfiniteRankError("ring is infinite")
        basis = self.module_basis()
        for coeffs in itertools.product(range(m), repeat=len(basis)):
            yield RingElement(self, {e: c for e, c in zip(basis, coeffs) if c}, _trusted=True)

    def coordinates(self, a: "RingElement") -> list[int]:
        basis = self.module_basis()
        return [a.poly.get(e, 0) for e in basis]

    def from_coordinates(self, coords) -> "RingElement":
        basis = self.module_basis()
        return self.normal_form({e: c for e, c in zip(basis, coords) if c})

    # -- ideals and quotients
    def ideal(self, gens) -> "Ideal":
        return Ideal(self, [self.normal_form(g) for g in gens])

    def quotient(self, I: "Ideal | list") -> "PolyQuotRing":
        return quotient_ring(self, I if isinstance(I, Ideal) else self.ideal(I))

    def truncation(self, bound: int) -> "PolyQuotRing":
        """The quotient by all monomials of degree bound + 1."""
        if not self.is_graded:
            raise ValueError("degree truncation needs a homogeneous defining ideal")
        extra = [{e: 1} for e in _compositions(bound + 1, self.nvars)]
        return PolyQuotRing(self.base, self.vars, list(self.ideal_gens) + extra)

    def degree(self, e: tuple) -> int:
        return sum(e) if self.is_graded else 0

    def with_base(self, base: BaseRing | int) -> "PolyQuotRing":
        return PolyQuotRing(base, self.vars, self.ideal_gens)

    def extend(self, names) -> "PolyQuotRing":
        """Same ring with extra free variables appended."""
        k = len(names)
        gens = [{e + (0,) * k: c for e, c in g.items()} for g in self.ideal_gens]
        return PolyQuotRing(self.base, self.vars + tuple(names), gens)

    def embed(self, a: "RingElement", target: "PolyQuotRing") -> "RingElement":
        k = target.nvars - self.nvars
        return target.normal_form({e + (0,) * k: c for e, c in a.poly.items()})

    # -- serialisation
    def to_json(self) -> dict:
        names = list(self.vars)
        return {
            "base": self.base.to_json(),
            "vars": names,
            "ideal": [P.format_poly(g, names) for g in self.ideal_gens],
        }

    @classmethod
    def from_json(cls, data) -> "PolyQuotRing":
        if isinstance(data, str):
            data = json.loads(data)
        unknown = set(data) - {"base", "vars", "ideal"}
        if unknown:
            raise ValueError(f"unknown ring keys {sorted(unknown)}")
        return cls(BaseRing.from_json(data["base"]), data.get("vars", []), data.get("ideal", []))

    def __repr__(self):
        s = f"{self.base}[{','.join(self.vars)}]"
        if self.ideal_gens:
            s += "/(" + ", ".join(P.format_poly(g, list(self.vars)) for g in self.ideal_gens) + ")"
        return s

    def same_as(self, other: "PolyQuotRing") -> bool:
        return (
            self.base == other.base
            and self.vars == other.vars
            and sorted(self.engine.leads) == sorted(other.engine.leads)
            and (self.engine.kind == "monomial") == (other.engine.kind == "monomial")
            and (self.engine.kind == "monomial" or self.engine.basis == other.engine.basis)
        )


def _compositions(d: int, n: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


class RingElement:
    """An element of a PolyQuotRing, always stored in normal form."""

    __slots__ = ("ring", "poly", "_hash")

    def __init__(self, ring: PolyQuotRing, poly, _trusted: bool = False):
        self.ring = ring
        self.poly = poly if _trusted else ring.engine.reduce(dict(poly), ring.base.modulus)
        self._hash = None

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            return other
        if isinstance(other, int):
            return self.ring.normal_form(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.base.modulus
        return RingElement(self.ring, self.ring.engine.reduce(P.padd(self.poly, other.poly, m), m), _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.base.modulus
        return RingElement(self.ring, P.clean({e: -c for e, c in self.poly.items()}, m), _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.base.modulus
        if not self.poly or not other.poly:
            return RingElement(self.ring, {}, _trusted=True)
        return RingElement(self.ring, self.ring.engine.reduce(P.pmul(self.poly, other.poly, m), m), _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.normal_form(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.poly == other.poly

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.poly.items()))
        return self._hash

    def is_zero(self) -> bool:
        return not self.poly

    def __bool__(self):
        return bool(self.poly)

    def derivative(self, i: int) -> "RingElement":
        return self.ring.normal_form(P.derivative(self.poly, i))

    def __str__(self):
        return P.format_poly(self.poly, list(self.ring.vars))

    __repr__ = __str__


class Ideal:
    """Ideal of a PolyQuotRing given by generators."""

    def __init__(self, ring: PolyQuotRing, gens):
        self.ring = ring
        self.gens = [ring.normal_form(g) for g in gens]

    @cached_property
    def _quotient(self) -> PolyQuotRing:
        return quotient_ring(self.ring, self)

    def contains(self, a) -> bool:
        a = self.ring.normal_form(a)
        return self._quotient.normal_form(a.poly).is_zero()

    def __contains__(self, a):
        return self.contains(a)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, s: int) -> "Ideal":
        return ideal_power(self, s)

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"


def _check_same(I: Ideal, J: Ideal):
    if I.ring is not J.ring and not I.ring.same_as(J.ring):
        raise ValueError("ideals live in different rings")


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _check_same(I, J)
    return Ideal(I.ring, _dedupe(I.gens + J.gens))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """Generators are the pairwise products."""
    _check_same(I, J)
    return Ideal(I.ring, _dedupe([a * b for a in I.gens for b in J.gens]))


def ideal_power(I: Ideal, s: int) -> Ideal:
    if s <= 0:
        raise ValueError("ideal power needs s >= 1")
    # products of s generators, as a multiset
    gens = []
    for combo in itertools.combinations_with_replacement(range(len(I.gens)), s):
        g = I.ring.one()
        for k in combo:
            g = g * I.gens[k]
        gens.append(g)
    return Ideal(I.ring, _dedupe(gens))


def _dedupe(gens):
    out = []
    seen = set()
    for g in gens:
        if g.is_zero():
            continue
        key = frozenset(g.poly.items())
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def quotient_ring(R: PolyQuotRing, I: Ideal) -> PolyQuotRing:
    """R/I with the engine rebuilt for the combined ideal."""
    return PolyQuotRing(R.base, R.vars, list(R.ideal_gens) + [g.poly for g in I.gens])


class RingHom:
    """Ring map between polynomial quotients given on variables."""

    def __init__(self, source: PolyQuotRing, target: PolyQuotRing, images):
        self.source = source
        self.target = target
        self.images = [target.normal_form(a) for a in images]
        for g in source.ideal_gens:
            if not self._apply_poly(g).is_zero():
                raise ValueError("assignment does not respect the defining ideal")

    def _apply_poly(self, p) -> RingElement:
        m = self.target.base.modulus
        img = P.substitute(p, [a.poly for a in self.images], self.target.nvars, m)
        return self.target.normal_form(img)

    def __call__(self, a) -> RingElement:
        if not isinstance(a, RingElement):
            a = self.source.normal_form(a)
        return self._apply_poly(a.poly)


def frobenius_endo(R: PolyQuotRing) -> RingHom:
    """The endomorphism fixing constants and sending each x to x^p.

    Requires characteristic p^e; on an F_p-algebra it is a -> a^p.
    """
    m = R.base.modulus
    if m == 0:
        raise ValueError("Frobenius needs a base of characteristic p^e")
    p = _prime_of_power(m)
    if p is None:
        raise ValueError(f"characteristic {m} is not a prime power")
    return RingHom(R, R, [R.gen(i) ** p for i in range(R.nvars)])


def _prime_of_power(m: int) -> int | None:
    for p in range(2, m + 1):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return p if m == 1 else None
    return None


def polynomial_ring(base, names, ideal=()) -> PolyQuotRing:
    if isinstance(names, str):
        names = [n for n in names.replace(",", " ").split() if n]
    return PolyQuotRing(base if isinstance(base, BaseRing) else BaseRing(base), names, ideal)
