"""Sparse multivariate polynomials with integer coefficients.

A polynomial is a dict mapping exponent tuples to nonzero ints.  The
monomial order is graded lexicographic with the first variable largest.
"""

from __future__ import annotations

import re

Poly = dict


def grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


def clean(p: Poly, modulus: int = 0) -> Poly:
    if modulus:
        return {e: c % modulus for e, c in p.items() if c % modulus}
    return {e: c for e, c in p.items() if c}


def padd(a: Poly, b: Poly, modulus: int = 0) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
    return clean(out, modulus)


def psub(a: Poly, b: Poly, modulus: int = 0) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) - c
    return clean(out, modulus)


def pscale(a: Poly, c: int, modulus: int = 0) -> Poly:
    return clean({e: c * v for e, v in a.items()}, modulus)


def mono_mul(e: tuple, f: tuple) -> tuple:
    return tuple(x + y for x, y in zip(e, f))


def pmul(a: Poly, b: Poly, modulus: int = 0) -> Poly:
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for e, c in a.items():
        for f, d in b.items():
            g = tuple(x + y for x, y in zip(e, f))
            out[g] = out.get(g, 0) + c * d
    return clean(out, modulus)


def ppow(a: Poly, n: int, nvars: int, modulus: int = 0) -> Poly:
    result = {tuple([0] * nvars): 1}
    base = a
    while n:
        if n & 1:
            result = pmul(result, base, modulus)
        n >>= 1
        if n:
            base = pmul(base, base, modulus)
    return clean(result, modulus)


def const(c: int, nvars: int) -> Poly:
    return {tuple([0] * nvars): c} if c else {}


def var(i: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def leading(p: Poly):
    e = max(p, key=grlex_key)
    return e, p[e]


def divides(e: tuple, f: tuple) -> bool:
    return all(x <= y for x, y in zip(e, f))


def derivative(p: Poly, i: int) -> Poly:
    out = {}
    for e, c in p.items():
        if e[i]:
            f = list(e)
            f[i] -= 1
            out[tuple(f)] = out.get(tuple(f), 0) + c * e[i]
    return clean(out)


def substitute(p: Poly, images: list[Poly], nvars: int, modulus: int = 0) -> Poly:
    """Replace variable i by images[i]."""
    out: Poly = {}
    cache: dict = {}
    for e, c in p.items():
        term = const(c, nvars)
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = ppow(images[i], k, nvars, modulus)
                term = pmul(term, cache[key], modulus)
        out = padd(out, term, modulus)
    return out


def is_homogeneous(p: Poly) -> bool:
    return len({sum(e) for e in p}) <= 1


def degree(p: Poly) -> int:
    return max((sum(e) for e in p), default=-1)


def format_poly(p: Poly, names: list[str]) -> str:
    """Deterministic ASCII rendering, terms in decreasing grlex order."""
    if not p:
        return "0"
    parts = []
    for e in sorted(p, key=grlex_key, reverse=True):
        c = p[e]
        mono = "*".join(
            (names[i] if k == 1 else f"{names[i]}^{k}") for i, k in enumerate(e) if k
        )
        if not mono:
            s = str(abs(c))
        elif abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|\(|\)))")


class PolyParseError(ValueError):
    pass


def _tokenize(s: str):
    pos = 0
    out = []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character at {pos}: {s[pos:pos + 8]!r}")
        if m.group(1) is not None:
            out.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
    return out


def parse_poly(s: str, names: list[str], modulus: int = 0) -> Poly:
    """Parse the ASCII grammar: integers, variables, ``^``, ``*``, ``+``, ``-``.

    Parentheses are accepted for grouping.

    >>> parse_poly("x^2 + 2*x*y - 1", ["x", "y"])
    {(2, 0): 1, (1, 1): 2, (0, 0): -1}
    """
    toks = _tokenize(s)
    n = len(names)
    idx = {v: i for i, v in enumerate(names)}
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        t = peek()
        pos += 1
        return t

    def expr():
        sign = 1
        t = peek()
        if t == ("op", "-"):
            take()
            sign = -1
        elif t == ("op", "+"):
            take()
        acc = pscale(term(), sign, modulus)
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            acc = padd(acc, rhs, modulus) if op == "+" else psub(acc, rhs, modulus)
        return acc

    def term():
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = pmul(acc, factor(), modulus)
        return acc

    def factor():
        base = atom()
        if peek() == ("op", "^"):
            take()
            t = take()
            if t[0] != "int":
                raise PolyParseError("exponent must be a nonnegative integer")
            base = ppow(base, t[1], n, modulus)
        return base

    def atom():
        t = take()
        if t[0] == "int":
            return clean(const(t[1], n), modulus)
        if t[0] == "name":
            if t[1] not in idx:
                raise PolyParseError(f"unknown variable {t[1]!r}")
            return var(idx[t[1]], n)
        if t == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise PolyParseError("missing closing parenthesis")
            return v
        raise PolyParseError(f"unexpected token {t[1]!r}")

    if not toks:
        raise PolyParseError("empty polynomial")
    result = expr()
    if pos != len(toks):
        raise PolyParseError(f"trailing input at token {pos}")
    return result
