"""Witt expressions: ``T(a)``, ``V[m](w)``, ``F[m](w)``, ``R[{1,2}](w)``, ``+``, ``-``, ``*``.

Evaluation is driven by an ambient truncation set S.  ``T(a)`` and integer
literals land in W_S; ``V[m](w)`` evaluates w on S/m; ``F[m](w)`` evaluates
w on S and lands on S/m; ``R[T](w)`` evaluates w on S and restricts to T.
Sums and products need both sides on the same set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..ring_core import PolyParseError, PolyQuotRing
from .truncation import TruncationError, TruncationSet
from .vectors import WittError, WittVector, frobenius, restriction, teichmuller, verschiebung


class WittParseError(ValueError):
    pass


class WittSemanticError(ValueError):
    pass


@dataclass
class Node:
    kind: str  # "T", "int", "V", "F", "R", "+", "-", "*", "neg"
    args: tuple


def _match_paren(s: str, start: int) -> int:
    """Index just past the ')' closing the '(' at position start-1."""
    depth = 1
    i = start
    while i < len(s):
        if s[i] == "(":
            depth += 1
        elif s[i] == ")":
            depth -= 1
            if depth == 0:
                return i
        i += 1
    raise WittParseError("unbalanced parentheses")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.s) and self.s[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.s[self.pos] if self.pos < len(self.s) else ""

    def _expect(self, lit: str):
        self._skip()
        if not self.s.startswith(lit, self.pos):
            raise WittParseError(f"expected {lit!r} at position {self.pos}")
        self.pos += len(lit)

    def _int(self) -> int:
        self._skip()
        m = re.compile(r"\d+").match(self.s, self.pos)
        if not m:
            raise WittParseError(f"expected an integer at position {self.pos}")
        self.pos = m.end()
        return int(m.group())

    def parse(self) -> Node:
        node = self.expr()
        self._skip()
        if self.pos != len(self.s):
            raise WittParseError(f"trailing input at position {self.pos}")
        return node

    def expr(self) -> Node:
        if self._peek() == "-":
            self.pos += 1
            node = Node("neg", (self.term(),))
        else:
            node = self.term()
        while self._peek() in ("+", "-"):
            op = self.s[self.pos]
            self.pos += 1
            node = Node(op, (node, self.term()))
        return node

    def term(self) -> Node:
        node = self.atom()
        while self._peek() == "*":
            self.pos += 1
            node = Node("*", (node, self.atom()))
        return node

    def atom(self) -> Node:
        c = self._peek()
        rest = self.s[self.pos:]
        if rest.startswith("T("):
            start = self.pos + 2
            end = _match_paren(self.s, start)
            self.pos = end + 1
            return Node("T", (self.s[start:end],))
        if rest[:2] in ("V[", "F["):
            kind = rest[0]
            self.pos += 2
            m = self._int()
            self._expect("]")
            self._expect("(")
            inner = self.expr()
            self._expect(")")
            return Node(kind, (m, inner))
        if rest.startswith("R["):
            self.pos += 2
            self._expect("{")
            els = []
            if self._peek() != "}":
                els.append(self._int())
                while self._peek() == ",":
                    self.pos += 1
                    els.append(self._int())
            self._expect("}")
            self._expect("]")
            self._expect("(")
            inner = self.expr()
            self._expect(")")
            return Node("R", (tuple(els), inner))
        if c.isdigit():
            return Node("int", (self._int(),))
        if c == "(":
            self.pos += 1
            inner = self.expr()
            self._expect(")")
            return inner
        raise WittParseError(f"unexpected input at position {self.pos}: {rest[:10]!r}")


def parse_witt_expression(text: str) -> Node:
    if not text.strip():
        raise WittParseError("empty expression")
    return _Parser(text).parse()


def evaluate(node: Node, ring: PolyQuotRing, S: TruncationSet) -> WittVector:
    k = node.kind
    if k == "T":
        try:
            a = ring.normal_form(node.args[0])
        except PolyParseError as exc:
            raise WittParseError(f"bad ring element {node.args[0]!r}: {exc}") from exc
        return teichmuller(a, S)
    if k == "int":
        return WittVector.from_int(ring, S, node.args[0])
    if k == "V":
        m, inner = node.args
        if m < 1:
            raise WittSemanticError("V[m] needs m >= 1")
        T = S.divided(m)
        w = evaluate(inner, ring, T) if len(T) else WittVector(ring, T, [])
        return verschiebung(m, w, target=S)
    if k == "F":
        m, inner = node.args
        if m < 1:
            raise WittSemanticError("F[m] needs m >= 1")
        return frobenius(m, evaluate(inner, ring, S))
    if k == "R":
        els, inner = node.args
        try:
            T = TruncationSet(els)
        except TruncationError as exc:
            raise WittSemanticError(str(exc)) from exc
        w = evaluate(inner, ring, S)
        if not T.issubset(w.trunc):
            raise WittSemanticError(f"cannot restrict W_{w.trunc.label()} to {T.label()}")
        return restriction(T, w)
    if k == "neg":
        return -evaluate(node.args[0], ring, S)
    a = evaluate(node.args[0], ring, S)
    b = evaluate(node.args[1], ring, S)
    if a.trunc != b.trunc:
        raise WittSemanticError(f"operands live on {a.trunc.label()} and {b.trunc.label()}")
    if k == "+":
        return a + b
    if k == "-":
        return a - b
    return a * b


def evaluate_expression(text: str, ring: PolyQuotRing, S) -> WittVector:
    """Parse and evaluate; raises WittParseError or WittSemanticError."""
    node = parse_witt_expression(text)
    try:
        S = S if isinstance(S, TruncationSet) else TruncationSet(S)
    except TruncationError as exc:
        raise WittSemanticError(str(exc)) from exc
    try:
        return evaluate(node, ring, S)
    except WittError as exc:
        raise WittSemanticError(str(exc)) from exc
