"""Truncation sets: finite sets of positive integers closed under divisors."""

from __future__ import annotations

from math import lcm

DEFAULT_MAX_LCM = 64
DEFAULT_MAX_SIZE = 8


class TruncationError(ValueError):
    pass


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


class TruncationSet:
    """Sorted, divisor-closed set of positive integers.

    Sizes are capped (lcm <= 64, at most 8 elements by default) because the
    universal structure polynomials grow very quickly.
    """

    __slots__ = ("elements", "_index")

    def __init__(self, elements, max_lcm: int | None = DEFAULT_MAX_LCM, max_size: int | None = DEFAULT_MAX_SIZE):
        els = sorted(set(int(e) for e in elements))
        if any(e < 1 for e in els):
            raise TruncationError("truncation sets contain positive integers only")
        for s in els:
            for d in divisors(s):
                if d not in els:
                    raise TruncationError(f"{sorted(els)} is not closed under divisors ({d} | {s})")
        if max_size is not None and len(els) > max_size:
            raise TruncationError(f"truncation set larger than the cap {max_size}")
        if max_lcm is not None and els and lcm(*els) > max_lcm:
            raise TruncationError(f"lcm of the truncation set exceeds the cap {max_lcm}")
        self.elements = tuple(els)
        self._index = {e: i for i, e in enumerate(els)}

    @classmethod
    def p_typical(cls, p: int, r: int) -> "TruncationSet":
        """{1, p, ..., p^(r-1)}."""
        return cls([p ** k for k in range(r)])

    @classmethod
    def parse(cls, text: str) -> "TruncationSet":
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        parts = [t for t in text.replace(" ", "").split(",") if t]
        return cls([int(t) for t in parts])

    def divided(self, m: int) -> "TruncationSet":
        """S/m = {n : n*m in S}."""
        if m < 1:
            raise TruncationError("m must be positive")
        return TruncationSet([n // m for n in self.elements if n % m == 0], max_lcm=None, max_size=None)

    def index(self, n: int) -> int:
        return self._index[n]

    def __contains__(self, n) -> bool:
        return n in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, TruncationSet) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def issubset(self, other: "TruncationSet") -> bool:
        return all(e in other for e in self.elements)

    def intersection(self, other: "TruncationSet") -> "TruncationSet":
        return TruncationSet([e for e in self.elements if e in other], max_lcm=None, max_size=None)

    def lcm(self) -> int:
        return lcm(*self.elements) if self.elements else 1

    def label(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements) + "}"

    def __repr__(self):
        return f"TruncationSet({self.label()})"
