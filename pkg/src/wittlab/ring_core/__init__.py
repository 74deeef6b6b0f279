"""Polynomial quotient rings, ideals, modules over them and Kaehler differentials."""

from .kahler import KahlerForms, kahler_differentials
from .modules import GradedMap, GradedModule, graded_cokernel, graded_kernel
from .poly import PolyParseError, parse_poly
from .rings import (
    BaseRing,
    Ideal,
    InfiniteRankError,
    PolyQuotRing,
    RingElement,
    RingHom,
    UnsupportedIdealError,
    frobenius_endo,
    ideal_power,
    ideal_product,
    ideal_sum,
    polynomial_ring,
    quotient_ring,
)


def normal_form(f, R: PolyQuotRing) -> RingElement:
    return R.normal_form(f)


def module_basis(R: PolyQuotRing):
    return R.module_basis()


__all__ = [
    "BaseRing",
    "GradedMap",
    "GradedModule",
    "Ideal",
    "InfiniteRankError",
    "KahlerForms",
    "PolyParseError",
    "PolyQuotRing",
    "RingElement",
    "RingHom",
    "UnsupportedIdealError",
    "frobenius_endo",
    "graded_cokernel",
    "graded_kernel",
    "ideal_power",
    "ideal_product",
    "ideal_sum",
    "kahler_differentials",
    "module_basis",
    "normal_form",
    "parse_poly",
    "polynomial_ring",
    "quotient_ring",
]
