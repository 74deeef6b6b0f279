"""Exact linear algebra over Z and Z/m and finitely presented modules."""

from .fpmodule import (
    FPModule,
    ModuleMap,
    bounded_torsion_exponent,
    cokernel,
    direct_sum,
    image,
    kernel,
    p_completion_data,
    torsion_and_quotient,
)
from .howell import howell_form
from .lattice import hermite_basis, is_prime, left_kernel, rank, span_solver
from .snf import det, elementary_divisors, smith_normal_form

__all__ = [
    "FPModule",
    "ModuleMap",
    "bounded_torsion_exponent",
    "cokernel",
    "det",
    "direct_sum",
    "elementary_divisors",
    "hermite_basis",
    "howell_form",
    "image",
    "is_prime",
    "kernel",
    "left_kernel",
    "p_completion_data",
    "rank",
    "smith_normal_form",
    "span_solver",
    "torsion_and_quotient",
]
