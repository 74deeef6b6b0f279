"""Big and p-typical Witt vectors, their operators, ideals and witnesses."""

from .expr import WittParseError, WittSemanticError, evaluate_expression, parse_witt_expression
from .finite import AdditiveSubgroup, FiniteWittRing, witt_ring_as_finite_ring
from .ideals import (
    Witness,
    WitnessError,
    WittIdeal,
    check_frobenius_image_inside,
    check_power_rule,
    check_product_rule,
    check_sum_rule,
    frobenius_ideal_witness,
    frobenius_power,
    intertwining_witness,
    p_adic_intertwining_witness,
    p_nilpotence_exponent,
    witt_ideal_membership,
    witt_ideal_power_witness,
)
from .tables import WittTable, WittTableError, universal_table, verify_table
from .truncation import TruncationError, TruncationSet
from .vectors import (
    TorsionBaseError,
    WittError,
    WittVector,
    decompose,
    format_witt,
    frobenius,
    ghost_map,
    ghost_map_unchecked,
    recompose,
    restriction,
    teichmuller,
    verschiebung,
    vshift,
)

__all__ = [
    "AdditiveSubgroup", "FiniteWittRing", "TorsionBaseError", "TruncationError", "TruncationSet",
    "Witness", "WitnessError", "WittError", "WittIdeal", "WittParseError", "WittSemanticError",
    "WittTable", "WittTableError", "WittVector", "check_frobenius_image_inside", "check_power_rule",
    "check_product_rule", "check_sum_rule", "decompose", "evaluate_expression", "format_witt",
    "frobenius", "frobenius_ideal_witness", "frobenius_power", "ghost_map", "ghost_map_unchecked",
    "intertwining_witness", "p_adic_intertwining_witness", "p_nilpotence_exponent",
    "parse_witt_expression", "recompose", "restriction", "teichmuller", "universal_table",
    "verify_table", "verschiebung", "vshift", "witt_ideal_membership", "witt_ideal_power_witness",
    "witt_ring_as_finite_ring",
]
