"""Bar complexes, Hochschild homology, Tor, cyclic group homology and friends."""

from .bar import (
    Antisymmetrization,
    BarComplex,
    FlatnessError,
    GradedTruncation,
    HochschildHomology,
    antisymmetrization,
    bar_chain_map,
    bar_complex,
    hkr_report,
    hochschild_homology,
    homology_with_coeffs,
    induced_hh_map,
    quotient_ring_map,
    require_free,
)
from .complexes import (
    ChainComplex,
    ComplexError,
    Homology,
    NotACycleError,
    check_chain_map,
    finite_coefficients,
    homology_json,
    induced_map,
    universal_coefficient_check,
)
from .tor import FreeResolution, ResolutionError, TorComplex, lift_resolution_map, tor, tor_chain_map, tor_map
from .cotangent import NaiveCotangent, naive_cotangent
from .group import (
    bokstedt_thh_z,
    bokstedt_via_tor,
    cyclic_group_homology,
    group_homology_bar,
    same_group,
)
from .periodic import truncated_polynomial_hh_dims

__all__ = [
    "Antisymmetrization",
    "BarComplex",
    "ChainComplex",
    "ComplexError",
    "FlatnessError",
    "FreeResolution",
    "GradedTruncation",
    "HochschildHomology",
    "Homology",
    "NaiveCotangent",
    "NotACycleError",
    "ResolutionError",
    "TorComplex",
    "antisymmetrization",
    "bar_chain_map",
    "bar_complex",
    "bokstedt_thh_z",
    "bokstedt_via_tor",
    "check_chain_map",
    "cyclic_group_homology",
    "finite_coefficients",
    "group_homology_bar",
    "hkr_report",
    "hochschild_homology",
    "homology_json",
    "homology_with_coeffs",
    "induced_hh_map",
    "induced_map",
    "lift_resolution_map",
    "naive_cotangent",
    "quotient_ring_map",
    "require_free",
    "same_group",
    "tor",
    "tor_chain_map",
    "tor_map",
    "truncated_polynomial_hh_dims",
    "universal_coefficient_check",
]
