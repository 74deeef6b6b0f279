"""N-indexed pro-modules, bounded pro-zero and pro-iso decisions, and the named checks."""

from .checkers import (
    CheckResult,
    PreconditionError,
    ProHKR,
    artin_rees_check,
    base_change_exactness_check,
    continuity_restriction_check,
    frobenius_completion_check,
    group_homology_pro_check,
    hh_as_graded_module,
    pro_hkr_check,
    random_graded_ses,
    random_witt_ses,
    torsion_pro_check,
    witt_exactness_check,
    witt_power_check,
)
from .core import (
    NotDecidedBy,
    ProIso,
    ProMap,
    ProMapError,
    ProModule,
    ProZero,
    cokernel_system,
    homology_system,
    is_pro_iso_up_to,
    is_pro_zero_up_to,
    kernel_system,
    reindex,
    verify_witness,
)
from .functors import (
    CapExceeded,
    TorSystem,
    WittModule,
    artin_rees_witness,
    base_change_functor,
    frobenius_ideal,
    quotient_ring,
    tor_system,
    witt_base_change,
    witt_ideal_power,
)
from .instances import BUILTIN, SchemaError, builtin, list_instances, run_instance, validate

__all__ = [name for name in dir() if not name.startswith("_")]
