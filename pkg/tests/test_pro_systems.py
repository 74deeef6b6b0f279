import random
import threading

import pytest

from wittlab.hochschild import truncated_polynomial_hh_dims
from wittlab.linalg_exact import FPModule, ModuleMap
from wittlab.pro_systems import (
    CapExceeded,
    NotDecidedBy,
    PreconditionError,
    ProHKR,
    ProIso,
    ProMap,
    ProMapError,
    ProModule,
    ProZero,
    SchemaError,
    WittModule,
    artin_rees_check,
    artin_rees_witness,
    base_change_exactness_check,
    base_change_functor,
    builtin,
    cokernel_system,
    continuity_restriction_check,
    group_homology_pro_check,
    is_pro_iso_up_to,
    is_pro_zero_up_to,
    kernel_system,
    list_instances,
    pro_hkr_check,
    random_graded_ses,
    random_witt_ses,
    reindex,
    run_instance,
    torsion_pro_check,
    tor_system,
    validate,
    verify_witness,
    witt_base_change,
    witt_exactness_check,
    witt_power_check,
)
from wittlab.pro_systems.core import _Memo
from wittlab.pro_systems.instances import BUILTIN, EXPECTED_EXIT
from wittlab.ring_core import GradedModule, PolyQuotRing
from wittlab.witt import FiniteWittRing


def cyclic_power_system(p: int) -> ProModule:
    """{Z/p^s} with reduction maps."""
    return ProModule(lambda s: FPModule.cyclic(0, p ** s), lambda s: ModuleMap(
        FPModule.cyclic(0, p ** (s + 1)), FPModule.cyclic(0, p ** s), [[1]]))


def doubled_system() -> ProModule:
    """{2Z/2^s}, generated by the class of 2."""
    return ProModule(lambda s: FPModule.cyclic(0, 2 ** (s - 1)), lambda s: ModuleMap(
        FPModule.cyclic(0, 2 ** s), FPModule.cyclic(0, 2 ** (s - 1)), [[1]]))


# ------------------------------------------------------------------ core

def test_constant_system_is_not_decided():
    P = ProModule.constant(FPModule.cyclic(0, 2))
    v = is_pro_zero_up_to(P, 5)
    assert isinstance(v, NotDecidedBy) and not v.decided
    assert v.undecided == [1, 2, 3, 4, 5] and v.cap == 10


def test_zero_transitions_are_pro_zero():
    P = ProModule.with_zero_transitions(FPModule.free(0, 2))
    v = is_pro_zero_up_to(P, 6)
    assert isinstance(v, ProZero)
    assert v.witness == {r: r + 1 for r in range(1, 7)}
    assert all(verify_witness(P, r, s) for r, s in v.witness.items())


def test_zero_levels_need_no_transition():
    P = ProModule.constant(FPModule.zero(0))
    assert is_pro_zero_up_to(P, 3).witness == {1: 1, 2: 2, 3: 3}


def test_inclusion_of_even_classes_has_constant_cokernel():
    f = ProMap(doubled_system(), cyclic_power_system(2), lambda s: ModuleMap(
        FPModule.cyclic(0, 2 ** (s - 1)), FPModule.cyclic(0, 2 ** s), [[2]]), "times 2")
    f.check_commutes(range(1, 8))
    assert isinstance(is_pro_zero_up_to(kernel_system(f), 6), ProZero)
    C = cokernel_system(f)
    assert all(C.level(s).invariants == (0, (2,)) for s in range(1, 6))
    v = is_pro_iso_up_to(f, 6)
    assert isinstance(v, NotDecidedBy) and v.part == "cokernel"


def test_identity_is_pro_iso():
    P = cyclic_power_system(3)
    v = is_pro_iso_up_to(ProMap.identity(P), 5)
    assert isinstance(v, ProIso)
    assert v.to_json()["kernel"]["witness"][0] == [1, 1]


def test_multiplication_by_p_on_pro_zp_is_not_an_iso():
    P = cyclic_power_system(2)
    f = ProMap(P, P, lambda s: ModuleMap(P.level(s), P.level(s), [[2]]), "2")
    v = is_pro_iso_up_to(f, 4)
    # kernel 2^(s-1)Z/2^s has transitions to zero, cokernel Z/2 is constant
    assert isinstance(v, NotDecidedBy) and v.part == "cokernel"
    assert isinstance(is_pro_zero_up_to(kernel_system(f), 4), ProZero)


def test_non_commuting_components_are_rejected():
    P = cyclic_power_system(2)
    f = ProMap(P, P, lambda s: ModuleMap(P.level(s), P.level(s), [[s]]), "bad")
    with pytest.raises(ProMapError):
        is_pro_iso_up_to(f, 3)


def test_witness_monotone_in_stage_bound():
    M = GradedModule.ring_module(PolyQuotRing(0, []), 0).quotient_by_ideal(["8"])
    P = tor_system(M, ["4"], 1)
    small, large = is_pro_zero_up_to(P, 3), is_pro_zero_up_to(P, 6)
    assert all(large.witness[r] == s for r, s in small.witness.items())


def test_reindexing_preserves_verdicts():
    P = ProModule.with_zero_transitions(FPModule.cyclic(0, 4))
    Q = reindex(P, lambda s: 2 * s)
    assert isinstance(is_pro_zero_up_to(Q, 4), ProZero)
    C = reindex(ProModule.constant(FPModule.cyclic(0, 4)), lambda s: s + 3)
    assert not is_pro_zero_up_to(C, 3).decided
    with pytest.raises(ValueError):
        reindex(P, lambda s: 1).transition(1)


def test_parallel_search_matches_serial_and_evaluates_once():
    calls = []
    lock = threading.Lock()

    def level(s):
        with lock:
            calls.append(s)
        return FPModule.cyclic(0, 2 ** s)

    P = ProModule(level, lambda s: ModuleMap(FPModule.cyclic(0, 2 ** (s + 1)), FPModule.cyclic(0, 2 ** s), [[2]]))
    par = is_pro_zero_up_to(P, 6, jobs=4)
    assert sorted(calls) == sorted(set(calls))
    Q = ProModule(lambda s: FPModule.cyclic(0, 2 ** s),
                  lambda s: ModuleMap(FPModule.cyclic(0, 2 ** (s + 1)), FPModule.cyclic(0, 2 ** s), [[2]]))
    assert par.witness == is_pro_zero_up_to(Q, 6).witness == {r: 2 * r for r in range(1, 7)}


def test_memo_is_once_per_key():
    seen = []
    m = _Memo(lambda k: seen.append(k) or k * k)
    assert [m(3), m(3), m(2)] == [9, 9, 4]
    assert seen == [3, 2] and m.materialized() == [2, 3]


def test_stage_bound_validation():
    with pytest.raises(ValueError):
        is_pro_zero_up_to(ProModule.constant(FPModule.zero(0)), 0)
    with pytest.raises(ValueError):
        ProModule.constant(FPModule.zero(0)).level(0)


# ------------------------------------------------------------------ functors

def test_artin_rees_witness_on_z_mod_8():
    # Tor_1(Z/4^s, Z/8) = Z/8 for s >= 2 and each transition is multiplication by 4
    M = GradedModule.ring_module(PolyQuotRing(0, []), 0).quotient_by_ideal(["8"])
    P = tor_system(M, ["4"], 1)
    assert P.level(1).invariants == (0, (4,))
    assert all(P.level(s).invariants == (0, (8,)) for s in (2, 3, 4))
    assert [artin_rees_witness(M, ["4"], 1, r, 10) for r in (1, 2, 3)] == [3, 4, 5]
    with pytest.raises(CapExceeded):
        artin_rees_witness(M, ["4"], 1, 2, 3)


def test_artin_rees_free_module_has_no_higher_tor():
    A = PolyQuotRing(2, ["x"])
    res = artin_rees_check(GradedModule.ring_module(A, 6), ["x"], [1, 2], 4)
    assert all(v.witness == {r: r for r in range(1, 5)} for v in res.verdicts.values())


def test_base_change_of_ring_and_residue_field():
    A = PolyQuotRing(2, ["x"])
    P = base_change_functor(GradedModule.ring_module(A, 6), ["x"])
    assert [P.level(s).dimension() for s in (1, 2, 3)] == [1, 2, 3]
    assert not is_pro_zero_up_to(P, 3).decided
    k = GradedModule.ring_module(A, 6).quotient_by_ideal(["x"])
    Q = base_change_functor(k, ["x"])
    assert all(Q.transition(s).equals(ModuleMap.identity(Q.level(s))) for s in (1, 2, 3))


def test_base_change_exactness_on_a_small_sequence():
    A = PolyQuotRing(2, ["x"])
    K, inc, F, Q = random_graded_ses(A, 6, random.Random(1))
    res = base_change_exactness_check(K, inc, F, Q, ["x"], 4)
    assert res.decided and set(res.verdicts) == {"left", "middle"}


def test_witt_base_change_with_one_coordinate_is_ordinary_base_change():
    A = PolyQuotRing(2, ["x"], ["x^4"])
    W = FiniteWittRing(A, [1])
    P = witt_base_change(WittModule.regular(W), ["x"])
    Q = base_change_functor(GradedModule.ring_module(A, 3), ["x"])
    for s in range(1, 5):
        assert P.level(s).order() == Q.level(s).order() == 2 ** min(s, 4)


def test_witt_exactness_and_powers():
    A = PolyQuotRing(2, ["x"], ["x^4"])
    W = FiniteWittRing(A, [1, 2])
    rng = random.Random(5)
    for _ in range(3):
        K, inc, F, Q = random_witt_ses(W, rng)
        assert witt_exactness_check(K, inc, F, Q, ["x"], 4).decided
    res = witt_power_check(W, ["x"], 4)
    assert isinstance(res.verdicts["identity"], ProIso)


# ------------------------------------------------------------------ checkers

def test_pro_hkr_degree_two_is_pro_zero_with_nonzero_levels():
    A = PolyQuotRing(2, ["x"])
    H = ProHKR(A, ["x"], 2, 8)
    for s in range(2, 6):
        dims = truncated_polynomial_hh_dims(2, s, 2, 8)
        assert H.hh.level(s).dimension() == sum(dims[d] for d in range(9)) > 0
    assert isinstance(is_pro_zero_up_to(H.hh, 4), ProZero)
    assert H.periodic_cross_check(range(1, 5)) is True


def test_pro_hkr_preconditions():
    with pytest.raises(PreconditionError):
        pro_hkr_check(PolyQuotRing(2, ["x"]), ["x"], 1, 3, 4, claims_regular=False)
    with pytest.raises(PreconditionError):
        pro_hkr_check(PolyQuotRing(4, ["x"]), ["x"], 1, 3, 4)
    assert pro_hkr_check(PolyQuotRing(2, ["x"]), ["x"], 1, 4, 6).decided


def test_continuity_over_integers_mod_two():
    A = PolyQuotRing(0, ["x"])
    res = continuity_restriction_check(A, ["x"], GradedModule.ring_module(A, 6), 1, 4, 6, modulus=2)
    assert res.decided and set(res.verdicts) == {"restriction"}


def test_group_homology_and_torsion():
    A = PolyQuotRing(0, ["x"])
    M = GradedModule.from_presentation(A, [0], [["2*x"]], 6)
    for n in range(4):
        assert group_homology_pro_check(M, ["x"], 2, n, 4).decided
    assert torsion_pro_check(M, ["x"], 2, 4).decided
    with pytest.raises(PreconditionError):
        torsion_pro_check(M, ["x"], 0, 4)


# ------------------------------------------------------------------ instances

def test_builtin_matrix_is_listed():
    names = [c["name"] for c in list_instances()]
    assert names == [c["name"] for c in BUILTIN]
    assert set(names) == set(EXPECTED_EXIT)
    with pytest.raises(KeyError):
        builtin("nope")


@pytest.mark.parametrize("bad", [
    {"theorem": "nope", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {}},
    {"theorem": "pro_hkr", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"n": 1, "zzz": 1},
     "claims_regular": True},
    {"theorem": "pro_hkr", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {}},
    {"theorem": "cor_1_4", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"N": 3}},
    {"theorem": "artin_rees", "ring": {"base": {"Fp": 2}, "vars": ["x"], "ideal": ["x^2 +"]}, "ideal": ["x"],
     "params": {"n": 1}},
    {"theorem": "pro_hkr", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"n": 1},
     "module": {"generators": [0]}, "claims_regular": True},
])
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        validate(bad)


def test_validate_normalizes():
    cfg = validate({"theorem": "artin_rees", "ring": {"base": {"Fp": 2}, "vars": ["x"]}, "ideal": ["x"], "params": {"n": 1}})
    assert cfg["params"]["n"] == [1] and cfg["name"]


def test_run_instance_sanity_is_undecided():
    rep = run_instance(builtin("sanity_constant_system"))
    assert rep["verdict"] == "NotDecidedBy" and rep["exit_code"] == 1
