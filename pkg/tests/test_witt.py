import random
import threading
from fractions import Fraction

import pytest

from wittlab.ring_core import PolyQuotRing
from wittlab.witt import (
    FiniteWittRing,
    TorsionBaseError,
    TruncationError,
    TruncationSet,
    WittError,
    WittParseError,
    WittSemanticError,
    WittTable,
    WittVector,
    check_frobenius_image_inside,
    check_product_rule,
    check_sum_rule,
    decompose,
    evaluate_expression,
    frobenius,
    frobenius_ideal_witness,
    ghost_map,
    ghost_map_unchecked,
    intertwining_witness,
    p_adic_intertwining_witness,
    p_nilpotence_exponent,
    recompose,
    restriction,
    teichmuller,
    universal_table,
    verify_table,
    verschiebung,
    vshift,
    witt_ideal_power_witness,
)
from wittlab.witt import tables as tables_mod


# ------------------------------------------------------------ integer oracle

def _oracle(S, op, a, b=None, m=0):
    """W_S(Z) arithmetic through ghost components and rational solving.

    Coordinates are integers; the result is reduced mod m if m > 0.  Since
    Z -> Z/m induces a ring map on Witt vectors this also computes over Z/m.
    """
    S = sorted(S)

    def ghost(v):
        return {n: sum(d * v[d] ** (n // d) for d in S if n % d == 0) for n in S}

    ga = ghost(a)
    gb = ghost(b) if b is not None else None
    target = {n: (ga[n] + gb[n] if op == "add" else ga[n] * gb[n] if op == "mul" else -ga[n]) for n in S}
    c = {}
    for n in S:
        rest = Fraction(target[n]) - sum(d * Fraction(c[d]) ** (n // d) for d in S if d < n and n % d == 0)
        q = rest / n
        assert q.denominator == 1
        c[n] = int(q)
    return [c[n] % m if m else c[n] for n in S]


def _ints(w):
    return [c.poly.get((), 0) for c in w.coeffs]


# ------------------------------------------------------------ truncation sets

def test_truncation_set_validation():
    assert TruncationSet([4, 1, 2]).elements == (1, 2, 4)
    with pytest.raises(TruncationError):
        TruncationSet([1, 4])
    with pytest.raises(TruncationError):
        TruncationSet(range(1, 10))  # more than 8 elements
    with pytest.raises(TruncationError):
        TruncationSet([1, 2, 4, 8, 16, 32, 64, 128])  # lcm cap
    S = TruncationSet([1, 2, 3, 6])
    assert S.divided(2).elements == (1, 3)
    assert S.divided(6).elements == (1,)
    assert S.divided(4).elements == ()
    assert TruncationSet.p_typical(3, 3).elements == (1, 3, 9)
    assert TruncationSet.parse("{1,2,4}").elements == (1, 2, 4)


# ------------------------------------------------------------ universal tables

@pytest.mark.parametrize("S", [[1], [1, 2], [1, 2, 4], [1, 3], [1, 2, 3, 6], [1, 2, 4, 8]])
def test_tables_satisfy_ghost_identities(S):
    assert verify_table(WittTable.compute(TruncationSet(S)))


def test_table_disk_cache_and_concurrent_first_access(tmp_path, monkeypatch):
    monkeypatch.setenv("WITTLAB_TABLE_DIR", str(tmp_path))
    tables_mod.clear_memory_cache()
    S = TruncationSet([1, 2, 3, 6])
    got = []
    threads = [threading.Thread(target=lambda: got.append(universal_table(S))) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len({id(t) for t in got}) == 1
    path = tmp_path / "witt_table_S{1,2,3,6}.json"
    assert path.exists()
    tables_mod.clear_memory_cache()
    again = universal_table(S)
    assert again is not got[0]
    assert again.mul == got[0].mul and again.frob == got[0].frob
    tables_mod.clear_memory_cache()


# ------------------------------------------------------------ ghost map

def test_ghost_examples():
    Z = PolyQuotRing(0, ["a", "b"])
    a, b = Z.gens()
    assert ghost_map(teichmuller(a, [1, 2])) == [a, a * a]
    w = WittVector.p_typical(Z, 2, [a, b])
    assert ghost_map(w) == [a, a * a + 2 * b]
    assert ghost_map(vshift(2, teichmuller(b, [1, 2]))) == [Z.zero(), 2 * b]


def test_ghost_rejects_torsion():
    F = PolyQuotRing(2, ["x"])
    w = teichmuller(F("x"), [1, 2])
    with pytest.raises(TorsionBaseError):
        ghost_map(w)
    assert [str(c) for c in ghost_map_unchecked(w)] == ["x", "x^2"]


def test_ghost_is_a_ring_map_over_polynomials():
    Z = PolyQuotRing(0, ["a", "b", "c"], ["a^3"])
    rng = random.Random(3)
    S = TruncationSet([1, 2, 3, 6])

    def rnd():
        return WittVector(Z, S, [Z.normal_form({(rng.randrange(3), rng.randrange(2), rng.randrange(2)): rng.randrange(-2, 3)}) for _ in S])

    for _ in range(10):
        u, v = rnd(), rnd()
        gu, gv = ghost_map(u), ghost_map(v)
        assert ghost_map(u + v) == [x + y for x, y in zip(gu, gv)]
        assert ghost_map(u * v) == [x * y for x, y in zip(gu, gv)]
        assert ghost_map(-u) == [-x for x in gu]


# ------------------------------------------------------------ arithmetic vs oracle

def test_add_example_w2_f2():
    F2 = PolyQuotRing(2, [])
    one = WittVector.p_typical(F2, 2, [1, 0])
    assert _ints(one + one) == [0, 1]
    assert _oracle([1, 2], "add", {1: 1, 2: 0}, {1: 1, 2: 0}, 2) == [0, 1]


@pytest.mark.parametrize("m,S", [(2, [1, 2, 4]), (3, [1, 3]), (8, [1, 2, 4]), (4, [1, 2, 3, 6]), (0, [1, 2, 3, 6])])
def test_arithmetic_matches_ghost_oracle(m, S):
    R = PolyQuotRing(m, [])
    rng = random.Random(m * 100 + len(S))
    hi = m if m else 7
    for _ in range(40):
        a = {n: rng.randrange(-hi if not m else 0, hi) for n in S}
        b = {n: rng.randrange(-hi if not m else 0, hi) for n in S}
        u = WittVector(R, S, [a[n] for n in S])
        v = WittVector(R, S, [b[n] for n in S])
        norm = (lambda xs: [x % m for x in xs]) if m else (lambda xs: xs)
        assert norm(_ints(u + v)) == _oracle(S, "add", a, b, m)
        assert norm(_ints(u * v)) == _oracle(S, "mul", a, b, m)
        assert norm(_ints(-u)) == _oracle(S, "neg", a, None, m)


def test_torsion_ring_arithmetic_is_reduction_of_lift():
    # computing over Z[x]/(x^2) (ghost-checked) then reducing mod 2 agrees
    # with computing over F_2[x]/(x^2) directly
    Z = PolyQuotRing(0, ["x"], ["x^2"])
    F = PolyQuotRing(2, ["x"], ["x^2"])
    S = TruncationSet([1, 2, 4])
    rng = random.Random(11)

    def red(w):
        return WittVector(F, S, [F.normal_form(c.poly) for c in w.coeffs])

    for _ in range(30):
        cu = [{(0,): rng.randrange(4), (1,): rng.randrange(4)} for _ in S]
        cv = [{(0,): rng.randrange(4), (1,): rng.randrange(4)} for _ in S]
        u, v = WittVector(Z, S, cu), WittVector(Z, S, cv)
        gu, gv = ghost_map(u), ghost_map(v)
        assert ghost_map(u * v) == [a * b for a, b in zip(gu, gv)]
        assert red(u * v) == red(u) * red(v)
        assert red(u + v) == red(u) + red(v)


def test_truncation_mismatch():
    R = PolyQuotRing(2, [])
    with pytest.raises(WittError):
        WittVector.one(R, [1, 2]) + WittVector.one(R, [1])


# ------------------------------------------------------------ operators

def test_frobenius_verschiebung_examples():
    F3 = PolyQuotRing(3, [])
    w = WittVector.p_typical(F3, 3, [0, 1])
    fv = frobenius(3, w)
    assert fv.trunc.elements == (1,) and fv.coeffs[0].is_zero()
    one = WittVector.one(F3, [1, 2])
    assert restriction([1, 2], one) == one


def test_product_of_verschiebungs_ghost_oracle():
    Z = PolyQuotRing(0, ["a", "b"])
    a, b = Z.gens()
    S = TruncationSet([1, 2, 3, 6])
    lhs = vshift(2, teichmuller(a, S)) * vshift(3, teichmuller(b, S))
    # the ghost components force V_6[a^3 b^2]: w_6 = 2a^3 * 3b^2 = 6 a^3 b^2
    assert lhs == vshift(6, teichmuller(a ** 3 * b ** 2, S))
    assert lhs != vshift(6, teichmuller(a ** 2 * b ** 3, S))
    assert ghost_map(lhs)[3] == 6 * a ** 3 * b ** 2


@pytest.mark.parametrize("ring", [PolyQuotRing(2, ["x"], ["x^2"]), PolyQuotRing(4, ["x"], ["x^2"]), PolyQuotRing(0, ["x", "y"])])
def test_general_product_of_verschiebungs(ring):
    # V_i[a] V_j[b] = g V_{ij/g}[a^(j/g) b^(i/g)], g = gcd(i, j)
    from math import gcd
    S = TruncationSet([1, 2, 3, 4, 6, 12])
    a, b = ring.normal_form("x + 1"), ring.normal_form("x")
    for i in S:
        for j in S:
            if S.elements[-1] % (i * j // gcd(i, j)):
                continue
            g = gcd(i, j)
            lhs = vshift(i, teichmuller(a, S)) * vshift(j, teichmuller(b, S))
            rhs = vshift(i * j // g, teichmuller(a ** (j // g) * b ** (i // g), S)).scale(g)
            assert lhs == rhs, (i, j)


def test_teichmuller_times_verschiebung_identity():
    # V_i[a t^(N i)] = [t]^N V_i[a]
    R = PolyQuotRing(3, ["a", "t"])
    a, t = R.gens()
    S = TruncationSet([1, 2, 4])
    for i in S:
        for N in (1, 2):
            assert vshift(i, teichmuller(a * t ** (N * i), S)) == teichmuller(t, S) ** N * vshift(i, teichmuller(a, S))


@pytest.mark.parametrize("ring", [PolyQuotRing(2, []), PolyQuotRing(2, ["x"], ["x^2"]), PolyQuotRing(4, ["x"], ["x^2"])])
def test_operator_relations(ring):
    rng = random.Random(9)
    els = list(ring.elements())
    S = TruncationSet([1, 2, 3, 4, 6, 12])

    def rnd(T):
        return WittVector(ring, T, [rng.choice(els) for _ in T])

    for _ in range(15):
        w = rnd(S)
        for m, n in [(2, 2), (2, 3), (3, 2), (2, 6)]:
            assert frobenius(m, frobenius(n, w)) == frobenius(m * n, w)
        for m, n in [(2, 2), (2, 3)]:
            T = S.divided(m * n)
            u = rnd(T)
            assert verschiebung(m, verschiebung(n, u, target=S.divided(m)), target=S) == verschiebung(m * n, u, target=S)
        for m in (2, 3, 4):
            u = rnd(S.divided(m))
            assert frobenius(m, verschiebung(m, u, target=S)) == u.scale(m)
        u, v = rnd(S), rnd(S)
        T, T2 = TruncationSet([1, 2, 4]), TruncationSet([1, 3])
        assert restriction(T.intersection(T2), restriction(T, u)) == restriction(T.intersection(T2), u)
        # R_T and F_m are ring maps, V_m is additive
        assert restriction(T, u * v) == restriction(T, u) * restriction(T, v)
        assert frobenius(2, u * v) == frobenius(2, u) * frobenius(2, v)
        assert frobenius(2, u + v) == frobenius(2, u) + frobenius(2, v)
        a, b = rnd(S.divided(3)), rnd(S.divided(3))
        assert verschiebung(3, a + b, target=S) == verschiebung(3, a, target=S) + verschiebung(3, b, target=S)
        # R commutes with F: R_{T/2} F_2 = F_2 R_T
        assert restriction(T.divided(2), frobenius(2, u)) == frobenius(2, restriction(T, u))
        # teichmuller is multiplicative
        x, y = rng.choice(els), rng.choice(els)
        assert teichmuller(x * y, S) == teichmuller(x, S) * teichmuller(y, S)


# ------------------------------------------------------------ decomposition

def test_decompose_examples():
    R = PolyQuotRing(2, ["x"], ["x^2"])
    a = R("x + 1")
    assert decompose(teichmuller(a, [1, 2])) == [(1, a)]
    w = WittVector.p_typical(R, 2, [0, "x"])
    assert decompose(w) == [(2, R("x"))]
    rng = random.Random(2)
    els = list(R.elements())
    S = TruncationSet([1, 2, 4])
    for _ in range(30):
        w = WittVector(R, S, [rng.choice(els) for _ in S])
        terms = decompose(w)
        assert recompose(R, S, terms) == w
        # peeling recovers the coordinates themselves
        assert {i: c for i, c in terms} == {n: c for n, c in zip(S, w.coeffs) if not c.is_zero()}


# ------------------------------------------------------------ finite model

@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_witt_vectors_of_prime_field(p, r):
    W = FiniteWittRing(PolyQuotRing(p, []), TruncationSet.p_typical(p, r))
    assert W.cardinality == p ** r
    assert W.check_isomorphic_to_integers_mod(p ** r)
    assert W.additive_group().invariants == (0, (p ** r,))


def test_finite_model_basics():
    A = PolyQuotRing(2, ["x"], ["x^2"])
    W1 = FiniteWittRing(A, [1])
    assert W1.additive_group().order() == 4
    assert all(w.coeffs[0] == a for w, a in zip(W1.elements(), A.elements()))
    W = FiniteWittRing(A, [1, 2, 4])
    assert W.additive_group().order() == 4 ** 3
    rng = random.Random(4)
    elems = list(W.elements())
    for _ in range(30):
        w = rng.choice(elems)
        assert W.element(W.coords(w)) == w
    with pytest.raises(WittError):
        FiniteWittRing(PolyQuotRing(2, ["x"]), [1, 2])


# ------------------------------------------------------------ witnesses

def test_ideal_power_witness_examples():
    F2x = PolyQuotRing(2, ["x"])
    assert witt_ideal_power_witness(F2x, ["x"], [1], 3).bound == 3
    w = witt_ideal_power_witness(F2x, ["x"], [1, 2], 1)
    assert w.bound == 2 and all(c["ok"] for c in w.checks)
    A = PolyQuotRing(8, ["x"], ["x^3"])
    w = witt_ideal_power_witness(A, ["x"], [1, 2, 4], 2)
    assert w.bound == 8
    assert any(c["check"].startswith("exact") for c in w.checks)
    with pytest.raises(ValueError):
        witt_ideal_power_witness(F2x, ["x"], [1], 0)


def test_witt_ideal_calculus():
    for ring, gens in [(PolyQuotRing(2, ["x", "y"]), ["x", "y"]), (PolyQuotRing(8, ["x"], ["x^3"]), ["x"])]:
        check_product_rule(ring, gens, gens, [1, 2, 4])
        check_sum_rule(ring, gens[:1], gens[-1:], [1, 2])
        res = intertwining_witness(ring, gens, [1, 2], 2)
        assert sorted(res) == [1, 2]


def test_frobenius_ideal_witness_examples():
    F2x = PolyQuotRing(2, ["x"])
    assert frobenius_ideal_witness(F2x, ["x"], 2, 1).bound == 1
    assert frobenius_ideal_witness(F2x, ["x"], 2, 2).bound == 2
    assert frobenius_ideal_witness(PolyQuotRing(2, ["x", "y"]), ["x", "y"], 2, 2).bound == 3
    check_frobenius_image_inside(F2x, ["x"], 2, 3, 2)
    with pytest.raises(ValueError):
        frobenius_ideal_witness(F2x, ["x"], 2, 0)


def test_p_adic_intertwining_on_z8():
    A = PolyQuotRing(8, ["x"], ["x^2"])
    for r in (1, 2, 3):
        w = p_adic_intertwining_witness(A, 2, r)
        assert w.bound == 2 ** r
    # 2 is nilpotent in Z/8, so it is in W_r(A); exponents found by search
    assert [p_nilpotence_exponent(A, 2, r) for r in (1, 2, 3)] == [3, 4, 5]
    assert p_nilpotence_exponent(PolyQuotRing(2, []), 2, 3) == 3


# ------------------------------------------------------------ expressions

def test_expression_examples():
    assert str(evaluate_expression("T(1) + T(1)", PolyQuotRing(2, []), [1, 2])) == "(0, 1)"
    assert str(evaluate_expression("F[2](V[2](T(x)))", PolyQuotRing(3, ["x"]), [1, 2])) == "(2x)"
    R = PolyQuotRing(3, ["x"])
    w = evaluate_expression("T(x+1) * V[2](T(x)) + 3", R, [1, 2, 4])
    assert str(evaluate_expression("R[{1}](T(x+1) * V[2](T(x)) + 3)", R, [1, 2, 4])) == f"({w.coeffs[0]})"


@pytest.mark.parametrize("text", ["T(x", "Q(1)", "V[](T(1))", "T(1) +", "T(z)"])
def test_expression_parse_errors(text):
    with pytest.raises(WittParseError):
        evaluate_expression(text, PolyQuotRing(3, ["x"]), [1, 2])


@pytest.mark.parametrize("text,S", [("F[2](T(x)) + T(x)", [1, 2]), ("R[{1,3}](T(x))", [1, 2]), ("T(x)", [1, 3, 4])])
def test_expression_semantic_errors(text, S):
    with pytest.raises(WittSemanticError):
        evaluate_expression(text, PolyQuotRing(3, ["x"]), S)
