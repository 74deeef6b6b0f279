import itertools
import random
from math import gcd

import pytest

from wittlab.linalg_exact import (
    FPModule,
    ModuleMap,
    bounded_torsion_exponent,
    cokernel,
    det,
    howell_form,
    kernel,
    p_completion_data,
    smith_normal_form,
    torsion_and_quotient,
)
from wittlab.linalg_exact.snf import matmul


def span_mod(rows, m, n):
    """All elements of the row span over Z/m, by closure."""
    seen = {tuple([0] * n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            for r in rows:
                w = tuple((a + b) % m for a, b in zip(v, r))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def minors_gcd(M, k):
    rows, cols = len(M), len(M[0])
    g = 0
    for ri in itertools.combinations(range(rows), k):
        for ci in itertools.combinations(range(cols), k):
            g = gcd(g, det([[M[i][j] for j in ci] for i in ri]))
    return g


# ---------------------------------------------------------------- Smith form


def test_snf_examples():
    U, D, V = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]] and U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]
    _, D, _ = smith_normal_form([[2, 4], [6, 8]])
    assert D == [[2, 0], [0, 4]]
    _, D, _ = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert D == [[0, 0, 0], [0, 0, 0]]
    U, D, V = smith_normal_form([])
    assert D == []


@pytest.mark.parametrize("seed", range(25))
def test_snf_random_against_minor_gcds(seed):
    rng = random.Random(seed)
    r, c = rng.randint(1, 4), rng.randint(1, 4)
    M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [D[i][i] for i in range(min(r, c))]
    for i in range(r):
        for j in range(c):
            if i != j:
                assert D[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and (b == 0 or (a != 0 and b % a == 0))
    # d1*...*dk equals the gcd of k x k minors
    prod = 1
    for k in range(1, min(r, c) + 1):
        prod *= diag[k - 1]
        assert prod == minors_gcd(M, k)
    # idempotence
    _, D2, _ = smith_normal_form(D)
    assert D2 == D


# ---------------------------------------------------------------- Howell form


def test_howell_examples():
    assert howell_form([[1, 0], [0, 1]], 4) == [[1, 0], [0, 1]]
    assert howell_form([[2, 2]], 4) == [[2, 2]]
    assert howell_form([[2, 0], [0, 2]], 4) == [[2, 0], [0, 2]]
    assert span_mod([[2, 2]], 4, 2) == {(0, 0), (2, 2)}


@pytest.mark.parametrize("m", [4, 6, 8, 9, 12])
def test_howell_span_and_canonicity(m):
    rng = random.Random(m)
    for _ in range(15):
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        M = [[rng.randrange(m) for _ in range(c)] for _ in range(r)]
        H = howell_form(M, m, c)
        assert span_mod(H, m, c) == span_mod(M, m, c)
        # random unimodular row operations preserve the form
        M2 = [row[:] for row in M]
        for _ in range(6):
            i, j = rng.randrange(r), rng.randrange(r)
            if i != j:
                q = rng.randrange(m)
                M2[i] = [(a + q * b) % m for a, b in zip(M2[i], M2[j])]
            u = rng.choice([x for x in range(1, m) if gcd(x, m) == 1])
            M2[i] = [(u * a) % m for a in M2[i]]
        rng.shuffle(M2)
        assert howell_form(M2, m, c) == H


# ---------------------------------------------------------------- modules


def brute_order(base, gens, rels):
    return base ** gens // len(span_mod(rels, base, gens)) if gens else 1


def brute_kernel_order(f: ModuleMap):
    S, T = f.source, f.target
    m = S.base
    span_t = span_mod([list(r) for r in T.rels], m, T.gens)
    count = 0
    for x in itertools.product(range(m), repeat=S.gens):
        if tuple(f.apply(x)) in span_t:
            count += 1
    return count // len(span_mod([list(r) for r in S.rels], m, S.gens))


def test_kernel_cokernel_examples():
    Z = FPModule.free(0, 1)
    K, _ = kernel(ModuleMap.scalar(Z, 2))
    C, _ = cokernel(ModuleMap.scalar(Z, 2))
    assert K.is_zero() and C.invariants == (0, (2,))
    Z4 = FPModule.free(4, 1)
    K, inc = kernel(ModuleMap.scalar(Z4, 2))
    C, _ = cokernel(ModuleMap.scalar(Z4, 2))
    assert K.order() == 2 and C.order() == 2
    assert ModuleMap.scalar(Z4, 2).compose(inc).is_zero()
    M = FPModule(0, 3, ((2, 4, 0), (0, 0, 3)))
    K, _ = kernel(ModuleMap.identity(M))
    C, _ = cokernel(ModuleMap.identity(M))
    assert K.is_zero() and C.is_zero()


def test_base_mismatch_rejected():
    with pytest.raises(ValueError):
        ModuleMap(FPModule.free(0, 1), FPModule.free(4, 1), [[1]])


def test_ill_defined_map_rejected():
    with pytest.raises(ValueError):
        ModuleMap(FPModule.cyclic(0, 2), FPModule.free(0, 1), [[1]])


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_kernel_cokernel_brute_force(m):
    rng = random.Random(100 + m)
    for _ in range(12):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        Srels = [[rng.randrange(m) for _ in range(a)] for _ in range(rng.randint(0, 2))] if a else []
        Trels = [[rng.randrange(m) for _ in range(b)] for _ in range(rng.randint(0, 2))] if b else []
        S = FPModule(m, a, tuple(map(tuple, Srels)))
        T = FPModule(m, b, tuple(map(tuple, Trels)))
        # build a well-defined map by composing with the quotient: choose F, then
        # enlarge T's relations by the images of S's relations
        F = [[rng.randrange(m) for _ in range(b)] for _ in range(a)]
        img = [ModuleMap(FPModule.free(m, a), FPModule.free(m, b), F).apply(r) for r in S.rels]
        T = FPModule(m, b, tuple(map(tuple, Trels + img)))
        f = ModuleMap(S, T, F)
        K, inc = kernel(f)
        C, proj = cokernel(f)
        assert K.order() == brute_kernel_order(f)
        assert C.order() == brute_order(m, b, [list(r) for r in C.rels])
        assert f.compose(inc).is_zero()
        assert proj.compose(f).is_zero()
        # |S| = |ker| * |im| and |T| = |im| * |coker|
        assert S.order() * C.order() == K.order() * T.order()


def test_rank_nullity_over_fields():
    rng = random.Random(7)
    for p in (2, 3, 5):
        for _ in range(10):
            a, b = rng.randint(1, 6), rng.randint(1, 6)
            F = [[rng.randrange(p) for _ in range(b)] for _ in range(a)]
            f = ModuleMap(FPModule.free(p, a), FPModule.free(p, b), F)
            K, _ = kernel(f)
            C, _ = cokernel(f)
            assert K.dimension() + (b - C.dimension()) == a


def test_determinant_consistency_over_z():
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(1, 3)
        F = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        d = det(F)
        if d == 0:
            continue
        f = ModuleMap(FPModule.free(0, n), FPModule.free(0, n), F)
        K, _ = kernel(f)
        C, _ = cokernel(f)
        assert K.is_zero() and C.order() == abs(d)


def test_torsion_and_quotient_examples():
    T, Q = torsion_and_quotient(FPModule.free(0, 1), 4)
    assert T.is_zero() and Q.invariants == (0, (4,))
    T, Q = torsion_and_quotient(FPModule.cyclic(0, 4), 2)
    assert T.invariants == (0, (2,)) and Q.invariants == (0, (2,))
    T, Q = torsion_and_quotient(FPModule.cyclic(0, 3), 2)
    assert T.is_zero() and Q.is_zero()
    with pytest.raises(ValueError):
        torsion_and_quotient(FPModule.free(0, 1), 0)


def test_p_completion_examples():
    tate, ext = p_completion_data(FPModule.cyclic(0, 12), 2)
    assert tate.is_zero() and ext.invariants == (0, (4,))
    tate, ext = p_completion_data(FPModule.free(0, 1), 3)
    assert ext.invariants == (1, ())
    tate, ext = p_completion_data(FPModule.cyclic(0, 5), 2)
    assert ext.is_zero()
    with pytest.raises(ValueError):
        p_completion_data(FPModule.free(0, 1), 4)


def test_bounded_torsion_exponent_examples():
    assert bounded_torsion_exponent(FPModule.from_invariants(0, 1, [8]), 2) == 3
    assert bounded_torsion_exponent(FPModule.free(0, 1), 2) == 0
    assert bounded_torsion_exponent(FPModule.cyclic(0, 3), 2) == 0


def test_simplify_round_trip():
    rng = random.Random(3)
    for base in (0, 4, 3):
        for _ in range(10):
            g = rng.randint(1, 4)
            rels = tuple(tuple(rng.randint(-5, 5) for _ in range(g)) for _ in range(rng.randint(0, 3)))
            M = FPModule(base, g, rels)
            small, to, back = M.simplify()
            assert small.isomorphic(M)
            assert back.compose(to).equals(ModuleMap.identity(M))
            assert to.compose(back).equals(ModuleMap.identity(small))


def test_json_round_trip():
    M = FPModule(6, 2, ((2, 3),))
    assert FPModule.from_json(M.to_json()).isomorphic(M)
    assert M.to_json() == {"base": {"ZmodN": 6}, "gens": 2, "rels": [[2, 3]]}
    with pytest.raises(ValueError):
        FPModule.from_json({"base": "Z", "gens": 1, "rels": [], "extra": 1})
