import itertools

import pytest

from conftest import A2, AFF, HYP
from kmlab.errors import HeightBudgetExceeded, PreconditionViolated, UnsupportedCharacteristic
from kmlab.gcm import gcm_from_rank2, parse_gcm
from kmlab.liealg import (
    GradedLieAlgebra,
    ad_e,
    ad_f,
    bracket,
    build_positive_algebra,
    content,
    contragredient_dimension,
    lemma54_witness,
    real_root_vector,
    s_star,
    serre_quotient_dimension,
)
from kmlab.rootsys import is_real_root, positive_lattice_vectors, real_roots_up_to_height, reflect, root_multiplicity, sign


def test_dimension_examples():
    L = build_positive_algebra(A2, 3)
    assert [L.dim(w) for w in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, 0)]] == [1, 1, 1, 0, 0, 0]
    L = build_positive_algebra(HYP, 2, "ZZ")
    assert L.dim((1, 1)) == 1
    assert bracket(L, L.generator(1), L.generator(2)) == L.basis_element((1, 1), 0)
    assert build_positive_algebra(AFF, 4).dim((2, 2)) == 1


def test_prime_field_budget():
    with pytest.raises(UnsupportedCharacteristic):
        build_positive_algebra(HYP, 5, 5)
    L = build_positive_algebra(HYP, 4, 5)
    x = bracket(L, L.generator(1), L.generator(2))
    assert ad_f(L, 1, x) == 3 * L.generator(2)
    assert (5 * x).is_zero()


def test_bracket_basics():
    L = build_positive_algebra(A2, 3)
    e1, e2 = L.generator(1), L.generator(2)
    assert bracket(L, e1, e1).is_zero()
    x = bracket(L, e1, e2)
    assert not x.is_zero() and x.weight() == (1, 1)
    assert bracket(L, e1, x).is_zero()
    with pytest.raises(HeightBudgetExceeded):
        bracket(L, x, x)


def _basis(L, h):
    return [L.basis_element(w, k) for w in positive_lattice_vectors(L.n, h) for k in range(L.dim(w))]


@pytest.mark.parametrize("a", [HYP, AFF, parse_gcm("2,-1,-1;-1,2,-1;-1,-1,2"), parse_gcm("2,-4;-1,2")])
def test_jacobi_and_antisymmetry(a):
    h = 6 if a.rank == 2 else 4
    L = build_positive_algebra(a, h)
    B = _basis(L, h)
    for x, y in itertools.combinations_with_replacement(B, 2):
        if sum(x.weight()) + sum(y.weight()) <= h:
            assert bracket(L, x, y) == -bracket(L, y, x)
    for x, y, z in itertools.combinations(B, 3):
        if sum(x.weight()) + sum(y.weight()) + sum(z.weight()) > h:
            continue
        j = bracket(L, x, bracket(L, y, z)) + bracket(L, y, bracket(L, z, x)) + bracket(L, z, bracket(L, x, y))
        assert j.is_zero()


@pytest.mark.parametrize("a", [HYP, AFF, parse_gcm("2,-2,0;-2,2,-1;0,-1,2")])
def test_sl2_commutation(a):
    h = 6 if a.rank == 2 else 4
    L = build_positive_algebra(a, h)
    for x in _basis(L, h - 1):
        if sum(x.weight()) < 2:
            continue
        for i in range(1, a.rank + 1):
            lhs = ad_f(L, i, ad_e(L, i, x)) - ad_e(L, i, ad_f(L, i, x))
            assert lhs == (-a.pairing(x.weight(), i - 1)) * x


@pytest.mark.parametrize("a", [A2, HYP, AFF, parse_gcm("2,-1,0;-1,2,-2;0,-1,2")])
def test_serre_relations(a):
    L = build_positive_algebra(a, 8)
    for i, j in itertools.permutations(range(1, a.rank + 1), 2):
        k = 1 - a.entries[i - 1][j - 1]
        if k + 1 > 8:
            continue
        x = L.generator(j)
        for _ in range(k):
            x = ad_e(L, i, x)
        assert x.is_zero()


@pytest.mark.parametrize("text", ["2,-2;-2,2", "2,-3;-3,2", "2,-1,-1;-1,2,-1;-1,-1,2"])
def test_three_way_dimension_agreement(text):
    a = parse_gcm(text)
    h = 6 if a.rank == 2 else 5
    L = build_positive_algebra(a, h)
    for v in positive_lattice_vectors(a.rank, h):
        assert L.dim(v) == serre_quotient_dimension(a, v) == root_multiplicity(a, v)


def test_non_symmetrizable_fallback():
    a = parse_gcm("2,-1,-1;-2,2,-1;-1,-1,2")
    assert a.symmetrizer is None
    for v in positive_lattice_vectors(3, 4):
        assert contragredient_dimension(a, v) == serre_quotient_dimension(a, v) == root_multiplicity(a, v)


def test_real_root_vectors():
    L = build_positive_algebra(HYP, 8, "ZZ")
    assert real_root_vector(L, (1, 0)) == L.generator(1)
    for g in real_roots_up_to_height(HYP, 8):
        x = real_root_vector(L, g)
        assert x.weight() == g and content(x) == 1
    L2 = build_positive_algebra(A2, 2)
    x = real_root_vector(L2, (1, 1))
    b = bracket(L2, L2.generator(1), L2.generator(2))
    assert x == b or x == -b


def test_real_root_vector_affine_is_primitive():
    # [e1,[e1,e2]] = 2 e_gamma for gamma = 2 alpha_1 + alpha_2
    L = build_positive_algebra(AFF, 4, "ZZ")
    x = real_root_vector(L, (2, 1))
    y = bracket(L, L.generator(1), bracket(L, L.generator(1), L.generator(2)))
    assert content(x) == 1
    assert y == 2 * x or y == -2 * x


def test_s_star_is_automorphism():
    L = build_positive_algebra(HYP, 10)
    B = _basis(L, 4)
    for i in (1, 2):
        for x, y in itertools.combinations(B, 2):
            t = tuple(p + q for p, q in zip(x.weight(), y.weight()))
            ws = [reflect(HYP, i - 1, w) for w in (x.weight(), y.weight(), t)]
            if any(sign(w) < 0 or sum(w) > 10 for w in ws):
                continue
            assert s_star(L, i, bracket(L, x, y)) == bracket(L, s_star(L, i, x), s_star(L, i, y))
        for x in B:
            w = reflect(HYP, i - 1, x.weight())
            if sign(w) > 0 and sum(w) <= 10:
                assert s_star(L, i, s_star(L, i, x), inverse=True) == x


def test_ad_f_examples():
    for m, n in [(3, 3), (4, 3), (5, 4)]:
        a = gcm_from_rank2(m, n)
        L = build_positive_algebra(a, m + 2, "ZZ")
        x = bracket(L, L.generator(1), L.generator(2))
        assert ad_f(L, 1, x) == m * L.generator(2)
        eg = real_root_vector(L, (m, 1))
        assert ad_f(L, 2, eg).is_zero()
        y = ad_f(L, 2, bracket(L, L.generator(2), eg))
        assert y == (m * n - 2) * eg or y == (2 - m * n) * eg


@pytest.mark.parametrize(
    "m, n, p, branch, delta",
    [(3, 3, 5, "p∤m", [1, 1]), (3, 3, 3, "p|m", [3, 2]), (4, 3, 3, "p∤m", [1, 1]), (6, 5, 3, "p|m", [6, 2])],
)
def test_witness(m, n, p, branch, delta):
    rep = lemma54_witness(m, n, p)
    assert rep["ok"] and rep["branch"] == branch and rep["delta"] == delta
    assert rep["nonzero_mod_p"] and rep["coefficient"] % p != 0


def test_witness_preconditions():
    with pytest.raises(PreconditionViolated):
        lemma54_witness(3, 4, 2)
    with pytest.raises(PreconditionViolated):
        lemma54_witness(2, 4, 3)


def test_dump_is_deterministic():
    a = build_positive_algebra(HYP, 4).to_json()
    b = build_positive_algebra(HYP, 4).to_json()
    assert a == b
    assert {"weight": [1, 1], "dim": 1} in a["dimensions"]
