import itertools
import random
from functools import lru_cache

import pytest

from conftest import AFF, HYP
from kmlab.errors import LeavesPositiveModel, NotClosed, NotGroupLike, PreconditionError
from kmlab.prounip import (
    Subgroup,
    TorusElement,
    TruncatedEnvelope,
    contract_experiment,
    factor,
    filtration_level,
    inverse,
    multiply,
    normal_form,
    single_factor,
    torus_conjugate,
    torus_relation_check_mn,
    weyl_conjugate,
)
from kmlab.rootsys import height, positive_roots_up_to_height, root_key, root_multiplicity


def _partition_count(a, weight):
    """Kostant partitions of weight, each root counted with its multiplicity."""
    roots = [r for r in positive_roots_up_to_height(a, sum(weight)) if all(x <= y for x, y in zip(r, weight))]
    parts = [r for r in roots for _ in range(root_multiplicity(a, r))]

    @lru_cache(maxsize=None)
    def count(k, rest):
        if not any(rest):
            return 1
        if k == len(parts):
            return 0
        total = count(k + 1, rest)
        nr = tuple(x - y for x, y in zip(rest, parts[k]))
        if min(nr) >= 0:
            total += count(k, nr)
        return total

    return count(0, tuple(weight))


def _rand(E, rng, ids=None):
    ids = range(len(E.basis)) if ids is None else ids
    c = [0] * len(E.basis)
    for i in ids:
        c[i] = rng.randrange(E.field.q)
    return E.element(c)


@pytest.fixture(scope="module")
def E():
    return TruncatedEnvelope(HYP, 4, 3)


def test_basis_order(E):
    assert [b.weight for b in E.basis[:3]] == [(1, 0), (0, 1), (1, 1)]
    assert list(E.heights) == sorted(E.heights)


@pytest.mark.parametrize("a, w", [(HYP, (2, 2)), (HYP, (3, 2)), (AFF, (2, 2)), (AFF, (3, 1))])
def test_pbw_counts(a, w):
    E = TruncatedEnvelope(a, sum(w), 3)
    assert E.component_dimension(w) == _partition_count(a, w)


def test_group_axioms(E):
    rng = random.Random(7)
    one = E.identity()
    for _ in range(15):
        g, h, k = (_rand(E, rng) for _ in range(3))
        assert multiply(E, multiply(E, g, h), k) == multiply(E, g, multiply(E, h, k))
        assert multiply(E, g, inverse(E, g)) == one == multiply(E, inverse(E, g), g)
        assert multiply(E, g, one) == g


def test_commutator_of_simple_factors():
    E = TruncatedEnvelope(HYP, 2, 5)
    a, b = 2, 3
    g2, g1 = single_factor(E, 1, b), single_factor(E, 0, a)
    ((idx, c),) = E.bracket_ids(0, 1)
    expect = [0] * len(E.basis)
    expect[0], expect[1], expect[idx] = a, b, (-a * b * c) % 5
    assert multiply(E, g2, g1) == E.element(expect)


def test_normal_form_rejects_non_group_like(E):
    with pytest.raises(NotGroupLike):
        normal_form(E, {(): 1, (0,): 1, (0, 0): 1, (1,): 0})
    with pytest.raises(NotGroupLike):
        normal_form(E, {(): 2})


def test_bijection_small():
    E = TruncatedEnvelope(HYP, 2, 3)
    els = list(E.all_elements())
    assert len(els) == 27
    assert len({E.expand(g) and tuple(sorted(E.expand(g).items())) for g in els}) == 27


def test_torus_is_automorphism(E):
    rng = random.Random(3)
    t = TorusElement((2, 2))
    for _ in range(10):
        g, h = _rand(E, rng), _rand(E, rng)
        assert torus_conjugate(E, t, multiply(E, g, h)) == multiply(E, torus_conjugate(E, t, g), torus_conjugate(E, t, h))
    with pytest.raises(PreconditionError):
        TorusElement((0, 1)).evaluate(HYP, E.field, (1, 0))


def test_filtration_commutator(E):
    rng = random.Random(11)
    for _ in range(10):
        g, h = _rand(E, rng), _rand(E, rng)
        c = multiply(E, multiply(E, g, h), multiply(E, inverse(E, g), inverse(E, h)))
        assert filtration_level(E, c) >= min(4 + 1, filtration_level(E, g) + filtration_level(E, h))
    assert filtration_level(E, E.identity()) == 5


def test_closed_subgroups(E):
    with pytest.raises(NotClosed):
        Subgroup(E, [(1, 0), (0, 1)])
    u = Subgroup(E, [r for r in positive_roots_up_to_height(HYP, 4) if r != (0, 1)])
    assert u.order == 3 ** (len(E.basis) - 1)
    rng = random.Random(5)
    for _ in range(5):
        g, h = _rand(E, rng, u.ids), _rand(E, rng, u.ids)
        assert multiply(E, g, h) in u


def test_factorization():
    E = TruncatedEnvelope(HYP, 3, 3)
    first = Subgroup(E, [(0, 1)])
    second = Subgroup(E, [r for r in positive_roots_up_to_height(HYP, 3) if r != (0, 1)])
    rng = random.Random(2)
    for _ in range(10):
        g = _rand(E, rng)
        g1, g2 = factor(E, g, first, second)
        assert g1 in first and g2 in second
        assert multiply(E, g1, g2) == g


def test_weyl_conjugation():
    E = TruncatedEnvelope(HYP, 4, 3)
    g = single_factor(E, 0, 1)
    back = weyl_conjugate(E, (2,), weyl_conjugate(E, (2,), g), inverse=True)
    assert back == g
    moved = weyl_conjugate(E, (2,), g)
    assert [E.basis[i].weight for i in moved.support()] == [(1, 3)]
    with pytest.raises(LeavesPositiveModel):
        weyl_conjugate(E, (1,), g)


def test_conjugation_preserves_products():
    # s_2 permutes the roots of height <= 2 away from alpha_2 into height <= 7
    E = TruncatedEnvelope(HYP, 7, 3)
    ids = [E.id_of[((1, 0), 0)]]
    rng = random.Random(9)
    for _ in range(5):
        g, h = _rand(E, rng, ids), _rand(E, rng, ids)
        lhs = weyl_conjugate(E, (2,), multiply(E, g, h))
        assert lhs == multiply(E, weyl_conjugate(E, (2,), g), weyl_conjugate(E, (2,), h))


def _alt_order(weight, index):
    return (height(weight), tuple(weight), -index)


def test_order_independence():
    E1 = TruncatedEnvelope(HYP, 5, 3)
    E2 = TruncatedEnvelope(HYP, 5, 3, order=_alt_order)
    assert [b.weight for b in E2.basis[:2]] == [(0, 1), (1, 0)]
    for E in (E1, E2):
        g = E.element({((1, 0), 0): 1})
        rec = contract_experiment(E, (1, 2), g, 2)
        assert rec.levels == (1, 6, 6)
        g = E.element({((1, 1), 0): 1, ((2, 1), 0): 2})
        assert contract_experiment(E, (1, 2), g, 1).levels[0] == 2
    # the same abstract product under both orders: compare on the commuting part
    for E in (E1, E2):
        a = E.element({((1, 0), 0): 1})
        b = E.element({((0, 1), 0): 1})
        c = multiply(E, multiply(E, a, b), multiply(E, inverse(E, a), inverse(E, b)))
        assert [E.basis[i].weight for i in c.support()][0] == (1, 1)


def test_contraction_levels():
    E = TruncatedEnvelope(HYP, 10, 3)
    rec = contract_experiment(E, (1, 2), E.element({((1, 0), 0): 1}), 2)
    assert rec.levels == (1, 11, 11)
    assert rec.first_flag == 1 and rec.consistent()
    assert rec.to_csv().splitlines()[:2] == ["l,level,escaped", "0,1,false"]


def test_torus_relation():
    rep = torus_relation_check_mn(3, 3, 5, 5, 3)
    assert rep["result"] is True
    rep = torus_relation_check_mn(3, 3, 4, 3, 3)
    assert rep["result"] is False
    assert rep["roots"][0]["root"] == 2 and rep["roots"][0]["witness"] == "2"
    assert rep["roots"][1]["match"]
    with pytest.raises(PreconditionError):
        torus_relation_check_mn(1, 3, 3, 3, 3)
