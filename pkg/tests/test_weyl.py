import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A2, AFF, HYP, gcms
from kmlab import linalg
from kmlab.errors import NonReducedWord, PreconditionError
from kmlab.gcm import parse_gcm
from kmlab.rootsys import height, real_roots_up_to_height, sign
from kmlab.weyl import (
    WeylElement,
    apply_reflection,
    check_power_reduced,
    coxeter_element,
    coxeter_matrix_closed_form,
    coxeter_report,
    inversion_set,
    inversions_of_word,
    length,
    word_to_matrix,
)


def test_reflection_examples():
    assert apply_reflection(A2, 1, (0, 1)) == (1, 1)
    assert apply_reflection(HYP, 2, (0, 1)) == (0, -1)
    assert apply_reflection(AFF, 2, (1, 0)) == (1, 2)
    with pytest.raises(PreconditionError):
        apply_reflection(A2, 3, (1, 0))


def test_word_matrices():
    assert word_to_matrix(A2, ()) == [[1, 0], [0, 1]]
    assert word_to_matrix(A2, (1,)) == [[-1, 1], [0, 1]]
    w = WeylElement.from_word(HYP, (1, 2))
    assert (w ** 2).matrix == WeylElement.from_word(HYP, (1, 2, 1, 2)).matrix


def test_coxeter_examples():
    assert coxeter_matrix_closed_form(AFF) == [[3, -2], [2, -1]]
    assert coxeter_matrix_closed_form(HYP) == [[8, -3], [3, -1]]
    assert coxeter_report(AFF)["equal"]


@given(gcms(2, 5, -6))
def test_closed_form_matches_composition(a):
    m = coxeter_matrix_closed_form(a)
    assert m == word_to_matrix(a, range(1, a.rank + 1))
    assert linalg.det(m) == (-1) ** a.rank


def test_inversion_examples():
    assert set(inversion_set(A2, (1,)).roots) == {(1, 0)}
    assert set(inversion_set(AFF, (1, 2)).roots) == {(0, 1), (1, 2)}
    assert set(inversion_set(HYP, (1, 2)).roots) == {(0, 1), (1, 3)}
    with pytest.raises(NonReducedWord) as info:
        inversion_set(HYP, (1, 1))
    assert info.value.pair == (1, 1) or info.value.pair[1] == 2


def _inversions_by_sign(a, word, h):
    w = WeylElement.from_word(a, word)
    return {r for r in real_roots_up_to_height(a, h) if sign(w.act(r)) < 0}


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 2), max_size=6))
def test_inversions_match_sign_flips(word):
    inv = inversions_of_word(HYP, word)
    h = max([height(r) for r in inv], default=1)
    assert inv == _inversions_by_sign(HYP, word, h)
    assert length(HYP, word) == len(inv)


def test_random_words_rank3():
    a = parse_gcm("2,-2,-1;-2,2,-1;-1,-1,2")
    rng = random.Random(3)
    for _ in range(50):
        word = [rng.randint(1, 3) for _ in range(rng.randint(0, 7))]
        inv = inversions_of_word(a, word)
        h = max([height(r) for r in inv], default=1)
        assert inv == _inversions_by_sign(a, word, h)


def test_power_lengths():
    assert check_power_reduced(AFF, 5).table == tuple((l, 2 * l) for l in range(1, 6))
    assert check_power_reduced(HYP, 5).ok
    allm2 = parse_gcm("2,-2,-2;-2,2,-2;-2,-2,2")
    res = check_power_reduced(allm2, 3)
    assert res.table == ((1, 3), (2, 6), (3, 9))
    fin = check_power_reduced(A2, 4)
    assert not fin and fin.offending == 2


def test_inverse_element():
    w = coxeter_element(HYP)
    assert linalg.matmul(w.matrix, w.inverse_matrix) == [[1, 0], [0, 1]]
    assert w.inverse().matrix == w.inverse_matrix
