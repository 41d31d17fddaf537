import itertools

import pytest
from hypothesis import given

from conftest import A2, AFF, HYP, gcms
from kmlab import linalg
from kmlab.errors import DecomposableMatrix, InvalidGCM, MalformedInput
from kmlab.gcm import GCM, MatrixType, classify_type, is_indecomposable, parse_gcm, report, triangular_split


def test_parse_round_trip():
    a = parse_gcm(" 2, -3 ; -3, 2 ")
    assert a.entries == ((2, -3), (-3, 2))
    assert parse_gcm(a.to_text()) == a


@pytest.mark.parametrize(
    "text, axiom, entry",
    [
        ("2,-1;0,2", "zero-pattern", (1, 2)),
        ("3,-1;-1,2", "diagonal", (1, 1)),
        ("2,1;1,2", "nonpositive", (1, 2)),
    ],
)
def test_axiom_violations_are_named(text, axiom, entry):
    with pytest.raises(InvalidGCM) as info:
        parse_gcm(text)
    assert info.value.axiom == axiom
    assert info.value.entry == entry


@pytest.mark.parametrize("text", ["2,-1;-1", "2,x;-1,2", ""])
def test_malformed(text):
    with pytest.raises(MalformedInput):
        parse_gcm(text)


def test_indecomposable():
    assert is_indecomposable(A2)
    assert is_indecomposable(HYP)
    assert not is_indecomposable(parse_gcm("2,0;0,2"))
    with pytest.raises(DecomposableMatrix):
        classify_type(parse_gcm("2,0;0,2"))


def test_trichotomy_examples():
    assert classify_type(A2) is MatrixType.FINITE
    assert classify_type(AFF) is MatrixType.AFFINE
    assert classify_type(HYP) is MatrixType.INDEFINITE
    assert classify_type(parse_gcm("2,-1,0;-1,2,-1;0,-1,2")) is MatrixType.FINITE
    assert classify_type(parse_gcm("2,-1,-1;-1,2,-1;-1,-1,2")) is MatrixType.AFFINE
    assert classify_type(parse_gcm("2,-4;-1,2")) is MatrixType.AFFINE


def test_triangular_split_examples():
    assert triangular_split(AFF) == ([[1, -2], [0, 1]], [[1, 0], [-2, 1]])
    assert triangular_split(HYP) == ([[1, -3], [0, 1]], [[1, 0], [-3, 1]])


def test_report_shape():
    assert report(HYP) == {"matrix": [[2, -3], [-3, 2]], "indecomposable": True, "type": "indefinite"}


def _rank2_type(a):
    d = 4 - a[0, 1] * a[1, 0]
    return MatrixType.FINITE if d > 0 else MatrixType.AFFINE if d == 0 else MatrixType.INDEFINITE


@given(gcms(2, 2, -6))
def test_rank2_classification_matches_determinant(a):
    if not is_indecomposable(a):
        return
    assert classify_type(a) is _rank2_type(a)


@given(gcms(2, 4))
def test_split_sums_to_matrix(a):
    a1, a2 = triangular_split(a)
    n = a.rank
    assert [[a1[i][j] + a2[i][j] for j in range(n)] for i in range(n)] == a.to_list()


@given(gcms(2, 4))
def test_type_is_invariant_under_relabelling(a):
    if not is_indecomposable(a):
        return
    n = a.rank
    t = classify_type(a)
    for perm in itertools.permutations(range(n)):
        b = GCM(tuple(tuple(a.entries[perm[i]][perm[j]] for j in range(n)) for i in range(n)))
        assert classify_type(b) is t


@given(gcms(2, 4))
def test_symmetrizer(a):
    d = a.symmetrizer
    if d is None:
        return
    n = a.rank
    assert all(d[i] * a.entries[i][j] == d[j] * a.entries[j][i] for i in range(n) for j in range(n))


def test_bareiss_matches_fraction_elimination():
    m = [[2, -3, 0], [-1, 2, -5], [0, -2, 2]]
    inv = linalg.inverse(m)
    prod = linalg.matmul(m, inv)
    assert prod == linalg.identity(3)
    assert linalg.det(m) == 2 * (4 - 10) + 3 * (-2)
