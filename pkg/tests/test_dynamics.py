import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A2, AFF, HYP, HYP43
from kmlab import linalg
from kmlab.dynamics import (
    check_monotone,
    complement_via_inversions,
    contraction_schedule,
    detect_period,
    height_schedule,
    orbit,
    partition_psi,
    sign_orbit,
)
from kmlab.errors import DigitBudgetExceeded, ImageEscapedPositive, PreconditionError
from kmlab.rootsys import height, positive_roots_up_to_height, real_roots_up_to_height, sign
from kmlab.weyl import WeylElement, coxeter_element, inversion_set


def _power_by_reflections(a, alpha, l):
    """omega^l alpha by applying s_2 then s_1, l times, one reflection at a time."""
    from kmlab.weyl import apply_reflection

    v = tuple(alpha)
    for _ in range(l):
        for i in reversed(range(1, a.rank + 1)):
            v = apply_reflection(a, i, v)
    return v


def test_sign_orbit_affine_example():
    tr = sign_orbit(AFF, coxeter_element(AFF), (1, 0), 3)
    assert tr.sequence() == [-1, -1, -1, 1, 1, 1, 1]
    assert check_monotone(tr)


def test_sign_orbit_trivial_cases():
    ident = WeylElement.from_word(HYP, ())
    assert set(sign_orbit(HYP, ident, (1, 2), 4).values.values()) == {1}
    assert set(sign_orbit(HYP, coxeter_element(HYP), (1, 1), 5).values.values()) == {1}


def test_monotone_negative():
    res = check_monotone({-1: 1, 0: -1, 1: 1})
    assert not res and res.witness == (0, 1)


def test_periods():
    assert detect_period(AFF, coxeter_element(AFF), (1, 1), 5) == 1
    assert detect_period(A2, coxeter_element(A2), (1, 0), 10) == 3
    w = coxeter_element(HYP)
    assert all(detect_period(HYP, w, r, 30) is None for r in positive_roots_up_to_height(HYP, 10))


def test_height_schedules():
    w = coxeter_element(HYP)
    assert height_schedule(HYP, w, (1, 0), 3).heights == (1, 11, 76, 521)
    assert height_schedule(AFF, coxeter_element(AFF), (1, 1), 5).heights == (2,) * 6
    ident = WeylElement.from_word(HYP, ())
    assert height_schedule(HYP, ident, (2, 1), 4).heights == (3,) * 5
    assert orbit(w, (1, 0), 3) == [(1, 0), (8, 3), (55, 21), (377, 144)]
    assert orbit(w, (0, 1), 2, -1) == [(0, 1), (3, 8), (21, 55)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(1, 0), (0, 1), (1, 1), (2, 1), (1, 3)]), st.integers(0, 6))
def test_matrix_power_matches_reflection_steps(alpha, l):
    w = coxeter_element(HYP)
    assert w.power_act(alpha, l) == _power_by_reflections(HYP, alpha, l)


def test_partition_small():
    part = partition_psi(HYP, 3, 20)
    assert (0, 1) in part.complement
    assert part.certificates[(0, 1)] == {"kind": "escaped", "l": 1}
    assert (1, 0) in part.psi and (1, 1) in part.psi
    assert coxeter_element(HYP).act((0, 1)) == (-3, -1)
    with pytest.raises(PreconditionError):
        partition_psi(AFF, 3, 20)


@pytest.mark.parametrize("a", [HYP, HYP43])
def test_partition_invariants(a):
    part = partition_psi(a, 6, 60)
    everything = set(positive_roots_up_to_height(a, 6))
    ps, cs, us = part.psi.as_set(), part.complement.as_set(), part.undecided.as_set()
    assert ps | cs | us == everything
    assert not (ps & cs) and not (ps & us) and not (cs & us)
    assert not us
    assert part.closedness == {"psi": True, "complement": True}
    assert all(part.certificates[r]["kind"] == "imaginary" for r in everything - set(real_roots_up_to_height(a, 6)))
    assert part.psi_chain[-1].as_set() == ps


def test_complement_via_inversions():
    inv = inversion_set(HYP, coxeter_element(HYP)).as_set()
    assert complement_via_inversions(HYP, 12, 0).as_set() == {r for r in inv if height(r) <= 12}
    assert complement_via_inversions(HYP, 12, 10).as_set() == partition_psi(HYP, 12, 60).complement.as_set()
    assert complement_via_inversions(A2, 5, 5).as_set() == set(real_roots_up_to_height(A2, 5))


def test_psi_never_escapes():
    w = coxeter_element(HYP)
    part = partition_psi(HYP, 8, 60)
    for r in part.psi:
        v = r
        for _ in range(60):
            v = linalg.matvec(w.matrix, v)
            assert sign(v) > 0


def test_contraction_schedules():
    s = contraction_schedule(HYP, [(1, 0)], 1, 3)
    assert s.n == (1, 11, 76, 521)
    assert contraction_schedule(HYP, [(0, 1)], -1, 2).n == (1, 11, 76)
    s2 = contraction_schedule(HYP, [(1, 0), (1, 1)], 1, 4)
    assert s2.n[0] == 1
    assert s2.n[1] == 7  # omega(1,1) = (8,3) + (-3,-1)
    assert s2.first_exceeding(10) == 2
    with pytest.raises(ImageEscapedPositive):
        contraction_schedule(HYP, [(0, 1)], 1, 2)


def test_digit_budget(monkeypatch):
    monkeypatch.setenv("KMLAB_MAX_DIGITS", "5")
    with pytest.raises(DigitBudgetExceeded):
        orbit(coxeter_element(HYP), (1, 0), 20)
