"""Exact bi-infinite shift points: indexing, shifting, metric."""

import pytest

from symshadow.sft import TransitionMatrix
from symshadow.shiftspace import ShiftPoint, cylinder_contains, word_radius


def test_cycle_point_coordinates():
    p = ShiftPoint.from_cycle((0, 1))
    assert [p[i] for i in range(-4, 4)] == [0, 1, 0, 1, 0, 1, 0, 1]
    q = ShiftPoint.from_cycle((0, 1), phase=1)
    assert [q[i] for i in range(-2, 2)] == [1, 0, 1, 0]


def test_shift_moves_coordinates():
    p = ShiftPoint((0,), (1, 1), (0,), pos=0)
    assert p[0] == 1 and p[2] == 0
    s = p.shift(1)
    assert s[0] == p[1] and s[-1] == p[0] and s[1] == p[2]
    assert p.shift(3).shift(-3).equals(p)


def test_distance_is_two_power_of_agreement():
    p = ShiftPoint.from_cycle((0, 1))
    q = ShiftPoint((1, 0), (0, 0), (0, 1), pos=-1)  # agrees near 0, breaks outside
    k = p.agreement_radius(q)
    assert p.distance(q) == 2.0 ** (-k)
    assert p.distance(p.shift(2)) == 0.0  # period-2 point: shift by 2 is identity


def test_equality_of_different_presentations():
    a = ShiftPoint.from_cycle((0, 1, 0, 1))
    b = ShiftPoint.from_cycle((0, 1))
    assert a.equals(b) and a == b
    c = ShiftPoint.from_cycle((0, 1), phase=1)
    assert not a.equals(c)


def test_homoclinic_like_point_tails():
    q = ShiftPoint((1, 0), (), (0, 1), pos=0)  # ...1010 . 0101...
    assert [q[i] for i in range(-4, 4)] == [1, 0, 1, 0, 0, 1, 0, 1]
    p = ShiftPoint.from_cycle((0, 1))
    assert q.shift(10).distance(p) < 2.0 ** -8  # forward tail falls into O(p)


def test_cylinder_contains_and_admissibility():
    gm = TransitionMatrix.golden_mean()
    q = ShiftPoint((0,), (0, 1), (0,), pos=0)
    assert cylinder_contains(q, (0, 1))
    assert not cylinder_contains(q, (1, 1))
    assert q.is_admissible(gm)
    bad = ShiftPoint((0,), (1, 1), (0,), pos=0)
    assert not bad.is_admissible(gm)


def test_centered_word():
    q = ShiftPoint((1, 0), (), (0, 1), pos=0)
    assert q.centered_word(3) == "010.010"


def test_word_radius():
    assert word_radius(1.0) == 0
    assert word_radius(0.5) == 1
    assert word_radius(0.25) == 2
    assert word_radius(0.3) == 2
    with pytest.raises(ValueError):
        word_radius(0.0)
    with pytest.raises(ValueError):
        word_radius(2.0)
