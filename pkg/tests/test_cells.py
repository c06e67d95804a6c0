import pytest
from hypothesis import given, strategies as st

from rcablock.cells import (CellSet, hull_interval, interval, intersect, minkowski_diff,
                            minkowski_sum, negate, union)

small_sets = st.frozensets(st.integers(-6, 6), max_size=5).map(CellSet)


def test_sum_and_difference():
    a = CellSet([0, 1])
    assert a - a + a == CellSet.interval(-1, 2)
    assert minkowski_sum(a, CellSet([10])) == CellSet([10, 11])
    assert minkowski_diff(CellSet([0]), a) == CellSet([-1, 0])


def test_empty_sum_is_empty():
    assert CellSet([1, 2]) + CellSet() == CellSet()
    assert CellSet() - CellSet([3]) == CellSet()


def test_iterate_interval_arithmetic():
    # alpha=0, beta=1, gamma=0, delta=1, k=2
    alpha, beta, gamma, delta, k = 0, 1, 0, 1, 2
    lo = -(k + 1) * max(alpha, gamma) - min(beta, delta)
    hi = (k + 1) * max(beta, delta) + min(alpha, gamma)
    assert interval(lo, hi) == CellSet.interval(-1, 3)


def test_helpers_and_ordering():
    a, b = CellSet([3, 1, 1]), CellSet([2, 3])
    assert list(a) == [1, 3]
    assert union(a, b) == CellSet([1, 2, 3])
    assert intersect(a, b) == CellSet([3])
    assert negate(a) == CellSet([-3, -1])
    assert hull_interval(a) == CellSet([1, 2, 3])
    assert a.without(b) == CellSet([1])
    assert str(a) == "{1,3}" and a.csv() == "1,3"
    assert CellSet.interval(0, 2).is_interval() and not a.is_interval()
    assert CellSet().hull() == CellSet()


@pytest.mark.parametrize("text,cells", [
    ("0,1", [0, 1]), ("{0,1}", [0, 1]), ("0..2", [0, 1, 2]), ("-1..1,4", [-1, 0, 1, 4]),
    ("{}", []), (" -2 ", [-2]),
])
def test_parse(text, cells):
    assert CellSet.parse(text) == CellSet(cells)


@given(small_sets, small_sets, small_sets)
def test_minkowski_laws(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a - b == a + (-b)
    assert a + (b | c) == (a + b) | (a + c)
    if a and b:
        assert (a + b).min == a.min + b.min and (a + b).max == a.max + b.max


@given(small_sets, small_sets)
def test_subset_relations(a, b):
    assert (a & b) <= a <= (a | b)
    assert (a <= b) == set(a).issubset(set(b))
