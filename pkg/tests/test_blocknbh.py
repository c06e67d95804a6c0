import random

import pytest

from _population import (oracle_condition_three, oracle_semilocalizable, population,
                         sample_oracle_instances)
from rcablock.blocknbh import (block_neighborhood, check_band, check_words, composition_bound,
                               condition_three, individual_bound, is_dual_semicausal,
                               is_semicausal, is_semilocalizable, iterate_bound, iterate_report,
                               naive_composition_holds, verify_all_bounds)
from rcablock.cells import CellSet
from rcablock.core import (TOFFOLI_ALPHABET, TWO_TRACK_PARTIAL_SHIFT, compose, dual, identity,
                           linear_ca, reflect, shift, toffoli)
from rcablock.errors import InputError, TooLarge

T = toffoli(1)
C = CellSet


def test_toffoli_block_neighborhood():
    assert block_neighborhood(T) == C([0, 1, 2])
    assert individual_bound(T) == C.interval(-1, 2)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_stretched_block_neighborhood(l):
    assert block_neighborhood(toffoli(l)) == C([0, l, 2 * l])


def test_reflected_toffoli():
    assert block_neighborhood(reflect(T)) == C([-2, -1, 0])


def test_toffoli_condition_three():
    assert not condition_three(T, C([0, 1]), C([0]))
    assert condition_three(T, C([0, 1, 2]), C([0]))
    # with the whole right half line the condition holds as well
    assert is_semilocalizable(T, C.interval(0, 6), C([0]))


def test_counterexample_words():
    a = [TOFFOLI_ALPHABET.join((0, 0))] * 2
    b = [TOFFOLI_ALPHABET.join((0, 0)), TOFFOLI_ALPHABET.join((1, 1))]
    u = {2: TOFFOLI_ALPHABET.join((1, 0))}
    res = check_words(T, C([0, 1]), C([0]), a, b, u, {})
    assert res.hypothesis and not res.conclusion and res.violates
    assert res.differing == C([1])
    # swapping the roles of the contexts gives no violation
    assert not check_words(T, C([0, 1]), C([0]), a, b, {}, u).violates


def test_check_words_validation():
    with pytest.raises(InputError):
        check_words(T, C([0, 1]), C([0]), [0], [0, 0], {}, {})
    with pytest.raises(InputError):
        check_words(T, C([0, 1]), C([0]), [0, 0], [0, 0], {1: 0}, {})


def test_check_band():
    band = check_band(T, C([0, 1]), C([0]))
    assert band.out_band == C([-1, 1])
    assert band.in_band == C([-1, 2])


def test_semicausality():
    assert is_semicausal(T, C([0, 1]), C([0]))
    assert not is_semicausal(T, C([0]), C([0]))
    f = linear_ca(TWO_TRACK_PARTIAL_SHIFT)
    assert is_dual_semicausal(f, C([-1, 0]), C([0]))
    assert not is_dual_semicausal(f, C([0, 1]), C([0]))


def test_linear_and_shift_minimal():
    f = linear_ca(TWO_TRACK_PARTIAL_SHIFT)
    assert block_neighborhood(f) == C([-1, 0, 1])
    for k in range(-3, 4):
        assert block_neighborhood(shift(k, 3)) == C([k])
    assert block_neighborhood(identity(5)) == C([0])


def test_cap_raises():
    with pytest.raises(TooLarge):
        condition_three(T, C([0, 1]), C([0]), max_evals=4)


def test_verify_all_bounds_toffoli():
    rep = verify_all_bounds(T)
    assert rep.bn == C([0, 1, 2]) and rep.all_pass and rep.minimal is False


def test_composition_bound_small():
    rep = composition_bound([shift(1, 4), T])
    assert rep.bn == block_neighborhood(compose(T, shift(1, 4)))
    assert rep.all_pass
    assert [s["k"] for s in rep.summands] == [1, 2]
    with pytest.raises(InputError):
        composition_bound([])
    with pytest.raises(InputError):
        composition_bound([shift(1), T])


def test_iterate_bound_values():
    assert iterate_bound(T, 1) == C.interval(-1, 2)
    assert iterate_bound(T, 2) == C.interval(-1, 3)
    # one-sided neighborhoods give negative radii
    assert iterate_bound(shift(2), 1) == C([2])
    assert iterate_bound(shift(2), 3) == C([6])
    with pytest.raises(InputError):
        iterate_bound(T, 0)


def test_iterate_report_k1():
    rep = iterate_report(T, 1)
    assert rep.bn == C([0, 1, 2]) and rep.all_pass


# -- agreement with the widened-window oracle ---------------------------------

def test_band_reduction_matches_oracle():
    inst = sample_oracle_instances(60, seed=11)
    verdicts = set()
    for f, x, y in inst:
        got = condition_three(f, x, y)
        verdicts.add(got)
        assert got == oracle_condition_three(f, x, y), (f, x, y)
    assert verdicts == {True, False}


def test_widening_does_not_change_oracle():
    for f, x, y in sample_oracle_instances(15, seed=5, max_cost=1 << 11):
        assert oracle_condition_three(f, x, y, 1) == oracle_condition_three(f, x, y, 2)


@pytest.mark.parametrize("f", [T, linear_ca(TWO_TRACK_PARTIAL_SHIFT)], ids=repr)
def test_bn_against_oracle(f):
    bn = block_neighborhood(f)
    assert oracle_semilocalizable(f, bn, C([0]))
    for c in bn:
        assert not oracle_semilocalizable(f, bn.without([c]), C([0]))


# -- structural properties ----------------------------------------------------

POP = population()


@pytest.mark.parametrize("f", POP, ids=repr)
def test_sandwich_and_self_duality(f):
    bn = block_neighborhood(f)
    assert (f.N | f.N_dual) <= bn <= individual_bound(f)
    assert block_neighborhood(dual(f)) == bn
    # BN commutes with translation
    assert block_neighborhood(compose(shift(2, f.q), f)) == bn.shifted(2)


def test_naive_composition_small_sample():
    rng = random.Random(7)
    q3 = [f for f in POP if f.q == 3]
    for _ in range(40):
        assert naive_composition_holds(rng.choice(q3), rng.choice(q3))
