import itertools

import numpy as np
import pytest

from rcablock.cells import CellSet
from rcablock.core import LocalRule, toffoli, TWO_TRACK_PARTIAL_SHIFT, linear_ca, shift
from rcablock.errors import NotInjective, RadiusCapExceeded
from rcablock.reversibility import (check_witness, is_injective, periodic_injective,
                                    synthesize_inverse)


def all_rules(q, window):
    k = len(window)
    for table in itertools.product(range(q), repeat=q**k):
        yield LocalRule(q, window, table)


def small_rules():
    yield from all_rules(2, [0])
    yield from all_rules(2, [0, 1])
    yield from all_rules(3, [0])
    yield from all_rules(2, [-1, 1])


def test_oracle_agreement_q2():
    counts = {True: 0, False: 0}
    for rule in small_rules():
        v = is_injective(rule)
        counts[v.injective] += 1
        if v.injective:
            # injective on the line implies injective on every ring
            assert all(periodic_injective(rule, p) for p in range(1, 7))
        else:
            assert check_witness(rule, v.witness)
    assert counts[True] and counts[False]


def test_oracle_agreement_q3_window2():
    # 3^9 tables; balanced ones are the only injective candidates
    rng = np.random.default_rng(0)
    tables = [rng.integers(0, 3, 9) for _ in range(300)]
    tables += [rng.permutation(np.repeat(np.arange(3), 3)) for _ in range(300)]
    seen = {True: 0, False: 0}
    for t in tables:
        rule = LocalRule(3, [0, 1], t)
        v = is_injective(rule)
        seen[v.injective] += 1
        if v.injective:
            assert all(periodic_injective(rule, p) for p in range(1, 7))
        else:
            assert check_witness(rule, v.witness)
    assert seen[True] and seen[False]


def test_injective_count_q2_window2():
    # the four injective rules are identity, negation and the two shifts
    good = [i for i, r in enumerate(all_rules(2, [0, 1])) if is_injective(r)]
    assert good == [3, 5, 10, 12]


def test_xor_witness():
    rule = LocalRule(2, [0, 1], [0, 1, 1, 0])
    v = is_injective(rule)
    assert not v and check_witness(rule, v.witness)


def test_check_witness_rejects_bad_witnesses():
    rule = LocalRule(2, [0, 1], [0, 1, 1, 0])
    same = (((0,), (0,), (0,)), ((0,), (0,), (0,)))
    assert not check_witness(rule, same)
    different_image = (((0,), (0,), (0,)), ((0,), (1,), (0,)))
    assert not check_witness(rule, different_image)


def test_toffoli_inverse_synthesis():
    T = toffoli(1)
    inv = synthesize_inverse(T.forward, T.alphabet)
    assert inv.offsets == CellSet([-1, 0])
    assert np.array_equal(inv.table, T.inverse.table)


@pytest.mark.parametrize("f", [toffoli(2), toffoli(3), shift(4), shift(-2, 3),
                               linear_ca(TWO_TRACK_PARTIAL_SHIFT)], ids=repr)
def test_synthesis_recovers_stored_inverse(f):
    assert synthesize_inverse(f.forward, f.alphabet) == f.inverse


def test_synthesis_errors():
    with pytest.raises(NotInjective) as err:
        synthesize_inverse(LocalRule(2, [0, 1], [0, 1, 1, 0]))
    assert err.value.witness is not None
    # T_3 needs an inverse window reaching cell -3
    with pytest.raises(RadiusCapExceeded):
        synthesize_inverse(toffoli(3).forward, max_radius=2)
