import pytest

from rcablock.blocknbh import block_neighborhood
from rcablock.cells import CellSet
from rcablock.core import TWO_TRACK_PARTIAL_SHIFT, linear_ca, shift, toffoli
from rcablock.errors import NotAdditive, PreconditionFailed
from rcablock.explorer import (SURVEY_HEADER, TripleRecord, additive_group,
                               build_conjecture_instance, check_subtraction_minimal,
                               conjecture_components, enumerate_rcas, read_survey,
                               stretched_toffoli, survey, table_from_index)

C = CellSet


def test_table_from_index():
    assert table_from_index(5, 2, 4).tolist() == [0, 1, 0, 1]
    assert table_from_index(0, 3, 2).tolist() == [0, 0]


def test_enumeration_q2():
    assert [i for i, _ in enumerate_rcas(2, C([0]))] == [1, 2]
    got = dict(enumerate_rcas(2, C([0, 1])))
    assert sorted(got) == [3, 5, 10, 12]
    assert got[5] == shift(1)
    # the XOR rule (table 0110 = index 6) is not reversible
    assert 6 not in got


def test_enumeration_limit_and_skip():
    assert [i for i, _ in enumerate_rcas(2, C([0, 1]), limit=2)] == [3, 5]
    assert [i for i, _ in enumerate_rcas(2, C([0, 1]), skip={3, 10})] == [5, 12]


def test_enumeration_q3_count():
    cas = [f for _, f in enumerate_rcas(3, C([0, 1]))]
    assert len(cas) == 48
    wide = [f for f in cas if len(f.N) == 2]
    assert wide and all(f.N == C([0, 1]) for f in wide)


def test_subtraction_minimality():
    f = linear_ca(TWO_TRACK_PARTIAL_SHIFT)
    # symbol 2a+b maps to s_0 + 2 s_1 mod 4, additive for Z/4 as well as XOR
    assert additive_group(f) in ("mod", "xor")
    assert additive_group(toffoli(1)) is None
    assert check_subtraction_minimal(f)
    for k in (-2, 0, 3):
        assert check_subtraction_minimal(shift(k, 3))
    with pytest.raises(NotAdditive):
        check_subtraction_minimal(toffoli(1))
    # without the precondition the check just reports non-minimality
    assert not check_subtraction_minimal(toffoli(1), require_additive=False)


def test_triple_record_roundtrip():
    rec = TripleRecord(3, 17, C([0, 1]), C([1, 2]), C([0, 1, 2]))
    assert rec.line() == "3 17 0,1 1,2 0,1,2"
    assert TripleRecord.parse(rec.line()) == rec


def test_survey_resume_is_byte_identical(tmp_path):
    full = tmp_path / "full.txt"
    part = tmp_path / "part.txt"
    recs = survey(3, C([0, 1]), path=full)
    assert len(recs) == 4 + 48
    assert full.read_text().startswith(SURVEY_HEADER + "\n")
    text = full.read_text()
    lines = text.splitlines(keepends=True)
    # interrupted run: a few complete lines and a torn one
    part.write_text("".join(lines[:20]) + lines[20][:4])
    again = survey(3, C([0, 1]), path=part)
    assert part.read_text() == text
    assert again == recs
    assert read_survey(part) == recs
    # resuming a complete file changes nothing
    survey(3, C([0, 1]), path=part)
    assert part.read_text() == text


def test_survey_records_sandwich():
    for rec in survey(2, C([-1, 0, 1])):
        assert (rec.n | rec.n_dual) <= rec.bn


def test_stretched_toffoli():
    assert stretched_toffoli(2).N == C([0, 2])
    assert stretched_toffoli(-1).N == C([-1, 0])
    with pytest.raises(PreconditionFailed):
        stretched_toffoli(0)


@pytest.mark.parametrize("x,z", [
    ([0, 1], [0, 1, 2]),
    ([0, 1], [-1, 0, 1]),
    ([0, 1], [0, 1]),
    ([0, 2], [0, 2, 4]),
])
def test_conjecture_instances(x, z):
    f = build_conjecture_instance(x, x, z)
    assert (f.N, f.N_dual, block_neighborhood(f)) == (C(x), C(x), C(z))


def test_conjecture_unpruned():
    f = build_conjecture_instance([0, 1], [0, 1], [0, 1, 2], prune=False)
    assert f.q == 16 and block_neighborhood(f) == C([0, 1, 2])


def test_conjecture_preconditions():
    with pytest.raises(PreconditionFailed):
        conjecture_components(C([0, 1]), C([1, 2]), C([0, 1, 2]))
    with pytest.raises(PreconditionFailed):
        conjecture_components(C([0, 1]), C([0, 1]), C([0, 1, 5]))
    with pytest.raises(PreconditionFailed):
        conjecture_components(C([0, 1]), C([0, 1]), C([1]))
