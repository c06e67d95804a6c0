import dataclasses

import pytest

from rcablock.cells import CellSet
from rcablock.core import TWO_TRACK_PARTIAL_SHIFT, identity, linear_ca, shift, toffoli
from rcablock.errors import FormatError, PreconditionFailed, TooLarge
from rcablock.witness import (format_witness, load_witness, parse_witness, save_witness,
                              semilocalize, verify_witness)

T = toffoli(1)
C = CellSet


def test_toffoli_witness_reconstructs_every_configuration():
    w = semilocalize(T, C.interval(0, 2), C([0]), ring_period=6)
    assert verify_witness(T, w) == 4**6
    # E is whatever the class computation yields; it must be consistent
    assert w.e_size == len(set(w.alpha))
    assert len(w.g_table) == 4**3 and len(w.h_table) == 4**5


def test_identity_witness_is_trivial():
    w = semilocalize(identity(2), C([0]), C([0]), ring_period=4)
    assert w.e_size == 1 and verify_witness(identity(2), w) == 16


def test_linear_witness():
    f = linear_ca(TWO_TRACK_PARTIAL_SHIFT)
    w = semilocalize(f, C([0, 1, 2]), C([1]), ring_period=6)
    assert verify_witness(f, w) == 4**6


def test_roundtrip(tmp_path):
    w = semilocalize(T, C.interval(0, 2), C([0]), ring_period=6)
    text = format_witness(w)
    assert parse_witness(text) == w
    path = tmp_path / "w.txt"
    save_witness(w, path)
    assert load_witness(path) == w
    assert format_witness(load_witness(path)) == text


def test_semilocalize_rejects_failing_split():
    with pytest.raises(PreconditionFailed):
        semilocalize(T, C([0, 1]), C([0]), ring_period=6)
    with pytest.raises(PreconditionFailed):
        semilocalize(T, C([0, 1, 2]), C([0]), ring_period=3)
    with pytest.raises(PreconditionFailed):
        semilocalize(shift(-1), C([-1]), C([0]), ring_period=4)
    with pytest.raises(TooLarge):
        semilocalize(T, C.interval(0, 2), C([0]), ring_period=6, max_configs=100)


def test_tampered_witness_is_rejected():
    w = semilocalize(T, C.interval(0, 2), C([0]), ring_period=6)
    g = list(w.g_table)
    g[1], g[2] = g[2], g[1]
    with pytest.raises(PreconditionFailed):
        verify_witness(T, dataclasses.replace(w, g_table=tuple(g)))
    with pytest.raises(PreconditionFailed):
        verify_witness(T, dataclasses.replace(w, alpha=(0,) * w.e_size))
    with pytest.raises(PreconditionFailed):
        verify_witness(shift(1), w)


def test_parse_errors():
    with pytest.raises(FormatError):
        parse_witness("nonsense\n")
    with pytest.raises(FormatError):
        parse_witness("witness-format 1\nalphabet 2\nring 3\n")
