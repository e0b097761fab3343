import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from discwaves import pgm


def test_plain_format():
    data = pgm.encode(np.array([[0, 1], [2, 3]]), 3)
    assert data == b"P2\n2 2\n3\n0 1\n2 3\n"


def test_plain_lines_are_short():
    data = pgm.encode(np.full((3, 90), 7), 9)
    assert max(len(line) for line in data.split(b"\n")) <= 70


def test_raw_above_limit():
    values = np.arange(101 * 100).reshape(101, 100) % 5
    data = pgm.encode(values, 4)
    assert data.startswith(b"P5\n100 101\n4\n")
    assert len(data) == len(b"P5\n100 101\n4\n") + values.size
    assert pgm.encode(np.zeros((100, 100), int), 1).startswith(b"P2")


@given(arrays(np.int64, st.tuples(st.integers(1, 120), st.integers(1, 120)), elements=st.integers(0, 9)))
def test_round_trip(values):
    assert np.array_equal(pgm.decode(pgm.encode(values, 9)), values)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        pgm.encode(np.array([1, 2]), 2)
    with pytest.raises(ValueError):
        pgm.encode(np.array([[5]]), 4)
    with pytest.raises(ValueError):
        pgm.encode(np.array([[0]]), 0)
    with pytest.raises(ValueError):
        pgm.decode(b"P6 nope")
