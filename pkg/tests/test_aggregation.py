import random
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from discwaves.aggregation import (
    AggregationError, LineFamily, aggregate_field, antimoire_gradient, banded_labeling,
    builtin_table, custom_pattern, fit_fringe_gradient, fringe_width, moire_gradient,
    parse_scenario, parse_table,
)
from discwaves.broadcast import Window, fill_window, propagate_sequence

from fringes import WINDOW_HALF, random_pair

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def test_builtin_examples():
    moire = builtin_table("moire")
    assert (moire(0, 0), moire(0, 2), moire(1, 2)) == ("a", "c", "b")
    anti = builtin_table("antimoire")
    assert (anti(1, 3), anti(2, 3)) == ("a", "b")
    mod2 = builtin_table("antimoire_mod2")
    assert (mod2(0, 3), mod2(1, 1)) == ("a", "b")
    with pytest.raises(AggregationError, match="unknown table"):
        builtin_table("plaid")


def test_builtin_table_structure():
    moire, anti = builtin_table("moire"), builtin_table("antimoire")
    wrap = {}
    for i in range(4):
        for j in range(4):
            d = min(abs(i - j), 4 - abs(i - j))
            assert wrap.setdefault(d, moire(i, j)) == moire(i, j)
            assert anti(i, j) == "abcd"[(i + j) % 4]
    assert len(set(wrap.values())) == 3


def test_table_validation():
    with pytest.raises(AggregationError, match="aggregation table must be symmetric"):
        parse_table(["ab", "aa"])
    with pytest.raises(AggregationError, match="square"):
        parse_table(["ab", "b"])
    with pytest.raises(AggregationError, match="not declared"):
        parse_table(["ab", "bc"], symbols=["a", "b"])
    t = parse_table(["x y", "y x"], symbols=["y", "x"])
    assert t.index_array().tolist() == [[1, 0], [0, 1]]


def test_same_labeling_gives_table_diagonal():
    w = Window.sized(40, 30)
    lab = fill_window((2,), (20, 15), 4, w)
    field = aggregate_field(lab, lab, builtin_table("moire"))
    assert set(np.unique(field.cells)) == {0}
    assert field.symbol_at((3, 3)) == "a"


def test_aggregation_is_symmetric():
    w = Window.sized(60, 40)
    a = fill_window((8,), (15, 20), 7, w)
    b = fill_window((5, 13), (45, 20), 7, w)
    table = parse_scenario((SCENARIOS / "disc_r8_r8.txt").read_text()).table
    assert aggregate_field(a, b, table) == aggregate_field(b, a, table)


def test_aggregation_errors():
    w = Window.sized(10, 10)
    a = fill_window((2,), (5, 5), 3, w)
    with pytest.raises(AggregationError, match="modulus mismatch"):
        aggregate_field(a, a, builtin_table("moire"))
    partial = propagate_sequence((1,), (5, 5), 1, 4, w)
    with pytest.raises(AggregationError, match="does not cover"):
        aggregate_field(partial, partial, builtin_table("moire"))


def test_gradient_closed_forms():
    assert moire_gradient(Fraction(1, 3), 2, Fraction(1, 3), 5) == Fraction(1, 3)
    assert moire_gradient(0, 2, 1, 1) == 2
    with pytest.raises(AggregationError, match="degenerate"):
        moire_gradient(0, 2, 1, 2)
    assert antimoire_gradient(Fraction(2, 3), 1, Fraction(2, 3), 4) == Fraction(2, 3)
    assert antimoire_gradient(0, 1, 1, 1) == Fraction(1, 2)
    assert antimoire_gradient(1, 3, 0, 2) == Fraction(2, 5)


def test_fringe_widths():
    assert fringe_width(1, 5) == Fraction(5, 4)
    assert fringe_width(1, 7) == Fraction(7, 6)
    assert fringe_width(2, 2, anti=True) == 1
    with pytest.raises(AggregationError):
        fringe_width(3, 3)


def test_banded_labeling_examples():
    w = Window(-6, -6, 6, 6)
    assert np.array_equal(banded_labeling(LineFamily(0, 0, 1), w).index[:, 0], np.arange(-6, 7))
    lab = banded_labeling(LineFamily(0, 0, 2), w)
    assert all(lab.index[w.index((x, y))] == y // 2 for x, y in w.points())
    lab = banded_labeling(LineFamily(Fraction(1, 2), 0, 3), w)
    for x, y in w.points():
        assert lab.index[w.index((x, y))] == (Fraction(y) - Fraction(x, 2)) // 3
    # half-open bands: a point on an upper line belongs to the next band
    assert lab.index[w.index((0, 3))] == 1


@pytest.mark.parametrize("anti", [False, True])
def test_fringe_fit_examples(anti):
    w = Window.around((0, 0), WINDOW_HALF)
    a, b = LineFamily(0, 0, 2), LineFamily(1, 0, 1)
    got = fit_fringe_gradient(banded_labeling(a, w), banded_labeling(b, w), anti)
    want = (antimoire_gradient if anti else moire_gradient)(0, 2, 1, 1)
    assert abs(got - float(want)) <= 1 / w.diagonal


def test_fringe_fit_angle_bound_including_steep_fringes():
    """Quantization error grows with steepness; the fringe angle stays within 1/diagonal."""
    w = Window.around((0, 0), WINDOW_HALF)
    rng = random.Random(2024)
    for _ in range(30):
        a, b = random_pair(rng)
        la, lb = banded_labeling(a, w), banded_labeling(b, w)
        for anti, rule in ((False, moire_gradient), (True, antimoire_gradient)):
            want = float(rule(a.gradient, a.width, b.gradient, b.width))
            got = fit_fringe_gradient(la, lb, anti)
            assert abs(got - want) <= (1 + want * want) / w.diagonal


def test_parse_scenario_files():
    for path in sorted(SCENARIOS.glob("*.txt")):
        sc = parse_scenario(path.read_text())
        assert sc.table.modulus == sc.modulus
    sc = parse_scenario((SCENARIOS / "disc_r26_r36.txt").read_text())
    assert sc.size == (300, 300)
    assert sc.centres == ((100, 150), (200, 150))
    assert [s.radii for s in sc.radii] == [(26,), (36,)]
    assert sc.modulus == 7 and sc.table.symbols == ("a", "b")


@pytest.mark.parametrize("text, message", [
    ("array_size: 10\ncentre1: (1,1)\nradius1: 2\nradius2: 2\nmodulus: 4\ntable: moire", "missing key"),
    ("array_size: 10\ncentre1: (1,1)\ncentre2: (2,2)\nradius1: 2\nradius2: 2\nmodulus: 3\ntable: moire",
     "labelling uses modulus 3"),
    ("array_size: 10\ncentre1: (1,1)\ncentre2: (2,2)\nradius1: 2\nradius2: 2\nmodulus: 4", "needs a 'table'"),
    ("just words", "expected 'key: value'"),
    ("array_size: 10\ncentre1: (1)\ncentre2: (2,2)\nradius1: 2\nradius2: 2\nmodulus: 4\ntable: moire",
     "expected a point"),
    ("array_size: 10\ncentre1: (1,1)\ncentre2: (2,2)\nradius1: 2\nradius2: 2\nmodulus: (0,2)\ntable: moire",
     "0..m-1"),
])
def test_parse_scenario_errors(text, message):
    with pytest.raises(AggregationError, match=message):
        parse_scenario(text)


def test_custom_pattern_is_deterministic():
    sc = parse_scenario((SCENARIOS / "tri_r8_r8.txt").read_text())
    first, second = custom_pattern(sc), custom_pattern(sc)
    assert first == second
    assert first.cells.shape == (300, 300)
    assert set(np.unique(first.cells)) == {0, 1, 2}
