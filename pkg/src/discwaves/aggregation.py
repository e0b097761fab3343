"""Combining two labelings through a symmetric table, and the fringes that result."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .broadcast import Labeling, Window, fill_window
from .composition import BroadcastSequence
from .lattice import Point


class AggregationError(ValueError):
    pass


@dataclass(frozen=True)
class AggregationTable:
    entries: Tuple[Tuple[str, ...], ...]
    symbols: Tuple[str, ...] = ()
    name: str = "custom"

    def __post_init__(self):
        m = len(self.entries)
        if m == 0 or any(len(row) != m for row in self.entries):
            raise AggregationError("aggregation table must be square")
        for i in range(m):
            for j in range(i + 1, m):
                if self.entries[i][j] != self.entries[j][i]:
                    raise AggregationError(
                        f"aggregation table must be symmetric: entry ({i},{j}) is "
                        f"{self.entries[i][j]!r} but ({j},{i}) is {self.entries[j][i]!r}")
        used = {s for row in self.entries for s in row}
        if not self.symbols:
            object.__setattr__(self, "symbols", tuple(sorted(used)))
        elif not used <= set(self.symbols):
            raise AggregationError(f"symbols {sorted(used - set(self.symbols))} not declared")

    @property
    def modulus(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int) -> str:
        return self.entries[i][j]

    def index_array(self) -> np.ndarray:
        pos = {s: n for n, s in enumerate(self.symbols)}
        return np.array([[pos[s] for s in row] for row in self.entries], np.int64)


def parse_table(rows: Sequence[str], symbols: Sequence[str] = (), name: str = "custom") -> AggregationTable:
    """Rows as ``"a b c"`` or ``"abc"``."""
    parsed = tuple(tuple(r.split()) if " " in r.strip() else tuple(r.strip()) for r in rows)
    return AggregationTable(parsed, tuple(symbols), name)


_BUILTIN = {
    "moire": ["abcb", "babc", "cbab", "bcba"],
    "antimoire": ["abcd", "bcda", "cdab", "dabc"],
    "antimoire_mod2": ["abba", "bbaa", "baab", "aabb"],
}


def builtin_table(name: str) -> AggregationTable:
    try:
        rows = _BUILTIN[name]
    except KeyError:
        raise AggregationError(f"unknown table {name!r}; choose from {', '.join(_BUILTIN)}") from None
    return parse_table(rows, name=name)


@dataclass(frozen=True, eq=False)
class PatternField:
    window: Window
    sources: Tuple[Optional[Point], Optional[Point]]
    cells: np.ndarray  # symbol index per cell, rows = y
    symbols: Tuple[str, ...]

    @property
    def width(self) -> int:
        return self.window.width

    @property
    def height(self) -> int:
        return self.window.height

    def symbol_at(self, p: Point) -> str:
        return self.symbols[int(self.cells[self.window.index(p)])]

    def __eq__(self, other) -> bool:
        return (isinstance(other, PatternField) and self.window == other.window
                and self.symbols == other.symbols and np.array_equal(self.cells, other.cells))

    def rows(self):
        """(x, y, symbol) for every cell, row-major."""
        for r in range(self.height):
            y = self.window.ymin + r
            for c in range(self.width):
                yield self.window.xmin + c, y, self.symbols[int(self.cells[r, c])]


def aggregate_field(label_a: Labeling, label_b: Labeling, table: AggregationTable,
                    window: Optional[Window] = None) -> PatternField:
    window = window or label_a.window
    for lab in (label_a, label_b):
        if lab.window != window:
            raise AggregationError("labelings must share the field window")
        if lab.modulus != table.modulus:
            raise AggregationError(
                f"modulus mismatch: labeling uses {lab.modulus}, table has {table.modulus}")
        if not lab.reached.all():
            raise AggregationError("labeling does not cover the window")
    cells = table.index_array()[label_a.labels, label_b.labels]
    return PatternField(window, (label_a.origin, label_b.origin), cells, table.symbols)


# ---- line families and fringe gradients ----------------------------------

@dataclass(frozen=True)
class LineFamily:
    """Parallel lines ``y = gradient*x + offset + k*width``."""

    gradient: Fraction
    offset: Fraction = Fraction(0)
    width: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("gradient", "offset", "width"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.width <= 0:
            raise AggregationError("line width must be positive")


def moire_gradient(m0, w0, m1, w1) -> Fraction:
    m0, w0, m1, w1 = map(Fraction, (m0, w0, m1, w1))
    if w0 == w1:
        raise AggregationError("degenerate: parallel fringe undefined (infinite gradient)")
    return (w0 * m1 - w1 * m0) / (w0 - w1)


def antimoire_gradient(m0, w0, m1, w1) -> Fraction:
    m0, w0, m1, w1 = map(Fraction, (m0, w0, m1, w1))
    if w0 + w1 <= 0:
        raise AggregationError("widths must sum to a positive value")
    return (w0 * m1 + w1 * m0) / (w0 + w1)


def fringe_width(w0, w1, anti: bool = False) -> Fraction:
    """Vertical spacing of the fringes formed by two families of the same gradient."""
    w0, w1 = Fraction(w0), Fraction(w1)
    if anti:
        return w0 * w1 / (w0 + w1)
    if w0 == w1:
        raise AggregationError("degenerate: equal widths give no fringes")
    return w0 * w1 / abs(w0 - w1)


def banded_labeling(family: LineFamily, window: Window, modulus: Optional[int] = None) -> Labeling:
    """Band ``k`` holds ``offset + k*width <= y - gradient*x < offset + (k+1)*width``."""
    m, c, w = family.gradient, family.offset, family.width
    scale = lcm(m.denominator, c.denominator, w.denominator)
    ys, xs = np.mgrid[window.ymin:window.ymax + 1, window.xmin:window.xmax + 1].astype(np.int64)
    num = ys * scale - int(m * scale) * xs - int(c * scale)
    index = np.floor_divide(num, int(w * scale))
    return Labeling(window, index, modulus)


def fit_fringe_gradient(label_a: Labeling, label_b: Labeling, anti: bool = False,
                        central: float = 0.6) -> float:
    """Least-squares gradient of the loci where the paired band indices stay in step.

    Moiré fringes keep ``i - j`` fixed, anti-moiré fringes keep ``i + j``
    fixed; a plane fitted to that combined index over the central part of
    the window has level lines of the returned gradient.
    """
    if label_a.window != label_b.window:
        raise AggregationError("labelings must share a window")
    combined = label_a.index + label_b.index if anti else label_a.index - label_b.index
    h, w = combined.shape
    my, mx = int(round(h * (1 - central) / 2)), int(round(w * (1 - central) / 2))
    core = combined[my:h - my, mx:w - mx].astype(float)
    ys, xs = np.mgrid[my:h - my, mx:w - mx]
    design = np.column_stack([xs.ravel(), ys.ravel(), np.ones(xs.size)])
    (ax, ay, _), *_ = np.linalg.lstsq(design, core.ravel(), rcond=None)
    if ay == 0:
        return float("inf")
    return float(-ax / ay)


# ---- scenarios ------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    size: Tuple[int, int]
    centres: Tuple[Point, Point]
    radii: Tuple[BroadcastSequence, BroadcastSequence]
    modulus: int
    table: AggregationTable

    @property
    def window(self) -> Window:
        return Window.sized(*self.size)


def _point(text: str) -> Point:
    nums = re.findall(r"-?\d+", text)
    if len(nums) != 2:
        raise AggregationError(f"expected a point like (x,y), got {text!r}")
    return int(nums[0]), int(nums[1])


def _modulus(text: str) -> int:
    nums = re.findall(r"-?\d+", text)
    if len(nums) == 1:
        return int(nums[0])
    if [int(n) for n in nums] != list(range(len(nums))):
        raise AggregationError(f"labelling list must be 0..m-1, got {text!r}")
    return len(nums)


def parse_scenario(text: str) -> Scenario:
    """Key-value scenario: ``array_size``, ``centre1``, ``centre2``, ``radius1``,
    ``radius2``, ``modulus`` and either ``table: <builtin>`` or repeated ``row:`` lines.
    """
    values: Dict[str, str] = {}
    rows: List[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":") if ":" in line else line.partition("=")
        if not sep:
            raise AggregationError(f"line {lineno}: expected 'key: value'")
        key = key.strip().lower().replace(" ", "_")
        if key == "row":
            rows.append(value.strip())
        else:
            values[key] = value.strip()
    try:
        size_text = values["array_size"]
        nums = [int(n) for n in re.findall(r"\d+", size_text)]
        size = (nums[0], nums[-1])
        centres = (_point(values["centre1"]), _point(values["centre2"]))
        radii = (BroadcastSequence.of(values["radius1"]), BroadcastSequence.of(values["radius2"]))
        modulus = _modulus(values["modulus"])
    except KeyError as exc:
        raise AggregationError(f"scenario missing key {exc.args[0]!r}") from None
    except (ValueError, IndexError) as exc:
        raise AggregationError(f"malformed scenario: {exc}") from None
    symbols = tuple(values["symbols"].split()) if "symbols" in values else ()
    if rows:
        table = parse_table(rows, symbols)
    elif "table" in values:
        table = builtin_table(values["table"])
    else:
        raise AggregationError("scenario needs a 'table' name or 'row' lines")
    if table.modulus != modulus:
        raise AggregationError(
            f"table is {table.modulus}x{table.modulus} but the labelling uses modulus {modulus}")
    return Scenario(size, centres, radii, modulus, table)


def custom_pattern(scenario: Scenario) -> PatternField:
    window = scenario.window
    labs = [fill_window(seq, centre, scenario.modulus, window)
            for seq, centre in zip(scenario.radii, scenario.centres)]
    return aggregate_field(labs[0], labs[1], scenario.table, window)
