"""Approximating the astroid (the L^{2/3} unit ball) with two aggregated waves.

Two waves leave a shared origin, one with disc ``A`` (default the Moore
disc, squared radius 2) and one with disc ``B``. A point's level is the
absolute difference of its two reach steps. The ``k``-th polygon is the
region enclosed by the outer boundary of the band at level ``k - 1``,
i.e. every point whose level is below ``k``. It is compared against an
astroid whose cusp is matched to the polygon's farthest corner.

Extents are measured in steps of the Moore wave (Chebyshev norm): the
*radius* is the reach of the polygon along its cusp diagonal and the
*min* its reach along the axis, where the rotated astroid is narrowest.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from math import pi
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .broadcast import Window, WindowError, propagate_sequence
from .lattice import Point, check_radius

HEADER = ["Radius", "Min", "Area", "Radius", "Min", "Area", "B", "k", "Complement"]


def lp_norm(p: Point, exponent) -> float:
    e = float(Fraction(exponent))
    if e <= 0:
        raise ValueError("exponent must be positive")
    return float((abs(p[0]) ** e + abs(p[1]) ** e) ** (1 / e))


def astroid_area(r) -> int:
    """Area ``3/8 pi r^2`` rounded half up."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    exact = Decimal(3 * r.numerator ** 2) * Decimal(repr(pi)) / Decimal(8 * r.denominator ** 2)
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def astroid_min(r) -> Fraction:
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    return r / 2


@dataclass(frozen=True)
class AstroidSpec:
    radius: Fraction
    exponent: Fraction = Fraction(2, 3)

    def contains(self, q: Tuple[float, float]) -> bool:
        return lp_norm(q, self.exponent) <= self.radius

    @property
    def area(self) -> int:
        return astroid_area(self.radius)

    @property
    def min(self) -> Fraction:
        return astroid_min(self.radius)


@dataclass(frozen=True)
class LevelSet:
    k: int
    points: frozenset


def _levels(a_r2: int, b_r2: int, window: Window, origin: Point) -> np.ndarray:
    span = 2 * max(window.width, window.height)
    la = propagate_sequence((a_r2,), origin, span, None, window, clip=True)
    lb = propagate_sequence((b_r2,), origin, span, None, window, clip=True)
    if not (la.reached.all() and lb.reached.all()):
        raise WindowError("waves did not cover the window")
    return np.abs(la.index - lb.index)


def level_sets(a_r2: int, b_r2: int, kmax: int, window: Window, origin: Point = (0, 0)) -> List[LevelSet]:
    check_radius(a_r2)
    check_radius(b_r2)
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    levels = _levels(a_r2, b_r2, window, origin)
    if a_r2 != b_r2 and _touches_border(levels <= kmax):
        raise WindowError(f"window too small for level {kmax}")
    out = []
    for k in range(kmax + 1):
        ys, xs = np.nonzero(levels == k)
        out.append(LevelSet(k, frozenset(
            (int(x) + window.xmin, int(y) + window.ymin) for x, y in zip(xs, ys))))
    return out


def _touches_border(mask: np.ndarray) -> bool:
    return bool(mask[0].any() or mask[-1].any() or mask[:, 0].any() or mask[:, -1].any())


@dataclass(frozen=True)
class Polygon:
    """Lattice region enclosed by the outer boundary of a level band."""

    mask: np.ndarray
    window: Window
    origin: Point

    @property
    def area(self) -> int:
        return int(self.mask.sum())

    def _reach(self, dx: int, dy: int) -> int:
        ox, oy = self.origin
        t = 0
        while True:
            p = (ox + (t + 1) * dx, oy + (t + 1) * dy)
            if not self.window.contains(p) or not self.mask[self.window.index(p)]:
                return t
            t += 1

    @property
    def radius(self) -> int:
        return max(self._reach(dx, dy) for dx in (-1, 1) for dy in (-1, 1))

    @property
    def min(self) -> int:
        return min(self._reach(dx, dy) for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)))


def moire_polygon(b_r2: int, k: int, a_r2: int = 2) -> Polygon:
    if k < 1:
        raise ValueError("level k must be >= 1")
    check_radius(a_r2)
    check_radius(b_r2)
    if a_r2 == b_r2:
        raise ValueError("identical discs give a single unbounded level")
    half = 4 * k + 8
    while True:
        window = Window.around((0, 0), half)
        inside = _levels(a_r2, b_r2, window, (0, 0)) < k
        if not _touches_border(inside):
            break
        half *= 2
    mask = ndimage.binary_fill_holes(inside)
    if not mask.any():
        raise ValueError(f"level {k} is empty")
    return Polygon(mask, window, (0, 0))


@dataclass(frozen=True)
class ApproxRow:
    astroid_radius: Fraction
    astroid_min: Fraction
    astroid_area: int
    moire_radius: int
    moire_min: int
    moire_area: int
    B: int
    k: int
    complement: int

    def cells(self) -> List[str]:
        return [_num(self.astroid_radius), _num(self.astroid_min), str(self.astroid_area),
                str(self.moire_radius), str(self.moire_min), str(self.moire_area),
                str(self.B), str(self.k), str(self.complement)]


def _num(v) -> str:
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return format(Decimal(v.numerator) / Decimal(v.denominator), "f")


def approx_experiment(B: int, k: int, A: int = 2) -> ApproxRow:
    poly = moire_polygon(B, k, A)
    r = Fraction(poly.radius)
    area = astroid_area(r)
    return ApproxRow(r, astroid_min(r), area, poly.radius, poly.min, poly.area, B, k, poly.area - area)


# ---- the published tables -------------------------------------------------

@dataclass(frozen=True)
class PublishedRow:
    table: str
    astroid_radius: Fraction
    astroid_min: Fraction
    astroid_area: int
    moire_radius: int
    moire_min: int
    moire_area: int
    B: int
    k: int
    complement: int


def _rows(table: str, data: str) -> Tuple[PublishedRow, ...]:
    out = []
    for line in data.strip().splitlines():
        f = line.split()
        out.append(PublishedRow(table, Fraction(f[0]), Fraction(f[1]), int(f[2]), int(f[3]),
                            int(f[4]), int(f[5]), int(f[6]), int(f[7]), int(f[8])))
    return tuple(out)


# Transcribed verbatim, including the printed 5.59.
VARYING_B = _rows("varying-B", """
17 8.5 340 17 11 461 5 5 121
17 8.5 340 17 13 753 9 8 413
17 8.5 340 17 13 873 10 9 533
18 9 382 18 16 1121 13 11 739
18 9 382 18 14 1033 16 11 651
18 9 382 18 14 1001 17 11 619
17 8.5 340 17 15 1041 37 13 701
17 8.5 340 17 16 1141 45 14 801
17 8.5 340 17 16 1093 61 14 753
17 8.5 340 17 16 1181 82 15 841
""")
FIXED_B = _rows("fixed-B", """
2 1 5 2 1 13 5 1 8
5 2.5 30 5 3 65 5 2 35
8 4 75 8 5 157 5 3 82
11 5.59 143 11 7 289 5 4 146
18 9 382 18 9 461 5 5 79
21 10.5 520 21 11 673 5 6 153
24 12 679 24 13 925 5 7 246
27 13.5 859 27 15 1217 5 8 358
30 15 1060 30 17 1549 5 9 489
33 16.5 1283 33 19 1921 5 10 628
""")
PUBLISHED_ROWS = VARYING_B + FIXED_B

_FIELDS = ["astroid_radius", "astroid_min", "astroid_area", "moire_radius", "moire_min",
           "moire_area", "B", "k", "complement"]


def published_rows_for(B: int, k: int) -> List[PublishedRow]:
    return [r for r in PUBLISHED_ROWS if (r.B, r.k) == (B, k)]


def compare(row: ApproxRow, ref: PublishedRow) -> List[str]:
    """Names of the columns where ``row`` differs from the published row."""
    return [name for name in _FIELDS if Fraction(getattr(row, name)) != Fraction(getattr(ref, name))]


def within(value: int, target: int, tolerance: float) -> bool:
    return abs(value - target) <= tolerance * abs(target)


def table_report(pairs: Iterable[Tuple[int, int]], A: int = 2,
                 references: Optional[Sequence[PublishedRow]] = None) -> str:
    """CSV in the published column order plus a ``Published`` column flagging mismatches.

    When ``references`` is given it must align with ``pairs``; otherwise each
    pair is looked up among the published rows (first hit).
    """
    pairs = list(pairs)
    if references is not None and len(references) != len(pairs):
        raise ValueError("references must align with pairs")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER + ["Published"])
    for i, (B, k) in enumerate(pairs):
        row = approx_experiment(B, k, A)
        if references is not None:
            ref = references[i]
        else:
            hits = published_rows_for(B, k) if A == 2 else []
            ref = hits[0] if hits else None
        if ref is None:
            flag = "n/a"
        else:
            diff = compare(row, ref)
            flag = "match" if not diff else "mismatch:" + "/".join(diff)
        writer.writerow(row.cells() + [flag])
    return buf.getvalue()


@dataclass(frozen=True)
class PublishedComparison:
    rows: Tuple[Tuple[PublishedRow, ApproxRow], ...]

    def exact(self) -> int:
        return sum(not compare(got, ref) for ref, got in self.rows)

    def complement_hits(self, table: str, tolerance: float = 0.05) -> int:
        return sum(within(got.complement, ref.complement, tolerance)
                   for ref, got in self.rows if ref.table == table)

    def closed_form_mismatches(self) -> List[str]:
        """Published astroid cells that disagree with the closed forms or the subtraction."""
        issues = []
        for ref, _ in self.rows:
            tag = f"{ref.table} B={ref.B} k={ref.k}"
            if astroid_area(ref.astroid_radius) != ref.astroid_area:
                issues.append(f"{tag}: area {ref.astroid_area} != {astroid_area(ref.astroid_radius)}")
            if astroid_min(ref.astroid_radius) != ref.astroid_min:
                issues.append(f"{tag}: min {_num(ref.astroid_min)} != {_num(astroid_min(ref.astroid_radius))}")
            if ref.moire_area - ref.astroid_area != ref.complement:
                issues.append(f"{tag}: complement {ref.complement} != "
                              f"{ref.moire_area} - {ref.astroid_area}")
        return issues

    def summary(self) -> str:
        lines = [
            f"rows matching every column: {self.exact()}/{len(self.rows)}",
            f"varying-B complements within 5%: {self.complement_hits('varying-B')}/10",
            f"fixed-B complements within 5%: {self.complement_hits('fixed-B')}/10",
        ]
        lines += [f"published inconsistency: {m}" for m in self.closed_form_mismatches()]
        return "\n".join(lines)


def published_comparison(A: int = 2) -> PublishedComparison:
    return PublishedComparison(tuple((ref, approx_experiment(ref.B, ref.k, A)) for ref in PUBLISHED_ROWS))


def published_report() -> Tuple[str, str]:
    """CSV for all published rows (in print order) and a text summary."""
    csv_text = table_report([(r.B, r.k) for r in PUBLISHED_ROWS], references=PUBLISHED_ROWS)
    return csv_text, published_comparison().summary()
