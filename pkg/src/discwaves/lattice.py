"""Integer lattice primitives: discrete discs, their boundaries, convex hulls."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import FrozenSet, Iterable, List, Tuple

Point = Tuple[int, int]

# Chain-code direction symbols, clockwise from east.
DIRECTIONS: Tuple[Point, ...] = (
    (1, 0), (1, -1), (0, -1), (-1, -1),
    (-1, 0), (-1, 1), (0, 1), (1, 1),
)
VON_NEUMANN: Tuple[Point, ...] = ((1, 0), (0, -1), (-1, 0), (0, 1))
MOORE: Tuple[Point, ...] = DIRECTIONS


class NotRepresentableError(ValueError):
    """Raised when a squared radius is not a sum of two squares."""

    def __init__(self, r2: int):
        self.r2 = r2
        below, above = nearest_representable(r2)
        hint = ", ".join(str(v) for v in (below, above) if v is not None)
        super().__init__(
            f"{r2} is not a sum of two squares; nearest representable: {hint}"
        )


def is_representable(n: int) -> bool:
    if n < 0:
        return False
    x = 0
    while x * x <= n:
        y = isqrt(n - x * x)
        if x * x + y * y == n:
            return True
        x += 1
    return False


def nearest_representable(r2: int) -> Tuple[int | None, int]:
    """Closest sums of two squares strictly below and above ``r2``."""
    below = next((v for v in range(r2 - 1, -1, -1) if is_representable(v)), None)
    above = r2 + 1
    while not is_representable(above):
        above += 1
    return below, above


def check_radius(r2: int) -> int:
    if not isinstance(r2, int) or isinstance(r2, bool):
        raise TypeError(f"squared radius must be an int, got {type(r2).__name__}")
    if r2 < 0:
        raise ValueError(f"squared radius must be non-negative, got {r2}")
    if not is_representable(r2):
        raise NotRepresentableError(r2)
    return r2


def distinct_radii(limit: int) -> List[int]:
    """Squared radii up to ``limit`` whose discs differ, i.e. sums of two squares."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    top = isqrt(limit)
    sums = {x * x + y * y for x in range(top + 1) for y in range(x, top + 1)}
    return sorted(n for n in sums if 1 <= n <= limit)


def in_disc(p: Point, r2: int) -> bool:
    return p[0] * p[0] + p[1] * p[1] <= r2


@dataclass(frozen=True)
class DiscreteDisc:
    r2: int
    points: FrozenSet[Point]

    @property
    def radius_floor(self) -> int:
        return isqrt(self.r2)

    def __contains__(self, p: Point) -> bool:
        return p in self.points

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DiscreteCircle:
    r2: int
    boundary: FrozenSet[Point]

    def __contains__(self, p: Point) -> bool:
        return p in self.boundary

    def __len__(self) -> int:
        return len(self.boundary)


@lru_cache(maxsize=256)
def disc_points(r2: int) -> DiscreteDisc:
    check_radius(r2)
    r = isqrt(r2)
    pts = set()
    for x in range(-r, r + 1):
        h = isqrt(r2 - x * x)
        pts.update((x, y) for y in range(-h, h + 1))
    return DiscreteDisc(r2, frozenset(pts))


def disc_offsets(r2: int) -> List[Point]:
    """Disc points in row-major order, handy for array shifts."""
    return sorted(disc_points(r2).points, key=lambda p: (p[1], p[0]))


def column_top(r2: int, x: int) -> int:
    """Largest y with (x, y) in the disc; requires |x| <= isqrt(r2)."""
    return isqrt(r2 - x * x)


def circle_points(r2: int, neighbourhood: str = "von_neumann") -> DiscreteCircle:
    """Disc points with at least one neighbour outside the disc.

    The default 4-neighbourhood yields the thin digital circle. ``"moore"``
    tests all eight neighbours, which also flags a few interior points
    next to a diagonal notch (e.g. the centre of the radius-1 disc).
    """
    check_radius(r2)
    if neighbourhood == "von_neumann":
        steps = VON_NEUMANN
    elif neighbourhood == "moore":
        steps = MOORE
    else:
        raise ValueError(f"unknown neighbourhood {neighbourhood!r}")
    pts = disc_points(r2).points
    return DiscreteCircle(r2, frozenset(
        p for p in pts if any((p[0] + dx, p[1] + dy) not in pts for dx, dy in steps)))


def in_octant(p: Point, octant: int = 1) -> bool:
    """Octants are numbered 1..8 clockwise from the +y axis; boundaries belong to both."""
    x, y = p
    tests = {
        1: x >= 0 and x <= y,
        2: y >= 0 and y <= x,
        3: y <= 0 and -y <= x,
        4: x >= 0 and x <= -y,
        5: x <= 0 and -x <= -y,
        6: y <= 0 and -y <= -x,
        7: y >= 0 and y <= -x,
        8: x <= 0 and -x <= y,
    }
    if octant not in tests:
        raise ValueError(f"octant must be in 1..8, got {octant}")
    return tests[octant]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> List[Point]:
    """Counter-clockwise hull vertices starting at the lexicographically smallest point.

    Collinear boundary points are dropped. Exact integer arithmetic.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("empty point set")
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def dihedral_images(p: Point) -> List[Point]:
    x, y = p
    return [(x, y), (-x, y), (x, -y), (-x, -y), (y, x), (-y, x), (y, -x), (-y, -x)]
