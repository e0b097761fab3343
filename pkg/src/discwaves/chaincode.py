"""Freeman chain codes of discrete circles and their line-segment structure.

An octant code walks the boundary of a disc clockwise from its top point
``(0, top)`` to the diagonal ``x = y``. Symbol ``0`` steps east and ``1``
steps south-east. When the hull edge of gradient 1 crosses the diagonal
between lattice points, the walk stops one row above it (``y - x == 1``);
``top`` records this so that codes compose exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .lattice import DIRECTIONS, Point, check_radius

OCTANT_SYMBOLS = frozenset("01")
ALL_SYMBOLS = frozenset("01234567")


class ChainCodeError(ValueError):
    pass


@dataclass(frozen=True)
class ChainCode:
    word: str
    top: Optional[int] = None
    octant_form: bool = True

    def __post_init__(self):
        allowed = OCTANT_SYMBOLS if self.octant_form else ALL_SYMBOLS
        bad = set(self.word) - allowed
        if bad:
            raise ChainCodeError(
                f"symbols {''.join(sorted(bad))!r} not allowed in "
                f"{'an octant' if self.octant_form else 'a'} chain code")
        if self.top is not None and self.top < 0:
            raise ChainCodeError("top must be non-negative")

    def __str__(self) -> str:
        return self.word

    def __len__(self) -> int:
        return len(self.word)

    @property
    def start_height(self) -> int:
        """Height of the first point; defaults to ending exactly on the diagonal."""
        if self.top is not None:
            return self.top
        return len(self.word) + self.word.count("1")

    @property
    def end(self) -> Point:
        return len(self.word), self.start_height - self.word.count("1")

    @property
    def odd_diagonal(self) -> bool:
        x, y = self.end
        return y - x == 1

    @property
    def diagonal_half_steps(self) -> int:
        """Length of the gradient-1 hull edge in octant 1, counted in half steps."""
        x, y = self.end
        return 2 * trailing_ones(self.word) + (y - x)


CodeLike = Union[ChainCode, str]


def as_code(code: CodeLike) -> ChainCode:
    return code if isinstance(code, ChainCode) else ChainCode(code)


def trailing_ones(word: str) -> int:
    return len(word) - len(word.rstrip("1"))


def first_octant_code(r2: int) -> ChainCode:
    """Octant code built from the row bands of the disc.

    Band ``i`` holds the columns whose top sits ``i`` rows below ``r'``; a
    column ``x`` lies in it when ``r2 - (r'-i+1)^2 < x^2 <= r2 - (r'-i)^2``.
    """
    check_radius(r2)
    r = isqrt(r2)
    parts: List[str] = []
    last = 0  # last column emitted
    for i in range(r + 1):
        h = r - i
        band_end = isqrt(r2 - h * h)
        stop = min(band_end, h)
        if stop <= last and i > 0:
            break
        n = stop - last
        if i == 0:
            parts.append("0" * n)
        elif n > 0:
            parts.append("1" + "0" * (n - 1))
        last = stop
        if band_end > h:
            break
    return ChainCode("".join(parts), top=r)


def octant_code_of_region(points: Iterable[Point]) -> ChainCode:
    """Trace octant 1 of a centrally symmetric, digitally convex region about the origin."""
    pts = set(points)
    if (0, 0) not in pts:
        raise ChainCodeError("region must contain the origin")
    top = 0
    while (0, top + 1) in pts:
        top += 1
    x, y = 0, top
    word = []
    while True:
        if x + 1 <= y and (x + 1, y) in pts:
            word.append("0")
            y_next = y
        elif x + 1 <= y - 1 and (x + 1, y - 1) in pts:
            word.append("1")
            y_next = y - 1
        else:
            break
        x, y = x + 1, y_next
    return ChainCode("".join(word), top=top)


def trace(code: CodeLike, start: Point) -> List[Point]:
    if isinstance(code, str):
        code = ChainCode(code, octant_form=False)
    pts = [start]
    x, y = start
    for s in code.word:
        dx, dy = DIRECTIONS[int(s)]
        x, y = x + dx, y + dy
        pts.append((x, y))
    return pts


def octant_map(code: CodeLike, n: int) -> ChainCode:
    """Carry an octant-1 word onto octant ``n`` (1..8, clockwise from +y)."""
    code = as_code(code)
    if not code.octant_form:
        raise ChainCodeError("octant_map needs an octant-form code")
    if not 1 <= n <= 8:
        raise ChainCodeError(f"octant index must be in 1..8, got {n}")
    if n % 2:
        table = {"0": str(n - 1), "1": str(n % 8)}
        word = code.word
    else:
        table = {"0": str(n % 8), "1": str(n - 1)}
        word = code.word[::-1]
    return ChainCode("".join(table[s] for s in word), octant_form=False)


def full_circle_code(r2: int) -> ChainCode:
    """Closed clockwise code of the digital circle starting at ``(0, r')``."""
    base = first_octant_code(r2)
    bridge = base.odd_diagonal
    parts = []
    for n in range(1, 9):
        parts.append(octant_map(base, n).word)
        if n % 2 and bridge:
            parts.append(str(n))
    return ChainCode("".join(parts), top=base.top, octant_form=False)


# ---- segments -------------------------------------------------------------

@dataclass(frozen=True)
class ChainCodeSegment:
    kind: str  # "leading-zeros" or "one-then-zeros"
    zeros: int

    @property
    def length(self) -> int:
        return self.zeros + (self.kind == "one-then-zeros")

    @property
    def word(self) -> str:
        return ("1" if self.kind == "one-then-zeros" else "") + "0" * self.zeros

    def __str__(self) -> str:
        return f"0^{self.zeros}" if self.kind == "leading-zeros" else f"10^{self.zeros}"


def segments(code: CodeLike) -> List[ChainCodeSegment]:
    word = as_code(code).word
    out: List[ChainCodeSegment] = []
    lead = len(word) - len(word.lstrip("0"))
    if lead:
        out.append(ChainCodeSegment("leading-zeros", lead))
    for chunk in word[lead:].split("1")[1:]:
        out.append(ChainCodeSegment("one-then-zeros", len(chunk)))
    return out


# ---- gradients and line segments -----------------------------------------

def gradient(word: CodeLike) -> Fraction:
    w = as_code(word).word
    if not w:
        raise ChainCodeError("gradient of an empty word is undefined")
    return Fraction(w.count("1"), len(w))


def christoffel_word(g: Fraction) -> str:
    """Primitive digital straight word of gradient ``g`` in [0, 1]; starts with a drop."""
    g = Fraction(g)
    if not 0 <= g <= 1:
        raise ChainCodeError(f"gradient {g} outside [0, 1]")
    b, a = g.numerator, g.denominator
    return "".join(str(-(-b * (t + 1) // a) - -(-b * t // a)) for t in range(a))


@dataclass(frozen=True)
class PrimitiveForm:
    kind: str  # flat, run, head, tail or other
    base_run: int = 0
    inner: int = 1

    @property
    def admissible(self) -> bool:
        return self.kind != "other"

    def render(self) -> str:
        n = self.base_run
        if self.kind == "flat":
            return "0"
        if self.kind == "run":
            return f"10^{n}"
        if self.kind == "head":
            tail = f"(10^{n + 1})" + (f"^{self.inner}" if self.inner > 1 else "")
            return f"(10^{n}){tail}"
        if self.kind == "tail":
            head = f"(10^{n})" + (f"^{self.inner}" if self.inner > 1 else "")
            return f"{head}(10^{n + 1})"
        return "?"


def classify_primitive(primitive: str) -> PrimitiveForm:
    """Match a primitive word against the three admissible shapes.

    ``10^n``, ``(10^n)(10^{n+1})^m`` or ``(10^n)^m(10^{n+1})``.
    """
    if primitive == "0":
        return PrimitiveForm("flat")
    if not primitive.startswith("1"):
        return PrimitiveForm("other")
    runs = [len(c) for c in primitive.split("1")[1:]]
    n = runs[0]
    if len(runs) == 1:
        return PrimitiveForm("run", n)
    m = len(runs) - 1
    if all(r == n + 1 for r in runs[1:]):
        return PrimitiveForm("head", n, m)
    if all(r == n for r in runs[:-1]) and runs[-1] == n + 1:
        return PrimitiveForm("tail", n, m)
    return PrimitiveForm("other", n, m)


@dataclass(frozen=True)
class LineSegment:
    primitive: str
    count: int
    gradient: Fraction
    form: PrimitiveForm = field(compare=False)

    @classmethod
    def of(cls, g: Fraction, count: int) -> "LineSegment":
        prim = christoffel_word(g)
        return cls(prim, count, Fraction(g), classify_primitive(prim))

    @property
    def word(self) -> str:
        return self.primitive * self.count

    @property
    def base_run(self) -> int:
        return self.form.base_run

    @property
    def repetitions(self) -> int:
        return self.count if self.form.kind in ("flat", "run") else self.form.inner

    def render(self) -> str:
        if self.form.kind == "flat":
            return f"0^{self.count}"
        core = self.form.render()
        if self.count == 1:
            return core
        if self.form.kind == "run":
            return f"({core})^{self.count}"
        return f"[{core}]^{self.count}"

    def __str__(self) -> str:
        return f"{self.render()} g={self.gradient}"


def _drop_profile(word: str) -> List[Point]:
    pts = [(0, 0)]
    d = 0
    for i, s in enumerate(word, 1):
        d += s == "1"
        pts.append((i, d))
    return pts


def _lower_hull(pts: Sequence[Point]) -> List[Point]:
    hull: List[Point] = []
    for p in pts:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _split_line_segments(word: str) -> Tuple[List[LineSegment], Optional[str]]:
    """Decompose ``word`` along the convex hull of its drop profile.

    Returns the pieces and, when the word is not digitally convex, a reason.
    """
    if not word:
        return [], None
    hull = _lower_hull(_drop_profile(word))
    out: List[LineSegment] = []
    for (x0, d0), (x1, d1) in zip(hull, hull[1:]):
        run, drop = x1 - x0, d1 - d0
        k = gcd(run, drop)
        seg = LineSegment.of(Fraction(drop, run), k)
        if word[x0:x1] != seg.word:
            return out, f"subword {word[x0:x1]!r} at {x0} is not a digital straight segment"
        if seg.gradient > 1:
            return out, f"gradient {seg.gradient} exceeds 1 at {x0}"
        out.append(seg)
    return out, None


def line_segments(code: CodeLike) -> List[LineSegment]:
    code = as_code(code)
    if validate_octant_code(code):
        raise ChainCodeError("not a discrete-circle octant code")
    return _split_line_segments(code.word)[0]


def expressible_gradient(g: Fraction) -> bool:
    """True for gradients ``1/n``, ``a/(a(n+1)-1)`` and ``a/(an+1)`` (and 0)."""
    g = Fraction(g)
    if not 0 <= g <= 1:
        raise ValueError(f"gradient {g} outside [0, 1]")
    a, b = g.numerator, g.denominator
    if a <= 1:
        return True
    return ((b + 1) % a == 0 and (b + 1) // a >= 2) or ((b - 1) % a == 0 and (b - 1) // a >= 1)


# ---- validation -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    position: Optional[int] = None

    def __str__(self) -> str:
        at = "" if self.position is None else f" at {self.position}"
        return f"{self.rule}{at}: {self.message}"


def segment_bound_holds(earlier: int, later: int) -> bool:
    """Length bound between neighbouring runs, indexed from the diagonal upwards.

    With runs numbered from the diagonal, ``floor((s_i - 1)/2) - 1 <= s_{i-1} <= s_i + 1``;
    in walking order ``s_i`` is the earlier run.
    """
    return (earlier - 1) // 2 - 1 <= later <= earlier + 1


def validate_octant_code(code: CodeLike) -> List[Violation]:
    if isinstance(code, ChainCode):
        word, top = code.word, code.top
    else:
        word, top = code, None
        bad = [i for i, s in enumerate(word) if s not in OCTANT_SYMBOLS]
        if bad:
            return [Violation("alphabet", f"symbol {word[bad[0]]!r} outside {{0,1}}", bad[0])]

    found: List[Violation] = []
    runs = [s for s in segments(word) if s.kind == "one-then-zeros"]
    offsets = []
    pos = len(word) - len(word.lstrip("0"))
    for s in runs:
        offsets.append(pos)
        pos += s.length
    for i in range(1, len(runs)):
        a, b = runs[i - 1].length, runs[i].length
        if not segment_bound_holds(a, b):
            found.append(Violation(
                "segment-length", f"run of {a} followed by run of {b} breaks the length bound",
                offsets[i]))
    for i in range(2, len(runs)):
        n = runs[i - 2].zeros
        if runs[i - 1].zeros == n + 1 and runs[i].zeros == n + 2:
            found.append(Violation(
                "rising-runs", f"runs 10^{n} 10^{n + 1} 10^{n + 2} in a row", offsets[i - 2]))

    pieces, reason = _split_line_segments(word)
    if reason:
        found.append(Violation("convexity", reason))
    for seg in pieces:
        if not seg.form.admissible:
            found.append(Violation(
                "line-segment-form", f"primitive {seg.primitive!r} (gradient {seg.gradient}) "
                "matches none of the admissible shapes"))

    if top is not None:
        x, y = len(word), top - word.count("1")
        if y - x not in (0, 1):
            found.append(Violation("diagonal", f"walk ends at {(x, y)}, off the diagonal"))
    return found
