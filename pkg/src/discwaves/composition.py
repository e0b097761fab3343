"""Composition (Minkowski sum) of disc chain codes.

Two algorithms produce the same code: a max-plus convolution of row
extents, and a merge of line segments sorted by gradient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .chaincode import (
    ChainCode, ChainCodeError, CodeLike, LineSegment, _split_line_segments,
    as_code, first_octant_code, octant_map, trailing_ones,
)
from .lattice import check_radius

ONE = Fraction(1)
Provenance = List[Tuple[str, LineSegment]]


@dataclass(frozen=True)
class CompositionResult:
    code: ChainCode
    provenance: Tuple[Tuple[str, LineSegment], ...]

    @property
    def word(self) -> str:
        return self.code.word

    def provenance_rows(self) -> List[Tuple[str, str, str]]:
        """(segment, gradient, source) triples, as written to CSV."""
        return [(seg.word, str(seg.gradient), src) for src, seg in self.provenance]


@dataclass(frozen=True)
class BroadcastSequence:
    radii: Tuple[int, ...]

    def __post_init__(self):
        if not self.radii:
            raise ValueError("broadcast sequence must be non-empty")
        for r2 in self.radii:
            check_radius(r2)

    @classmethod
    def of(cls, radii: Union["BroadcastSequence", Iterable[int], int, str]) -> "BroadcastSequence":
        if isinstance(radii, BroadcastSequence):
            return radii
        if isinstance(radii, int):
            return cls((radii,))
        if isinstance(radii, str):
            return cls(tuple(int(t) for t in radii.replace(" ", "").split(",") if t))
        return cls(tuple(radii))

    @property
    def period(self) -> int:
        return len(self.radii)

    def radius(self, step: int) -> int:
        """Squared radius used to grow region ``step`` from region ``step - 1`` (1-based)."""
        return self.radii[(step - 1) % len(self.radii)]

    def __str__(self) -> str:
        return ",".join(map(str, self.radii))


def _structure(code: CodeLike) -> Tuple[ChainCode, List[LineSegment]]:
    code = as_code(code)
    if not code.octant_form:
        raise ChainCodeError("composition works on octant-form codes")
    pieces, reason = _split_line_segments(code.word)
    if reason:
        raise ChainCodeError(f"not a discrete-circle octant code: {reason}")
    x, y = code.end
    if y - x not in (0, 1):
        raise ChainCodeError(f"not a discrete-circle octant code: walk ends at {(x, y)}")
    return code, pieces


def gradient_set(code: CodeLike) -> Set[Fraction]:
    """Gradients of the hull edges met in octant 1, counting a half diagonal edge."""
    code, pieces = _structure(code)
    grads = {s.gradient for s in pieces}
    if code.diagonal_half_steps:
        grads.add(ONE)
    return grads


# ---- linear merge ---------------------------------------------------------

@dataclass(frozen=True)
class _Hull:
    top: int
    half_steps: int  # diagonal edge length in half steps
    provenance: Tuple[Tuple[str, LineSegment], ...]

    @classmethod
    def of(cls, code: CodeLike, source: str) -> "_Hull":
        code, pieces = _structure(code)
        return cls(code.start_height, code.diagonal_half_steps,
                   tuple((source, s) for s in pieces))

    def code(self) -> ChainCode:
        parts = []
        for _, seg in self.provenance:
            if seg.gradient != ONE:
                parts.append(seg.word)
        parts.append("1" * (self.half_steps // 2))
        return ChainCode("".join(parts), top=self.top)

    def result(self) -> CompositionResult:
        return CompositionResult(self.code(), self.provenance)


def _merge(a: _Hull, b: _Hull) -> _Hull:
    pa, pb = a.provenance, b.provenance
    out = []
    i = j = 0
    while i < len(pa) and j < len(pb):
        if pb[j][1].gradient < pa[i][1].gradient:
            out.append(pb[j])
            j += 1
        else:
            out.append(pa[i])
            i += 1
    out.extend(pa[i:])
    out.extend(pb[j:])
    return _Hull(a.top + b.top, a.half_steps + b.half_steps, tuple(out))


def compose_linear(u: CodeLike, v: CodeLike, sources: Tuple[str, str] = ("u", "v")) -> CompositionResult:
    """Merge the gradient-sorted line segments of both codes in one pass."""
    return _merge(_Hull.of(u, sources[0]), _Hull.of(v, sources[1])).result()


# ---- naive max-plus -------------------------------------------------------

def row_extents(code: CodeLike) -> List[int]:
    """Half-width of each row of the disc, from the top row downwards to y = 0."""
    code, _ = _structure(code)
    top = code.start_height
    heights = [top]
    for s in code.word:
        heights.append(heights[-1] - (s == "1"))
    last = len(code.word)
    y_end = heights[-1]
    extents = []
    for y in range(top, -1, -1):
        if y >= y_end:
            extents.append(max(x for x in range(last + 1) if heights[x] >= y))
        else:
            extents.append(heights[y])
    return extents


def _code_from_extents(extents: Sequence[int]) -> ChainCode:
    top = len(extents) - 1

    def height(x: int) -> int:
        return max(top - d for d, e in enumerate(extents) if e >= x)

    word = []
    prev = top
    x = 1
    while True:
        if x > extents[-1]:
            break
        h = height(x)
        if x > h:
            break
        drop = prev - h
        if drop not in (0, 1):
            raise ChainCodeError("composition left octant 1 with a steep step")
        word.append(str(drop))
        prev = h
        x += 1
    return ChainCode("".join(word), top=top)


def compose_naive(u: CodeLike, v: CodeLike, sources: Tuple[str, str] = ("u", "v")) -> CompositionResult:
    """Row ``d`` of the sum is the widest split of ``d`` between the two inputs."""
    eu, ev = row_extents(u), row_extents(v)
    ew = [max(eu[a] + ev[d - a] for a in range(max(0, d - len(ev) + 1), min(d, len(eu) - 1) + 1))
          for d in range(len(eu) + len(ev) - 1)]
    code = _code_from_extents(ew)
    prov = _merge(_Hull.of(u, sources[0]), _Hull.of(v, sources[1])).provenance
    return CompositionResult(code, prov)


def compose(u: CodeLike, v: CodeLike, naive: bool = False) -> CompositionResult:
    return (compose_naive if naive else compose_linear)(u, v)


def compose_all(codes: Sequence[CodeLike], sources: Optional[Sequence[str]] = None,
                naive: bool = False) -> CompositionResult:
    """Left fold of two or more codes, keeping each segment's original source."""
    if len(codes) < 2:
        raise ValueError("composition needs at least two codes")
    sources = list(sources) if sources is not None else [str(i) for i in range(len(codes))]
    if len(sources) != len(codes):
        raise ValueError("one source label per code")
    hull = _Hull.of(codes[0], sources[0])
    for code, src in zip(codes[1:], sources[1:]):
        hull = _merge(hull, _Hull.of(code, src))
    if not naive:
        return hull.result()
    acc = as_code(codes[0])
    for code in codes[1:]:
        acc = compose_naive(acc, code).code
    return CompositionResult(acc, hull.provenance)


def compose_sequence(seq: Union[BroadcastSequence, Iterable[int], int, str], k: int) -> CompositionResult:
    """Left fold over the first ``k`` radii of the (cyclic) sequence."""
    seq = BroadcastSequence.of(seq)
    if k < 1:
        raise ValueError("step count must be >= 1")
    hull = None
    for step in range(1, k + 1):
        r2 = seq.radius(step)
        nxt = _Hull.of(first_octant_code(r2), f"{r2}@{step}")
        hull = nxt if hull is None else _merge(hull, nxt)
    return hull.result()


def expand_full_circle(code: CodeLike) -> ChainCode:
    """Closed clockwise code of a composed octant code, built by octant symmetry."""
    code, _ = _structure(code)
    parts = []
    for n in range(1, 9):
        parts.append(octant_map(code, n).word)
        if n % 2 and code.odd_diagonal:
            parts.append(str(n))
    return ChainCode("".join(parts), top=code.start_height, octant_form=False)


# ---- similarity and decomposition ----------------------------------------

def _counts(code: CodeLike) -> List[Tuple[Fraction, int]]:
    _, pieces = _structure(code)
    return [(s.gradient, s.count) for s in pieces]


def similar(u: CodeLike, v: CodeLike) -> Optional[int]:
    """Scale factor between two codes whose line segments differ only by repetition."""
    cu, cv = _counts(u), _counts(v)
    if [g for g, _ in cu] != [g for g, _ in cv]:
        return None
    if not cu:
        return 1
    small, large = (cu, cv) if cu[0][1] <= cv[0][1] else (cv, cu)
    k, rem = divmod(large[0][1], small[0][1])
    if rem or any(b != k * a for (_, a), (_, b) in zip(small, large)):
        return None
    return k


@dataclass(frozen=True)
class Decomposition:
    counts: Dict[int, int]
    scale: int
    code: ChainCode


def decompose_similar(target: CodeLike, radii: Sequence[int], bound: int) -> Optional[Decomposition]:
    """Smallest radius multiset (count <= bound each) whose composition is similar to ``target``.

    Ranked by scale, then total count, then the count vector.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    target_counts = _counts(target)
    want = {g for g, _ in target_counts}
    hulls = {r2: _Hull.of(first_octant_code(r2), str(r2)) for r2 in radii}
    # a radius contributing a gradient outside the target can never be used
    usable = [r2 for r2 in radii if {s.gradient for _, s in hulls[r2].provenance} <= want]
    best = None
    for counts in product(range(bound + 1), repeat=len(usable)):
        if not any(counts):
            continue
        hull = None
        for r2, c in zip(usable, counts):
            for _ in range(c):
                hull = hulls[r2] if hull is None else _merge(hull, hulls[r2])
        code = hull.code()
        k = similar(code, target)
        if k is None:
            continue
        key = (k, sum(counts), counts)
        if best is None or key < best[0]:
            best = (key, Decomposition(
                {r2: c for r2, c in zip(usable, counts) if c}, k, code))
    return best[1] if best else None
