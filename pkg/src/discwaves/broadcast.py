"""Broadcasting automata on a bounded window of the square lattice.

Two layers live here. ``run_sync``/``run_async`` execute automata message by
message. ``propagate_sequence`` computes the same wavefronts directly as
iterated Minkowski sums on a boolean array, which is what the rest of the
package uses.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace
from math import isqrt
from typing import (
    Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping,
    Optional, Sequence, Set, Tuple, Union,
)

import numpy as np

from .chaincode import ChainCode, octant_code_of_region
from .composition import BroadcastSequence
from .lattice import Point, disc_offsets

EPSILON = None  # the empty output symbol

State = Hashable
Symbol = Hashable


class WindowError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    """Inclusive rectangle of lattice points; points outside simply do not exist."""

    xmin: int
    ymin: int
    xmax: int
    ymax: int

    def __post_init__(self):
        if self.xmax < self.xmin or self.ymax < self.ymin:
            raise WindowError("empty window")

    @classmethod
    def around(cls, centre: Point, half: int) -> "Window":
        cx, cy = centre
        return cls(cx - half, cy - half, cx + half, cy + half)

    @classmethod
    def sized(cls, width: int, height: int) -> "Window":
        return cls(0, 0, width - 1, height - 1)

    @property
    def width(self) -> int:
        return self.xmax - self.xmin + 1

    @property
    def height(self) -> int:
        return self.ymax - self.ymin + 1

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    @property
    def cells(self) -> int:
        return self.width * self.height

    @property
    def diagonal(self) -> float:
        return float(np.hypot(self.width, self.height))

    def contains(self, p: Point) -> bool:
        return self.xmin <= p[0] <= self.xmax and self.ymin <= p[1] <= self.ymax

    def index(self, p: Point) -> Tuple[int, int]:
        return p[1] - self.ymin, p[0] - self.xmin

    def points(self) -> Iterator[Point]:
        for y in range(self.ymin, self.ymax + 1):
            for x in range(self.xmin, self.xmax + 1):
                yield x, y

    @staticmethod
    def dist2(p: Point, q: Point) -> int:
        return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


MetricSpace2D = Window


# ---- automata -------------------------------------------------------------

@dataclass(frozen=True)
class BroadcastingAutomaton:
    states: FrozenSet[State]
    inputs: FrozenSet[Symbol]
    outputs: FrozenSet[Symbol]
    transition: Callable[[State, FrozenSet[Symbol]], Optional[State]]
    output: Callable[[State], Optional[Symbol]]
    radius2: Callable[[State], int]
    initial: State
    final: FrozenSet[State]
    source: State  # placed at the origin in the starting configuration


def wave_automaton(r2: int) -> BroadcastingAutomaton:
    """Clock-driven wave: quiet -> fire -> rest; rest would re-fire but for the refractory step."""
    def delta(s, gamma):
        if s == "fire":
            return "rest"
        if s in ("quiet", "rest"):
            return "fire" if gamma else s
        return None

    return BroadcastingAutomaton(
        states=frozenset({"quiet", "fire", "rest"}),
        inputs=frozenset({"m"}),
        outputs=frozenset({"m"}),
        transition=delta,
        output=lambda s: "m" if s == "fire" else EPSILON,
        radius2=lambda s: r2,
        initial="quiet",
        final=frozenset({"rest"}),
        source="fire",
    )


def cycling_automaton(radii: Union[Sequence[int], BroadcastSequence], alphabet: int = 4) -> BroadcastingAutomaton:
    """Clockless wave: a point hearing symbol i answers with symbol i+1 (mod alphabet).

    A point sent its symbol ``i`` on the step it was reached and then holds
    it; it ignores the outward symbol ``i+1`` its neighbours answer with.
    The sending radius cycles through ``radii``.
    """
    radii = BroadcastSequence.of(radii).radii
    if alphabet < 2:
        raise ValueError("alphabet needs at least two symbols")
    if alphabet % len(radii):
        raise ValueError("alphabet size must be a multiple of the sequence period")

    def delta(s, gamma):
        kind = s[0]
        if kind == "quiet":
            return ("send", (min(gamma) + 1) % alphabet) if gamma else s
        if kind == "send":
            return ("held", s[1])
        if kind == "held":
            return s
        return None

    states = {("quiet",)} | {(k, i) for k in ("send", "held") for i in range(alphabet)}
    symbols = frozenset(range(alphabet))
    return BroadcastingAutomaton(
        states=frozenset(states),
        inputs=symbols,
        outputs=symbols,
        transition=delta,
        output=lambda s: s[1] if s[0] == "send" else EPSILON,
        radius2=lambda s: radii[s[1] % len(radii)] if s[0] != "quiet" else 0,
        initial=("quiet",),
        final=frozenset({("held", i) for i in range(alphabet)}),
        source=("send", 0),
    )


@dataclass(frozen=True)
class Configuration:
    machine: BroadcastingAutomaton
    window: Window
    active: Mapping[Point, State]  # points not in the initial state
    t: int = 0
    refractory: FrozenSet[Point] = frozenset()
    synchronous: bool = True
    halted: Optional[str] = None

    def state(self, p: Point) -> State:
        if not self.window.contains(p):
            raise WindowError(f"{p} outside the window")
        return self.active.get(p, self.machine.initial)

    def activated(self) -> Set[Point]:
        return set(self.active)

    def is_final(self) -> bool:
        return all(s in self.machine.final for s in self.active.values())


def _transmitters(cfg: Configuration) -> List[Tuple[Point, Symbol, int]]:
    out = []
    for p, s in cfg.active.items():
        sym = cfg.machine.output(s)
        if sym is not EPSILON:
            out.append((p, sym, cfg.machine.radius2(s)))
    return out


def received_messages(cfg: Configuration, u: Point) -> Set[Symbol]:
    """Distinct symbols reaching ``u``: multiplicity is lost on purpose."""
    if not cfg.window.contains(u):
        raise WindowError(f"{u} outside the window")
    return {sym for v, sym, r2 in _transmitters(cfg) if Window.dist2(u, v) <= r2}


def global_step(cfg: Configuration) -> Configuration:
    if cfg.halted:
        return cfg
    machine, window = cfg.machine, cfg.window
    senders = _transmitters(cfg)
    inbox: Dict[Point, Set[Symbol]] = defaultdict(set)
    for (vx, vy), sym, r2 in senders:
        for dx, dy in disc_offsets(r2):
            u = (vx + dx, vy + dy)
            if window.contains(u):
                inbox[u].add(sym)

    idle_stays = machine.transition(machine.initial, frozenset()) == machine.initial
    todo = set(cfg.active) | set(inbox) if idle_stays else window.points()
    nxt: Dict[Point, State] = {}
    for p in sorted(todo):
        s = cfg.active.get(p, machine.initial)
        gamma = frozenset() if p in cfg.refractory else frozenset(inbox.get(p, ()))
        ns = machine.transition(s, gamma)
        if ns is None:
            return replace(cfg, halted=f"no transition from {s!r} on {sorted(gamma, key=repr)} at {p}")
        if ns != machine.initial:
            nxt[p] = ns
    refractory = frozenset(v for v, _, _ in senders) if cfg.synchronous else frozenset()
    return Configuration(machine, window, nxt, cfg.t + 1, refractory, cfg.synchronous)


def _run(machine, window, origin, steps, synchronous) -> List[Configuration]:
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if not window.contains(origin):
        raise WindowError("origin outside the window")
    cfg = Configuration(machine, window, {origin: machine.source}, 0, frozenset(), synchronous)
    trace = [cfg]
    for _ in range(steps):
        cfg = global_step(cfg)
        trace.append(cfg)
        if cfg.halted:
            break
    return trace


def run_sync(machine: BroadcastingAutomaton, window: Window, origin: Point, steps: int) -> List[Configuration]:
    """Three-phase rule: reached at t, transmit, then ignore everything at t + 2.

    The ignore phase is a per-point flag on the configuration; it stands in
    for duplicating every state with a "deaf" twin.
    """
    return _run(machine, window, origin, steps, True)


def run_async(machine: BroadcastingAutomaton, window: Window, origin: Point, steps: int) -> List[Configuration]:
    """No ignore phase: the cycling symbols alone tell inward from outward traffic."""
    return _run(machine, window, origin, steps, False)


def activation_steps(trace: Sequence[Configuration]) -> Dict[Point, int]:
    """First time each point left the initial state."""
    first: Dict[Point, int] = {}
    for cfg in trace:
        for p in cfg.active:
            first.setdefault(p, cfg.t)
    return first


# ---- labelings ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Labeling:
    """Integer index per window cell; the label is ``index mod modulus``.

    For wavefronts the index is ``k - 1`` where ``R_k`` is the first region
    holding the point, so ``R_1`` (origin included) carries label 0.
    """

    window: Window
    index: np.ndarray
    modulus: Optional[int] = None
    origin: Optional[Point] = None
    mask: Optional[np.ndarray] = None  # cells that carry a label

    @property
    def reached(self) -> np.ndarray:
        return np.ones(self.window.shape, bool) if self.mask is None else self.mask

    @property
    def labels(self) -> np.ndarray:
        if self.modulus is None:
            raise ValueError("labeling has no modulus")
        return np.where(self.reached, np.mod(self.index, self.modulus), -1)

    def label(self, p: Point) -> Optional[int]:
        i = self.window.index(p)
        if not self.reached[i]:
            return None
        return int(self.index[i] % self.modulus) if self.modulus else int(self.index[i])

    def reach_step(self, p: Point) -> Optional[int]:
        i = self.window.index(p)
        return int(self.index[i]) + 1 if self.reached[i] else None

    def region(self, k: int) -> Set[Point]:
        ys, xs = np.nonzero(self.reached & (self.index <= k - 1))
        return {(int(x) + self.window.xmin, int(y) + self.window.ymin) for x, y in zip(xs, ys)}

    def rows(self) -> Iterator[Tuple[int, int, int, int]]:
        """(x, y, first step, label) for every labelled cell, row-major."""
        lab = self.labels if self.modulus else self.index
        ys, xs = np.nonzero(self.reached)
        for y, x in zip(ys, xs):
            yield (int(x) + self.window.xmin, int(y) + self.window.ymin,
                   int(self.index[y, x]) + 1, int(lab[y, x]))


def dilate(mask: np.ndarray, offsets: Iterable[Point]) -> np.ndarray:
    """Minkowski sum of a boolean array with a set of (dx, dy) offsets, clipped to the array."""
    h, w = mask.shape
    out = np.zeros_like(mask)
    ys, xs = np.nonzero(mask)
    if len(ys) == 0:
        return out
    y0, y1, x0, x1 = ys.min(), ys.max() + 1, xs.min(), xs.max() + 1
    src = mask[y0:y1, x0:x1]
    for dx, dy in offsets:
        ty0, tx0 = y0 + dy, x0 + dx
        sy0, sx0 = max(0, -ty0), max(0, -tx0)
        sy1 = min(src.shape[0], h - ty0)
        sx1 = min(src.shape[1], w - tx0)
        if sy0 < sy1 and sx0 < sx1:
            out[ty0 + sy0:ty0 + sy1, tx0 + sx0:tx0 + sx1] |= src[sy0:sy1, sx0:sx1]
    return out


def region_extent(seq: BroadcastSequence, k: int) -> int:
    """Reach of ``R_k`` along each axis from its origin."""
    return sum(isqrt(seq.radius(step)) for step in range(1, k + 1))


def propagate_sequence(seq, origin: Point, k: int, m: Optional[int], window: Window,
                       clip: bool = False) -> Labeling:
    """Label each point by the first ``R_j`` (j <= k) that holds it.

    With ``clip`` the wave may run off the window; labels inside stay exact
    because discs are symmetric and convex, so any path leaving the box can
    be folded back inside it.
    """
    seq = BroadcastSequence.of(seq)
    if k < 1:
        raise ValueError("k must be >= 1")
    if m is not None and m < 1:
        raise ValueError("modulus must be positive")
    if not window.contains(origin):
        raise WindowError("origin outside the window")
    if not clip:
        reach = region_extent(seq, k)
        ox, oy = origin
        if not (window.contains((ox - reach, oy - reach)) and window.contains((ox + reach, oy + reach))):
            raise WindowError("window too small for k steps")
    reached = np.zeros(window.shape, bool)
    reached[window.index(origin)] = True
    index = np.full(window.shape, -1, np.int64)
    for step in range(1, k + 1):
        grown = dilate(reached, disc_offsets(seq.radius(step)))
        index[grown & ~reached] = step - 1
        reached = grown
        if clip and reached.all():
            break
    index[window.index(origin)] = 0
    return Labeling(window, index, m, origin, reached)


def fill_window(seq, origin: Point, m: Optional[int], window: Window) -> Labeling:
    """Propagate until every cell of the window is labelled."""
    seq = BroadcastSequence.of(seq)
    if all(r2 == 0 for r2 in seq.radii):
        raise ValueError("a sequence of zero radii never spreads")
    span = max(window.width, window.height) * seq.period
    return propagate_sequence(seq, origin, span, m, window, clip=True)


def m_neighbour_step(region: Iterable[Point], M: int) -> Set[Point]:
    if M == 1:
        steps = ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1))
    elif M == 2:
        steps = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))
    else:
        raise ValueError("M must be 1 or 2")
    return {(x + dx, y + dy) for x, y in region for dx, dy in steps}


def hull_octant_code(labeling: Labeling, k: int) -> ChainCode:
    if labeling.origin is None:
        raise ValueError("labeling has no origin")
    ox, oy = labeling.origin
    return octant_code_of_region((x - ox, y - oy) for x, y in labeling.region(k))


def a_distance(p: Point, q: Point, seq) -> int:
    """Number of sequence steps needed to reach ``q`` from ``p``."""
    seq = BroadcastSequence.of(seq)
    if p == q:
        return 0
    if all(r2 == 0 for r2 in seq.radii):
        raise ValueError("a sequence of zero radii never spreads")
    window = Window(min(p[0], q[0]), min(p[1], q[1]), max(p[0], q[0]), max(p[1], q[1]))
    reached = np.zeros(window.shape, bool)
    reached[window.index(p)] = True
    target = window.index(q)
    step = 0
    while not reached[target]:
        step += 1
        reached = dilate(reached, disc_offsets(seq.radius(step)))
    return step
