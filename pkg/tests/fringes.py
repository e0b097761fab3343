"""Seeded random line-family pairs for fringe-gradient checks."""
from fractions import Fraction

from discwaves.aggregation import LineFamily, moire_gradient

WINDOW_HALF = 200


def random_pair(rng, max_fringe=None):
    """Two families with gradients in [-1, 1] (denominator <= 4) and widths in [1, 4].

    Widths differ by at least 1/2 so the moiré fringe is defined. With
    ``max_fringe`` the pair is redrawn until the moiré fringe is no steeper.
    """
    while True:
        q0, q1 = rng.randint(1, 4), rng.randint(1, 4)
        m0, m1 = Fraction(rng.randint(-q0, q0), q0), Fraction(rng.randint(-q1, q1), q1)
        w0, w1 = Fraction(rng.randint(2, 8), 2), Fraction(rng.randint(2, 8), 2)
        if abs(w0 - w1) < Fraction(1, 2):
            continue
        if max_fringe is not None and abs(moire_gradient(m0, w0, m1, w1)) > max_fringe:
            continue
        c0 = Fraction(rng.randint(0, 3), 4) * w0
        c1 = Fraction(rng.randint(0, 3), 4) * w1
        return LineFamily(m0, c0, w0), LineFamily(m1, c1, w1)
