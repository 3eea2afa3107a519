"""Points of a two-sided shift space, represented exactly.

A :class:`ShiftPoint` is a bi-infinite symbol sequence that is eventually
periodic in both directions: a periodic left tail, a finite center block,
and a periodic right tail.  This class is closed under the shift map and
its inverse, so orbits of periodic and homoclinic points can be followed
exactly, with no truncation error.

The metric is d(x, y) = 2^(-k) with k the largest integer such that the
sequences agree on all coordinates i with |i| < k (d = 0 for equal
points).  Closed epsilon-balls are centered cylinders.
"""

from __future__ import annotations

import math
from typing import Sequence

from .sft import TransitionMatrix, Word

# Agreement is resolved exactly out to this radius before two distinct
# points are declared equal; far beyond any word length used at desk scale
# and still within float range for 2**-k.
_EQUALITY_CAP = 1000


class ShiftPoint:
    """Bi-infinite sequence: periodic left tail | center | periodic right tail.

    ``pos`` is the index of the first center coordinate; the right tail
    starts at ``pos + len(center)`` and repeats ``right``; coordinates
    below ``pos`` repeat ``left``, anchored so that coordinate pos-1 is
    the last symbol of ``left``.
    """

    __slots__ = ("left", "center", "right", "pos")

    def __init__(self, left: Sequence[int], center: Sequence[int],
                 right: Sequence[int], pos: int = 0):
        if len(left) == 0 or len(right) == 0:
            raise ValueError("tails must be non-empty periodic words")
        self.left = tuple(int(s) for s in left)
        self.center = tuple(int(s) for s in center)
        self.right = tuple(int(s) for s in right)
        self.pos = int(pos)

    @classmethod
    def from_cycle(cls, word: Sequence[int], phase: int = 0) -> "ShiftPoint":
        """The periodic point x with x_i = word[(i + phase) mod len]."""
        w = tuple(word)
        k = phase % len(w)
        rotated = w[k:] + w[:k]
        return cls(rotated, (), rotated, 0)

    def __getitem__(self, i: int) -> int:
        end = self.pos + len(self.center)
        if self.pos <= i < end:
            return self.center[i - self.pos]
        if i >= end:
            return self.right[(i - end) % len(self.right)]
        return self.left[(i - self.pos) % len(self.left)]

    def window(self, lo: int, hi: int) -> Word:
        """Coordinates lo..hi-1."""
        return tuple(self[i] for i in range(lo, hi))

    def shift(self, k: int = 1) -> "ShiftPoint":
        """sigma^k: (sigma x)_i = x_{i+1}."""
        return ShiftPoint(self.left, self.center, self.right, self.pos - k)

    def agreement_radius(self, other: "ShiftPoint", cap: int = _EQUALITY_CAP) -> int:
        """Largest k <= cap with x_i = y_i for all |i| < k."""
        k = 0
        while k < cap:
            if self[k] != other[k] or self[-k] != other[-k]:
                return k
            k += 1
        return cap

    def distance(self, other: "ShiftPoint") -> float:
        k = self.agreement_radius(other)
        if k >= _EQUALITY_CAP:
            return 0.0 if self.equals(other) else 2.0 ** (-_EQUALITY_CAP)
        return 2.0 ** (-k)

    def equals(self, other: "ShiftPoint") -> bool:
        """Exact equality of the bi-infinite sequences."""
        span = (abs(self.pos) + abs(other.pos) + len(self.center) + len(other.center)
                + 2 * math.lcm(len(self.left), len(other.left))
                + 2 * math.lcm(len(self.right), len(other.right)))
        return all(self[i] == other[i] for i in range(-span, span + 1))

    def __eq__(self, other) -> bool:
        return isinstance(other, ShiftPoint) and self.equals(other)

    def __hash__(self) -> int:
        # hash on a canonical finite window; equality does the exact work
        return hash(self.window(-8, 8))

    def is_admissible(self, matrix: TransitionMatrix) -> bool:
        span = abs(self.pos) + len(self.center) + len(self.left) + len(self.right) + 1
        return all(matrix.admits(self[i], self[i + 1]) for i in range(-span, span))

    def centered_word(self, radius: int) -> str:
        """Coordinates -radius..radius-1 with a dot before coordinate 0."""
        lefts = "".join(str(self[i]) for i in range(-radius, 0))
        rights = "".join(str(self[i]) for i in range(0, radius))
        return f"{lefts}.{rights}"

    def __repr__(self) -> str:
        return f"ShiftPoint({self.centered_word(8)!r})"


def cylinder_contains(point: ShiftPoint, word: Word, anchor: int = 0) -> bool:
    """Does the point carry ``word`` at positions anchor..anchor+len-1?"""
    return point.window(anchor, anchor + len(word)) == tuple(word)


def word_radius(epsilon: float) -> int:
    """Smallest m >= 0 with 2^-m <= epsilon (epsilon in (0, 1])."""
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    m = 0
    while 2.0 ** (-m) > epsilon:
        m += 1
    return m
