"""
Finite unions of half-open subintervals of the unit interval.

Sets of hidden-variable values are represented exactly as sorted, merged
pieces [lo, hi) inside [0, 1); the Lebesgue measure of a set is the sum of
its piece lengths. Half-open pieces mean a boundary point belongs to exactly
one side of any partition.
"""
from dataclasses import dataclass

import numpy as np

UNIT_LOW = 0.0
UNIT_HIGH = 1.0


def _normalize(pieces):
    clipped = []
    for lo, hi in pieces:
        lo = max(UNIT_LOW, float(lo))
        hi = min(UNIT_HIGH, float(hi))
        if hi > lo:
            clipped.append((lo, hi))
    clipped.sort()

    merged = []
    for lo, hi in clipped:
        if merged and lo <= merged[-1][1]:
            prev_lo, prev_hi = merged[-1]
            merged[-1] = (prev_lo, max(prev_hi, hi))
        else:
            merged.append((lo, hi))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet:
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'pieces', _normalize(self.pieces))

    # CONSTRUCTORS

    @classmethod
    def empty(cls):
        return cls(())

    @classmethod
    def span(cls, lo, hi):
        """The single piece [lo, hi), clipped to [0, 1); empty when hi <= lo"""
        return cls(((lo, hi),))

    @classmethod
    def unit(cls):
        return cls(((UNIT_LOW, UNIT_HIGH),))

    # QUERIES

    @property
    def is_empty(self):
        return not self.pieces

    def measure(self):
        return float(sum(hi - lo for lo, hi in self.pieces))

    def contains(self, point):
        point = float(point)
        return any(lo <= point < hi for lo, hi in self.pieces)

    def __contains__(self, point):
        return self.contains(point)

    def contains_many(self, points):
        """Vectorised membership for an array of points"""
        points = np.asarray(points, dtype=float)
        inside = np.zeros(points.shape, dtype=bool)
        for lo, hi in self.pieces:
            inside |= (points >= lo) & (points < hi)
        return inside

    def endpoints(self):
        return sorted({p for piece in self.pieces for p in piece})

    # SET ALGEBRA

    def union(self, other):
        return IntervalSet(self.pieces + other.pieces)

    def intersection(self, other):
        pieces = []
        for a_lo, a_hi in self.pieces:
            for b_lo, b_hi in other.pieces:
                lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
                if hi > lo:
                    pieces.append((lo, hi))
        return IntervalSet(tuple(pieces))

    def complement(self):
        """Complement within [0, 1)"""
        pieces = []
        cursor = UNIT_LOW
        for lo, hi in self.pieces:
            if lo > cursor:
                pieces.append((cursor, lo))
            cursor = hi
        if cursor < UNIT_HIGH:
            pieces.append((cursor, UNIT_HIGH))
        return IntervalSet(tuple(pieces))

    def difference(self, other):
        return self.intersection(other.complement())

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def to_list(self):
        return [[lo, hi] for lo, hi in self.pieces]

    def __repr__(self):
        if self.is_empty:
            return 'IntervalSet(∅)'
        return 'IntervalSet(' + ' ∪ '.join(f'[{lo!r}, {hi!r})' for lo, hi in self.pieces) + ')'
