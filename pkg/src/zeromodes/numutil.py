"""Small numeric helpers: strict floor, unit-interval representative, integer tests.

The counting formulas use the convention that floor(y) is the biggest integer
*strictly* smaller than y, so floor(2) = 1.  Exact (Fraction) and float inputs
are both supported; Fraction inputs keep threshold decisions exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Real = Union[int, float, Fraction]

# absolute tolerance for "is this float an integer" decisions
INT_DETECTION_TOL = 1e-12


def floor_strict(y: Real) -> int:
    """Biggest integer strictly less than y (so floor_strict(2) == 1)."""
    if isinstance(y, (int, Fraction)):
        m = math.floor(y)
        return m - 1 if m == y else m
    m = math.floor(y)
    return m - 1 if m == float(y) else m


def is_integer_within(y: Real, tol: float = INT_DETECTION_TOL) -> bool:
    """Whether y is an integer, exactly for int/Fraction and within tol for floats."""
    if isinstance(y, (int, Fraction)):
        return y == math.floor(y)
    return abs(y - round(y)) <= tol


def unit_representative(c: Real) -> Real:
    """The unique value in (0, 1) differing from c by an integer.

    Undefined for integer c; callers must handle that branch first.
    """
    if isinstance(c, (int, Fraction)):
        r = c - math.floor(c)
    else:
        r = c - math.floor(c)
        # float folding can land exactly on 0 for values like -1e-17
        if r >= 1.0:
            r -= 1.0
    if r == 0:
        raise ValueError("unit_representative is undefined for integer input")
    return r
