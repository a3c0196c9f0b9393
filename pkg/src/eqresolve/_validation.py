"""Input checks shared by the estimators."""
from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch
from .groups import FiniteMatrixGroup
from . import linalg as la


def exact(x) -> Fraction:
    """Exact value of a scalar; floats are taken at their exact binary value."""
    if isinstance(x, float):
        return Fraction(x)
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        x = x.item()
        if isinstance(x, float):
            return Fraction(x)
    return la.to_fraction(x)


def check_points(points, dim: int) -> list[tuple]:
    out = []
    for p in points:
        row = tuple(exact(x) for x in p)
        if len(row) != dim:
            raise DimensionMismatch(f"point of length {len(row)} in dimension {dim}")
        out.append(row)
    return out


def check_group(group, cap: int) -> FiniteMatrixGroup:
    if isinstance(group, FiniteMatrixGroup):
        return group
    return FiniteMatrixGroup([la.matrix(g) for g in group], cap=cap)
