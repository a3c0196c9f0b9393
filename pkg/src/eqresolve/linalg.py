"""Exact rational linear algebra over the ambient representation space.

Vectors are tuples of :class:`fractions.Fraction`, matrices are tuples of
row tuples.  Subspaces are stored by their reduced row-echelon basis, so two
equal subspaces always compare (and hash) equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Vector = tuple  # tuple[Fraction, ...]
Matrix = tuple  # tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point scalars are not accepted; use 'p/q' strings")
    return Fraction(x)


def vector(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    m = tuple(vector(r) for r in rows)
    if m and any(len(r) != len(m) for r in m):
        raise DimensionMismatch("matrix must be square")
    return m


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), ZERO) for col in bt) for row in a)


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in m)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    # skipping zero terms matters: most vectors here are sparse
    s = ZERO
    for x, y in zip(u, v):
        if x and y:
            s += x * y
    return s


def add(u: Vector, v: Vector) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def scale(c: Fraction, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


def is_orthogonal(m: Matrix) -> bool:
    return matmul(transpose(m), m) == identity(len(m))


def rref(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != ncols:
            raise DimensionMismatch(f"row of length {len(r)} in {ncols}-dimensional space")
    pivots = []
    top = 0
    for col in range(ncols):
        piv = next((i for i in range(top, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        lead = work[top][col]
        if lead != 1:
            work[top] = [x / lead for x in work[top]]
        prow = work[top]
        for i in range(len(work)):
            if i != top and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], prow)]
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return tuple(tuple(r) for r in work[:top]), tuple(pivots)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vector]:
    """Basis of {v : row . v = 0 for every row}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n held in canonical reduced row-echelon form."""

    ambient_dim: int
    basis: tuple  # RREF rows

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows, _ = rref([vector(v) for v in vectors], ambient_dim)
        return cls(ambient_dim, rows)

    @classmethod
    def ambient(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - len(self.basis)

    def __contains__(self, v) -> bool:
        return contains_vector(self, v)

    def __repr__(self) -> str:
        rows = ", ".join("(" + ",".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(n={self.ambient_dim}, [{rows}])"

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.ambient_dim, self.basis))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Subspace):
            return NotImplemented
        return hash(self) == hash(other) and self.basis == other.basis and self.ambient_dim == other.ambient_dim

    def sort_key(self):
        return (self.dim, self.basis)

    def to_json(self) -> list:
        return [[fraction_str(x) for x in row] for row in self.basis]


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


@lru_cache(maxsize=None)
def _pivots(w: Subspace) -> tuple[int, ...]:
    return tuple(next(i for i, x in enumerate(row) if x != 0) for row in w.basis)


def contains_vector(w: Subspace, v: Sequence[Fraction]) -> bool:
    if len(v) != w.ambient_dim:
        raise DimensionMismatch("vector length does not match ambient dimension")
    r = list(v)
    for row, p in zip(w.basis, _pivots(w)):
        c = r[p]
        if c:
            r = [x - c * y if y else x for x, y in zip(r, row)]
    return not any(r)


@lru_cache(maxsize=None)
def orthogonal_complement(w: Subspace) -> Subspace:
    return Subspace.span(nullspace(w.basis, w.ambient_dim), w.ambient_dim)


@lru_cache(maxsize=None)
def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    normals = orthogonal_complement(a).basis + orthogonal_complement(b).basis
    return Subspace.span(nullspace(normals, a.ambient_dim), a.ambient_dim)


@lru_cache(maxsize=None)
def span_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return Subspace.span(a.basis + b.basis, a.ambient_dim)


@lru_cache(maxsize=None)
def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subset of a."""
    _check_same(a, b)
    return all(contains_vector(a, v) for v in b.basis)


def fixed_subspace(elements: Iterable[Matrix], ambient_dim: int | None = None) -> Subspace:
    """Common fixed space {v : Mv = v for every M}; the ambient space if empty."""
    elements = list(elements)
    if not elements:
        if ambient_dim is None:
            raise ValueError("ambient_dim is required for an empty element set")
        return Subspace.ambient(ambient_dim)
    n = len(elements[0])
    if ambient_dim is not None and ambient_dim != n:
        raise DimensionMismatch("matrix size does not match ambient_dim")
    rows = []
    for m in elements:
        if len(m) != n or any(len(r) != n for r in m):
            raise DimensionMismatch("matrices of different sizes")
        rows.extend(tuple(x - (ONE if i == j else ZERO) for j, x in enumerate(r)) for i, r in enumerate(m))
    return Subspace.span(nullspace(rows, n), n)


@lru_cache(maxsize=None)
def orthogonal_basis(w: Subspace) -> tuple[Vector, ...]:
    """Gram-Schmidt without normalisation (stays rational)."""
    out: list[Vector] = []
    for v in w.basis:
        for q in out:
            c = dot(v, q) / dot(q, q)
            v = tuple(x - c * y for x, y in zip(v, q))
        out.append(v)
    return tuple(out)


def project(w: Subspace, v: Sequence[Fraction]) -> Vector:
    """Orthogonal projection of v onto w."""
    res = [ZERO] * w.ambient_dim
    for q in orthogonal_basis(w):
        c = dot(v, q) / dot(q, q)
        if c:
            res = [x + c * y for x, y in zip(res, q)]
    return tuple(res)


def image(m: Matrix, w: Subspace) -> Subspace:
    return Subspace.span([matvec(m, b) for b in w.basis], w.ambient_dim)


def normal_in(outer: Subspace, hyper: Subspace) -> Vector:
    """Canonical normal of a codim-1 subspace ``hyper`` inside ``outer``."""
    line = intersect(outer, orthogonal_complement(hyper))
    if line.dim != 1:
        raise ValueError("not a hyperplane of the given space")
    return line.basis[0]
