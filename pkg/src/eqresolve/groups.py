"""Finite orthogonal matrix groups given by generators."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg as la
from .errors import CapExceeded, DimensionMismatch, NotASubgroup, NotOrthogonal

DEFAULT_CAP = 1024


class FiniteMatrixGroup:
    """A finite group of exactly orthogonal rational matrices.

    Element ids are assigned breadth-first from the identity, multiplying on
    the left by the generators in their given order, so ids are reproducible.

    ``tags`` optionally pairs each generator with a matrix of a second
    representation; elements are then pairs, so the action through
    ``generators`` may have a kernel.  ``elements`` always holds the acting
    matrices.
    """

    def __init__(self, generators: Sequence, cap: int = DEFAULT_CAP, name: str = "",
                 tags: Sequence | None = None):
        gens = [la.matrix(g) for g in generators]
        if not gens:
            raise ValueError("at least one generator is required (use the identity for the trivial group)")
        n = len(gens[0])
        for g in gens:
            if len(g) != n:
                raise DimensionMismatch("generators of different sizes")
            if not la.is_orthogonal(g):
                raise NotOrthogonal(f"generator {g} is not orthogonal")
        if tags is not None:
            tags = [la.matrix(t) for t in tags]
            if len(tags) != len(gens) or len({len(t) for t in tags}) != 1:
                raise DimensionMismatch("one tag of a common size is needed per generator")
        self.ambient_dim = n
        self.generators = tuple(gens)
        self.tag_generators = tuple(tags) if tags is not None else None
        self.cap = cap
        self.name = name
        ident = la.identity(n)
        tid = la.identity(len(tags[0])) if tags is not None else ()
        elements, tag_list = [ident], [tid]
        index = {(ident, tid): 0}
        queue = deque([(ident, tid)])
        pairs = list(zip(gens, tags if tags is not None else [()] * len(gens)))
        while queue:
            e, te = queue.popleft()
            for g, tg in pairs:
                key = (la.matmul(g, e), la.matmul(tg, te) if tags is not None else ())
                if key not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(f"group closure exceeds cap {cap}")
                    index[key] = len(elements)
                    elements.append(key[0])
                    tag_list.append(key[1])
                    queue.append(key)
        self.elements = tuple(elements)
        self.tags = tuple(tag_list)
        self.index = index

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteMatrixGroup(name={self.name!r}, n={self.ambient_dim}, order={self.order})"

    @cached_property
    def _table(self) -> list[list[int]]:
        keys = list(zip(self.elements, self.tags))
        if self.tag_generators is None:
            return [[self.index[(la.matmul(a, b), ())] for b, _ in keys] for a, _ in keys]
        return [[self.index[(la.matmul(a, b), la.matmul(ta, tb))] for b, tb in keys] for a, ta in keys]

    def mul(self, i: int, j: int) -> int:
        return self._table[i][j]

    @cached_property
    def _inverses(self) -> list[int]:
        return [row.index(0) for row in self._table]

    def inv(self, i: int) -> int:
        return self._inverses[i]

    @cached_property
    def _integral(self) -> list:
        """Each element as (integer matrix, common denominator)."""
        out = []
        for m in self.elements:
            d = 1
            for row in m:
                for x in row:
                    d = d * x.denominator // math.gcd(d, x.denominator)
            out.append((tuple(tuple(int(x * d) for x in row) for row in m), d))
        return out

    @staticmethod
    def integral_vector(v) -> tuple:
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        return tuple(int(x * den) for x in v)

    def fixes_integral(self, i: int, w: tuple) -> bool:
        m, d = self._integral[i]
        for row, target in zip(m, w):
            if sum(a * b for a, b in zip(row, w) if a) != d * target:
                return False
        return True

    def fixes(self, i: int, v) -> bool:
        """True iff element ``i`` fixes the vector ``v`` (early exit, integer arithmetic)."""
        return self.fixes_integral(i, self.integral_vector(v))

    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)))

    def subgroup(self, ids: Iterable[int]) -> "Subgroup":
        ids = frozenset(ids)
        for a in ids:
            for b in ids:
                if self.mul(a, b) not in ids:
                    raise NotASubgroup("element set is not closed under products")
        if 0 not in ids:
            raise NotASubgroup("subgroup must contain the identity")
        return Subgroup(self, ids)

    def conjugate(self, g: int, k: "Subgroup") -> "Subgroup":
        gi = self.inv(g)
        return Subgroup(self, frozenset(self.mul(self.mul(g, x), gi) for x in k.members))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteMatrixGroup = field(compare=False, hash=False)
    members: frozenset

    @property
    def member_ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def issubset(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    def matrices(self) -> list:
        return [self.parent.elements[i] for i in self.member_ids]

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, ids={list(self.member_ids)})"


def generate_group(generators: Sequence, cap: int = DEFAULT_CAP, name: str = "") -> FiniteMatrixGroup:
    return FiniteMatrixGroup(generators, cap=cap, name=name)


def point_stabilizer(group: FiniteMatrixGroup, v: Sequence) -> Subgroup:
    v = la.vector(v)
    if len(v) != group.ambient_dim:
        raise DimensionMismatch("point dimension does not match the group")
    return Subgroup(group, frozenset(i for i in range(group.order) if group.fixes(i, v)))


def pointwise_stabilizer(group: FiniteMatrixGroup, w: la.Subspace) -> Subgroup:
    """Largest subgroup acting as the identity on ``w``."""
    if w.ambient_dim != group.ambient_dim:
        raise DimensionMismatch("subspace dimension does not match the group")
    return Subgroup(group, frozenset(
        i for i in range(group.order) if all(group.fixes(i, b) for b in w.basis)))


def setwise_stabilizer(group: FiniteMatrixGroup, w: la.Subspace) -> Subgroup:
    return Subgroup(group, frozenset(i for i, g in enumerate(group.elements) if la.image(g, w) == w))


def _check_parent(group: FiniteMatrixGroup, *subgroups: Subgroup) -> None:
    for k in subgroups:
        if k.parent is not group:
            raise NotASubgroup("subgroup belongs to a different group")


def normalizer(group: FiniteMatrixGroup, k: Subgroup) -> Subgroup:
    _check_parent(group, k)
    return Subgroup(group, frozenset(g for g in range(group.order) if group.conjugate(g, k) == k))


def are_conjugate(group: FiniteMatrixGroup, k1: Subgroup, k2: Subgroup) -> int | None:
    """Return the id of some g with g k1 g^-1 = k2, or None."""
    _check_parent(group, k1, k2)
    if k1.order != k2.order:
        return None
    for g in range(group.order):
        if group.conjugate(g, k1) == k2:
            return g
    return None


def conjugate_into(group: FiniteMatrixGroup, k1: Subgroup, k2: Subgroup) -> int | None:
    """Return some g with g k1 g^-1 contained in k2, or None."""
    _check_parent(group, k1, k2)
    if k2.order % k1.order:
        return None
    for g in range(group.order):
        if group.conjugate(g, k1).members <= k2.members:
            return g
    return None


def representation_kernel(group: FiniteMatrixGroup) -> Subgroup:
    ident = la.identity(group.ambient_dim)
    return Subgroup(group, frozenset(i for i, g in enumerate(group.elements) if g == ident))


def restrict(sub: Subgroup, cap: int | None = None, name: str = "") -> FiniteMatrixGroup:
    """A subgroup as a group in its own right (element ids are re-assigned)."""
    mats = sub.matrices()
    tags = [sub.parent.tags[i] for i in sub.member_ids] if sub.parent.tag_generators is not None else None
    return FiniteMatrixGroup(mats, cap=cap or max(sub.parent.cap, len(mats)), name=name, tags=tags)
