"""Isotropy stratification of a linear action.

Isotropy groups are enumerated through the intersection lattice of the
single-element fixed spaces followed by the Galois closure
``W -> K(W) = {g : g|W = id}``; the full subgroup lattice is never built.

Order convention: ``I' <= I`` when the group of ``I`` is conjugate to a
subgroup of the group of ``I'``.  Minimal types therefore carry the largest
groups and the principal type (the representation kernel) is the maximum.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import StratumEmpty
from .groups import (FiniteMatrixGroup, Subgroup, are_conjugate, conjugate_into,
                     point_stabilizer, pointwise_stabilizer, representation_kernel)


@dataclass(frozen=True)
class IsotropyType:
    class_id: int
    representative: Subgroup
    fixed_space: la.Subspace
    orbit_subspaces: tuple
    stratum_codim: int
    group_order: int

    @property
    def dim(self) -> int:
        return self.fixed_space.dim


@dataclass
class IsotropyPoset:
    group: FiniteMatrixGroup
    lattice: tuple
    types: tuple
    order: frozenset  # pairs (a, b) meaning types[a] <= types[b]; larger isotropy groups sit lower
    principal: int
    member_class: dict = field(repr=False)

    def leq(self, a: int, b: int) -> bool:
        return (a, b) in self.order

    def lt(self, a: int, b: int) -> bool:
        return a != b and (a, b) in self.order

    def non_principal(self) -> list[int]:
        return [t.class_id for t in self.types if t.class_id != self.principal]

    def minimal(self, among) -> list[int]:
        among = list(among)
        return [i for i in among if not any(self.lt(j, i) for j in among)]

    def class_of_subgroup(self, k: Subgroup) -> int | None:
        for t in self.types:
            if are_conjugate(self.group, k, t.representative) is not None:
                return t.class_id
        return None

    def class_of_point(self, v) -> int:
        return self.class_of_subgroup(point_stabilizer(self.group, v))

    def smaller_members(self, w: la.Subspace) -> list:
        return [u for u in self.lattice if u != w and la.contains(w, u)]


def intersection_lattice(group: FiniteMatrixGroup) -> tuple:
    """Fixed spaces of single elements plus the ambient space, closed under intersection."""
    n = group.ambient_dim
    members = {la.Subspace.ambient(n)}
    members.update(la.fixed_subspace([g]) for g in group.elements)
    frontier = list(members)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(members):
                c = la.intersect(a, b)
                if c not in members and c not in new:
                    new.add(c)
        members |= new
        frontier = list(new)
    return tuple(sorted(members, key=lambda w: w.sort_key()))


def isotropy_poset(group: FiniteMatrixGroup) -> IsotropyPoset:
    lattice = intersection_lattice(group)
    groups = {w: pointwise_stabilizer(group, w) for w in lattice}
    classes: list[list] = []  # lists of lattice members sharing a conjugacy class
    for w in lattice:
        for cls in classes:
            if are_conjugate(group, groups[w], groups[cls[0]]) is not None:
                cls.append(w)
                break
        else:
            classes.append([w])
    raw = []
    for cls in classes:
        rep_space = min(cls, key=lambda w: w.sort_key())
        raw.append((-groups[rep_space].order, rep_space.sort_key(), rep_space, cls))
    raw.sort(key=lambda r: r[:2])
    n = group.ambient_dim
    types = []
    member_class = {}
    for cid, (_, _, rep_space, cls) in enumerate(raw):
        k = groups[rep_space]
        orbit = tuple(sorted(cls, key=lambda w: w.sort_key()))
        types.append(IsotropyType(cid, k, rep_space, orbit, n - rep_space.dim, k.order))
        for w in cls:
            member_class[w] = cid
    order = set()
    for a in types:
        for b in types:
            if conjugate_into(group, b.representative, a.representative) is not None:
                order.add((a.class_id, b.class_id))
    kernel = representation_kernel(group)
    principal = next(t.class_id for t in types if are_conjugate(group, t.representative, kernel) is not None)
    return IsotropyPoset(group, lattice, tuple(types), frozenset(order), principal, member_class)


def _random_point(basis, rng: random.Random, spread: int = 9):
    n = len(basis[0]) if basis else 0
    v = [Fraction(0)] * n
    for b in basis:
        c = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
        v = [x + c * y for x, y in zip(v, b)]
    return tuple(v)


def stratum_points(poset: IsotropyPoset, class_id: int, count: int, seed: int = 0,
                   max_tries: int = 1000) -> list:
    """Rational points of the fixed space of a type avoiding every smaller lattice member."""
    if count < 1:
        raise ValueError("count must be at least 1")
    t = poset.types[class_id]
    w = t.fixed_space
    smaller = poset.smaller_members(w)
    rng = random.Random(seed)
    pts = []
    for _ in range(max_tries):
        if len(pts) == count:
            break
        p = _random_point(w.basis, rng) if w.dim else tuple([Fraction(0)] * w.ambient_dim)
        if any(la.contains_vector(u, p) for u in smaller):
            continue
        stab = point_stabilizer(poset.group, p)
        if are_conjugate(poset.group, stab, t.representative) is None:
            raise StratumEmpty(f"sample {p} has stabilizer outside class {class_id}")
        pts.append(p)
    if len(pts) < count:
        raise StratumEmpty(f"could not sample type {class_id}")
    return pts


def closure_incidence(poset: IsotropyPoset) -> frozenset:
    """Pairs (I, J), I != J, with an orbit subspace of J inside one of I."""
    out = set()
    for a in poset.types:
        for b in poset.types:
            if a.class_id == b.class_id:
                continue
            if any(la.contains(u, v) for u in a.orbit_subspaces for v in b.orbit_subspaces):
                out.add((a.class_id, b.class_id))
    return frozenset(out)


# -- invariant checks; each returns a list of human-readable violations ------

def galois_violations(poset: IsotropyPoset) -> list[str]:
    g = poset.group
    bad = []
    for w in poset.lattice:
        k = pointwise_stabilizer(g, w)
        closed = la.fixed_subspace(k.matrices())
        if not la.contains(closed, w):
            bad.append(f"V^K(W) does not contain W for {w}")
        if pointwise_stabilizer(g, closed) != k:
            bad.append(f"K(V^K(W)) != K(W) for {w}")
    return bad


def sampling_oracle_violations(poset: IsotropyPoset, count: int = 100, seed: int = 0) -> list[str]:
    """Random points (including points on lattice members) must land in a known class."""
    rng = random.Random(seed)
    bad = []
    for i in range(count):
        w = poset.lattice[i % len(poset.lattice)] if i % 2 else la.Subspace.ambient(poset.group.ambient_dim)
        p = _random_point(w.basis, rng) if w.dim else tuple([Fraction(0)] * w.ambient_dim)
        if poset.class_of_point(p) is None:
            bad.append(f"stabilizer of {p} is not an enumerated isotropy class")
    return bad


def minimal_disjointness_violations(poset: IsotropyPoset, remaining=None) -> list[str]:
    """Minimal types among ``remaining`` have disjoint closures once the other types are removed.

    Two centres of minimal types may only meet inside a lattice member whose
    type is no longer in ``remaining``.
    """
    remaining = set(poset.non_principal() if remaining is None else remaining)
    mins = poset.minimal(remaining)
    centres = [(a, u) for a in mins for u in poset.types[a].orbit_subspaces]
    bad = []
    for i, (a, u) in enumerate(centres):
        for b, v in centres[i + 1:]:
            meet = la.intersect(u, v)
            if poset.member_class[meet] in remaining:
                bad.append(f"minimal centres {u} ({a}) and {v} ({b}) meet in a remaining stratum")
    return bad


def isotropy_shrink_violations(poset: IsotropyPoset, samples: int = 3, seed: int = 0) -> list[str]:
    """Stabilisers of nearby points are conjugate to subgroups of the original stabiliser."""
    rng = random.Random(seed)
    g = poset.group
    n = g.ambient_dim
    bad = []
    for t in poset.types:
        for p in stratum_points(poset, t.class_id, samples, seed=rng.randint(0, 10**6)):
            avoid = [u for u in poset.lattice if not la.contains_vector(u, p)]
            w = tuple(Fraction(rng.randint(-5, 5)) for _ in range(n))
            q = 10
            while True:
                near = tuple(x + y / q for x, y in zip(p, w))
                if not any(la.contains_vector(u, near) for u in avoid):
                    break
                q *= 10
            k0 = point_stabilizer(g, p)
            k1 = point_stabilizer(g, near)
            if conjugate_into(g, k1, k0) is None:
                bad.append(f"stabiliser at {near} not conjugate into stabiliser at {p}")
    return bad
