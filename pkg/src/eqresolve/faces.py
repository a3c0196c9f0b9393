"""Face enumeration for iterated radial blow-ups of linear subspace arrangements.

A space here is a linear region ``E`` (the interior of a ball, or a box for
diagonal sign groups) in which an intersection-closed set of subspaces has
been blown up, smallest first.  A face of the result is described by

* a strictly decreasing chain ``W_1 > ... > W_k`` of blown centres,
* boundary data: the sphere at infinity (ball) or box facets ``x_i = s``,
* one chamber per factor: the base point ``x`` in ``W_k`` and the normal
  direction ``u_j`` in ``W_{j-1} ∩ W_j^⊥`` (``W_0 = E``).

Chambers are taken with respect to the blown members of codim 1 inside the
factor; lower-dimensional members do not disconnect.  Points near a face are
handled with lexicographic infinitesimals so incidences are decided exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

from . import linalg as la
from .corners import CornerComplex, Face, LatticeAction
from .errors import CenterNotPSubmanifold, FaceEmpty
from .groups import Subgroup

BALL = "ball"
SIGNBOX = "signbox"


def subspace_name(w: la.Subspace) -> str:
    if w.dim == 0:
        return "0"
    if w.dim == w.ambient_dim:
        return "R" + str(w.ambient_dim)
    rows = []
    for r in w.basis:
        rows.append(",".join(str(x) if x.denominator == 1 else la.fraction_str(x) for x in r))
    return "<" + ";".join(rows) + ">"


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True)
class FlagIndex:
    chain: tuple
    at_infinity: bool = False
    box_face: tuple = ()  # sorted ((coordinate, sign), ...)
    base_signs: tuple = ()
    dir_signs: tuple = ()

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.chain, self.at_infinity, self.box_face, self.base_signs, self.dir_signs))
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FlagIndex):
            return NotImplemented
        return (hash(self) == hash(other) and self.base_signs == other.base_signs
                and self.dir_signs == other.dir_signs and self.box_face == other.box_face
                and self.at_infinity == other.at_infinity and self.chain == other.chain)

    @property
    def codim(self) -> int:
        return len(self.chain) + int(self.at_infinity) + len(self.box_face)

    @property
    def carrier(self):
        return self.chain[-1] if self.chain else None

    def sort_key(self):
        return (self.codim, tuple(w.sort_key() for w in self.chain), self.at_infinity,
                self.box_face, self.base_signs, self.dir_signs)

    def conditions(self) -> list:
        out = [("chain", w) for w in self.chain]
        if self.at_infinity:
            out.append(("inf",))
        out.extend(("box", i, s) for i, s in self.box_face)
        return out

    def __str__(self) -> str:
        parts = [">".join(subspace_name(w) for w in self.chain) or "-"]
        if self.at_infinity:
            parts.append("inf")
        if self.box_face:
            parts.append("".join(f"x{i}{_sign_char(s)}" for i, s in self.box_face))
        signs = "".join(_sign_char(s) for s in self.base_signs)
        dirs = "/".join("".join(_sign_char(s) for s in d) for d in self.dir_signs)
        parts.append(f"[{signs}|{dirs}]")
        return " ".join(parts)


@dataclass(frozen=True)
class SubspaceModel:
    """Region ``ambient`` of a ball or box with the ``blown`` members blown up."""

    kind: str
    ambient: la.Subspace
    group: Subgroup
    blown: tuple
    members: tuple  # all arrangement members strictly inside ``ambient``

    def key(self):
        return (self.kind, self.ambient, self.group.members, self.blown)


# -- lexicographic infinitesimal vectors -----------------------------------

def _lex(v) -> list:
    return [tuple(v)]


def _lex_add(a: list, b: list, power: int) -> list:
    n = len(a[0])
    out = [list(x) for x in a]
    while len(out) < power + len(b):
        out.append([Fraction(0)] * n)
    for i, v in enumerate(b):
        row = out[power + i]
        for c in range(n):
            row[c] += v[c]
    return [tuple(x) for x in out]


def _lex_sign(normal, lv: list) -> int:
    for v in lv:
        d = la.dot(normal, v)
        if d:
            return 1 if d > 0 else -1
    return 0


def _lex_in(w: la.Subspace, lv: list) -> bool:
    return all(la.contains_vector(w, v) for v in lv)


# -- chambers ----------------------------------------------------------------

def _dedupe_normals(space: la.Subspace, normals) -> list:
    out = []
    for h in normals:
        p = la.project(space, h)
        if la.is_zero(p):
            continue
        if any(la.Subspace.span([p], space.ambient_dim) == la.Subspace.span([q], space.ambient_dim) for q in out):
            continue
        out.append(p)
    return out


def _nudge(p, h, others) -> Fraction:
    """Step along ``h`` small enough to keep the signs of ``others`` at ``p``."""
    delta = Fraction(1)
    for o in others:
        a = la.dot(o, h)
        if a:
            b = abs(la.dot(o, p))
            if b:
                delta = min(delta, b / (2 * abs(a)))
    return delta


def chamber_witnesses(space: la.Subspace, normals) -> list:
    """One point of ``space`` in each chamber of the hyperplanes ``normals`` (deletion-restriction)."""
    hs = _dedupe_normals(space, normals)
    n = space.ambient_dim
    if not hs:
        if space.dim == 0:
            return [tuple([Fraction(0)] * n)]
        return [space.basis[0]]
    h, rest = hs[-1], hs[:-1]
    prev = chamber_witnesses(space, rest)
    cut_space = la.intersect(space, la.orthogonal_complement(la.Subspace.span([h], n)))
    cut = chamber_witnesses(cut_space, rest)
    pts = []
    for p in prev:
        if la.dot(h, p) == 0:
            p = la.add(p, la.scale(_nudge(p, h, rest), h))
        pts.append(p)
    for q in cut:
        d = _nudge(q, h, rest)
        pts.append(la.add(q, la.scale(d, h)))
        pts.append(la.add(q, la.scale(-d, h)))
    seen = {}
    for p in pts:
        key = tuple(1 if la.dot(x, p) > 0 else -1 for x in hs)
        seen.setdefault(key, p)
    return list(seen.values())


def _signs(normals, v) -> tuple:
    out = []
    for h in normals:
        d = la.dot(h, v)
        out.append(1 if d > 0 else -1 if d < 0 else 0)
    return tuple(out)


def _random_in(space: la.Subspace, rng: random.Random, spread: int = 7):
    v = [Fraction(0)] * space.ambient_dim
    for b in space.basis:
        c = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
        v = [x + c * y for x, y in zip(v, b)]
    return tuple(v)


# -- the face geometry of a blown-up model ----------------------------------

@dataclass
class FacePoint:
    chain: list
    at_infinity: bool
    box: set
    base: list  # lexicographic vector
    dirs: list  # lexicographic vectors, one per chain member

    def depth(self) -> int:
        return max([len(self.base)] + [len(d) for d in self.dirs])


class BlownGeometry:
    def __init__(self, model: SubspaceModel):
        self.model = model
        self.n = model.ambient.ambient_dim
        self.blown = tuple(sorted(model.blown, key=lambda w: w.sort_key()))
        self.unblown = tuple(w for w in sorted(model.members, key=lambda w: w.sort_key()) if w not in set(self.blown))
        if model.kind == SIGNBOX:
            for w in self.blown:
                if any(sum(1 for x in row if x) != 1 for row in w.basis):
                    raise CenterNotPSubmanifold(f"{w} is not a coordinate subspace")
        self._base_cache = {}
        self._dir_cache = {}
        self._image_cache = {}
        self._map_cache = {}
        self._inside_cache = {}
        self._between_cache = {}

    # hyperplanes in each factor
    def base_hyperplanes(self, wk: la.Subspace, at_infinity: bool) -> tuple:
        key = (wk, at_infinity)
        if key not in self._base_cache:
            hyps = [u for u in self.blown if u.dim == wk.dim - 1 and la.contains(wk, u)]
            normals = [la.normal_in(wk, u) for u in hyps]
            if at_infinity and wk.dim == 1 and not normals:
                normals = [wk.basis[0]]
            self._base_cache[key] = tuple(normals)
        return self._base_cache[key]

    def dir_hyperplanes(self, upper: la.Subspace, lower: la.Subspace) -> tuple:
        key = (upper, lower)
        if key not in self._dir_cache:
            hyps = [u for u in self.blown
                    if u.dim == upper.dim - 1 and u != upper and la.contains(upper, u) and la.contains(u, lower)]
            self._dir_cache[key] = tuple(la.normal_in(upper, u) for u in hyps)
        return self._dir_cache[key]

    def normal_space(self, upper: la.Subspace, lower: la.Subspace) -> la.Subspace:
        return la.intersect(upper, la.orthogonal_complement(lower))

    def free_coords(self, w: la.Subspace) -> list:
        return [i for i in range(self.n) if la.contains_vector(w, tuple(Fraction(int(j == i)) for j in range(self.n)))]

    # genericity
    def _inside(self, wk: la.Subspace) -> tuple:
        if wk not in self._inside_cache:
            self._inside_cache[wk] = tuple(u for u in self.blown if u != wk and la.contains(wk, u))
        return self._inside_cache[wk]

    def _between(self, upper, lower) -> tuple:
        key = (upper, lower)
        if key not in self._between_cache:
            self._between_cache[key] = tuple(w for w in self.blown if w != upper and la.contains(upper, w)
                                             and la.contains(w, lower))
        return self._between_cache[key]

    def base_generic(self, wk: la.Subspace, x) -> bool:
        return not any(la.contains_vector(u, x) for u in self._inside(wk))

    def dir_generic(self, upper, lower, u) -> bool:
        if la.is_zero(u):
            return False
        return not any(la.contains_vector(w, u) for w in self._between(upper, lower))

    # enumeration
    @cached_property
    def chains(self) -> list:
        e = self.model.ambient
        out = [()]
        frontier = [()]
        while frontier:
            nxt = []
            for ch in frontier:
                top = ch[-1] if ch else e
                for w in self.blown:
                    if w != top and la.contains(top, w):
                        nxt.append(ch + (w,))
            out.extend(nxt)
            frontier = nxt
        return out

    def boundary_options(self, wk: la.Subspace) -> list:
        if self.model.kind == BALL:
            return [(False, ())] + ([(True, ())] if wk.dim >= 1 else [])
        opts = []
        coords = self.free_coords(wk)
        for choice in product(*[(0, 1, -1)] * len(coords)):
            opts.append((False, tuple((i, s) for i, s in zip(coords, choice) if s)))
        return opts

    def _place_base(self, p, at_infinity: bool, box: tuple):
        if self.model.kind == BALL:
            if at_infinity:
                return p
            return la.scale(1 / (1 + la.dot(p, p)), p)
        m = max([abs(x) for x in p] + [Fraction(1)])
        q = list(la.scale(1 / (2 * m), p))
        for i, s in box:
            q[i] = Fraction(s)
        return tuple(q)

    def _generic_point(self, space, start, normals, ok, rng: random.Random, box_coords=()):
        """A point near ``start`` with the same signs that passes ``ok``."""
        want = _signs(normals, start)
        if ok(start):
            return start
        free = [b for b in space.basis]
        for attempt in range(200):
            r = [Fraction(0)] * self.n
            for b in free:
                c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                r = [x + c * y for x, y in zip(r, b)]
            for i in box_coords:
                r[i] = Fraction(0)
            t = Fraction(1, 2 ** (attempt // 10 + 1))
            cand = tuple(x + t * y for x, y in zip(start, r))
            if _signs(normals, cand) == want and ok(cand):
                return cand
        raise FaceEmpty("no generic rational point with the required signs")

    @cached_property
    def witnesses(self) -> dict:
        """FlagIndex -> (base point, direction points); one exact generic point per face."""
        rng = random.Random(0)
        e = self.model.ambient
        out = {}
        dir_cache = {}
        base_cache = {}
        cham_cache = {}
        for chain in self.chains:
            wk = chain[-1] if chain else e
            factors = []
            uppers = (e,) + chain[:-1]
            for upper, lower in zip(uppers, chain):
                if (upper, lower) not in dir_cache:
                    space = self.normal_space(upper, lower)
                    normals = self.dir_hyperplanes(upper, lower)
                    pts = []
                    for w in chamber_witnesses(space, normals):
                        g = self._generic_point(space, w, normals,
                                                lambda u, a=upper, b=lower: self.dir_generic(a, b, u), rng)
                        pts.append((_signs(normals, g), g))
                    dir_cache[(upper, lower)] = pts
                factors.append(dir_cache[(upper, lower)])
            for at_inf, box in self.boundary_options(wk):
                bkey = (wk, at_inf, box)
                if bkey not in base_cache:
                    normals = self.base_hyperplanes(wk, at_inf)
                    pts = []
                    box_idx = [i for i, _ in box]
                    ckey = (wk, at_inf)
                    if ckey not in cham_cache:
                        cham_cache[ckey] = chamber_witnesses(wk, normals)
                    for w in cham_cache[ckey]:
                        placed = self._place_base(w, at_inf, box)
                        sg = _signs(normals, placed)
                        if 0 in sg:
                            continue  # chamber does not meet the box facet
                        g = self._generic_point(wk, placed, normals,
                                                lambda x, a=wk, inf=at_inf: self._base_ok(a, x, inf), rng, box_idx)
                        pts.append((_signs(normals, g), g))
                    base_cache[bkey] = pts
                for base in base_cache[bkey]:
                    for dirs in product(*factors):
                        key = FlagIndex(chain, at_inf, box, base[0], tuple(d[0] for d in dirs))
                        out[key] = (base[1], tuple(d[1] for d in dirs))
        return dict(sorted(out.items(), key=lambda kv: kv[0].sort_key()))

    def _base_ok(self, wk, x, at_infinity) -> bool:
        if at_infinity and la.is_zero(x):
            return False
        if self.model.kind == BALL and not at_infinity and la.dot(x, x) >= 1:
            return False
        if self.model.kind == SIGNBOX and any(abs(c) > 1 for c in x):
            return False
        return self.base_generic(wk, x)

    # locating points
    def point(self, key: FlagIndex, base, dirs) -> FacePoint:
        return FacePoint(list(key.chain), key.at_infinity, set(key.box_face), _lex(base), [_lex(d) for d in dirs])

    def locate(self, pt: FacePoint) -> FlagIndex:
        e = self.model.ambient
        chain = tuple(pt.chain)
        wk = chain[-1] if chain else e
        bn = self.base_hyperplanes(wk, pt.at_infinity)
        base_signs = tuple(_lex_sign(h, pt.base) for h in bn)
        dir_signs = []
        for upper, lower, u in zip((e,) + chain[:-1], chain, pt.dirs):
            dir_signs.append(tuple(_lex_sign(h, u) for h in self.dir_hyperplanes(upper, lower)))
        if 0 in base_signs or any(0 in d for d in dir_signs):
            raise FaceEmpty("point lies on a blown hyperplane")
        return FlagIndex(chain, pt.at_infinity, tuple(sorted(pt.box)), base_signs, tuple(dir_signs))

    def relax(self, pt: FacePoint, cond) -> FacePoint:
        """Move infinitesimally off the boundary hypersurface named by ``cond``."""
        p = pt.depth()
        chain, dirs = list(pt.chain), list(pt.dirs)
        base, inf, box = pt.base, pt.at_infinity, set(pt.box)
        if cond[0] == "chain":
            j = chain.index(cond[1])
            if j == len(chain) - 1:
                base = _lex_add(base, dirs[j], p)
            else:
                dirs[j + 1] = _lex_add(dirs[j + 1], dirs[j], p)
            del chain[j], dirs[j]
        elif cond[0] == "inf":
            inf = False
        else:
            _, i, s = cond
            box.discard((i, s))
            step = tuple(Fraction(-s if c == i else 0) for c in range(self.n))
            base = _lex_add(base, [step], p)
        return FacePoint(chain, inf, box, base, dirs)

    def _image(self, gid: int, w: la.Subspace) -> la.Subspace:
        k = (gid, w)
        if k not in self._image_cache:
            self._image_cache[k] = la.image(self.model.group.parent.elements[gid], w)
        return self._image_cache[k]

    def _sign_map(self, g, normals, image_normals) -> tuple:
        """How ``g`` carries a sign vector on ``normals`` to one on ``image_normals``."""
        out = []
        for h in normals:
            gh = la.matvec(g, h)
            for j, h2 in enumerate(image_normals):
                d = la.dot(gh, h2)
                if d and d * d == la.dot(gh, gh) * la.dot(h2, h2):
                    out.append((j, 1 if d > 0 else -1))
                    break
            else:
                raise ValueError("group element does not permute the hyperplanes")
        return tuple(out)

    def _apply_signs(self, mapping, signs) -> tuple:
        res = [0] * len(signs)
        for (j, c), s in zip(mapping, signs):
            res[j] = c * s
        return tuple(res)

    def transport(self, gid: int, key: FlagIndex) -> FlagIndex:
        """Image of a face under element ``gid``, from the signed hyperplane permutation."""
        g = self.model.group.parent.elements[gid]
        e = self.model.ambient
        chain = tuple(self._image(gid, w) for w in key.chain)
        wk = key.carrier or e
        gwk = chain[-1] if chain else e
        ck = ("b", gid, wk, key.at_infinity)
        if ck not in self._map_cache:
            self._map_cache[ck] = self._sign_map(g, self.base_hyperplanes(wk, key.at_infinity),
                                                 self.base_hyperplanes(gwk, key.at_infinity))
        base_signs = self._apply_signs(self._map_cache[ck], key.base_signs)
        dir_signs = []
        for upper, lower, gu, gl, sg in zip((e,) + key.chain[:-1], key.chain, (e,) + chain[:-1], chain, key.dir_signs):
            ck = ("d", gid, upper, lower)
            if ck not in self._map_cache:
                self._map_cache[ck] = self._sign_map(g, self.dir_hyperplanes(upper, lower), self.dir_hyperplanes(gu, gl))
            dir_signs.append(self._apply_signs(self._map_cache[ck], sg))
        box = tuple(sorted((i, s * int(g[i][i])) for i, s in key.box_face))
        return FlagIndex(chain, key.at_infinity, box, base_signs, tuple(dir_signs))

    # sampling
    def samples(self, key: FlagIndex, count: int, rng: random.Random) -> list:
        """Distinct generic points of the face (the witness first)."""
        base, dirs = self.witnesses[key]
        out = [(base, dirs)]
        e = self.model.ambient
        wk = key.carrier or e
        bn = self.base_hyperplanes(wk, key.at_infinity)
        box_idx = [i for i, _ in key.box_face]
        uppers = (e,) + key.chain[:-1]
        for _ in range(count - 1):
            nb = self._generic_point(wk, base, bn, lambda x: self._base_ok(wk, x, key.at_infinity) and x != base,
                                     rng, box_idx) if wk.dim and len(wk.basis) > len(box_idx) else base
            nd = []
            for upper, lower, u in zip(uppers, key.chain, dirs):
                space = self.normal_space(upper, lower)
                normals = self.dir_hyperplanes(upper, lower)
                if space.dim > 1:
                    u = self._generic_point(space, u, normals,
                                            lambda v, a=upper, b=lower, old=u: self.dir_generic(a, b, v) and v != old, rng)
                nd.append(u)
            out.append((nb, tuple(nd)))
        return out

    def stratified_samples(self, key: FlagIndex, rng: random.Random) -> list:
        """Points of the face lying on unblown arrangement members (where possible)."""
        base, dirs = self.witnesses[key]
        e = self.model.ambient
        wk = key.carrier or e
        uppers = (e,) + key.chain[:-1]
        out = []
        for u_mem in self.unblown:
            changed = False
            nb = base
            target = la.intersect(u_mem, wk)
            if target != wk:
                for _ in range(20):
                    cand = _random_in(target, rng)
                    cand = self._place_base(cand, key.at_infinity, key.box_face)
                    if not la.contains_vector(u_mem, cand):
                        continue
                    if self._base_ok(wk, cand, key.at_infinity):
                        nb, changed = cand, True
                        break
            nd = []
            for upper, lower, u in zip(uppers, key.chain, dirs):
                sub = la.intersect(u_mem, self.normal_space(upper, lower))
                pick = u
                if sub.dim:
                    for _ in range(20):
                        cand = _random_in(sub, rng)
                        if self.dir_generic(upper, lower, cand):
                            pick, changed = cand, True
                            break
                nd.append(pick)
            if changed:
                out.append((nb, tuple(nd)))
        return out

    def stabilizer(self, key: FlagIndex, base, dirs) -> frozenset:
        grp = self.model.group
        parent = grp.parent
        vecs = [parent.integral_vector(base)] + [parent.integral_vector(d) for d in dirs]
        out = []
        for gid in grp.member_ids:
            if not all(parent.fixes_integral(gid, w) for w in vecs):
                continue
            if any(self._image(gid, w) != w for w in key.chain):
                continue
            out.append(gid)
        return frozenset(out)


@dataclass
class ResolvedSpace:
    """Face complex and action of a blown-up model."""

    model: SubspaceModel
    geometry: BlownGeometry
    complex: CornerComplex
    action: LatticeAction
    element_ids: tuple = field(default=())

    @property
    def faces(self) -> list:
        return list(self.complex.faces)

    def kernel(self) -> frozenset:
        grp = self.model.group
        e = self.model.ambient
        return frozenset(i for i in grp.member_ids
                         if all(la.matvec(grp.parent.elements[i], b) == b for b in e.basis))

    def element_index(self, gid: int) -> int:
        return self.element_ids.index(gid)


def build_space(model: SubspaceModel) -> ResolvedSpace:
    geo = BlownGeometry(model)
    wit = geo.witnesses
    keys = list(wit)
    covers = {}
    for key in keys:
        base, dirs = wit[key]
        pt = geo.point(key, base, dirs)
        ups = []
        for cond in key.conditions():
            ups.append(geo.locate(geo.relax(pt, cond)))
        covers[key] = ups
    # all faces above, by increasing codim of the lower face
    above = {}
    for key in sorted(keys, key=lambda k: k.codim):
        s = set()
        for c in covers[key]:
            s.add(c)
            s |= above[c]
        above[key] = s
    faces = {}
    for key in keys:
        if key.codim == 0:
            comp = key
        else:
            comp = next(a for a in above[key] if a.codim == 0)
        if key.codim == 1:
            hyps = frozenset([key])
        else:
            hyps = frozenset(a for a in above[key] if a.codim == 1)
        faces[key] = Face(key.codim, hyps, comp)
    incidence = frozenset((k, a) for k in keys for a in above[k])
    cx = CornerComplex(faces, incidence, name="")
    ids = model.group.member_ids
    maps = []
    for gid in ids:
        maps.append({key: geo.transport(gid, key) for key in keys})
    action = LatticeAction(tuple(f"g{gid}" for gid in ids), tuple(maps))
    return ResolvedSpace(model, geo, cx, action, ids)
