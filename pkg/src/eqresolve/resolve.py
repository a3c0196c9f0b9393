"""Canonical resolution of a finite linear action on a ball or a sign box.

Minimal isotropy types (largest groups) are blown up round by round until
only the principal type is left.  Every blow-up centre is a linear subspace,
so the resolved space is the iterated radial blow-up of an
intersection-closed subspace arrangement and its faces are enumerated by
:mod:`eqresolve.faces`.
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import linalg as la
from .corners import CornerComplex, Face
from .errors import UnsupportedModel
from .faces import BALL, SIGNBOX, FlagIndex, ResolvedSpace, SubspaceModel, build_space, subspace_name
from .groups import FiniteMatrixGroup, Subgroup, normalizer, pointwise_stabilizer
from .strata import IsotropyPoset, isotropy_poset

PASS = "PASS"
FAIL = "FAIL"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CORNER_RESOLVE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class GeometricModel:
    kind: str
    group: FiniteMatrixGroup
    name: str = ""

    def __post_init__(self):
        if self.kind not in (BALL, SIGNBOX):
            raise UnsupportedModel(f"unknown model kind {self.kind!r}")
        if self.kind == SIGNBOX:
            for g in self.group.elements:
                for i, row in enumerate(g):
                    for j, x in enumerate(row):
                        if (i != j and x != 0) or (i == j and abs(x) != 1):
                            raise UnsupportedModel("sign boxes need a group of diagonal sign matrices")

    @property
    def dimension(self) -> int:
        return self.group.ambient_dim


@dataclass(frozen=True)
class TraceStep:
    round: int
    class_id: int
    centers: tuple
    center_codim: int
    removed: tuple
    remaining: tuple


@dataclass(frozen=True)
class ResolutionTrace:
    steps: tuple

    def __len__(self) -> int:
        return len(self.steps)

    def blown_after(self, count: int) -> tuple:
        out = []
        for step in self.steps[:count]:
            out.extend(step.centers)
        return tuple(out)

    def rounds(self) -> list[list[TraceStep]]:
        out: dict = {}
        for s in self.steps:
            out.setdefault(s.round, []).append(s)
        return [out[k] for k in sorted(out)]


def resolution_trace(poset: IsotropyPoset) -> ResolutionTrace:
    remaining = set(poset.non_principal())
    steps = []
    rnd = 0
    while remaining:
        mins = sorted(poset.minimal(remaining))  # class ids already follow (order desc, subspace)
        for cid in mins:
            t = poset.types[cid]
            remaining.discard(cid)
            steps.append(TraceStep(rnd, cid, t.orbit_subspaces, t.stratum_codim, (cid,),
                                   tuple(sorted(remaining | {poset.principal}))))
        rnd += 1
    return ResolutionTrace(tuple(steps))


@dataclass
class Collective:
    class_id: int
    hypersurfaces: tuple
    fibration_codim: int
    centers: tuple
    representative: Subgroup


@dataclass
class ResolutionStructure:
    collectives: dict  # class id -> Collective
    carriers: tuple  # unfibered original boundary hypersurfaces
    poset: IsotropyPoset = field(repr=False)
    _bases: dict = field(default_factory=dict, repr=False)
    _fibers: dict = field(default_factory=dict, repr=False)

    def collective_of(self, hyp) -> int | None:
        for cid, c in self.collectives.items():
            if hyp in c.hypersurfaces:
                return cid
        return None


@dataclass
class ResolutionOutcome:
    model: GeometricModel
    poset: IsotropyPoset
    trace: ResolutionTrace
    space: ResolvedSpace
    structure: ResolutionStructure
    truncated: bool = False
    report: dict = field(default_factory=dict)

    @property
    def resolved(self) -> CornerComplex:
        return self.space.complex

    @property
    def action(self):
        return self.space.action

    def face(self, label: str) -> FlagIndex:
        for f in self.space.complex.faces:
            if str(f) == label:
                return f
        raise KeyError(label)


# -- construction -------------------------------------------------------------

def _top_model(model: GeometricModel, poset: IsotropyPoset, blown: tuple) -> SubspaceModel:
    n = model.dimension
    e = la.Subspace.ambient(n)
    members = tuple(w for w in poset.lattice if w != e)
    return SubspaceModel(model.kind, e, model.group.whole(), tuple(sorted(blown, key=lambda w: w.sort_key())), members)


def _space_structure(space: ResolvedSpace, poset: IsotropyPoset) -> tuple[dict, tuple]:
    """Collectives keyed by isotropy class, plus the original boundary carriers."""
    e = space.model.ambient
    by_class: dict = {}
    carriers = []
    for h in space.complex.hypersurfaces:
        if h.chain:
            by_class.setdefault(poset.member_class[h.chain[0]], []).append(h)
        else:
            carriers.append(h)
    out = {}
    for cid in sorted(by_class):
        hyps = tuple(by_class[cid])
        centers = tuple(sorted({h.chain[0] for h in hyps}, key=lambda w: w.sort_key()))
        rep = pointwise_stabilizer(space.model.group.parent, centers[0])
        rep = Subgroup(rep.parent, rep.members & space.model.group.members)
        out[cid] = Collective(cid, hyps, e.dim - centers[0].dim - 1, centers, rep)
    return out, tuple(carriers)


def canonical_resolution(model: GeometricModel, truncate_last_step: bool = False,
                         samples_per_face: int = 5, seed: int = 0, verify: bool = True) -> ResolutionOutcome:
    poset = isotropy_poset(model.group)
    trace = resolution_trace(poset)
    if truncate_last_step and len(trace):
        trace = ResolutionTrace(trace.steps[:-1])
    space = build_space(_top_model(model, poset, trace.blown_after(len(trace))))
    collectives, carriers = _space_structure(space, poset)
    structure = ResolutionStructure(collectives, carriers, poset)
    out = ResolutionOutcome(model, poset, trace, space, structure, truncated=truncate_last_step)
    if verify:
        out.report.update(verification_report(out, samples_per_face, seed))
    return out


# -- bases and fibres -----------------------------------------------------------

def _sub(parent: Subgroup, members) -> Subgroup:
    return Subgroup(parent.parent, frozenset(members))


def _restricted_normalizer(space_group: Subgroup, k: Subgroup) -> Subgroup:
    g = space_group.parent
    return _sub(space_group, (x for x in space_group.members if g.conjugate(x, k) == k))


def base_space(space: ResolvedSpace, center: la.Subspace, cache: dict) -> ResolvedSpace:
    """Resolution of the centre itself by the arrangement members it contains (normalizer action)."""
    m = space.model
    ck = ("base", m.key(), center)
    if ck in cache:
        return cache[ck]
    k = _sub(m.group, pointwise_stabilizer(m.group.parent, center).members & m.group.members)
    grp = _restricted_normalizer(m.group, k)
    blown = tuple(w for w in m.blown if w != center and la.contains(center, w))
    members = tuple(w for w in m.members if w != center and la.contains(center, w))
    sub = SubspaceModel(m.kind, center, grp, blown, members)
    if sub.key() not in cache:
        cache[sub.key()] = build_space(sub)
    cache[ck] = cache[sub.key()]
    return cache[ck]


def fiber_space(space: ResolvedSpace, center: la.Subspace, cache: dict) -> ResolvedSpace:
    """The isotropy group of ``center`` acting on the ball in its normal space."""
    m = space.model
    k = _sub(m.group, pointwise_stabilizer(m.group.parent, center).members & m.group.members)
    normal = la.intersect(m.ambient, la.orthogonal_complement(center))
    perp = la.orthogonal_complement(center)
    above = [w for w in m.members if la.contains(w, center)]
    cut = {la.intersect(w, perp) for w in above if w != m.ambient}
    blown_above = [w for w in m.blown if la.contains(w, center)]
    blown_cut = {la.intersect(w, perp) for w in blown_above}
    sub = SubspaceModel(BALL, normal, k, tuple(sorted(blown_cut, key=lambda w: w.sort_key())),
                        tuple(sorted(cut, key=lambda w: w.sort_key())))
    if sub.key() not in cache:
        cache[sub.key()] = build_space(sub)
    return cache[sub.key()]


def truncate_below(face: FlagIndex, center: la.Subspace) -> FlagIndex:
    """The fibration of the front face of ``center``: keep the data below it."""
    j = face.chain.index(center)
    return FlagIndex(face.chain[j + 1:], face.at_infinity, face.box_face, face.base_signs, face.dir_signs[j + 1:])


# -- verification -------------------------------------------------------------

def _report(status: bool, **extra) -> dict:
    out = {"status": PASS if status else FAIL}
    out.update(extra)
    return out


def resolved_point_stabilizer(out: ResolutionOutcome, face: FlagIndex, seed: int = 0) -> Subgroup:
    geo = out.space.geometry
    rng = random.Random(seed)
    base, dirs = geo.samples(face, 1 + (seed % 3), rng)[-1]
    return _sub(out.model.group.whole(), geo.stabilizer(face, base, dirs))


def _space_stabilizers(space: ResolvedSpace, samples_per_face: int, seed: int, stratified: bool = True,
                       keys=None):
    """(face, stabilizer) for sampled points, generic and on unblown members."""
    geo = space.geometry
    keys = space.faces if keys is None else keys

    def work(item):
        i, key = item
        rng = random.Random(seed * 100003 + i)
        pts = geo.samples(key, samples_per_face, rng)
        if stratified:
            pts += geo.stratified_samples(key, rng)
        res = []
        for base, dirs in pts:
            located = key
            res.append((located, geo.stabilizer(key, base, dirs)))
        return res

    items = list(enumerate(keys))
    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            chunks = list(ex.map(work, items))
    else:
        chunks = [work(it) for it in items]
    return [r for c in chunks for r in c]


def verify_unique_isotropy(out: ResolutionOutcome, samples_per_face: int = 5, seed: int = 0) -> dict:
    if samples_per_face < 1:
        raise ValueError("samples_per_face must be at least 1")
    return _unique_isotropy(out.space, out.poset, samples_per_face, seed)


def _unique_isotropy(space: ResolvedSpace, poset: IsotropyPoset, samples_per_face: int, seed: int) -> dict:
    kernel = space.kernel()
    violations = []
    checked = 0
    for face, stab in _space_stabilizers(space, samples_per_face, seed):
        checked += 1
        if stab != kernel:
            cls = poset.class_of_subgroup(_sub(space.model.group, stab))
            entry = {"face": str(face), "stabilizer": sorted(stab), "class": cls}
            if entry not in violations:
                violations.append(entry)
    return _report(not violations, stabilizer=sorted(kernel), samples=checked,
                   faces=len(space.faces), violations=violations)


def verify_isotropy_bookkeeping(out: ResolutionOutcome, samples_per_face: int = 1, seed: int = 0) -> dict:
    poset = out.poset
    steps = []
    ok = True
    previous = None
    for t in range(len(out.trace) + 1):
        blown = out.trace.blown_after(t)
        space = build_space(_top_model(out.model, poset, blown))
        realized = set()
        # stabilizers along a G-orbit of faces are conjugate, so one face per orbit suffices
        reps = [min(o, key=lambda f: f.sort_key()) for o in space.action.orbits(space.faces)]
        reps.sort(key=lambda f: f.sort_key())
        for _, stab in _space_stabilizers(space, samples_per_face, seed, keys=reps):
            realized.add(poset.class_of_subgroup(_sub(out.model.group.whole(), stab)))
        expected = set(out.trace.steps[t - 1].remaining) if t else set(range(len(poset.types)))
        step_ok = realized == expected and (previous is None or realized <= previous)
        ok &= step_ok
        steps.append({"step": t, "expected": sorted(expected), "realized": sorted(realized),
                      "status": PASS if step_ok else FAIL})
        previous = realized
    if out.trace.steps and not out.truncated:
        ok &= set(out.trace.steps[-1].remaining) == {poset.principal}
    return _report(ok, steps=steps)


def _axioms_ab(space: ResolvedSpace, poset: IsotropyPoset, cache: dict) -> list[str]:
    collectives, _ = _space_structure(space, poset)
    codim_of = {}
    for c in collectives.values():
        for h in c.hypersurfaces:
            codim_of[h] = c.fibration_codim
    bad = []
    for f, face in space.complex.faces.items():
        fh = sorted((h for h in face.hypersurfaces if h in codim_of), key=lambda h: codim_of[h])
        for i, h1 in enumerate(fh):
            for h2 in fh[i + 1:]:
                if codim_of[h1] == codim_of[h2]:
                    bad.append(f"(a) {h1} and {h2} meet with equal fibration codim {codim_of[h1]}")
                    continue
                u1, u2 = h1.chain[0], h2.chain[0]
                b1 = base_space(space, u1, cache)
                img = truncate_below(f, u1)
                if img not in b1.complex.faces:
                    bad.append(f"(b) {img} is not a face of the base of {subspace_name(u1)}")
                    continue
                if not any(h.chain and h.chain[0] == u2 for h in b1.complex.faces[img].hypersurfaces):
                    bad.append(f"(b) image of {f} misses the boundary collective of {subspace_name(u2)}")
                    continue
                b2 = base_space(space, u2, cache)
                if truncate_below(img, u2) != truncate_below(f, u2) or truncate_below(f, u2) not in b2.complex.faces:
                    bad.append(f"(b) diagram does not commute at {f}")
    return bad


def _structure_recursive(space: ResolvedSpace, poset: IsotropyPoset, cache: dict, depth: int, seen: set) -> list[str]:
    if space.model.key() in seen:
        return []
    seen.add(space.model.key())
    bad = _axioms_ab(space, poset, cache)
    collectives, _ = _space_structure(space, poset)
    for c in collectives.values():
        for u in c.centers:
            b = base_space(space, u, cache)
            rep = _unique_isotropy(b, poset, 1, 0)
            if rep["status"] != PASS:
                bad.append(f"(d) base of {subspace_name(u)} has more than one isotropy type")
            bad.extend(f"(c) {subspace_name(u)}: {msg}" for msg in _structure_recursive(b, poset, cache, depth + 1, seen))
    return bad


def verify_structure_axioms(out: ResolutionOutcome) -> dict:
    cache = out.structure._bases
    bad = _structure_recursive(out.space, out.poset, cache, 0, set())
    # collectives in bijection with the blown non-principal types
    blown_types = {s.class_id for s in out.trace.steps}
    if set(out.structure.collectives) != blown_types:
        bad.append("collectives do not match the blown isotropy types")
    for c in out.structure.collectives.values():
        t = out.poset.types[c.class_id]
        if c.fibration_codim != t.stratum_codim - 1:
            bad.append(f"collective {c.class_id}: fibration codim {c.fibration_codim} != stratum codim - 1")
    return _report(not bad, collectives=len(out.structure.collectives), violations=bad)


def _orbit_count(space: ResolvedSpace, faces, members) -> int:
    idx = [space.element_index(g) for g in sorted(members)]
    seen = set()
    count = 0
    for f in faces:
        if f in seen:
            continue
        count += 1
        seen |= {space.action.face_maps[i][f] for i in idx}
    return count


def _census(faces) -> dict:
    out: dict = {}
    for f in faces:
        out[f.codim] = out.get(f.codim, 0) + 1
    return dict(sorted(out.items()))


def verify_fiber_recursion(out: ResolutionOutcome) -> dict:
    space = out.space
    cache = out.structure._fibers
    bcache = out.structure._bases
    per_type = []
    ok = True
    for cid, c in out.structure.collectives.items():
        u = c.centers[0]
        base = base_space(space, u, bcache)
        b = next(f for f in base.complex.faces if f.codim == 0)
        upstairs = [f for f in space.complex.faces
                    if f.chain and f.chain[-1] == u and not f.at_infinity and not f.box_face
                    and f.base_signs == b.base_signs]
        fib = fiber_space(space, u, cache)
        zero = la.Subspace.zero(space.model.ambient.ambient_dim)
        front = [f for f in fib.complex.faces if f.chain and f.chain[-1] == zero and not f.at_infinity]
        k = c.representative
        up_census = _census(upstairs)
        down_census = _census(front)
        up_orbits = _orbit_count(space, upstairs, k.members)
        down_orbits = _orbit_count(fib, front, k.members)
        good = up_census == down_census and up_orbits == down_orbits
        ok &= good
        per_type.append({"class": cid, "fiber_census": {str(a): v for a, v in up_census.items()},
                         "normal_resolution_census": {str(a): v for a, v in down_census.items()},
                         "orbits": [up_orbits, down_orbits], "status": PASS if good else FAIL})
    return _report(ok, types=per_type)


def verify_trace(out: ResolutionOutcome) -> dict:
    """Minimality of each blown type and disjointness of centres within a round."""
    poset = out.poset
    bad = []
    remaining = set(poset.non_principal())
    for rnd in out.trace.rounds():
        for step in rnd:
            if any(poset.lt(j, step.class_id) for j in remaining if j != step.class_id):
                bad.append(f"type {step.class_id} blown before a smaller type")
        centres = [w for s in rnd for w in s.centers]
        for f in out.space.complex.faces:
            if sum(1 for w in f.chain if w in centres) > 1:
                bad.append(f"centres of round {rnd[0].round} share the face {f}")
                break
        remaining -= {s.class_id for s in rnd}
    return _report(not bad, violations=bad)


def verify_equivariance(out: ResolutionOutcome) -> dict:
    """The action preserves chain dimensions and commutes with forgetting the chain."""
    bad = []
    space = out.space
    mats = out.model.group.elements
    for gid, m in zip(space.element_ids, space.action.face_maps):
        for f, gf in m.items():
            if [w.dim for w in f.chain] != [w.dim for w in gf.chain]:
                bad.append(f"g{gid} changes chain dimensions of {f}")
            carrier = f.carrier or space.model.ambient
            gcarrier = gf.carrier or space.model.ambient
            if la.image(mats[gid], carrier) != gcarrier or f.at_infinity != gf.at_infinity:
                bad.append(f"g{gid} does not commute with the blow-down at {f}")
    bad.extend(space.action.validate(space.complex))
    return _report(not bad, violations=bad[:20])


def verification_report(out: ResolutionOutcome, samples_per_face: int = 5, seed: int = 0) -> dict:
    rep = {"unique_isotropy": verify_unique_isotropy(out, samples_per_face, seed),
           "trace": verify_trace(out)}
    if not out.truncated:
        rep["bookkeeping"] = verify_isotropy_bookkeeping(out, 1, seed)
        rep["structure"] = verify_structure_axioms(out)
        rep["fiber_recursion"] = verify_fiber_recursion(out)
    return rep


def overall_status(out: ResolutionOutcome) -> str:
    return PASS if all(r.get("status") == PASS for r in out.report.values()) else FAIL


# -- products -------------------------------------------------------------------

def product_complex(a: CornerComplex, b: CornerComplex) -> CornerComplex:
    """Faces of a product are pairs; hypersurfaces are H x component and component x H."""
    faces = {}
    for fa, xa in a.faces.items():
        for fb, xb in b.faces.items():
            hyps = frozenset((h, xb.component) for h in xa.hypersurfaces) | \
                frozenset((xa.component, h) for h in xb.hypersurfaces)
            faces[(fa, fb)] = Face(xa.codim + xb.codim, hyps, (xa.component, xb.component))
    inc = set()
    for (fa, fb) in faces:
        for (ga, gb) in faces:
            if (fa, fb) != (ga, gb) and a.leq(fa, ga) and b.leq(fb, gb):
                inc.add(((fa, fb), (ga, gb)))
    return CornerComplex(faces, frozenset(inc), name=f"{a.name}x{b.name}")


def product_of_outcomes(a: ResolutionOutcome, b: ResolutionOutcome) -> CornerComplex:
    return product_complex(a.resolved, b.resolved)
