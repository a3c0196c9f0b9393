"""Orbit spaces of resolved actions and the normalizer data behind them."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg as la
from .corners import CornerComplex, Face
from .errors import UnverifiedInput
from .groups import Subgroup, normalizer
from .resolve import (PASS, FAIL, GeometricModel, ResolutionOutcome, _report, base_space, truncate_below,
                      verify_unique_isotropy)
from .strata import IsotropyType, isotropy_poset, stratum_points


@dataclass
class OrbitSpaceComplex:
    complex: CornerComplex
    orbit_of: dict  # resolved face -> representative of its orbit
    orbit_size: dict  # representative -> number of faces in the orbit
    collectives: dict  # class id -> tuple of quotient hypersurfaces
    carriers: tuple
    report: dict = field(default_factory=dict)

    def census(self) -> dict:
        return self.complex.census()


def orbit_space(out: ResolutionOutcome) -> OrbitSpaceComplex:
    ui = out.report.get("unique_isotropy") or verify_unique_isotropy(out)
    if ui["status"] != PASS:
        raise UnverifiedInput("orbit space requires a resolved action with a unique isotropy type")
    cx = out.resolved
    maps = out.action.face_maps
    orbit_of = {}
    sizes = {}
    for f in cx.faces:
        if f in orbit_of:
            continue
        orbit = {m[f] for m in maps}
        rep = min(orbit, key=lambda x: x.sort_key())
        for g in orbit:
            orbit_of[g] = rep
        sizes[rep] = len(orbit)
    faces = {}
    for rep in sizes:
        face = cx.faces[rep]
        faces[rep] = Face(face.codim, frozenset(orbit_of[h] for h in face.hypersurfaces), orbit_of[face.component])
    inc = frozenset((orbit_of[a], orbit_of[b]) for a, b in cx.incidence)
    qcx = CornerComplex(faces, inc, name=cx.name)
    collectives = {cid: tuple(sorted({orbit_of[h] for h in c.hypersurfaces}, key=lambda x: x.sort_key()))
                   for cid, c in out.structure.collectives.items()}
    carriers = tuple(sorted({orbit_of[h] for h in out.structure.carriers}, key=lambda x: x.sort_key()))
    z = OrbitSpaceComplex(qcx, orbit_of, sizes, collectives, carriers)
    z.report.update(quotient_report(out, z))
    return z


def quotient_report(out: ResolutionOutcome, z: OrbitSpaceComplex) -> dict:
    cx = out.resolved
    per_codim = {}
    for rep, size in z.orbit_size.items():
        k = cx.faces[rep].codim
        per_codim[k] = per_codim.get(k, 0) + size
    counts_ok = per_codim == cx.census()
    hyp_count = len(z.complex.hypersurfaces)
    expected = len(z.collectives) + len(z.carriers)
    single = all(len(v) == 1 for v in z.collectives.values())
    return {
        "orbit_counts": _report(counts_ok, census=_str_keys(z.census()), resolved=_str_keys(cx.census())),
        "hypersurface_count": _report(hyp_count == expected, hypersurfaces=hyp_count,
                                      types=len(z.collectives), carrier_orbits=len(z.carriers),
                                      one_class_per_collective=single),
        "projected_structure": verify_projected_structure(out, z),
    }


def _str_keys(d: dict) -> dict:
    return {str(k): v for k, v in d.items()}


def verify_projected_structure(out: ResolutionOutcome, z: OrbitSpaceComplex) -> dict:
    """Fibrations descend: pairwise codims on the quotient and equivariance of each fibration."""
    bad = []
    codim_of = {}
    for cid, hyps in z.collectives.items():
        for h in hyps:
            codim_of[h] = out.structure.collectives[cid].fibration_codim
    for f, face in z.complex.faces.items():
        fh = [h for h in face.hypersurfaces if h in codim_of]
        for i, h1 in enumerate(fh):
            for h2 in fh[i + 1:]:
                if codim_of[h1] == codim_of[h2]:
                    bad.append(f"{h1} and {h2} meet in the quotient with equal fibration codim")
    space = out.space
    cache = out.structure._bases
    for c in out.structure.collectives.values():
        for u in c.centers:
            b = base_space(space, u, cache)
            for gid, m in zip(space.element_ids, space.action.face_maps):
                if gid not in b.model.group.members:
                    continue
                bm = b.action.face_maps[b.element_index(gid)]
                for f in space.complex.faces:
                    if not f.chain or u not in f.chain:
                        continue
                    gf = m[f]
                    if truncate_below(gf, u) != bm[truncate_below(f, u)]:
                        bad.append(f"fibration over {u} is not equivariant for g{gid} at {f}")
                        break
    return _report(not bad, violations=bad[:20])


@dataclass
class BorelData:
    K: Subgroup
    N: Subgroup
    W_order: int
    orbit_sizes: list
    group_orbit_sizes: list
    status: str

    def to_json(self) -> dict:
        return {"K": list(self.K.member_ids), "N": list(self.N.member_ids), "W_order": self.W_order,
                "orbit_sizes": self.orbit_sizes, "group_orbit_sizes": self.group_orbit_sizes,
                "status": self.status}


def borel_check(model: GeometricModel, itype: IsotropyType, samples: int = 5, seed: int = 0) -> BorelData:
    g = model.group
    poset = isotropy_poset(g)
    k = itype.representative
    n = normalizer(g, k)
    w_order = n.order // k.order
    sizes, gsizes = [], []
    for p in stratum_points(poset, itype.class_id, samples, seed):
        sizes.append(len({la.matvec(g.elements[i], p) for i in n.member_ids}))
        gsizes.append(len({la.matvec(m, p) for m in g.elements}))
    ok = n.order % k.order == 0 and all(s == w_order for s in sizes) and all(s == g.order // k.order for s in gsizes)
    return BorelData(k, n, w_order, sizes, gsizes, PASS if ok else FAIL)
