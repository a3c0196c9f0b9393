"""Combinatorics of manifolds with corners.

A :class:`CornerComplex` records the connected faces of a compact manifold
with corners (codimension 0 faces are the connected components), the
boundary hypersurfaces through each face and the closure relation.  Faces
are keyed by hashable labels.  Operations that build new complexes derive
structured labels from the old ones (``("lift", E)``, ``("ff", F, D, I)``,
``("dbl", E)``, ``("copy", E, s)``) so a group action on the old labels
extends mechanically to the new ones.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .errors import CollectionNotDisjoint, CollectionNotInvariant, SpecError

Label = Hashable


@dataclass(frozen=True)
class Face:
    codim: int
    hypersurfaces: frozenset
    component: Label
    tag: str = ""


@dataclass
class CornerComplex:
    faces: dict  # label -> Face, in a stable order
    incidence: frozenset  # (a, b): face a lies in the closure of face b, a != b
    sheets: tuple = ((),)
    name: str = ""

    def __post_init__(self):
        below = defaultdict(set)
        above = defaultdict(set)
        for a, b in self.incidence:
            below[b].add(a)
            above[a].add(b)
        self._below = below
        self._above = above

    # -- queries -----------------------------------------------------------
    @property
    def hypersurfaces(self) -> list:
        return [k for k, f in self.faces.items() if f.codim == 1]

    @property
    def components(self) -> list:
        return [k for k, f in self.faces.items() if f.codim == 0]

    def of_codim(self, k: int) -> list:
        return [a for a, f in self.faces.items() if f.codim == k]

    def below(self, label: Label) -> set:
        """Faces strictly contained in the closure of ``label``."""
        return self._below[label]

    def above(self, label: Label) -> set:
        return self._above[label]

    def closed_below(self, label: Label) -> set:
        return self._below[label] | {label}

    def leq(self, a: Label, b: Label) -> bool:
        return a == b or (a, b) in self.incidence

    def meets(self, a: Label, b: Label) -> bool:
        """Closures of two faces intersect."""
        return a == b or bool(self.closed_below(a) & self.closed_below(b))

    def census(self) -> dict:
        counts = defaultdict(int)
        for f in self.faces.values():
            counts[f.codim] += 1
        return dict(sorted(counts.items()))

    def max_codim(self) -> int:
        return max((f.codim for f in self.faces.values()), default=0)

    def component_hypersurface_counts(self) -> dict:
        out = {c: 0 for c in self.components}
        for h in self.hypersurfaces:
            out[self.faces[h].component] += 1
        return out

    def validate(self) -> list[str]:
        """Structural invariants: grading, embedded hypersurfaces, consistent components."""
        bad = []
        for label, f in self.faces.items():
            if f.codim >= 1 and len(f.hypersurfaces) != f.codim:
                bad.append(f"{label!r}: {len(f.hypersurfaces)} hypersurfaces for codim {f.codim}")
            if f.codim == 1 and f.hypersurfaces != frozenset([label]):
                bad.append(f"{label!r}: hypersurface does not contain itself")
            if f.codim == 0 and f.component != label:
                bad.append(f"{label!r}: component label mismatch")
            for h in f.hypersurfaces:
                if h != label and not self.leq(label, h):
                    bad.append(f"{label!r} not below its hypersurface {h!r}")
            if f.codim > 0 and not self.leq(label, f.component):
                bad.append(f"{label!r} not below its component")
        for a, b in self.incidence:
            if self.faces[a].codim <= self.faces[b].codim:
                bad.append(f"incidence {a!r} < {b!r} does not raise codim")
        return bad


@dataclass
class LatticeAction:
    """A finite group acting on a complex by permuting face labels."""

    elements: tuple
    face_maps: tuple  # one dict per element
    sheet_maps: tuple = None

    def __post_init__(self):
        if self.sheet_maps is None:
            self.sheet_maps = tuple({(): ()} for _ in self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def act(self, i: int, label: Label) -> Label:
        return self.face_maps[i][label]

    def orbit(self, label: Label) -> frozenset:
        return frozenset(m[label] for m in self.face_maps)

    def orbits(self, labels: Iterable[Label]) -> list[frozenset]:
        seen = set()
        out = []
        for a in labels:
            if a in seen:
                continue
            o = self.orbit(a)
            seen |= o
            out.append(o)
        return out

    def validate(self, cx: CornerComplex) -> list[str]:
        bad = []
        for e, m in zip(self.elements, self.face_maps):
            if set(m) != set(cx.faces) or set(m.values()) != set(cx.faces):
                bad.append(f"element {e!r} is not a permutation of the faces")
                continue
            for a, f in cx.faces.items():
                if cx.faces[m[a]].codim != f.codim:
                    bad.append(f"element {e!r} changes codim of {a!r}")
            for a, b in cx.incidence:
                if (m[a], m[b]) not in cx.incidence:
                    bad.append(f"element {e!r} breaks incidence {a!r} < {b!r}")
        labels = list(cx.faces)
        composed = {tuple(m[a] for a in labels) for m in self.face_maps}
        for m1 in self.face_maps:
            for m2 in self.face_maps:
                if tuple(m1[m2[a]] for a in labels) not in composed:
                    bad.append("face permutations are not closed under composition")
                    return bad
        return bad


# -- construction -----------------------------------------------------------

def complex_from_faces(faces: Mapping[Label, Face], name: str = "", sheets=((),)) -> CornerComplex:
    """Build a complex whose faces are determined by (hypersurfaces, component).

    Incidence is hypersurface-set containment inside one component.
    """
    inc = set()
    for a, fa in faces.items():
        for b, fb in faces.items():
            if a != b and fa.component == fb.component and fb.hypersurfaces < fa.hypersurfaces:
                inc.add((a, b))
    return CornerComplex(dict(faces), frozenset(inc), sheets, name)


def complex_from_json(data: Mapping) -> CornerComplex:
    hyps = list(data.get("hypersurfaces", []))
    faces: dict = {}
    tags = []
    for entry in data.get("faces", []):
        hs = frozenset(entry.get("hypersurfaces", []))
        unknown = hs - set(hyps)
        if unknown:
            raise SpecError(f"face refers to unknown hypersurfaces {sorted(unknown)}")
        codim = int(entry.get("codim", len(hs)))
        if codim != len(hs) and codim > 0:
            raise SpecError("face codim must equal its number of hypersurfaces")
        tag = str(entry.get("tag", "M"))
        label = entry.get("label") or ("M" if codim == 0 and tag == "M" else "".join(sorted(hs)) or tag)
        if label in faces:
            raise SpecError(f"duplicate face label {label!r}")
        faces[label] = (codim, hs, tag)
        tags.append(tag)
    hyp_tags = {}
    for label, (codim, hs, tag) in faces.items():
        for h in hs:
            hyp_tags.setdefault(h, tag)
    for h in hyps:
        if h not in faces:
            faces[h] = (1, frozenset([h]), hyp_tags.get(h, "M"))
            tags.append(hyp_tags.get(h, "M"))
    comps = {label: label for label, (codim, _, _) in faces.items() if codim == 0}
    for tag in dict.fromkeys(tags):
        if not any(faces[c][2] == tag for c in comps):
            faces[tag] = (0, frozenset(), tag)
            comps[tag] = tag
    tag_to_comp = {faces[c][2]: c for c in comps}
    out = {}
    for label, (codim, hs, tag) in faces.items():
        out[label] = Face(codim, hs, tag_to_comp[tag], tag)
    return complex_from_faces(out, name=str(data.get("name", "")))


def action_from_hypersurface_perms(cx: CornerComplex, generators: Iterable[Mapping]) -> LatticeAction:
    """Generate the group of face permutations induced by hypersurface permutations."""
    by_key = {}
    for label, f in cx.faces.items():
        key = (f.hypersurfaces, f.component)
        if key in by_key:
            raise SpecError(f"faces {by_key[key]!r} and {label!r} share hypersurfaces; give face maps explicitly")
        by_key[key] = label

    def extend(hperm: Mapping) -> dict:
        hperm = {h: hperm.get(h, h) for h in cx.hypersurfaces}
        comp_map = {}
        for c in cx.components:
            hs = [h for h in cx.hypersurfaces if cx.faces[h].component == c]
            comp_map[c] = cx.faces[hperm[hs[0]]].component if hs else c
        m = {}
        for label, f in cx.faces.items():
            key = (frozenset(hperm[h] for h in f.hypersurfaces), comp_map[f.component])
            if key not in by_key:
                raise SpecError(f"hypersurface permutation does not map face {label!r} to a face")
            m[label] = by_key[key]
        return m

    return action_from_face_maps(cx, [extend(g) for g in generators])


def action_from_face_maps(cx: CornerComplex, generators: Iterable[Mapping]) -> LatticeAction:
    labels = list(cx.faces)
    ident = tuple(labels)
    gens = [tuple(g[a] for a in labels) for g in generators]
    pos = {a: i for i, a in enumerate(labels)}
    seen = {ident: 0}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[pos[x]] for x in p)
                if q not in seen:
                    seen[q] = len(order)
                    order.append(q)
                    nxt.append(q)
        frontier = nxt
    maps = tuple(dict(zip(labels, p)) for p in order)
    return LatticeAction(tuple(f"e{i}" for i in range(len(maps))), maps)


def trivial_action(cx: CornerComplex) -> LatticeAction:
    return LatticeAction(("e0",), ({a: a for a in cx.faces},), ({s: s for s in cx.sheets},))


# -- standard complexes -----------------------------------------------------

def cube_complex(n: int, name: str = "") -> CornerComplex:
    """The cube [-1,1]^n; hypersurfaces are labelled ``"x{i}-"`` / ``"x{i}+"``."""
    faces = {}
    from itertools import product
    for signs in product((None, "-", "+"), repeat=n):
        hs = frozenset(f"x{i}{s}" for i, s in enumerate(signs) if s)
        label = "M" if not hs else "".join(sorted(hs)) if len(hs) > 1 else next(iter(hs))
        faces[label] = Face(len(hs), hs, "M")
    return complex_from_faces(faces, name=name or f"cube{n}")


def interval_complex() -> CornerComplex:
    return cube_complex(1, "interval")


def square_complex() -> CornerComplex:
    return cube_complex(2, "square")


def coordinate_action(cx: CornerComplex, signed_perms: Iterable) -> LatticeAction:
    """Action on a cube by signed coordinate permutations ``[(perm, signs), ...]``.

    ``perm[i]`` is the image of coordinate ``i`` and ``signs[i]`` its sign.
    """
    gens = []
    for perm, signs in signed_perms:
        hp = {}
        for i, (j, s) in enumerate(zip(perm, signs)):
            for side in "-+":
                out = side if s > 0 else ("+" if side == "-" else "-")
                hp[f"x{i}{side}"] = f"x{j}{out}"
        gens.append(hp)
    return action_from_hypersurface_perms(cx, gens)


def square_rotation_action(cx: CornerComplex) -> LatticeAction:
    """Z4 by quarter turns: (x, y) -> (-y, x)."""
    return coordinate_action(cx, [((1, 0), (1, -1))])


# -- boundary intersection freeness -----------------------------------------

@dataclass
class BIFResult:
    ok: bool
    partition: list = field(default_factory=list)
    witness: tuple = None

    def __bool__(self) -> bool:
        return self.ok


def check_boundary_intersection_free(cx: CornerComplex, action: LatticeAction) -> BIFResult:
    """The orbit partition of hypersurfaces, or a pair in one orbit that meets."""
    orbits = action.orbits(cx.hypersurfaces)
    for o in orbits:
        for a, b in combinations(sorted(o, key=repr), 2):
            if cx.meets(a, b):
                return BIFResult(False, [], (a, b))
    return BIFResult(True, [frozenset(o) for o in orbits], None)


# -- blow-up of boundary faces ----------------------------------------------

def blow_up_faces(cx: CornerComplex, action: LatticeAction, centers: Iterable[Label]):
    """Radially blow up a G-invariant set of pairwise disjoint boundary faces of codim >= 2."""
    centers = list(centers)
    cset = set(centers)
    for c in centers:
        if cx.faces[c].codim < 2:
            raise ValueError(f"{c!r} is not a boundary face of codim >= 2")
    for m in action.face_maps:
        if {m[c] for c in centers} != cset:
            raise ValueError("centre set is not invariant")
    for a, b in combinations(centers, 2):
        if cx.meets(a, b):
            raise ValueError(f"centres {a!r} and {b!r} meet")
    absorbed = {}  # face below a centre -> that centre
    for c in centers:
        for d in cx.closed_below(c):
            absorbed[d] = c

    faces = {}
    lift = {}
    for e, f in cx.faces.items():
        if e in absorbed:
            continue
        new = ("lift", e)
        lift[e] = new
        faces[new] = Face(f.codim, frozenset(("lift", h) for h in f.hypersurfaces), ("lift", f.component), f.tag)
    ff_faces = []
    for c in centers:
        fc = cx.faces[c]
        chyps = sorted(fc.hypersurfaces, key=repr)
        for d in sorted(cx.closed_below(c), key=repr):
            fd = cx.faces[d]
            extra = fd.hypersurfaces - fc.hypersurfaces
            for r in range(len(chyps)):
                for sub in combinations(chyps, r):
                    i_set = frozenset(sub)
                    label = ("ff", c, d, i_set)
                    hyps = {("ff", c, c, frozenset())} | {("lift", h) for h in i_set | extra}
                    faces[label] = Face(1 + len(i_set) + len(extra), frozenset(hyps),
                                        ("lift", fd.component), fd.tag)
                    ff_faces.append((label, c, d, i_set))
    inc = set()
    for a, b in cx.incidence:
        if a in lift and b in lift:
            inc.add((lift[a], lift[b]))
    for label, c, d, i_set in ff_faces:
        chyps = cx.faces[c].hypersurfaces
        for e in cx.above(d):
            if e in lift and (cx.faces[e].hypersurfaces & chyps) <= i_set:
                inc.add((label, lift[e]))
    by_center = defaultdict(list)
    for entry in ff_faces:
        by_center[entry[1]].append(entry)
    for group in by_center.values():
        for l1, _, d1, i1 in group:
            for l2, _, d2, i2 in group:
                if l1 != l2 and cx.leq(d1, d2) and i2 <= i1:
                    inc.add((l1, l2))
    new_cx = CornerComplex(faces, frozenset(inc), cx.sheets, cx.name)

    def move(m: Mapping, label):
        if label[0] == "lift":
            return ("lift", m[label[1]])
        _, c, d, i_set = label
        return ("ff", m[c], m[d], frozenset(m[h] for h in i_set))

    maps = tuple({lab: move(m, lab) for lab in faces} for m in action.face_maps)
    return new_cx, LatticeAction(action.elements, maps, action.sheet_maps), lift


def _blow_up_in_rounds(cx: CornerComplex, action: LatticeAction, selected: Iterable[Label]):
    """Blow up ``selected`` original faces in order of increasing dimension, orbit by orbit."""
    selected = set(selected)
    orig, orig_action = cx, action
    current = {a: a for a in cx.faces}
    blown = []
    for codim in range(orig.max_codim(), 1, -1):
        todo = [a for a in orig.faces if a in selected and orig.faces[a].codim == codim]
        for orbit in orig_action.orbits(todo):
            originals = sorted(orbit, key=repr)
            cx_centres = [current[a] for a in originals]
            cx, action, lift = blow_up_faces(cx, action, cx_centres)
            current = {a: lift[c] for a, c in current.items() if c in lift}
            blown.extend(originals)
    return cx, action, blown


def total_boundary_blowup(cx: CornerComplex, action: LatticeAction):
    """Blow up every boundary face of codim >= 2, smallest dimension first."""
    new_cx, new_action, _ = _blow_up_in_rounds(cx, action, [a for a, f in cx.faces.items() if f.codim >= 2])
    return new_cx, new_action


def intertwined_faces(cx: CornerComplex, action: LatticeAction) -> list:
    """Faces of codim >= 2 whose hypersurfaces all lie in a single orbit."""
    orbit_of = {}
    for i, o in enumerate(action.orbits(cx.hypersurfaces)):
        for h in o:
            orbit_of[h] = i
    return [a for a, f in cx.faces.items()
            if f.codim >= 2 and len({orbit_of[h] for h in f.hypersurfaces}) == 1]


def partial_boundary_blowup(cx: CornerComplex, action: LatticeAction):
    """Blow up faces cut out by pairwise intertwined hypersurfaces; returns (complex, action, blown)."""
    return _blow_up_in_rounds(cx, action, intertwined_faces(cx, action))


def chain_census(cx: CornerComplex) -> dict:
    """Oracle for the total boundary blow-up: number of k-chains of proper boundary faces."""
    proper = [a for a, f in cx.faces.items() if f.codim >= 1]
    counts = {0: len(cx.components)}
    chains = [(a,) for a in proper]
    k = 1
    while chains:
        counts[k] = len(chains)
        chains = [ch + (b,) for ch in chains for b in proper if (b, ch[-1]) in cx.incidence]
        k += 1
    return counts


# -- doubling ---------------------------------------------------------------

def double_across(cx: CornerComplex, action: LatticeAction, collection: Iterable[Label]):
    """Glue two copies of ``cx`` along the hypersurfaces in ``collection``.

    The new action has elements ``(g, 0)`` and ``(g, 1)``; ``(e, 1)`` swaps
    the two copies.
    """
    b = frozenset(collection)
    if not b <= set(cx.hypersurfaces):
        raise ValueError("collection must consist of hypersurfaces")
    for h1, h2 in combinations(sorted(b, key=repr), 2):
        if cx.meets(h1, h2):
            raise CollectionNotDisjoint(f"{h1!r} meets {h2!r}")
    for m in action.face_maps:
        if {m[h] for h in b} != b:
            raise CollectionNotInvariant("collection is not invariant under the action")

    def in_b(label) -> bool:
        return bool(cx.faces[label].hypersurfaces & b)

    meets_b = {e: in_b(e) or any(in_b(d) for d in cx.below(e)) for e in cx.faces}

    def image(label, s):
        return ("dbl", label) if meets_b[label] else ("copy", label, s)

    faces = {}
    for e, f in cx.faces.items():
        if in_b(e):
            continue
        for s in ((1,) if meets_b[e] else (1, -1)):
            faces[image(e, s)] = Face(f.codim, frozenset(image(h, s) for h in f.hypersurfaces),
                                      image(f.component, s), f.tag)
    inc = set()
    for x, y in cx.incidence:
        if in_b(x) or in_b(y):
            continue
        for s in (1, -1):
            inc.add((image(x, s), image(y, s)))
    sheets = tuple(sh + (s,) for sh in cx.sheets for s in (1, -1))
    elements, maps, sheet_maps = [], [], []
    for e, m, sm in zip(action.elements, action.face_maps, action.sheet_maps):
        for flip in (0, 1):
            elements.append((e, flip))
            fm = {}
            for lab in faces:
                if lab[0] == "dbl":
                    fm[lab] = ("dbl", m[lab[1]])
                else:
                    fm[lab] = ("copy", m[lab[1]], -lab[2] if flip else lab[2])
            maps.append(fm)
            sheet_maps.append({sh + (s,): sm[sh] + (-s if flip else s,) for sh in cx.sheets for s in (1, -1)})
    new_cx = CornerComplex(faces, frozenset(inc), sheets, cx.name)
    return new_cx, LatticeAction(tuple(elements), tuple(maps), tuple(sheet_maps))


def lift_collection(cx: CornerComplex, collection: Iterable[Label]) -> frozenset:
    """Preimages in a doubled complex of hypersurfaces of the original."""
    wanted = set(collection)
    return frozenset(h for h in cx.hypersurfaces if h[1] in wanted)


def iterated_double(cx: CornerComplex, action: LatticeAction, partition=None):
    """Double successively across every collection of a BIF partition."""
    if partition is None:
        res = check_boundary_intersection_free(cx, action)
        if not res:
            raise CollectionNotDisjoint(f"action is not boundary intersection free: {res.witness}")
        partition = res.partition
    partition = [frozenset(p) for p in partition]
    for i, coll in enumerate(partition):
        cx, action = double_across(cx, action, coll)
        partition[i + 1:] = [lift_collection(cx, p) for p in partition[i + 1:]]
    return cx, action


def _root(e):
    while isinstance(e, tuple) and len(e) == 2 and e[1] in (0, 1):
        e = e[0]
    return e


def swap_subgroup(action: LatticeAction) -> list[int]:
    """Indices of the elements whose original group part is the identity."""
    ident = _root(action.elements[0])
    return [i for i, e in enumerate(action.elements) if _root(e) == ident]


def swaps_faithful_and_central(action: LatticeAction, copies: int) -> bool:
    """The swap elements form a Z2^l acting freely on sheets and commuting with the rest."""
    swaps = swap_subgroup(action)
    if len(swaps) != 2 ** copies:
        return False
    sheet_perms = {tuple(sorted(action.sheet_maps[i].items())) for i in swaps}
    if len(sheet_perms) != len(swaps):
        return False
    for i in swaps:
        sm = action.sheet_maps[i]
        if sum(1 for k, v in sm.items() if k == v) and sm != {k: k for k in sm}:
            return False
        for j in range(action.order):
            a, b = action.face_maps[i], action.face_maps[j]
            if any(a[b[x]] != b[a[x]] for x in a):
                return False
            sa, sb = action.sheet_maps[i], action.sheet_maps[j]
            if any(sa[sb[x]] != sb[sa[x]] for x in sa):
                return False
    return True


# -- presentation -----------------------------------------------------------

def label_str(label) -> str:
    if not isinstance(label, tuple):
        return str(label)
    kind = label[0]
    if kind == "lift":
        return label_str(label[1])
    if kind == "ff":
        _, c, d, i_set = label
        if d == c and not i_set:
            return f"ff[{label_str(c)}]"
        parts = [label_str(d)] + sorted(label_str(h) for h in i_set)
        return f"ff[{label_str(c)}|" + ",".join(parts) + "]"
    if kind == "dbl":
        return f"2({label_str(label[1])})"
    if kind == "copy":
        return f"{label_str(label[1])}{'+' if label[2] > 0 else '-'}"
    return repr(label)


def to_json(cx: CornerComplex, action: LatticeAction | None = None) -> dict:
    names = {a: label_str(a) for a in cx.faces}
    out = {
        "name": cx.name,
        "hypersurfaces": sorted(names[h] for h in cx.hypersurfaces),
        "faces": sorted(({"label": names[a], "codim": f.codim,
                          "hypersurfaces": sorted(names[h] for h in f.hypersurfaces),
                          "tag": names[f.component]} for a, f in cx.faces.items()),
                        key=lambda d: (d["codim"], d["label"])),
        "census": {str(k): v for k, v in cx.census().items()},
    }
    if action is not None:
        out["action"] = {"order": action.order, "orbits": sorted(
            sorted(names[h] for h in o) for o in action.orbits(cx.hypersurfaces))}
    return out


def to_dot(cx: CornerComplex, name: str = "faces") -> str:
    names = {a: label_str(a) for a in cx.faces}
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for a in sorted(cx.faces, key=lambda x: (cx.faces[x].codim, names[x])):
        lines.append(f'  "{names[a]}" [label="{names[a]}\\ncodim {cx.faces[a].codim}"];')
    cover = []
    for a, b in cx.incidence:
        if cx.faces[a].codim == cx.faces[b].codim + 1:
            cover.append((names[a], names[b]))
    for a, b in sorted(cover):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
