"""Model families for the property suite."""
from itertools import permutations, product


def _span(vectors, n):
    out = {(0,) * n}
    for v in vectors:
        out |= {tuple((a + b) % 2 for a, b in zip(v, w)) for w in out}
    return frozenset(out)


def sign_subgroups(n: int) -> list:
    """Subgroups of {+-1}^n up to coordinate permutation, as tuples of generator sign vectors."""
    seen = set()
    found = []
    vecs = [v for v in product((0, 1), repeat=n) if any(v)]
    spaces = {_span([], n)}
    frontier = list(spaces)
    while frontier:
        nxt = []
        for s in frontier:
            for v in vecs:
                t = _span(list(s) + [v], n)
                if t not in spaces:
                    spaces.add(t)
                    nxt.append(t)
        frontier = nxt
    for s in sorted(spaces, key=lambda s: (len(s), sorted(s))):
        canon = min(tuple(sorted(tuple(v[p] for p in perm) for v in s)) for perm in permutations(range(n)))
        if canon in seen:
            continue
        seen.add(canon)
        gens = []
        for v in sorted(s):
            if any(v) and v not in _span(gens, n):
                gens.append(v)
        found.append(tuple(gens))
    return found


def diag(signs):
    n = len(signs)
    return [[signs[i] if i == j else 0 for j in range(n)] for i in range(n)]


def sign_generators(gens, n):
    if not gens:
        return [diag([1] * n)]
    return [diag([-1 if b else 1 for b in v]) for v in gens]


def rotation_models() -> list:
    """(name, generators) of cyclic rotations of order 2 and 4 in dimensions 2 and 3."""
    return [
        ("c2-plane", [[[-1, 0], [0, -1]]]),
        ("c4-plane", [[[0, -1], [1, 0]]]),
        ("c2-axis", [[[-1, 0, 0], [0, -1, 0], [0, 0, 1]]]),
        ("c4-axis", [[[0, -1, 0], [1, 0, 0], [0, 0, 1]]]),
    ]


def suite() -> list:
    """(name, kind, generators) for every model of the property suite."""
    out = []
    for n in range(1, 5):
        for gens in sign_subgroups(n):
            name = f"signbox{n}-" + ("".join("".join(map(str, v)) + "." for v in gens).rstrip(".") or "trivial")
            out.append((name, "signbox", sign_generators(gens, n)))
    out += [(name, "ball", g) for name, g in rotation_models()]
    return out


_RESULTS = {}


def suite_result(name: str, kind: str, gens) -> dict:
    """Statuses of criteria (a)-(e) for one suite model, cached for the session."""
    if name in _RESULTS:
        return _RESULTS[name]
    from eqresolve.groups import FiniteMatrixGroup
    from eqresolve.quotient import borel_check, orbit_space
    from eqresolve.resolve import GeometricModel, canonical_resolution
    from eqresolve.strata import galois_violations, isotropy_shrink_violations

    model = GeometricModel(kind, FiniteMatrixGroup(gens), name)
    out = canonical_resolution(model, samples_per_face=5)
    z = orbit_space(out)
    res = {
        "unique_isotropy": out.report["unique_isotropy"]["status"],
        "bookkeeping": out.report["bookkeeping"]["status"],
        "structure": out.report["structure"]["status"],
        "strata": "PASS" if not galois_violations(out.poset) + isotropy_shrink_violations(out.poset) else "FAIL",
        "quotient": "PASS" if all(r["status"] == "PASS" for r in z.report.values())
        and all(borel_check(model, t).status == "PASS" for t in out.poset.types) else "FAIL",
    }
    _RESULTS[name] = res
    return res
