"""Model specification parsing and JSON / DOT export.

Rational scalars are written as ``"p/q"`` strings everywhere.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from . import corners as cc
from . import linalg as la
from .errors import SpecError
from .faces import subspace_name
from .groups import DEFAULT_CAP, FiniteMatrixGroup
from .resolve import GeometricModel, ResolutionOutcome, overall_status
from .strata import IsotropyPoset, closure_incidence

KINDS = ("ball", "signbox", "abstract-complex")
DEFAULTS = {"cap": DEFAULT_CAP, "samples_per_face": 5, "seed": 0}

_scalar = {"type": ["string", "integer"]}
_matrix = {"type": "array", "items": {"type": "array", "items": _scalar}}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "name": {"type": "string"},
        "kind": {"enum": list(KINDS)},
        "dimension": {"type": "integer", "minimum": 1},
        "generators": {"type": "array", "items": _matrix},
        "tags": {"type": "array", "items": _matrix},
        "cap": {"type": "integer", "minimum": 1},
        "samples_per_face": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "complex": {"type": "object"},
        "action": {"type": "object"},
        "collections": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
    },
}

_report = {"type": "object", "required": ["status"], "properties": {"status": {"enum": ["PASS", "FAIL"]}}}
_census = {"type": "object", "additionalProperties": {"type": "integer"}}

OUTPUT_SCHEMAS = {
    "analyze": {
        "type": "object",
        "required": ["command", "model", "group_order", "lattice", "types", "order", "principal", "checks", "status"],
        "properties": {
            "types": {"type": "array", "items": {
                "type": "object",
                "required": ["class_id", "group_order", "stratum_codim", "fixed_space", "orbit_subspaces"]}},
            "checks": {"type": "object", "additionalProperties": _report},
            "status": {"enum": ["PASS", "FAIL"]},
        },
    },
    "resolve": {
        "type": "object",
        "required": ["command", "model", "trace", "census", "components", "collectives", "carriers",
                     "verification", "status"],
        "properties": {
            "trace": {"type": "array", "items": {"type": "object", "required": ["round", "class_id", "centers"]}},
            "census": _census,
            "components": {"type": "array", "items": {"type": "object",
                                                      "required": ["face", "hypersurfaces"]}},
            "collectives": {"type": "array", "items": {
                "type": "object", "required": ["class_id", "hypersurfaces", "fibration_codim"]}},
            "verification": {"type": "object", "additionalProperties": _report},
            "status": {"enum": ["PASS", "FAIL"]},
        },
    },
    "quotient": {
        "type": "object",
        "required": ["command", "model", "census", "hypersurfaces", "faces", "checks", "borel", "status"],
        "properties": {
            "census": _census,
            "faces": {"type": "array", "items": {
                "type": "object", "required": ["label", "codim", "orbit_size", "orbit_of"],
                "properties": {"orbit_of": {"type": "array", "items": {"type": "string"}}}}},
            "checks": {"type": "object", "additionalProperties": _report},
            "status": {"enum": ["PASS", "FAIL"]},
        },
    },
    "boundary": {
        "type": "object",
        "required": ["command", "model", "mode", "blown", "result", "bif", "status"],
        "properties": {"status": {"enum": ["PASS", "FAIL"]}, "bif": _report},
    },
    "double": {
        "type": "object",
        "required": ["command", "model", "collections", "result", "swap_group", "status"],
        "properties": {"status": {"enum": ["PASS", "FAIL"]}},
    },
}


def validate_output(command: str, data: dict) -> None:
    jsonschema.validate(data, OUTPUT_SCHEMAS[command])


# -- parsing -------------------------------------------------------------------

def load_spec(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    return parse_spec(data)


def parse_spec(data: Any) -> dict:
    try:
        jsonschema.validate(data, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SpecError(f"invalid model spec: {exc.message}") from exc
    spec = dict(DEFAULTS)
    spec.update(data)
    spec.setdefault("name", "model")
    if spec["kind"] != "abstract-complex":
        if "generators" not in spec:
            raise SpecError("linear models need generators")
        n = spec.get("dimension")
        gens = []
        try:
            for g in spec["generators"]:
                gens.append(la.matrix(g))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad generator matrix: {exc}") from exc
        for g in gens:
            if n is not None and len(g) != n:
                raise SpecError(f"generator of size {len(g)} in a model of dimension {n}")
        spec["dimension"] = n or (len(gens[0]) if gens else None)
        if not gens:
            gens = [la.identity(spec["dimension"])]
        spec["matrices"] = gens
        try:
            spec["tag_matrices"] = [la.matrix(t) for t in spec["tags"]] if "tags" in spec else None
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad tag matrix: {exc}") from exc
    return spec


def build_group(spec: dict, cap: int | None = None) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(spec["matrices"], cap=cap or spec["cap"], name=spec["name"], tags=spec["tag_matrices"])


def build_model(spec: dict, cap: int | None = None) -> GeometricModel:
    if spec["kind"] == "abstract-complex":
        raise SpecError("an abstract complex is not a linear model")
    return GeometricModel(spec["kind"], build_group(spec, cap), spec["name"])


_BUILTINS = {
    "interval": cc.interval_complex,
    "square": cc.square_complex,
    "cube": lambda: cc.cube_complex(3, "cube"),
}


def build_complex(spec: dict):
    """(complex, action) of an abstract-complex spec."""
    if spec["kind"] != "abstract-complex":
        raise SpecError("not an abstract complex spec")
    body = spec.get("complex", {})
    if "builtin" in body:
        if body["builtin"] not in _BUILTINS:
            raise SpecError(f"unknown builtin complex {body['builtin']!r}")
        cx = _BUILTINS[body["builtin"]]()
        cx.name = spec["name"]
    else:
        cx = cc.complex_from_json(dict(body, name=spec["name"]))
    act = spec.get("action", {})
    if "signed_permutations" in act:
        gens = [(p["perm"], p["signs"]) for p in act["signed_permutations"]]
        action = cc.coordinate_action(cx, gens) if gens else cc.trivial_action(cx)
    elif "hypersurface_permutations" in act:
        unknown = {h for g in act["hypersurface_permutations"] for kv in g.items() for h in kv} - set(cx.hypersurfaces)
        if unknown:
            raise SpecError(f"unknown hypersurfaces in action: {sorted(unknown)}")
        action = cc.action_from_hypersurface_perms(cx, act["hypersurface_permutations"])
    else:
        action = cc.trivial_action(cx)
    bad = cx.validate() + action.validate(cx)
    if bad:
        raise SpecError("; ".join(bad[:3]))
    return cx, action


# -- export --------------------------------------------------------------------

def _q(x) -> str:
    return la.fraction_str(x)


def subspace_json(w: la.Subspace) -> list:
    return [[_q(x) for x in row] for row in w.basis]


def poset_json(poset: IsotropyPoset, name: str = "") -> dict:
    g = poset.group
    return {
        "model": name,
        "group_order": g.order,
        "lattice": [subspace_json(w) for w in poset.lattice],
        "types": [{
            "class_id": t.class_id,
            "group_order": t.group_order,
            "stratum_codim": t.stratum_codim,
            "representative": list(t.representative.member_ids),
            "fixed_space": subspace_json(t.fixed_space),
            "orbit_subspaces": [subspace_json(w) for w in t.orbit_subspaces],
        } for t in poset.types],
        "order": sorted([a, b] for a, b in poset.order if a != b),
        "principal": poset.principal,
        "closure_incidence": sorted([a, b] for a, b in closure_incidence(poset)),
    }


def poset_dot(poset: IsotropyPoset) -> str:
    lines = ["digraph isotropy {", "  rankdir=BT;"]
    for t in poset.types:
        lines.append(f'  t{t.class_id} [label="[{t.class_id}] |K|={t.group_order}\\ncodim {t.stratum_codim}"];')
    for a, b in sorted(poset.order):
        if a == b:
            continue
        if any(c not in (a, b) and poset.lt(a, c) and poset.lt(c, b) for c in range(len(poset.types))):
            continue
        lines.append(f"  t{a} -> t{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def outcome_json(out: ResolutionOutcome) -> dict:
    cx = out.resolved
    comps = []
    counts = cx.component_hypersurface_counts()
    for c in cx.components:
        comps.append({"face": str(c), "hypersurfaces": counts[c]})
    collectives = []
    for cid, c in out.structure.collectives.items():
        collectives.append({
            "class_id": cid,
            "group_order": out.poset.types[cid].group_order,
            "centers": [subspace_json(w) for w in c.centers],
            "hypersurfaces": sorted(str(h) for h in c.hypersurfaces),
            "fibration_codim": c.fibration_codim,
        })
    return {
        "model": out.model.name,
        "kind": out.model.kind,
        "dimension": out.model.dimension,
        "group_order": out.model.group.order,
        "truncated": out.truncated,
        "trace": [{"round": s.round, "class_id": s.class_id, "centers": [subspace_json(w) for w in s.centers],
                   "center_codim": s.center_codim, "removed": list(s.removed), "remaining": list(s.remaining)}
                  for s in out.trace.steps],
        "census": {str(k): v for k, v in cx.census().items()},
        "components": comps,
        "collectives": collectives,
        "carriers": sorted(str(h) for h in out.structure.carriers),
        "verification": out.report,
        "status": overall_status(out),
    }


def trace_dot(out: ResolutionOutcome) -> str:
    """Steps of one round are independent; every step of a round precedes the next round."""
    lines = ["digraph trace {"]
    steps = out.trace.steps
    for i, s in enumerate(steps):
        names = ", ".join(subspace_name(w) for w in s.centers)
        lines.append(f'  s{i} [label="round {s.round}: type {s.class_id}\\n{names}"];')
    for i, a in enumerate(steps):
        for j, b in enumerate(steps):
            if b.round == a.round + 1:
                lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
