"""Command-line front end.

Exit status: 0 when every requested verification passes, 1 on a
verification failure, 2 on a malformed or unsupported model specification.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from . import corners as cc
from . import io
from .errors import ResolutionError
from .quotient import borel_check, orbit_space
from .resolve import FAIL, PASS, canonical_resolution
from .strata import (galois_violations, isotropy_poset, isotropy_shrink_violations, minimal_disjointness_violations,
                     sampling_oracle_violations)

EXIT_OK, EXIT_FAIL, EXIT_SPEC = 0, 1, 2


class SpecFailure(click.ClickException):
    exit_code = EXIT_SPEC


def _check(bad: list) -> dict:
    return {"status": PASS if not bad else FAIL, "violations": bad[:20]}


def _status(checks: dict) -> str:
    return PASS if all(c["status"] == PASS for c in checks.values()) else FAIL


def _failures(checks: dict) -> list[str]:
    lines = []
    for name, rep in sorted(checks.items()):
        if rep["status"] == PASS:
            continue
        detail = rep.get("violations") or []
        first = detail[0] if detail else ""
        if isinstance(first, dict):
            first = ", ".join(f"{k}={v}" for k, v in sorted(first.items()))
        lines.append(f"FAIL {name}: {first}".rstrip(": "))
    return lines


def _load(path: str, cap: int | None, samples: int | None, seed: int | None) -> dict:
    spec = io.load_spec(path)
    if cap is not None:
        spec["cap"] = cap
    if samples is not None:
        spec["samples_per_face"] = samples
    if seed is not None:
        spec["seed"] = seed
    return spec


def _emit(ctx, command: str, data: dict, text: list[str], dot: str | None) -> None:
    data = dict(data, command=command)
    io.validate_output(command, data)
    if ctx.obj["dot"] and dot is not None:
        Path(ctx.obj["dot"]).write_text(dot)
    if ctx.obj["json"]:
        click.echo(io.dumps(data), nl=False)
    else:
        for line in text:
            click.echo(line)
    ctx.exit(EXIT_OK if data["status"] == PASS else EXIT_FAIL)


def _census_str(census: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in sorted(census.items(), key=lambda kv: int(kv[0])))


_common = [
    click.argument("spec", type=click.Path(dir_okay=False)),
    click.option("--cap", type=int, default=None, help="Group element cap."),
    click.option("--samples", type=int, default=None, help="Sample points per face."),
    click.option("--seed", type=int, default=None, help="Sampling seed."),
]


def common(f):
    for deco in reversed(_common):
        f = deco(f)
    return f


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Emit machine-readable JSON.")
@click.option("--dot", type=click.Path(dir_okay=False), default=None, help="Write a DOT graph to PATH.")
@click.pass_context
def main(ctx, as_json, dot):
    """Equivariant resolution of finite linear actions and corner complexes."""
    ctx.obj = {"json": as_json, "dot": dot}


def _guard(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResolutionError as exc:
            raise SpecFailure(str(exc)) from exc
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@main.command()
@common
@click.pass_context
@_guard
def analyze(ctx, spec, cap, samples, seed):
    """Isotropy types and their order."""
    s = _load(spec, cap, samples, seed)
    group = io.build_model(s).group
    poset = isotropy_poset(group)
    checks = {
        "galois": _check(galois_violations(poset)),
        "sampling": _check(sampling_oracle_violations(poset, seed=s["seed"])),
        "minimal_disjointness": _check(minimal_disjointness_violations(poset)),
        "isotropy_shrink": _check(isotropy_shrink_violations(poset, seed=s["seed"])),
    }
    data = dict(io.poset_json(poset, s["name"]), checks=checks, status=_status(checks))
    text = [f"model {s['name']}: |G| = {group.order}, {len(poset.types)} isotropy types"]
    for t in poset.types:
        mark = " (principal)" if t.class_id == poset.principal else ""
        text.append(f"  [{t.class_id}] |K| = {t.group_order}, stratum codim {t.stratum_codim}, "
                    f"{len(t.orbit_subspaces)} fixed spaces{mark}")
    text += _failures(checks) + [data["status"]]
    _emit(ctx, "analyze", data, text, io.poset_dot(poset))


@main.command()
@common
@click.option("--truncate-last-step", is_flag=True, help="Skip the final blow-up (test only).")
@click.pass_context
@_guard
def resolve(ctx, spec, cap, samples, seed, truncate_last_step):
    """Canonical resolution with verification."""
    s = _load(spec, cap, samples, seed)
    out = canonical_resolution(io.build_model(s), truncate_last_step, s["samples_per_face"], s["seed"])
    data = io.outcome_json(out)
    text = [f"model {s['name']}: {len(out.trace)} blow-up steps in {len(out.trace.rounds())} rounds",
            f"  census {_census_str(data['census'])}",
            f"  {len(data['components'])} components, hypersurfaces per component "
            + ",".join(str(c["hypersurfaces"]) for c in data["components"])]
    for c in data["collectives"]:
        text.append(f"  collective [{c['class_id']}]: {len(c['hypersurfaces'])} hypersurfaces, "
                    f"fibration codim {c['fibration_codim']}")
    for name, rep in sorted(out.report.items()):
        text.append(f"  {name}: {rep['status']}")
    text += _failures(out.report) + [data["status"]]
    _emit(ctx, "resolve", data, text, cc.to_dot(out.resolved, "resolved"))


@main.command()
@common
@click.pass_context
@_guard
def quotient(ctx, spec, cap, samples, seed):
    """Orbit space of the resolved action."""
    s = _load(spec, cap, samples, seed)
    model = io.build_model(s)
    out = canonical_resolution(model, False, s["samples_per_face"], s["seed"])
    z = orbit_space(out)
    borel = [dict(borel_check(model, t, s["samples_per_face"], s["seed"]).to_json(), class_id=t.class_id)
             for t in out.poset.types]
    checks = dict(z.report, resolution={"status": io.overall_status(out)},
                  borel={"status": PASS if all(b["status"] == PASS for b in borel) else FAIL})
    members = {}
    for f, rep in z.orbit_of.items():
        members.setdefault(rep, []).append(str(f))
    faces = sorted(({"label": str(f), "codim": face.codim, "orbit_size": z.orbit_size[f],
                     "orbit_of": sorted(members[f])}
                    for f, face in z.complex.faces.items()), key=lambda d: (d["codim"], d["label"]))
    data = {
        "model": s["name"],
        "census": {str(k): v for k, v in z.census().items()},
        "hypersurfaces": sorted(str(h) for h in z.complex.hypersurfaces),
        "faces": faces,
        "collectives": {str(k): sorted(str(h) for h in v) for k, v in z.collectives.items()},
        "carriers": sorted(str(h) for h in z.carriers),
        "borel": borel,
        "checks": checks,
        "status": _status(checks),
    }
    text = [f"model {s['name']}: orbit space census {_census_str(data['census'])}",
            f"  {len(data['hypersurfaces'])} hypersurfaces: {len(z.collectives)} collectives, "
            f"{len(z.carriers)} carriers"]
    for name, rep in sorted(checks.items()):
        text.append(f"  {name}: {rep['status']}")
    text += _failures(checks) + [data["status"]]
    _emit(ctx, "quotient", data, text, cc.to_dot(z.complex, "orbits"))


def _bif_json(res: cc.BIFResult) -> dict:
    return {"status": PASS if res.ok else FAIL,
            "partition": sorted(sorted(cc.label_str(h) for h in p) for p in res.partition),
            "witness": sorted(cc.label_str(h) for h in res.witness) if res.witness else None}


@main.command()
@common
@click.option("--mode", type=click.Choice(["total", "partial"]), default="partial", show_default=True)
@click.pass_context
@_guard
def boundary(ctx, spec, cap, samples, seed, mode):
    """Total or partial boundary blow-up of an abstract complex."""
    s = _load(spec, cap, samples, seed)
    cx, action = io.build_complex(s)
    before = cc.check_boundary_intersection_free(cx, action)
    if mode == "total":
        blown = [a for a, f in cx.faces.items() if f.codim >= 2]
        new_cx, new_action = cc.total_boundary_blowup(cx, action)
    else:
        new_cx, new_action, blown = cc.partial_boundary_blowup(cx, action)
    after = cc.check_boundary_intersection_free(new_cx, new_action)
    data = {
        "model": s["name"],
        "mode": mode,
        "input": cc.to_json(cx, action),
        "bif_before": _bif_json(before),
        "blown": sorted(cc.label_str(a) for a in blown),
        "result": cc.to_json(new_cx, new_action),
        "bif": _bif_json(after),
        "status": PASS if after.ok else FAIL,
    }
    text = [f"model {s['name']}: {mode} boundary blow-up of {len(blown)} faces",
            f"  before: {len(cx.hypersurfaces)} hypersurfaces, BIF {data['bif_before']['status']}"
            + (f" (witness {', '.join(data['bif_before']['witness'])})" if before.witness else ""),
            f"  after: {len(new_cx.hypersurfaces)} hypersurfaces, census {_census_str(data['result']['census'])}",
            f"  BIF {data['bif']['status']}"]
    if not after.ok:
        text.append(f"FAIL bif: {', '.join(data['bif']['witness'])}")
    text.append(data["status"])
    _emit(ctx, "boundary", data, text, cc.to_dot(new_cx, "blown"))


@main.command()
@common
@click.pass_context
@_guard
def double(ctx, spec, cap, samples, seed):
    """Iterated doubling across disjoint invariant collections."""
    s = _load(spec, cap, samples, seed)
    cx, action = io.build_complex(s)
    if "collections" in s:
        names = {cc.label_str(h): h for h in cx.hypersurfaces}
        missing = sorted({n for c in s["collections"] for n in c} - set(names))
        if missing:
            raise SpecFailure(f"unknown hypersurfaces in collections: {missing}")
        partition = [[names[n] for n in c] for c in s["collections"]]
    else:
        partition = None
    new_cx, new_action = cc.iterated_double(cx, action, partition)
    if partition is None:
        partition = cc.check_boundary_intersection_free(cx, action).partition
    copies = len(partition)
    faithful = cc.swaps_faithful_and_central(new_action, copies)
    data = {
        "model": s["name"],
        "collections": sorted(sorted(cc.label_str(h) for h in p) for p in partition),
        "result": cc.to_json(new_cx, new_action),
        "sheets": len(new_cx.sheets),
        "swap_group": {"order": len(cc.swap_subgroup(new_action)), "expected": 2 ** copies,
                       "status": PASS if faithful else FAIL},
        "status": PASS if faithful else FAIL,
    }
    text = [f"model {s['name']}: doubled across {copies} collections",
            f"  result: {len(new_cx.hypersurfaces)} hypersurfaces, census {_census_str(data['result']['census'])}",
            f"  swap group of order {data['swap_group']['order']}: {data['swap_group']['status']}"]
    if not faithful:
        text.append("FAIL swap_group: swaps are not a faithful central Z2 power")
    text.append(data["status"])
    _emit(ctx, "double", data, text, cc.to_dot(new_cx, "doubled"))


def run(argv=None) -> int:
    try:
        rc = main.main(args=argv, prog_name="eqresolve", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_FAIL
    return rc if isinstance(rc, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(run())
