"""Brute-force chart enumeration for resolved sign boxes of dimension 1 and 2.

Independent of the engine: components are built directly as polygons in
Cartesian charts (origin not blown up) or polar charts around the origin
(origin blown up), and faces are read off the polygon boundary.
"""
from __future__ import annotations

from fractions import Fraction

BOX_CORNER_ANGLES = (45, 135, 225, 315)
BOX_EDGE_OF = {0: "x+", 90: "y+", 180: "x-", 270: "y-"}


def _elements(signs_list, n):
    out = {(1,) * n}
    for s in signs_list:
        out |= {tuple(a * b for a, b in zip(s, t)) for t in out}
    return out


def _box_edge(angle: float) -> str:
    """Box edge hit by the ray at ``angle`` (degrees, not a corner angle)."""
    a = angle % 360
    if a < 45 or a > 315:
        return "x+"
    if a < 135:
        return "y+"
    if a < 225:
        return "x-"
    return "y-"


def interval_census(signs_list) -> dict:
    g = _elements(signs_list, 1)
    if len(g) == 1:
        return {"census": {0: 1, 1: 2}, "per_component": [2], "collectives": {}}
    return {"census": {0: 2, 1: 4}, "per_component": [2, 2], "collectives": {"origin": 2}}


def square_census(signs_list) -> dict:
    g = _elements(signs_list, 2)
    mirror_y_axis = (-1, 1) in g  # fixes x = 0
    mirror_x_axis = (1, -1) in g  # fixes y = 0
    if len(g) == 1:
        return {"census": {0: 1, 1: 4, 2: 4}, "per_component": [4], "collectives": {}}
    if mirror_x_axis != mirror_y_axis:
        # one mirror line whose stabilizer is all of G: cut the square along it
        return {"census": {0: 2, 1: 8, 2: 8}, "per_component": [4, 4], "collectives": {"mirror": 2}}
    rays = []
    if mirror_x_axis:
        rays += [0, 180]
    if mirror_y_axis:
        rays += [90, 270]
    rays.sort()
    if not rays:
        # polar chart is an annulus: front circle inside, four box edges outside
        return {"census": {0: 1, 1: 5, 2: 4}, "per_component": [5], "collectives": {"origin": 1}}
    comps = []
    for i, a in enumerate(rays):
        b = rays[(i + 1) % len(rays)] + (360 if i + 1 == len(rays) else 0)
        # boundary of the sector r in [0, R(theta)], theta in [a, b], walked once around
        edges = [("front", a, b), ("ray", a), ("ray", b % 360)]
        cuts = [a] + [c for c in BOX_CORNER_ANGLES + tuple(x + 360 for x in BOX_CORNER_ANGLES) if a < c < b] + [b]
        for lo, hi in zip(cuts, cuts[1:]):
            edges.append(("box", _box_edge(Fraction(lo + hi, 2))))
        comps.append(edges)
    faces1 = sum(len(c) for c in comps)
    corners = faces1  # each component is a polygon
    collectives = {"origin": len(comps)}
    if mirror_x_axis:
        collectives["y=0"] = sum(1 for c in comps for e in c if e[0] == "ray" and e[1] in (0, 180))
    if mirror_y_axis:
        collectives["x=0"] = sum(1 for c in comps for e in c if e[0] == "ray" and e[1] in (90, 270))
    return {"census": {0: len(comps), 1: faces1, 2: corners},
            "per_component": [len(c) for c in comps], "collectives": collectives}


def oracle(signs_list, n: int) -> dict:
    if n == 1:
        return interval_census(signs_list)
    if n == 2:
        return square_census(signs_list)
    raise ValueError("the chart oracle covers dimensions 1 and 2")
