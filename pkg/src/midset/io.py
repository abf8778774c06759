"""Scene files (JSON) and result serialisation (CSV, SVG, PGM).

Scene file schema, version 1::

    {
      "version": 1,
      "R": 4.0,
      "A": [{"type": "dot", "p": [-1, 0]}],
      "B": [{"type": "segment", "p": [0, 1], "q": [1, 1]},
            {"type": "circle", "center": [0, 0], "radius": 0.5},
            {"type": "disk", "center": [0, 0], "radius": 0.5},
            {"type": "polyline", "vertices": [[0, 0], [1, 0], [1, 1]], "closed": false},
            {"type": "line", "p": [0, -1], "direction": [1, 0]}],
      "labels": {"A": "left", "B": "right"},          (optional)
      "bounded": true,                                  (optional)
      "tolerances": {"tol_x": 0.001, "tol_gap": 0.004} (optional)
    }

A ``line`` record becomes a segment of length 8R centred at the foot of the
origin and marks the scene unbounded (containment check off).
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from .certification import PGM_LEVEL, Raster
from .config import Tolerances
from .errors import ParseError, ValidationError
from .extraction import Scene
from .geometry import Circle, Disk, Dot, FocalSet, Point2, PolyLine, Segment

SCENE_VERSION = 1
_TOL_FIELDS = ("tol_x", "tol_gap", "dedup", "incidence", "root_width")


def fmt(v) -> str:
    """17 significant digits; empty string for None/NaN."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    return format(v, ".17g")


# ---------------------------------------------------------------------------
# scene files


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field '{key}'", where)
    return obj[key]


def _number(v, where) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ParseError(f"expected a finite number, got {v!r}", where)
    return float(v)


def _pt(v, where) -> Point2:
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise ParseError(f"expected [x, y], got {v!r}", where)
    return Point2(_number(v[0], f"{where}[0]"), _number(v[1], f"{where}[1]"))


def _primitive(rec, where, R):
    kind = _require(rec, "type", where)
    try:
        if kind == "dot":
            return Dot(_pt(_require(rec, "p", where), f"{where}.p")), True
        if kind == "segment":
            return Segment(_pt(_require(rec, "p", where), f"{where}.p"), _pt(_require(rec, "q", where), f"{where}.q")), True
        if kind in ("circle", "disk"):
            c = _pt(_require(rec, "center", where), f"{where}.center")
            r = _number(_require(rec, "radius", where), f"{where}.radius")
            if r <= 0:
                raise ValidationError("positivity", f"{where}.radius must be positive")
            return (Circle if kind == "circle" else Disk)(c, r), True
        if kind == "polyline":
            vs = _require(rec, "vertices", where)
            if not isinstance(vs, list):
                raise ParseError("expected a list of points", f"{where}.vertices")
            pts = tuple(_pt(v, f"{where}.vertices[{i}]") for i, v in enumerate(vs))
            return PolyLine(pts, bool(rec.get("closed", False))), True
        if kind == "line":
            p = _pt(_require(rec, "p", where), f"{where}.p")
            d = _pt(_require(rec, "direction", where), f"{where}.direction")
            n = math.hypot(*d)
            if n == 0:
                raise ValidationError("positivity", f"{where}.direction must be nonzero")
            e = (d.x / n, d.y / n)
            s = -(p.x * e[0] + p.y * e[1])
            mid = (p.x + s * e[0], p.y + s * e[1])
            L = 4 * R
            return Segment((mid[0] - L * e[0], mid[1] - L * e[1]), (mid[0] + L * e[0], mid[1] + L * e[1])), False
    except ValueError as exc:
        if isinstance(exc, (ParseError, ValidationError)):
            raise
        raise ValidationError("positivity", f"{where}: {exc}") from exc
    raise ParseError(f"unknown primitive type {kind!r}", f"{where}.type")


def scene_from_dict(doc) -> Scene:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    version = _require(doc, "version", "$")
    if version != SCENE_VERSION:
        raise ParseError(f"unsupported version {version!r}", "$.version")
    R = _number(_require(doc, "R", "$"), "$.R")
    if R <= 0:
        raise ValidationError("positivity", "bounding radius R must be positive")
    labels = doc.get("labels", {}) or {}
    bounded = bool(doc.get("bounded", True))
    sets = {}
    for name in ("A", "B"):
        recs = _require(doc, name, "$")
        if not isinstance(recs, list) or not recs:
            raise ParseError("expected a nonempty list of primitives", f"$.{name}")
        prims = []
        for i, rec in enumerate(recs):
            prim, is_bounded = _primitive(rec, f"$.{name}[{i}]", R)
            bounded = bounded and is_bounded
            prims.append(prim)
        sets[name] = FocalSet(tuple(prims), str(labels.get(name, name)))
    tol_doc = doc.get("tolerances") or {}
    if not isinstance(tol_doc, dict):
        raise ParseError("expected an object", "$.tolerances")
    unknown = set(tol_doc) - set(_TOL_FIELDS)
    if unknown:
        raise ParseError(f"unknown tolerance fields {sorted(unknown)}", "$.tolerances")
    try:
        tol = Tolerances.for_radius(R, **{k: _number(v, f"$.tolerances.{k}") for k, v in tol_doc.items()})
    except ParseError:
        raise
    except ValueError as exc:
        raise ValidationError("positivity", str(exc)) from exc
    return Scene(sets["A"], sets["B"], R, tol, bounded)


def load_scene(path) -> Scene:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    return scene_from_dict(doc)


def _prim_dict(prim) -> dict:
    if isinstance(prim, Dot):
        return {"type": "dot", "p": list(prim.p)}
    if isinstance(prim, Segment):
        return {"type": "segment", "p": list(prim.p), "q": list(prim.q)}
    if isinstance(prim, (Circle, Disk)):
        return {"type": prim.kind, "center": list(prim.center), "radius": prim.radius}
    return {"type": "polyline", "vertices": [list(v) for v in prim.vertices], "closed": prim.closed}


def scene_to_dict(scene: Scene) -> dict:
    tol = {k: getattr(scene.tol, k) for k in _TOL_FIELDS if getattr(scene.tol, k) is not None}
    return {
        "version": SCENE_VERSION,
        "R": scene.R,
        "A": [_prim_dict(p) for p in scene.A.primitives],
        "B": [_prim_dict(p) for p in scene.B.primitives],
        "labels": {"A": scene.A.label, "B": scene.B.label},
        "bounded": scene.bounded,
        "tolerances": tol,
    }


def dump_scene(scene: Scene, path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n")


# ---------------------------------------------------------------------------
# CSV


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def chains_csv(chains) -> str:
    rows = (
        (cid, seq, x, y, r)
        for cid, c in enumerate(chains)
        for seq, ((x, y), r) in enumerate(zip(c.vertices.tolist(), c.residuals.tolist()))
    )
    return _csv(("chain_id", "seq", "x", "y", "residual"), rows)


def rays_csv(rays) -> str:
    return _csv(
        ("ray_id", "origin_x", "origin_y", "dir_x", "dir_y"),
        ((i, r.origin.x, r.origin.y, r.direction.x, r.direction.y) for i, r in enumerate(rays)),
    )


def profiles_csv(profiles) -> str:
    return _csv(
        ("ray_id", "t", "s"),
        ((i, t, s) for i, p in enumerate(profiles) for t, s in zip(p.t.tolist(), p.s.tolist())),
    )


def raster_csv(raster: Raster) -> str:
    def row(c):
        k = c.cert
        return (c.center.x, c.center.y, c.classification) + (
            (k.eps, k.d, k.alpha, k.radius) if k is not None else (None, None, None, None)
        )

    return _csv(("x", "y", "classification", "eps", "d", "alpha", "radius"), (row(c) for c in raster.cells))


def certs_csv(points, results) -> str:
    rows = []
    for p, res in zip(points, results):
        if isinstance(res, Exception):
            rows.append((p[0], p[1], None, None, None, None, type(res).__name__))
        else:
            rows.append((p[0], p[1], res.eps, res.d, res.alpha, res.radius, "certified"))
    return _csv(("x", "y", "eps", "d", "alpha", "radius", "status"), rows)


def continuity_csv(rows) -> str:
    return _csv(("delta", "dH_focals", "dH_midsets", "note"), ((r.delta, r.dH_focals, r.dH_midsets, r.note) for r in rows))


def conics_csv(rows) -> str:
    return _csv(("scene", "kind", "constant", "residual", "tol_gap", "pass"), rows)


def report_csv(report, chains) -> str:
    comp_of = {i: k for k, group in enumerate(report.components) for i in group}
    return _csv(
        ("chain_id", "component", "closed", "n_vertices"),
        ((i, comp_of.get(i, -1), c.closed, len(c)) for i, c in enumerate(chains)),
    )


# ---------------------------------------------------------------------------
# PGM / SVG


def raster_pgm(raster: Raster) -> str:
    lv = raster.levels()
    lines = ["P2", f"{raster.grid_n} {raster.grid_n}", "255"]
    lines += [" ".join(str(int(v)) for v in row) for row in lv]
    return "\n".join(lines) + "\n"


def _path_d(pts, closed=False) -> str:
    d = "M " + " L ".join(f"{fmt(x)} {fmt(y)}" for x, y in pts)
    return d + (" Z" if closed else "")


def _primitive_svg(prim, stroke) -> str:
    if isinstance(prim, Dot):
        return f'<circle cx="{fmt(prim.p.x)}" cy="{fmt(prim.p.y)}" r="{{dot}}" fill="{stroke}"/>'
    if isinstance(prim, Segment):
        return f'<path d="{_path_d([prim.p, prim.q])}" stroke="{stroke}" fill="none" stroke-width="{{w}}"/>'
    if isinstance(prim, Circle):
        return (
            f'<circle cx="{fmt(prim.center.x)}" cy="{fmt(prim.center.y)}" r="{fmt(prim.radius)}"'
            f' stroke="{stroke}" fill="none" stroke-width="{{w}}"/>'
        )
    if isinstance(prim, Disk):
        return f'<circle cx="{fmt(prim.center.x)}" cy="{fmt(prim.center.y)}" r="{fmt(prim.radius)}" fill="{stroke}"/>'
    return f'<path d="{_path_d(prim.vertices, prim.closed)}" stroke="{stroke}" fill="none" stroke-width="{{w}}"/>'


def scene_svg(scene: Scene, chains=(), rays=()) -> str:
    """Focal sets, chains (solid paths) and rays (dashed paths); y axis points up."""
    R = scene.R
    w = fmt(R / 400)
    dot = fmt(R / 100)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(-R)} {fmt(-R)} {fmt(2 * R)} {fmt(2 * R)}"'
        ' width="800" height="800">',
        '<g transform="scale(1,-1)">',
        f'<circle cx="0" cy="0" r="{fmt(R)}" stroke="#bbbbbb" fill="none" stroke-width="{w}"/>',
    ]
    for F, color in ((scene.A, "#1f77b4"), (scene.B, "#d62728")):
        for prim in F.primitives:
            out.append(_primitive_svg(prim, color).replace("{w}", w).replace("{dot}", dot))
    for c in chains:
        out.append(f'<path d="{_path_d(c.vertices.tolist(), c.closed)}" stroke="#000000" fill="none" stroke-width="{w}"/>')
    for r in rays:
        o, d = np.asarray(r.origin), np.asarray(r.direction)
        # extend to the disk boundary
        b = o @ d
        t = -b + math.sqrt(max(b * b - (o @ o - R * R), 0.0))
        end = o + t * d
        out.append(
            f'<path d="{_path_d([o, end])}" stroke="#2ca02c" fill="none" stroke-width="{w}"'
            f' stroke-dasharray="{fmt(R / 50)} {fmt(R / 100)}"/>'
        )
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
