"""Exact distance evaluation, foot points, convex hulls and tangent lines.

Every other module goes through this kernel.  Circles keep their closed-form
distances everywhere; they are replaced by circumscribed regular k-gons only
for hull, tangent and angle queries, so conclusions drawn from the polygons
stay on the conservative side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .config import DEFAULT_HULL_SIDES, DEFAULT_TOLERANCES, Tolerances
from .errors import EmptyInput, HullsIntersect, InsideHull, NoSeparation


class Point2(NamedTuple):
    x: float
    y: float


def as_point(p) -> Point2:
    """Coerce a pair-like to a finite :class:`Point2`."""
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"point coordinates must be finite, got ({x}, {y})")
    return Point2(x, y)


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _seg_foot(x: Point2, p: Point2, q: Point2) -> Point2:
    dx, dy = q.x - p.x, q.y - p.y
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return p
    t = ((x.x - p.x) * dx + (x.y - p.y) * dy) / L2
    if t <= 0.0:
        return p
    if t >= 1.0:
        return q
    return Point2(p.x + t * dx, p.y + t * dy)


def _seg_dist_many(P: np.ndarray, p, q) -> np.ndarray:
    d = np.subtract(q, p, dtype=float)
    L2 = float(d @ d)
    rel = P - np.asarray(p, dtype=float)
    t = np.clip(rel @ d / L2, 0.0, 1.0)
    return np.hypot(rel[:, 0] - t * d[0], rel[:, 1] - t * d[1])


# ---------------------------------------------------------------------------
# primitives


@dataclass(frozen=True)
class Dot:
    p: Point2
    kind = "dot"

    def __post_init__(self):
        object.__setattr__(self, "p", as_point(self.p))

    def foot(self, x: Point2) -> tuple[float, list[Point2]]:
        return math.hypot(x.x - self.p.x, x.y - self.p.y), [self.p]

    def distances(self, P: np.ndarray) -> np.ndarray:
        return np.hypot(P[:, 0] - self.p.x, P[:, 1] - self.p.y)

    def hull_points(self, k: int) -> list[Point2]:
        return [self.p]

    def translated(self, v) -> "Dot":
        return Dot(Point2(self.p.x + v[0], self.p.y + v[1]))

    def sample(self, spacing: float) -> np.ndarray:
        return np.array([self.p], dtype=float)


@dataclass(frozen=True)
class Segment:
    p: Point2
    q: Point2
    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "p", as_point(self.p))
        object.__setattr__(self, "q", as_point(self.q))
        if self.p == self.q:
            raise ValueError("segment endpoints must be distinct")

    @property
    def length(self) -> float:
        return math.hypot(self.q.x - self.p.x, self.q.y - self.p.y)

    def foot(self, x: Point2) -> tuple[float, list[Point2]]:
        f = _seg_foot(x, self.p, self.q)
        return math.hypot(x.x - f.x, x.y - f.y), [f]

    def distances(self, P: np.ndarray) -> np.ndarray:
        return _seg_dist_many(P, self.p, self.q)

    def hull_points(self, k: int) -> list[Point2]:
        return [self.p, self.q]

    def translated(self, v) -> "Segment":
        return Segment(
            Point2(self.p.x + v[0], self.p.y + v[1]), Point2(self.q.x + v[0], self.q.y + v[1])
        )

    def sample(self, spacing: float) -> np.ndarray:
        n = max(2, int(math.ceil(self.length / spacing)) + 1)
        t = np.linspace(0.0, 1.0, n)[:, None]
        return (1 - t) * np.asarray(self.p) + t * np.asarray(self.q)


class _Round:
    center: Point2
    radius: float

    def _check(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    def hull_points(self, k: int) -> list[Point2]:
        # circumscribed k-gon; its edges touch the circle at angles 2*pi*i/k
        R = self.radius / math.cos(math.pi / k)
        c = self.center
        return [
            Point2(c.x + R * math.cos((2 * i + 1) * math.pi / k), c.y + R * math.sin((2 * i + 1) * math.pi / k))
            for i in range(k)
        ]

    def translated(self, v):
        return type(self)(Point2(self.center.x + v[0], self.center.y + v[1]), self.radius)


@dataclass(frozen=True)
class Circle(_Round):
    center: Point2
    radius: float
    kind = "circle"

    def __post_init__(self):
        self._check()

    def foot(self, x: Point2) -> tuple[float, list[Point2]]:
        c, r = self.center, self.radius
        rho = math.hypot(x.x - c.x, x.y - c.y)
        if rho == 0.0:
            # every circle point is a foot; report one deterministically
            return r, [Point2(c.x + r, c.y)]
        s = r / rho
        return abs(rho - r), [Point2(c.x + (x.x - c.x) * s, c.y + (x.y - c.y) * s)]

    def distances(self, P: np.ndarray) -> np.ndarray:
        return np.abs(np.hypot(P[:, 0] - self.center.x, P[:, 1] - self.center.y) - self.radius)

    def sample(self, spacing: float) -> np.ndarray:
        n = max(8, int(math.ceil(2 * math.pi * self.radius / spacing)))
        th = np.arange(n) * (2 * math.pi / n)
        return np.column_stack(
            [self.center.x + self.radius * np.cos(th), self.center.y + self.radius * np.sin(th)]
        )


@dataclass(frozen=True)
class Disk(_Round):
    center: Point2
    radius: float
    kind = "disk"

    def __post_init__(self):
        self._check()

    def foot(self, x: Point2) -> tuple[float, list[Point2]]:
        c, r = self.center, self.radius
        rho = math.hypot(x.x - c.x, x.y - c.y)
        if rho <= r:
            return 0.0, [x]
        s = r / rho
        return rho - r, [Point2(c.x + (x.x - c.x) * s, c.y + (x.y - c.y) * s)]

    def distances(self, P: np.ndarray) -> np.ndarray:
        rho = np.hypot(P[:, 0] - self.center.x, P[:, 1] - self.center.y)
        return np.maximum(rho - self.radius, 0.0)

    def sample(self, spacing: float) -> np.ndarray:
        pts = [np.asarray([self.center], dtype=float)]
        nr = max(1, int(math.ceil(self.radius / spacing)))
        for i in range(1, nr + 1):
            rr = self.radius * i / nr
            n = max(8, int(math.ceil(2 * math.pi * rr / spacing)))
            th = np.arange(n) * (2 * math.pi / n)
            pts.append(np.column_stack([self.center.x + rr * np.cos(th), self.center.y + rr * np.sin(th)]))
        return np.concatenate(pts)


@dataclass(frozen=True)
class PolyLine:
    vertices: tuple[Point2, ...]
    closed: bool = False
    kind = "polyline"

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        if len(vs) < 2:
            raise ValueError("polyline needs at least 2 vertices")
        for a, b in zip(vs, vs[1:]):
            if a == b:
                raise ValueError("consecutive polyline vertices must be distinct")
        if self.closed and vs[0] == vs[-1]:
            raise ValueError("closed polyline must not repeat its first vertex")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "closed", bool(self.closed))

    def segments(self) -> list[Segment]:
        vs = self.vertices
        segs = [Segment(a, b) for a, b in zip(vs, vs[1:])]
        if self.closed and len(vs) > 2:
            segs.append(Segment(vs[-1], vs[0]))
        return segs

    def foot(self, x: Point2) -> tuple[float, list[Point2]]:
        results = [s.foot(x) for s in self.segments()]
        best = min(r[0] for r in results)
        near = sorted((r for r in results if r[0] <= best + DEFAULT_TOLERANCES.dedup), key=lambda r: r[0])
        return best, _dedup([r[1][0] for r in near], DEFAULT_TOLERANCES.dedup)

    def distances(self, P: np.ndarray) -> np.ndarray:
        out = np.full(len(P), np.inf)
        for s in self.segments():
            np.minimum(out, s.distances(P), out=out)
        return out

    def hull_points(self, k: int) -> list[Point2]:
        return list(self.vertices)

    def translated(self, v) -> "PolyLine":
        return PolyLine(tuple(Point2(p.x + v[0], p.y + v[1]) for p in self.vertices), self.closed)

    def sample(self, spacing: float) -> np.ndarray:
        return np.concatenate([s.sample(spacing) for s in self.segments()])


Primitive = Union[Dot, Segment, Circle, Disk, PolyLine]


@dataclass(frozen=True)
class FocalSet:
    primitives: tuple
    label: str = ""

    def __post_init__(self):
        prims = tuple(self.primitives)
        if not prims:
            raise ValueError("focal set must contain at least one primitive")
        object.__setattr__(self, "primitives", prims)

    def distances(self, P: np.ndarray) -> np.ndarray:
        """Vectorised distance from each row of ``P`` (shape (N, 2)) to the set."""
        P = np.asarray(P, dtype=float).reshape(-1, 2)
        out = self.primitives[0].distances(P)
        for prim in self.primitives[1:]:
            np.minimum(out, prim.distances(P), out=out)
        return out

    def translated(self, v) -> "FocalSet":
        return FocalSet(tuple(p.translated(v) for p in self.primitives), self.label)

    def sample(self, spacing: float) -> np.ndarray:
        return np.concatenate([p.sample(spacing) for p in self.primitives])


@dataclass(frozen=True)
class FootResult:
    distance: float
    feet: list = field(default_factory=list)


def _dedup(points: Iterable[Point2], tol: float) -> list[Point2]:
    out: list[Point2] = []
    for p in points:
        if all(math.hypot(p.x - q.x, p.y - q.y) > tol for q in out):
            out.append(p)
    return out


def distance_to_primitive(x, prim: Primitive) -> FootResult:
    x = as_point(x)
    d, feet = prim.foot(x)
    return FootResult(d, list(feet))


def distance_to_focal(x, F: FocalSet, tol: Tolerances = DEFAULT_TOLERANCES) -> FootResult:
    x = as_point(x)
    results = [prim.foot(x) for prim in F.primitives]
    best = min(r[0] for r in results)
    # exact minimisers first, so feet[0] realises the distance exactly
    near = sorted((r for r in results if r[0] <= best + tol.dedup), key=lambda r: r[0])
    return FootResult(best, _dedup([f for _, fs in near for f in fs], tol.dedup))


def gap(x, A: FocalSet, B: FocalSet) -> float:
    """d_A(x) - d_B(x); positive on B's side of the midset."""
    x = as_point(x)
    return min(p.foot(x)[0] for p in A.primitives) - min(p.foot(x)[0] for p in B.primitives)


def gap_many(P: np.ndarray, A: FocalSet, B: FocalSet) -> np.ndarray:
    return A.distances(P) - B.distances(P)


# ---------------------------------------------------------------------------
# pairwise primitive distance (scene disjointness)


def _segment_distance(a: Point2, b: Point2, c: Point2, d: Point2) -> float:
    def orient(p, q, r):
        return _cross(q.x - p.x, q.y - p.y, r.x - p.x, r.y - p.y)

    o1, o2, o3, o4 = orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return 0.0

    def pd(x, p, q):
        f = _seg_foot(x, p, q)
        return math.hypot(x.x - f.x, x.y - f.y)

    return min(pd(a, c, d), pd(b, c, d), pd(c, a, b), pd(d, a, b))


def _atoms(prim: Primitive):
    if isinstance(prim, Dot):
        return [("seg", prim.p, prim.p)]
    if isinstance(prim, Segment):
        return [("seg", prim.p, prim.q)]
    if isinstance(prim, PolyLine):
        return [("seg", s.p, s.q) for s in prim.segments()]
    if isinstance(prim, Circle):
        return [("circle", prim.center, prim.radius)]
    return [("disk", prim.center, prim.radius)]


def _atom_distance(u, v) -> float:
    if u[0] != "seg" and v[0] == "seg":
        u, v = v, u
    if u[0] == "seg" and v[0] == "seg":
        return _segment_distance(u[1], u[2], v[1], v[2])
    if u[0] == "seg":
        c, r = v[1], v[2]
        dmin = math.hypot(*(np.subtract(c, _seg_foot(c, u[1], u[2]))))
        dmax = max(math.hypot(c.x - u[1].x, c.y - u[1].y), math.hypot(c.x - u[2].x, c.y - u[2].y))
        if v[0] == "disk":
            return max(0.0, dmin - r)
        if dmin >= r:
            return dmin - r
        if dmax <= r:
            return r - dmax
        return 0.0
    (k1, c1, r1), (k2, c2, r2) = u, v
    D = math.hypot(c1.x - c2.x, c1.y - c2.y)
    if D >= r1 + r2:
        return D - r1 - r2
    if k1 == "disk" and k2 == "disk":
        return 0.0
    if k1 == "circle" and k2 == "circle":
        return abs(r1 - r2) - D if D <= abs(r1 - r2) else 0.0
    # one circle, one disk
    rc, rd = (r1, r2) if k1 == "circle" else (r2, r1)
    return rc - D - rd if D + rd <= rc else 0.0


def primitive_distance(p1: Primitive, p2: Primitive) -> float:
    """Exact distance between two primitives viewed as closed point sets."""
    return min(_atom_distance(u, v) for u in _atoms(p1) for v in _atoms(p2))


def focal_distance(A: FocalSet, B: FocalSet) -> float:
    return min(primitive_distance(a, b) for a in A.primitives for b in B.primitives)


# ---------------------------------------------------------------------------
# convex hulls


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise hull vertices; 1 or 2 vertices for point / flat hulls."""

    vertices: tuple

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float).reshape(-1, 2)

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> list[tuple[Point2, Point2]]:
        v = self.vertices
        if len(v) == 1:
            return [(v[0], v[0])]
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def contains(self, x, tol: float = 0.0) -> bool:
        """Closed containment, inflated by ``tol``."""
        x = as_point(x)
        v = self.vertices
        if len(v) <= 2:
            a, b = self.edges()[0]
            f = _seg_foot(x, a, b)
            return math.hypot(x.x - f.x, x.y - f.y) <= tol
        for a, b in self.edges():
            ex, ey = b.x - a.x, b.y - a.y
            if _cross(ex, ey, x.x - a.x, x.y - a.y) < -tol * math.hypot(ex, ey):
                return False
        return True


def convex_hull(points: Sequence) -> ConvexPolygon:
    """Andrew's monotone chain; collinear points are dropped."""
    pts = sorted(set(as_point(p) for p in points))
    if not pts:
        raise EmptyInput("convex_hull needs at least one point")
    if len(pts) <= 2:
        return ConvexPolygon(tuple(pts))

    def half(seq):
        chain: list[Point2] = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if _cross(a.x - o.x, a.y - o.y, p.x - o.x, p.y - o.y) <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all collinear: keep the two extremes
        return ConvexPolygon((pts[0], pts[-1]))
    return ConvexPolygon(tuple(hull))


def hull_of_focal(F: FocalSet, k: int = DEFAULT_HULL_SIDES) -> ConvexPolygon:
    """Hull of primitive vertices, with circles/disks replaced by circumscribed k-gons.

    The polygon contains the true hull; curved parts bulge outward by at most
    ``radius * (sec(pi/k) - 1)``.
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    pts = [p for prim in F.primitives for p in prim.hull_points(k)]
    return convex_hull(pts)


def _axes(P: ConvexPolygon) -> list[np.ndarray]:
    V = P.array
    if len(V) == 1:
        return []
    E = np.roll(V, -1, axis=0) - V if len(V) > 2 else V[1:] - V[:1]
    E = E[np.hypot(E[:, 0], E[:, 1]) > 0]
    axes = [np.column_stack([-E[:, 1], E[:, 0]])]
    if len(V) == 2:
        axes.append(E)  # caps of a flat hull
    return axes


def _vertex_edge_distance(V: np.ndarray, P: ConvexPolygon) -> float:
    best = math.inf
    for a, b in P.edges():
        d = np.subtract(b, a)
        L2 = float(d @ d)
        rel = V - np.asarray(a)
        t = np.clip(rel @ d / L2, 0.0, 1.0) if L2 > 0 else np.zeros(len(V))
        best = min(best, float(np.min(np.hypot(rel[:, 0] - t * d[0], rel[:, 1] - t * d[1]))))
    return best


def polygons_intersect(P: ConvexPolygon, Q: ConvexPolygon, tol: float = 0.0) -> bool:
    """True when the closed polygons overlap, touch, or come within ``tol``.

    Separating-axis test over edge normals (and the directions of flat hulls);
    an exact vertex-to-edge distance settles separations smaller than ``tol``.
    """
    VP, VQ = P.array, Q.array
    axes = _axes(P) + _axes(Q)
    if len(VP) == 1 and len(VQ) == 1:
        axes.append((VQ - VP).reshape(1, 2))
    sep = -math.inf
    for ax in axes:
        norm = np.hypot(ax[:, 0], ax[:, 1])
        if not np.any(norm > 0):
            continue
        n = ax[norm > 0] / norm[norm > 0, None]
        pp, qq = VP @ n.T, VQ @ n.T
        gap = np.maximum(qq.min(axis=0) - pp.max(axis=0), pp.min(axis=0) - qq.max(axis=0))
        sep = max(sep, float(gap.max()))
    slack = 1e-12 * (1.0 + max(np.abs(VP).max(), np.abs(VQ).max()))
    if sep > tol + slack:
        return False
    if sep <= 0:
        return True
    return min(_vertex_edge_distance(VP, Q), _vertex_edge_distance(VQ, P)) <= tol


# ---------------------------------------------------------------------------
# supporting lines


@dataclass(frozen=True)
class SupportLine:
    anchor: Point2
    direction: Point2
    inward_normal: Point2
    right_extreme: Point2
    left_extreme: Point2

    def signed_distance(self, p) -> float:
        """Positive on the inward side."""
        return (p[0] - self.anchor.x) * self.inward_normal.x + (p[1] - self.anchor.y) * self.inward_normal.y


def exterior_common_tangents(
    HA: ConvexPolygon, HB: ConvexPolygon, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[SupportLine, SupportLine]:
    """The two common supporting lines leaving both hulls on the same side.

    Each line is oriented from A towards B: ``right_extreme`` is the contact of
    A furthest along ``direction`` and ``left_extreme`` the contact of B
    furthest against it.  The tangent with both sets on its right comes first.
    """
    if polygons_intersect(HA, HB, tol.incidence):
        raise HullsIntersect("convex hulls of the focal sets intersect")
    VA, VB = HA.array, HB.array
    union = convex_hull(list(HA.vertices) + list(HB.vertices))
    U = union.array
    if len(U) == 2:
        cand = [(U[0], U[1] - U[0], True), (U[0], U[1] - U[0], False)]
    else:
        cand = [(U[i], U[(i + 1) % len(U)] - U[i], True) for i in range(len(U))]

    lines = []
    for anchor, e, left in cand:
        e = e / math.hypot(*e)
        n = np.array([-e[1], e[0]]) if left else np.array([e[1], -e[0]])
        sa = (VA - anchor) @ n
        sb = (VB - anchor) @ n
        ca, cb = np.abs(sa) <= tol.incidence, np.abs(sb) <= tol.incidence
        if not (ca.any() and cb.any()):
            continue
        pa, pb = VA[ca], VB[cb]
        w = e if (pb @ e).mean() > (pa @ e).mean() else -e
        right = pa[np.argmax(pa @ w)]
        leftx = pb[np.argmin(pb @ w)]
        lines.append(
            SupportLine(
                anchor=Point2(*right),
                direction=Point2(*w),
                inward_normal=Point2(*n),
                right_extreme=Point2(*right),
                left_extreme=Point2(*leftx),
            )
        )
    if len(lines) > 2:
        # nearly flat union: several edges touch both hulls within tolerance;
        # keep the pair with the most opposed normals
        N = np.array([l.inward_normal for l in lines])
        i, j = np.unravel_index(np.argmin(N @ N.T), (len(lines), len(lines)))
        lines = [lines[min(i, j)], lines[max(i, j)]]
    if len(lines) != 2:
        raise HullsIntersect(f"expected two exterior common tangents, found {len(lines)}")
    lines.sort(key=lambda l: _cross(l.direction.x, l.direction.y, l.inward_normal.x, l.inward_normal.y))
    return lines[0], lines[1]


def _tangent_candidates(x: np.ndarray, V: np.ndarray):
    """Tangent directions from external point ``x`` to the hull with vertices ``V``.

    Yields (unit direction towards the contact vertex, side) where the hull lies
    on the left of the direction when side=+1 and on the right when side=-1.
    """
    rel = V - x
    ref = rel[0] / np.hypot(*rel[0])
    ang = np.arctan2(ref[0] * rel[:, 1] - ref[1] * rel[:, 0], rel @ ref)
    lo, hi = int(np.argmin(ang)), int(np.argmax(ang))
    u_lo = rel[lo] / np.hypot(*rel[lo])
    u_hi = rel[hi] / np.hypot(*rel[hi])
    return [(u_lo, 1.0), (u_hi, -1.0)]


def separation_angle(
    x, HA: ConvexPolygon, HB: ConvexPolygon, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """Largest angle alpha at which ``x`` sees A separated from B.

    Measured between the rays from ``x`` towards the contact points of the
    tangent lines l_A (to A, with B on the other side) and l_B (to B, with A on
    the other side).  Collinear opposite contacts give pi.
    """
    x = as_point(x)
    if HA.contains(x, tol.incidence) or HB.contains(x, tol.incidence):
        raise InsideHull(f"point ({x.x}, {x.y}) is not strictly outside both hulls")
    xa = np.array(x, dtype=float)
    VA, VB = HA.array, HB.array
    relA, relB = VA - xa, VB - xa
    best = -1.0
    for uA, sA in _tangent_candidates(xa, VA):
        # B must lie on the closed side of l_A opposite to A
        if np.any(sA * (uA[0] * relB[:, 1] - uA[1] * relB[:, 0]) > tol.incidence):
            continue
        for uB, sB in _tangent_candidates(xa, VB):
            if np.any(sB * (uB[0] * relA[:, 1] - uB[1] * relA[:, 0]) > tol.incidence):
                continue
            alpha = math.atan2(abs(uA[0] * uB[1] - uA[1] * uB[0]), float(uA @ uB))
            best = max(best, alpha)
    if best <= 1e-12:
        raise NoSeparation(f"no separating tangent pair through ({x.x}, {x.y})")
    return best
