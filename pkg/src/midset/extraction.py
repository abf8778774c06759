"""Lipschitz-pruned quadtree and marching-squares extraction of zero sets.

The gap function d_A - d_B is 2-Lipschitz, so a cell whose centre value
exceeds twice its circumradius cannot contain a zero.  Surviving cells are
refined to a uniform leaf size; leaves are contoured with marching squares and
every crossing edge is refined by bisection.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import DEFAULT_HULL_SIDES, Tolerances, default_max_depth
from .errors import DepthExhausted, SameSign, ValidationError
from .geometry import FocalSet, Point2, as_point, focal_distance, gap_many, hull_of_focal

SQRT2 = math.sqrt(2.0)
_CHUNK = 1 << 15


@dataclass(frozen=True)
class Scene:
    """Focal sets A, B restricted to the closed disk of radius R about the origin.

    ``bounded=False`` lifts the containment check for scenes with a long
    directrix segment standing in for a line; results are then meaningful only
    inside the R-disk.
    """

    A: FocalSet
    B: FocalSet
    R: float
    tol: Tolerances = None
    bounded: bool = True

    def __post_init__(self):
        R = float(self.R)
        if not (math.isfinite(R) and R > 0):
            raise ValidationError("positivity", f"bounding radius must be positive, got {self.R!r}")
        object.__setattr__(self, "R", R)
        if self.tol is None:
            object.__setattr__(self, "tol", Tolerances.for_radius(R))
        if focal_distance(self.A, self.B) <= 0.0:
            raise ValidationError("disjointness", "focal sets not disjoint")
        if self.bounded:
            for F, name in ((self.A, "A"), (self.B, "B")):
                H = hull_of_focal(F, DEFAULT_HULL_SIDES).array
                if np.max(np.hypot(H[:, 0], H[:, 1])) >= R:
                    raise ValidationError("containment", f"focal set outside bounding disk ({name})")

    @property
    def tol_x(self) -> float:
        return self.tol.tol_x

    @property
    def tol_gap(self) -> float:
        return self.tol.tol_gap

    def gap(self, P) -> np.ndarray:
        return gap_many(np.asarray(P, dtype=float).reshape(-1, 2), self.A, self.B)

    def swapped(self) -> "Scene":
        return Scene(self.B, self.A, self.R, self.tol, self.bounded)


@dataclass(frozen=True)
class Cell:
    center: Point2
    half_width: float
    gap_at_center: float
    status: str  # "pruned" | "straddle" | "leaf-positive" | "leaf-negative"


@dataclass
class PolyChain:
    vertices: np.ndarray  # (n, 2)
    closed: bool
    residuals: np.ndarray  # |f| at each vertex

    def __len__(self):
        return len(self.vertices)

    def points(self) -> list[Point2]:
        return [Point2(float(x), float(y)) for x, y in self.vertices]


@dataclass
class _Tree:
    pruned: list = field(default_factory=list)  # (centers, hw, values) per level
    leaf_ij: np.ndarray = None
    leaf_centers: np.ndarray = None
    leaf_values: np.ndarray = None
    leaf_hw: float = 0.0
    side: float = 0.0
    n: int = 0


def _evaluate(fn: Callable, P: np.ndarray, workers: int) -> np.ndarray:
    if len(P) <= _CHUNK or workers <= 1:
        return np.concatenate([fn(P[i : i + _CHUNK]) for i in range(0, max(len(P), 1), _CHUNK)])
    chunks = [P[i : i + _CHUNK] for i in range(0, len(P), _CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return np.concatenate(list(ex.map(fn, chunks)))


def prunable(value: float, half_width: float, lipschitz: float = 2.0) -> bool:
    """True when an L-Lipschitz function with this centre value has no zero in the square cell."""
    return abs(value) > lipschitz * SQRT2 * half_width


_OFFS = np.array([[-1, -1], [1, -1], [-1, 1], [1, 1]], dtype=float)


def _quadtree(fn, lipschitz: float, R: float, max_depth: int, workers: int = 1) -> _Tree:
    tree = _Tree()
    centers = np.zeros((1, 2))
    hw = R
    for depth in range(max_depth + 1):
        vals = _evaluate(fn, centers, workers)
        prune = np.abs(vals) > lipschitz * SQRT2 * hw
        tree.pruned.append((centers[prune], hw, vals[prune]))
        keep, kvals = centers[~prune], vals[~prune]
        if depth == max_depth or len(keep) == 0:
            break
        hw = hw / 2
        centers = (keep[:, None, :] + _OFFS[None, :, :] * hw).reshape(-1, 2)
    tree.n = 1 << max_depth
    tree.side = 2 * R / tree.n
    if depth < max_depth:
        keep, kvals = np.zeros((0, 2)), np.zeros(0)
    tree.leaf_hw = tree.side / 2
    tree.leaf_centers = keep
    tree.leaf_values = kvals
    tree.leaf_ij = np.rint((keep + R) / tree.side - 0.5).astype(np.int64)
    return tree


def _check_depth(R: float, max_depth: int, tol_x: float) -> None:
    if 2 * R / (1 << max_depth) > tol_x:
        warnings.warn(
            DepthExhausted(f"leaf side {2 * R / (1 << max_depth):.3g} exceeds tol_x={tol_x:.3g}"),
            stacklevel=3,
        )


def build_cells(scene: Scene, max_depth: int | None = None, workers: int = 1) -> list[Cell]:
    """Quadtree over [-R, R]^2 with Lipschitz pruning of the gap function."""
    if max_depth is None:
        max_depth = default_max_depth(scene.R, scene.tol_x)
    tree = _quadtree(scene.gap, 2.0, scene.R, max_depth, workers)
    cells: list[Cell] = []
    for centers, hw, vals in tree.pruned:
        cells.extend(Cell(Point2(*c), hw, float(v), "pruned") for c, v in zip(centers.tolist(), vals.tolist()))
    if len(tree.leaf_ij):
        corner_vals = _corner_values(scene.gap, tree, scene.R, workers)[1]
        pos = corner_vals >= 0
        for c, v, p in zip(tree.leaf_centers.tolist(), tree.leaf_values.tolist(), pos):
            status = "leaf-positive" if p.all() else "leaf-negative" if not p.any() else "straddle"
            cells.append(Cell(Point2(*c), tree.leaf_hw, float(v), status))
    _check_depth(scene.R, max_depth, scene.tol_x)
    return cells


def _corner_values(fn, tree: _Tree, R: float, workers: int):
    """Values at leaf corners, ordered bl, br, tr, tl per leaf."""
    i, j = tree.leaf_ij[:, 0], tree.leaf_ij[:, 1]
    stride = tree.n + 1
    ci = np.stack([i, i + 1, i + 1, i], axis=1)
    cj = np.stack([j, j, j + 1, j + 1], axis=1)
    keys = (cj * stride + ci).ravel()
    uniq, inv = np.unique(keys, return_inverse=True)
    pts = np.column_stack([-R + (uniq % stride) * tree.side, -R + (uniq // stride) * tree.side])
    vals = _evaluate(fn, pts, workers)
    return (ci, cj), vals[inv].reshape(-1, 4)


def _bisect_many(fn, P: np.ndarray, Q: np.ndarray, width: float, workers: int = 1) -> np.ndarray:
    """Vectorised bisection on segments P[k]-Q[k] whose endpoint values differ in sign."""
    P, Q = P.copy(), Q.copy()
    fp = _evaluate(fn, P, workers)
    length = np.max(np.hypot(*(Q - P).T)) if len(P) else 0.0
    iters = max(0, math.ceil(math.log2(length / width))) if length > width else 0
    neg_p = fp < 0
    for _ in range(iters):
        M = 0.5 * (P + Q)
        fm = _evaluate(fn, M, workers)
        same = (fm < 0) == neg_p
        P[same] = M[same]
        Q[~same] = M[~same]
    return 0.5 * (P + Q)


def edge_root(p, q, scene: Scene) -> Point2:
    """Zero of the gap on segment p-q by bisection to bracket width <= tol_x."""
    p, q = as_point(p), as_point(q)
    gp, gq = scene.gap([p, q])
    if gp * gq > 0:
        raise SameSign(f"gap has the same sign at {p} and {q}")
    if gp == 0:
        return p
    if gq == 0:
        return q
    r = _bisect_many(scene.gap, np.array([p]), np.array([q]), scene.tol.bisect_width)[0]
    return Point2(float(r[0]), float(r[1]))


# marching squares: corners 0=bl 1=br 2=tr 3=tl; edges 0=bottom 1=right 2=top 3=left
_EDGE_CORNERS = ((0, 1), (1, 2), (2, 3), (3, 0))
_CORNER_EDGES = ((3, 0), (0, 1), (1, 2), (2, 3))


def _cell_segments(pos: np.ndarray, center_pos: bool) -> list[tuple[int, int]]:
    crossing = [e for e, (a, b) in enumerate(_EDGE_CORNERS) if pos[a] != pos[b]]
    if len(crossing) == 2:
        return [tuple(crossing)]
    if len(crossing) == 4:
        # saddle: isolate the corners whose sign differs from the centre
        return [_CORNER_EDGES[c] for c in range(4) if pos[c] != center_pos]
    return []


def _edge_key(i, j, e, stride):
    # horizontal edge (i,j)-(i+1,j) -> even key, vertical (i,j)-(i,j+1) -> odd key
    if e == 0:
        return 2 * (j * stride + i)
    if e == 2:
        return 2 * ((j + 1) * stride + i)
    if e == 3:
        return 2 * (j * stride + i) + 1
    return 2 * (j * stride + i + 1) + 1


def _trace(fn, tree: _Tree, R: float, tol: Tolerances, workers: int) -> list[tuple[np.ndarray, bool]]:
    if len(tree.leaf_ij) == 0:
        return []
    (ci, cj), cv = _corner_values(fn, tree, R, workers)
    pos = cv >= 0  # exact zeros count as positive
    mixed = np.flatnonzero(pos.any(axis=1) & ~pos.all(axis=1))
    stride = tree.n + 1
    links: dict[int, list[int]] = {}
    for idx in mixed.tolist():
        i, j = int(tree.leaf_ij[idx, 0]), int(tree.leaf_ij[idx, 1])
        for e1, e2 in _cell_segments(pos[idx], bool(tree.leaf_values[idx] >= 0)):
            k1, k2 = _edge_key(i, j, e1, stride), _edge_key(i, j, e2, stride)
            links.setdefault(k1, []).append(k2)
            links.setdefault(k2, []).append(k1)
    if not links:
        return []

    keys = np.array(sorted(links), dtype=np.int64)
    base = keys // 2
    bi, bj = base % stride, base // stride
    vert = (keys % 2).astype(bool)
    P = np.column_stack([-R + bi * tree.side, -R + bj * tree.side])
    Q = P + np.column_stack([np.where(vert, 0.0, tree.side), np.where(vert, tree.side, 0.0)])
    roots = _bisect_many(fn, P, Q, tol.bisect_width, workers)
    root_of = {int(k): r for k, r in zip(keys.tolist(), roots)}

    chains = []
    seen: set[int] = set()

    def walk(start):
        path, cur = [start], start
        seen.add(start)
        while True:
            nxt = [n for n in links[cur] if n not in seen]
            if not nxt:
                return path, len(path) > 2 and start in links[cur]
            cur = nxt[0]
            path.append(cur)
            seen.add(cur)

    for k in sorted(links, key=lambda k: len(links[k]) != 1):
        if k in seen:
            continue
        path, closed = walk(k)
        chains.append((np.array([root_of[p] for p in path]), closed))
    return chains


def _clip_disk(pts: np.ndarray, closed: bool, R: float) -> list[tuple[np.ndarray, bool]]:
    inside = np.hypot(pts[:, 0], pts[:, 1]) <= R
    if inside.all():
        return [(pts, closed)]
    if not inside.any():
        return []
    if closed:
        start = int(np.flatnonzero(~inside)[0])
        pts = np.concatenate([pts[start:], pts[: start + 1]])
        inside = np.concatenate([inside[start:], inside[: start + 1]])

    def crossing(a, b):
        d = b - a
        A_, B_, C_ = d @ d, 2 * (a @ d), a @ a - R * R
        disc = max(B_ * B_ - 4 * A_ * C_, 0.0)
        ts = [(-B_ - math.sqrt(disc)) / (2 * A_), (-B_ + math.sqrt(disc)) / (2 * A_)]
        t = min((t for t in ts if -1e-12 <= t <= 1 + 1e-12), key=lambda t: abs(t - 0.5), default=0.5)
        return a + min(max(t, 0.0), 1.0) * d

    out, cur = [], []
    for k in range(len(pts)):
        if inside[k]:
            if not cur and k > 0:
                cur.append(crossing(pts[k - 1], pts[k]))
            cur.append(pts[k])
        elif cur:
            cur.append(crossing(pts[k - 1], pts[k]))
            out.append((np.array(cur), False))
            cur = []
    if cur:
        out.append((np.array(cur), False))
    return out


def _orient(pts: np.ndarray, closed: bool) -> np.ndarray:
    if closed:
        x, y = pts[:, 0], pts[:, 1]
        area = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area < 0:
            pts = pts[::-1]
        start = min(range(len(pts)), key=lambda k: (pts[k, 0], pts[k, 1]))
        return np.concatenate([pts[start:], pts[:start]])
    a0 = math.atan2(pts[0, 1], pts[0, 0]) % (2 * math.pi)
    a1 = math.atan2(pts[-1, 1], pts[-1, 0]) % (2 * math.pi)
    return pts[::-1].copy() if a1 < a0 else pts


def _zero_set(fn, lipschitz: float, R: float, tol: Tolerances, max_depth: int | None, workers: int) -> list[PolyChain]:
    if max_depth is None:
        max_depth = default_max_depth(R, tol.tol_x)
    tree = _quadtree(fn, lipschitz, R, max_depth, workers)
    raw = _trace(fn, tree, R, tol, workers)
    chains = []
    for pts, closed in raw:
        for sub, c in _clip_disk(pts, closed, R):
            if len(sub) >= 2:
                sub = _orient(sub, c)
                chains.append(PolyChain(sub, c, np.abs(_evaluate(fn, sub, 1))))
    chains.sort(key=lambda ch: (ch.vertices[0, 1], ch.vertices[0, 0]))
    _check_depth(R, max_depth, tol.tol_x)
    return chains


def extract_chains(scene: Scene, max_depth: int | None = None, workers: int = 1) -> list[PolyChain]:
    """Polyline approximation of the midset restricted to the R-disk."""
    return _zero_set(scene.gap, 2.0, scene.R, scene.tol, max_depth, workers)


def epsilon_boundary(
    F: FocalSet,
    eps: float,
    R: float,
    tol: Tolerances | None = None,
    max_depth: int | None = None,
    workers: int = 1,
) -> list[PolyChain]:
    """Level set {x : d_F(x) = eps} inside the R-disk (1-Lipschitz pruning)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    tol = tol or Tolerances.for_radius(R)

    def fn(P):
        return F.distances(P) - eps

    return _zero_set(fn, 1.0, R, tol, max_depth, workers)


def bisect_scalar(f: Callable[[float], float], lo: float, hi: float, width: float) -> float:
    """Root of ``f`` in [lo, hi] given f(lo) < 0 < f(hi) (either orientation of lo/hi)."""
    flo = f(lo)
    if flo == 0:
        return lo
    if f(hi) == 0:
        return hi
    while abs(hi - lo) > width:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def crossing_at_height(
    A: FocalSet, B: FocalSet, h: float, x_lo: float, x_hi: float, tol_x: float = 1e-12
) -> float:
    """Root x(h) of the gap along the horizontal line y = h.

    Requires gap(x_lo, h) < 0 < gap(x_hi, h).  Under the monotone regime
    (both sets below a common supporting line, far enough up) the root is
    unique; otherwise some root in the bracket is returned.
    """

    def f(x):
        return float(gap_many(np.array([[x, h]]), A, B)[0])

    if not (f(x_lo) < 0 < f(x_hi)):
        raise SameSign(f"gap must be negative at x_lo and positive at x_hi on y={h}")
    return bisect_scalar(f, x_lo, x_hi, tol_x)
