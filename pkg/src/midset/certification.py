"""Shadowing certificates: from a quasi-equidistant point to a nearby true midset point.

A point x0 with |d_A(x0) - d_B(x0)| = eps that sees A separated from B by an
angle alpha has a true midset point within

    (eps/2) * (eps + 2d) / (eps + d - d cos(alpha)),   d = min(d_A(x0), d_B(x0)),

provided the walk towards the far set's foot point stays in the range where
the nearest point of A is the one at distance d on the tangent ray
(t cos(alpha) <= d).  Outside that range the lower bound on d_A along the walk
becomes t sin(alpha) and the radius is (d + eps) / (1 + sin(alpha)).
:func:`certified_radius` picks the right branch; :func:`shadowing_radius` is the
bare closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_HULL_SIDES
from .errors import DomainError, InsideHull, NoSeparation
from .extraction import Scene, prunable
from .geometry import ConvexPolygon, Point2, as_point, distance_to_focal, hull_of_focal, separation_angle

HIT, MISS, UNRESOLVED = "certified-hit", "certified-miss", "unresolved"
PGM_LEVEL = {MISS: 0, UNRESOLVED: 128, HIT: 255}


def _check_domain(eps, d, alpha):
    if not eps >= 0:
        raise DomainError(f"eps must be >= 0, got {eps!r}")
    if not d > 0:
        raise DomainError(f"d must be > 0, got {d!r}")
    if not (0 < alpha <= math.pi):
        raise DomainError(f"alpha must lie in (0, pi], got {alpha!r}")


def shadowing_radius(eps: float, d: float, alpha: float) -> float:
    _check_domain(eps, d, alpha)
    return 0.5 * eps * (eps + 2 * d) / (eps + d - d * math.cos(alpha))


def in_closed_form_regime(eps: float, d: float, alpha: float) -> bool:
    """True when the closed-form radius is a valid bound (radius * cos(alpha) <= d)."""
    return shadowing_radius(eps, d, alpha) * math.cos(alpha) <= d


def certified_radius(eps: float, d: float, alpha: float) -> float:
    """Valid distance bound to a true midset point for every (eps, d, alpha)."""
    r = shadowing_radius(eps, d, alpha)
    if r * math.cos(alpha) <= d:
        return r
    return (d + eps) / (1 + math.sin(alpha))


@dataclass(frozen=True)
class CertBound:
    eps: float
    d: float
    alpha: float
    radius: float
    closed_form: bool = True  # False when the large-walk branch of certified_radius applied


def certify_point(x, scene: Scene, k: int = DEFAULT_HULL_SIDES, hulls=None) -> CertBound:
    """Certify that a true midset point lies within ``radius`` of ``x``.

    ``hulls`` may carry precomputed (HA, HB) polygons.  Raises InsideHull or
    NoSeparation when the separation hypothesis cannot be established.
    """
    x = as_point(x)
    HA, HB = hulls if hulls is not None else (hull_of_focal(scene.A, k), hull_of_focal(scene.B, k))
    alpha = separation_angle(x, HA, HB, scene.tol)
    da = distance_to_focal(x, scene.A, scene.tol).distance
    db = distance_to_focal(x, scene.B, scene.tol).distance
    eps, d = abs(da - db), min(da, db)
    if d <= 0:
        raise InsideHull(f"point ({x.x}, {x.y}) lies on a focal set")
    return CertBound(eps, d, alpha, certified_radius(eps, d, alpha), in_closed_form_regime(eps, d, alpha))


@dataclass(frozen=True)
class RasterCell:
    center: Point2
    half_width: float
    classification: str
    cert: CertBound | None = None


@dataclass
class Raster:
    grid_n: int
    R: float
    cells: list  # row-major, row 0 at the top (largest y)

    def levels(self) -> np.ndarray:
        return np.array([PGM_LEVEL[c.classification] for c in self.cells], dtype=int).reshape(self.grid_n, self.grid_n)

    def classifications(self) -> np.ndarray:
        return np.array([c.classification for c in self.cells]).reshape(self.grid_n, self.grid_n)


def _classify(c, hw, scene, hulls, k, depth, refine_depth):
    g = float(scene.gap([c])[0])
    if prunable(g, hw):
        return MISS, None
    try:
        cert = certify_point(c, scene, k, hulls)
    except (InsideHull, NoSeparation):
        cert = None
    if cert is not None and cert.radius <= hw:
        return HIT, cert
    if depth < refine_depth:
        # a certified child pins a midset point inside this cell as well
        h2 = hw / 2
        for dx, dy in ((-1, -1), (1, -1), (-1, 1), (1, 1)):
            sub = (c[0] + dx * h2, c[1] + dy * h2)
            if _classify(sub, h2, scene, hulls, k, depth + 1, refine_depth)[0] == HIT:
                return HIT, cert
    return UNRESOLVED, cert


def certified_raster(scene: Scene, grid_n: int, k: int = DEFAULT_HULL_SIDES, refine_depth: int = 3) -> Raster:
    """Classify a grid_n x grid_n tiling of [-R, R]^2.

    certified-miss: the Lipschitz bound excludes any zero from the cell.
    certified-hit: a certificate (possibly from a sub-cell, up to
    ``refine_depth`` splits) places a true midset point inside the closed cell.
    """
    if int(grid_n) != grid_n or grid_n < 2:
        raise ValueError(f"grid_n must be an integer >= 2, got {grid_n!r}")
    hulls = (hull_of_focal(scene.A, k), hull_of_focal(scene.B, k))
    R, n = scene.R, int(grid_n)
    hw = R / n
    cells = []
    for row in range(n):
        y = R - (2 * row + 1) * hw
        for col in range(n):
            x = -R + (2 * col + 1) * hw
            cls, cert = _classify((x, y), hw, scene, hulls, k, 0, refine_depth)
            cells.append(RasterCell(Point2(x, y), hw, cls, cert))
    return Raster(n, R, cells)
