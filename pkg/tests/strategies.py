"""Shared hypothesis strategies and scene helpers for the test suite."""

import math

import numpy as np
from hypothesis import strategies as st

from midset.config import Tolerances
from midset.errors import ValidationError
from midset.extraction import Scene
from midset.geometry import Circle, Dot, FocalSet, Segment, hull_of_focal, polygons_intersect


def coarse(scene: Scene, depth: int) -> Scene:
    """Same scene with tol_x matched to the leaf size at ``depth`` (no depth warning)."""
    tol_x = 2 * scene.R / 2**depth
    return Scene(scene.A, scene.B, scene.R, Tolerances.for_radius(scene.R, tol_x=tol_x), scene.bounded)


def _prim(rng: np.random.Generator, cx: float):
    kind = rng.choice(["dot", "segment", "circle"])
    c = np.array([cx + rng.uniform(-0.8, 0.8), rng.uniform(-1.5, 1.5)])
    if kind == "dot":
        return Dot(tuple(c))
    if kind == "circle":
        return Circle(tuple(c), float(rng.uniform(0.1, 0.6)))
    th = rng.uniform(0, math.pi)
    L = rng.uniform(0.2, 1.2)
    d = 0.5 * L * np.array([math.cos(th), math.sin(th)])
    return Segment(tuple(c - d), tuple(c + d))


def random_scene(seed: int, R: float = 6.0, tol: Tolerances | None = None, max_prims: int = 2) -> Scene:
    """Dot/segment/circle focal sets left and right of the y-axis with disjoint hulls."""
    rng = np.random.default_rng(seed)
    while True:
        A = FocalSet(tuple(_prim(rng, -1.5) for _ in range(rng.integers(1, max_prims + 1))), "A")
        B = FocalSet(tuple(_prim(rng, 1.5) for _ in range(rng.integers(1, max_prims + 1))), "B")
        if polygons_intersect(hull_of_focal(A), hull_of_focal(B), 0.05):
            continue
        try:
            return Scene(A, B, R, tol)
        except ValidationError:
            continue


seeds = st.integers(0, 2**32 - 1)
