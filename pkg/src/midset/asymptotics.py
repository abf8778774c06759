"""Asymptotic rays of midsets of ch-disjoint focal sets, and parabola growth."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_HULL_SIDES, DEFAULT_TOLERANCES, Tolerances
from .errors import NotAGraph, SameSign
from .extraction import PolyChain, bisect_scalar
from .geometry import (
    FocalSet,
    Point2,
    Segment,
    as_point,
    convex_hull,
    exterior_common_tangents,
    hull_of_focal,
)


@dataclass(frozen=True)
class Ray:
    origin: Point2
    direction: Point2

    def __post_init__(self):
        o, d = as_point(self.origin), as_point(self.direction)
        n = math.hypot(d.x, d.y)
        if n == 0:
            raise ValueError("ray direction must be nonzero")
        object.__setattr__(self, "origin", o)
        object.__setattr__(self, "direction", Point2(d.x / n, d.y / n))

    @property
    def normal(self) -> Point2:
        """v_perp completing {direction, v_perp} to a positive basis."""
        return Point2(-self.direction.y, self.direction.x)

    def tube_coords(self, P) -> tuple[np.ndarray, np.ndarray]:
        P = np.asarray(P, dtype=float).reshape(-1, 2) - np.asarray(self.origin)
        return P @ np.asarray(self.direction), P @ np.asarray(self.normal)

    @property
    def slope(self) -> float:
        return self.direction.y / self.direction.x if self.direction.x != 0 else math.inf


@dataclass(frozen=True)
class EndProfile:
    t: np.ndarray
    s: np.ndarray

    def max_abs_s(self, t_lo: float, t_hi: float) -> float:
        m = (self.t >= t_lo) & (self.t <= t_hi)
        return float(np.max(np.abs(self.s[m]))) if m.any() else math.nan


def asymptotic_rays(
    A: FocalSet, B: FocalSet, k: int = DEFAULT_HULL_SIDES, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[Ray, Ray]:
    """One ray per exterior common tangent.

    The ray starts at the midpoint of A's right extreme point and B's left
    extreme point on the tangent and points away from the sets, normal to the
    tangent.  Raises HullsIntersect when the hulls are not disjoint.
    """
    rays = []
    for line in exterior_common_tangents(hull_of_focal(A, k), hull_of_focal(B, k), tol):
        a, b = line.right_extreme, line.left_extreme
        origin = Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))
        rays.append(Ray(origin, Point2(-line.inward_normal.x, -line.inward_normal.y)))
    return rays[0], rays[1]


def tube_half_width(A: FocalSet, B: FocalSet, k: int = DEFAULT_HULL_SIDES) -> float:
    """Default tube half-width: half the diameter of hull(A) U hull(B)."""
    return 0.5 * hull_diameter(A, B, k)


def hull_diameter(A: FocalSet, B: FocalSet, k: int = DEFAULT_HULL_SIDES) -> float:
    V = convex_hull(list(hull_of_focal(A, k).vertices) + list(hull_of_focal(B, k).vertices)).array
    best = 0.0
    for i in range(0, len(V), 512):
        D = V[i : i + 512, None, :] - V[None, :, :]
        best = max(best, float(np.max(np.hypot(D[..., 0], D[..., 1]))))
    return best


def _monotone_runs(t: np.ndarray) -> list[slice]:
    """Split index range into maximal pieces along which t is monotone."""
    runs, start, sign = [], 0, 0
    for i in range(1, len(t)):
        s = np.sign(t[i] - t[i - 1])
        if s == 0:
            continue
        if sign == 0:
            sign = s
        elif s != sign:
            runs.append(slice(start, i))
            start, sign = i - 1, s
    runs.append(slice(start, len(t)))
    return runs


def end_deviation_profile(
    chain: PolyChain,
    ray: Ray,
    t_min: float,
    half_width: float = math.inf,
    tol_x: float = DEFAULT_TOLERANCES.tol_x,
) -> EndProfile:
    """Tube coordinates (t, s) of chain vertices with t >= t_min and |s| <= half_width.

    Raises NotAGraph when two parts of the chain project onto the same stretch
    of the ray with |delta s| > 4 tol_x.
    """
    if len(chain) == 0:
        raise ValueError("chain is empty")
    t, s = ray.tube_coords(chain.vertices)
    keep = (t >= t_min) & (np.abs(s) <= half_width)
    pieces = []
    idx = np.flatnonzero(keep)
    if len(idx) == 0:
        return EndProfile(np.zeros(0), np.zeros(0))
    breaks = np.flatnonzero(np.diff(idx) != 1) + 1
    for group in np.split(idx, breaks):
        tg, sg = t[group], s[group]
        for sl in _monotone_runs(tg):
            tp, sp = tg[sl], sg[sl]
            if len(tp) and tp[0] > tp[-1]:
                tp, sp = tp[::-1], sp[::-1]
            pieces.append((tp, sp))
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            (t1, s1), (t2, s2) = pieces[i], pieces[j]
            lo, hi = max(t1[0], t2[0]), min(t1[-1], t2[-1])
            if hi < lo:
                continue
            probe = np.concatenate([t1[(t1 >= lo) & (t1 <= hi)], t2[(t2 >= lo) & (t2 <= hi)], [lo, hi]])
            ds = np.abs(np.interp(probe, t1, s1) - np.interp(probe, t2, s2))
            if np.max(ds) > 4 * tol_x:
                raise NotAGraph(f"chain folds over the ray near t={probe[np.argmax(ds)]:.6g}")
    T = np.concatenate([p[0] for p in pieces])
    S = np.concatenate([p[1] for p in pieces])
    order = np.argsort(T, kind="stable")
    T, S = T[order], S[order]
    uniq = np.concatenate([[True], np.diff(T) > 0])
    return EndProfile(T[uniq], S[uniq])


def doubling_windows_decay(profile: EndProfile, T_values) -> list[tuple[float, float, float, bool]]:
    """For each T: (T, max|s| on [T/2, T], max|s| on [T, 2T], later <= earlier)."""
    rows = []
    for T in T_values:
        early, late = profile.max_abs_s(T / 2, T), profile.max_abs_s(T, 2 * T)
        rows.append((T, early, late, bool(late <= early)))
    return rows


def graph_height(A: FocalSet, directrix: Segment, u: float, width: float = 1e-12) -> float:
    """Distance from the directrix line to the midset along the normal at station ``u``.

    Stations are measured along the directrix from its midpoint; the normal
    points towards A.
    """
    p, q = np.asarray(directrix.p), np.asarray(directrix.q)
    e = (q - p) / np.hypot(*(q - p))
    n = np.array([-e[1], e[0]])
    mid = 0.5 * (p + q)
    Ahull = hull_of_focal(A).array
    if np.mean((Ahull - mid) @ n) < 0:
        n = -n
    base = mid + u * e
    B = FocalSet((directrix,))

    def f(h):
        pt = (base + h * n)[None, :]
        return float(A.distances(pt)[0] - B.distances(pt)[0])

    lo = 0.0
    if f(lo) <= 0:
        raise SameSign(f"station {u} starts on A's side of the midset")
    hi = 1.0
    while f(hi) > 0:
        hi *= 2
        if hi > 1e12:
            raise SameSign(f"no crossing found above station {u}")
    return bisect_scalar(f, hi, lo, width)


def parabola_growth_check(A: FocalSet, directrix: Segment, heights, width: float = 1e-12) -> list[float]:
    """Consecutive divided differences of the midset's height over the directrix.

    ``heights`` are increasing stations along the directrix.  For a
    parabola-like midset the returned slopes increase strictly.
    """
    us = [float(u) for u in heights]
    if any(b <= a for a, b in zip(us, us[1:])):
        raise ValueError("stations must be strictly increasing")
    vals = [graph_height(A, directrix, u, width) for u in us]
    return [(v2 - v1) / (u2 - u1) for (u1, v1), (u2, v2) in zip(zip(us, vals), zip(us[1:], vals[1:]))]
