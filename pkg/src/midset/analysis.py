"""Hausdorff distances, continuity experiments, conic identities and structure reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyInput
from .extraction import PolyChain, Scene, extract_chains
from .geometry import FocalSet, Point2, focal_distance

_BLOCK = 2048


def _as_array(P) -> np.ndarray:
    if isinstance(P, PolyChain):
        P = P.vertices
    A = np.asarray(P, dtype=float).reshape(-1, 2)
    if len(A) == 0:
        raise EmptyInput("point set is empty")
    return A


def directed_hausdorff(P, Q) -> float:
    """max over p in P of the distance from p to Q (brute force, blocked)."""
    P, Q = _as_array(P), _as_array(Q)
    worst = 0.0
    for i in range(0, len(P), _BLOCK):
        blk = P[i : i + _BLOCK]
        best = np.full(len(blk), np.inf)
        for j in range(0, len(Q), _BLOCK):
            q = Q[j : j + _BLOCK]
            # hypot rather than squared sums: no underflow for tiny separations
            d = np.hypot(blk[:, 0, None] - q[None, :, 0], blk[:, 1, None] - q[None, :, 1])
            np.minimum(best, d.min(axis=1), out=best)
        worst = max(worst, float(best.max()))
    return worst


def hausdorff_distance(P, Q) -> float:
    return max(directed_hausdorff(P, Q), directed_hausdorff(Q, P))


def chain_points(chains) -> np.ndarray:
    chains = list(chains)
    if not chains:
        raise EmptyInput("no chains")
    return np.concatenate([c.vertices for c in chains])


def max_spacing(chains) -> float:
    gaps = [np.max(np.hypot(*np.diff(c.vertices, axis=0).T)) for c in chains if len(c) > 1]
    return float(max(gaps)) if gaps else 0.0


# ---------------------------------------------------------------------------
# continuity


@dataclass(frozen=True)
class ContinuityRow:
    delta: float
    dH_focals: float
    dH_midsets: float
    note: str = ""


def _jitter(F: FocalSet, delta: float, rng: np.random.Generator) -> FocalSet:
    from .geometry import Circle, Disk, Dot, PolyLine, Segment

    def shift():
        r = delta * math.sqrt(rng.random())
        th = 2 * math.pi * rng.random()
        return r * math.cos(th), r * math.sin(th)

    def move(p):
        dx, dy = shift()
        return Point2(p.x + dx, p.y + dy)

    out = []
    for prim in F.primitives:
        if isinstance(prim, Dot):
            out.append(Dot(move(prim.p)))
        elif isinstance(prim, Segment):
            out.append(Segment(move(prim.p), move(prim.q)))
        elif isinstance(prim, (Circle, Disk)):
            out.append(type(prim)(move(prim.center), prim.radius))
        else:
            out.append(PolyLine(tuple(move(v) for v in prim.vertices), prim.closed))
    return FocalSet(tuple(out), F.label)


def continuity_experiment(
    scene: Scene,
    deltas,
    mode: str = "translate",
    seed: int = 0,
    max_depth: int | None = None,
    workers: int = 1,
) -> list[ContinuityRow]:
    """Perturb B by each delta, re-extract, and compare with the unperturbed midset.

    Rows whose perturbation breaks disjointness (or containment) are kept with
    NaN distances and a diagnostic note.
    """
    if mode not in ("translate", "jitter"):
        raise ValueError(f"unknown perturbation mode {mode!r}")
    deltas = [float(d) for d in deltas]
    if any(d < 0 for d in deltas):
        raise ValueError("deltas must be nonnegative")
    base = chain_points(extract_chains(scene, max_depth, workers))
    spacing = scene.tol_x
    B0 = scene.B.sample(spacing)
    rng = np.random.default_rng(seed)
    rows = []
    for delta in deltas:
        B1 = scene.B.translated((delta, 0.0)) if mode == "translate" else _jitter(scene.B, delta, rng)
        if focal_distance(scene.A, B1) <= 0:
            rows.append(ContinuityRow(delta, math.nan, math.nan, "skipped: perturbed B meets A"))
            continue
        try:
            perturbed = Scene(scene.A, B1, scene.R, scene.tol, scene.bounded)
        except ValueError as exc:
            rows.append(ContinuityRow(delta, math.nan, math.nan, f"skipped: {exc}"))
            continue
        pts = chain_points(extract_chains(perturbed, max_depth, workers))
        rows.append(ContinuityRow(delta, hausdorff_distance(B0, B1.sample(spacing)), hausdorff_distance(base, pts)))
    return rows


# ---------------------------------------------------------------------------
# conics


@dataclass(frozen=True)
class ConicSpec:
    focus1: Point2
    focus2: Point2
    constant: float
    kind: str  # "sum" (ellipse) or "difference" (hyperbola branch / line)

    def __post_init__(self):
        if self.kind not in ("sum", "difference"):
            raise ValueError(f"kind must be 'sum' or 'difference', got {self.kind!r}")
        c = math.hypot(self.focus1[0] - self.focus2[0], self.focus1[1] - self.focus2[1])
        if self.kind == "sum" and not self.constant > c:
            raise ValueError("ellipse constant must exceed the focal distance")
        if self.kind == "difference" and not abs(self.constant) < c:
            raise ValueError("hyperbola constant must be smaller than the focal distance")


def conic_residual(chain: PolyChain, spec: ConicSpec) -> float:
    V = _as_array(chain)
    r1 = np.hypot(V[:, 0] - spec.focus1[0], V[:, 1] - spec.focus1[1])
    r2 = np.hypot(V[:, 0] - spec.focus2[0], V[:, 1] - spec.focus2[1])
    val = r1 + r2 if spec.kind == "sum" else r1 - r2
    return float(np.max(np.abs(val - spec.constant)))


# ---------------------------------------------------------------------------
# structure


@dataclass
class StructureReport:
    component_count: int
    components: list = field(default_factory=list)  # (chain indices, closed)
    closed_flags: list = field(default_factory=list)
    empty_interior_ok: bool = True
    empty_interior_violations: int = 0
    min_dist_A: float = math.nan
    min_dist_B: float = math.nan
    n_vertices: int = 0

    def summary(self) -> str:
        lines = [
            f"components: {self.component_count}",
            f"chains: {len(self.closed_flags)} ({sum(self.closed_flags)} closed, "
            f"{len(self.closed_flags) - sum(self.closed_flags)} open)",
            f"vertices: {self.n_vertices}",
            f"empty interior: {'ok' if self.empty_interior_ok else 'VIOLATED'}"
            f" ({self.empty_interior_violations} violations)",
            f"min distance to A: {self.min_dist_A:.6g}",
            f"min distance to B: {self.min_dist_B:.6g}",
        ]
        return "\n".join(lines)


def merge_components(chains, tol: float) -> list[list[int]]:
    """Group chains whose endpoints come within ``tol`` of each other."""
    parent = list(range(len(chains)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    ends = [np.array([c.vertices[0], c.vertices[-1]]) for c in chains]
    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            d = np.hypot(*(ends[i][:, None, :] - ends[j][None, :, :]).transpose(2, 0, 1))
            if d.min() <= tol:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in range(len(chains)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def disk_samples(radius: float, n: int = 64) -> np.ndarray:
    """Deterministic offsets filling a disk: four rings of n/4 points."""
    per = max(1, n // 4)
    rings = []
    for k in range(4):
        r = radius * (k + 1) / 4
        th = (np.arange(per) + 0.5 * k) * (2 * math.pi / per)
        rings.append(np.column_stack([r * np.cos(th), r * np.sin(th)]))
    return np.concatenate(rings)


def empty_interior_violations(scene: Scene, chains, radius: float | None = None, n: int = 64) -> int:
    """Number of chain vertices lacking a strictly positive and a strictly negative gap nearby."""
    radius = 8 * scene.tol_x if radius is None else radius
    offs = disk_samples(radius, n)
    bad = 0
    for c in chains:
        V = c.vertices
        for i in range(0, len(V), 512):
            blk = V[i : i + 512]
            g = scene.gap((blk[:, None, :] + offs[None, :, :]).reshape(-1, 2)).reshape(len(blk), -1)
            bad += int(np.sum(~((g > 0).any(axis=1) & (g < 0).any(axis=1))))
    return bad


def structure_report(scene: Scene, chains) -> StructureReport:
    chains = list(chains)
    if not chains:
        return StructureReport(0)
    groups = merge_components(chains, 4 * scene.tol_x)
    P = chain_points(chains)
    bad = empty_interior_violations(scene, chains)
    return StructureReport(
        component_count=len(groups),
        components=groups,
        closed_flags=[c.closed for c in chains],
        empty_interior_ok=bad == 0,
        empty_interior_violations=bad,
        min_dist_A=float(scene.A.distances(P).min()),
        min_dist_B=float(scene.B.distances(P).min()),
        n_vertices=len(P),
    )
