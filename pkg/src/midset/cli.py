"""Command line front end.

    midset extract    --scene S [--out F] [--format csv|svg] [--max-depth N] [--workers W]
    midset eboundary  --scene S --eps E [--which A|B] ...
    midset rays       --scene S [--k N] [--out F] [--format csv|svg]
    midset certify    --scene S --point X,Y [--point X,Y ...] [--k N]
    midset raster     --scene S [--grid N] [--k N] [--format csv|pgm]
    midset continuity --scene S [--deltas d1,d2,...] [--mode translate|jitter] [--seed S]
    midset conics     [--max-depth N]
    midset report     --scene S

Exit codes: 0 success, 1 invalid input or configuration, 2 runtime failure,
3 extraction hit the depth limit before reaching tol_x (outputs still written).
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io as mio
from .analysis import conic_residual, continuity_experiment, structure_report
from .asymptotics import asymptotic_rays, end_deviation_profile, tube_half_width
from .certification import certified_raster, certify_point
from .errors import DepthExhausted, InsideHull, MidsetError, NoSeparation, NotAGraph
from .extraction import epsilon_boundary, extract_chains
from .geometry import hull_of_focal

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME, EXIT_DEPTH = 0, 1, 2, 3

SUBCOMMANDS = ("extract", "eboundary", "rays", "certify", "raster", "continuity", "conics", "report")
_FORMATS = {
    "extract": ("csv", "svg"),
    "eboundary": ("csv", "svg"),
    "rays": ("csv", "svg"),
    "certify": ("csv",),
    "raster": ("csv", "pgm"),
    "continuity": ("csv",),
    "conics": ("csv",),
    "report": ("csv",),
}
DEFAULT_DELTAS = (0.4, 0.2, 0.1, 0.05)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    scene: Path | None = None
    out: Path | None = None
    format: str = "csv"
    max_depth: int | None = None
    grid_n: int = 64
    k: int = 64
    deltas: tuple = DEFAULT_DELTAS
    seed: int = 0
    workers: int = 1
    eps: float | None = None
    which: str = "A"
    points: tuple = field(default_factory=tuple)
    mode: str = "translate"

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in _FORMATS[self.subcommand]:
            raise ConfigError(f"format {self.format!r} not available for {self.subcommand}")
        if self.subcommand != "conics":
            if self.scene is None:
                raise ConfigError("--scene is required")
            if not Path(self.scene).is_file():
                raise ConfigError(f"scene file not found: {self.scene}")
        if self.max_depth is not None and not 1 <= self.max_depth <= 24:
            raise ConfigError("--max-depth must lie in [1, 24]")
        if self.grid_n < 2:
            raise ConfigError("--grid must be at least 2")
        if self.k < 3:
            raise ConfigError("--k must be at least 3")
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if any(not (math.isfinite(d) and d >= 0) for d in self.deltas) or not self.deltas:
            raise ConfigError("--deltas must be a nonempty list of nonnegative numbers")
        if self.mode not in ("translate", "jitter"):
            raise ConfigError("--mode must be translate or jitter")
        if self.which not in ("A", "B"):
            raise ConfigError("--which must be A or B")
        if self.subcommand == "eboundary" and not (self.eps is not None and math.isfinite(self.eps) and self.eps > 0):
            raise ConfigError("eboundary needs a positive --eps")
        if self.subcommand == "certify" and not self.points:
            raise ConfigError("certify needs at least one --point")


def _emit(cfg: RunConfig, text: str, path: Path | None = None) -> None:
    path = path or cfg.out
    if path is None:
        sys.stdout.write(text)
    else:
        mio.write_text(path, text)


def _sidecar(cfg: RunConfig, suffix: str) -> Path | None:
    if cfg.out is None:
        return None
    out = Path(cfg.out)
    return out.with_name(f"{out.stem}_{suffix}.csv")


def _profiles(scene, chains, rays, k):
    hw = tube_half_width(scene.A, scene.B, k)
    profiles = []
    for ray in rays:
        best = None
        for c in chains:
            try:
                p = end_deviation_profile(c, ray, 0.0, hw, scene.tol_x)
            except NotAGraph:
                continue
            if best is None or len(p.t) > len(best.t):
                best = p
        if best is None:
            raise NotAGraph("no chain is a graph over the ray")
        profiles.append(best)
    return profiles


def _conic_rows(cfg: RunConfig):
    from .scenes import CONICS, congruent, ellipse, hyperbola

    rows, ok = [], True
    for name, scene in (("hyperbola", hyperbola()), ("ellipse", ellipse()), ("line", congruent())):
        spec = CONICS[name]
        chains = extract_chains(scene, cfg.max_depth, cfg.workers)
        res = max(conic_residual(c, spec) for c in chains)
        passed = res <= 2 * scene.tol_gap
        ok = ok and passed
        kind = "line" if name == "line" else spec.kind
        rows.append((name, kind, spec.constant, res, scene.tol_gap, passed))
    return rows, ok


def _run(cfg: RunConfig) -> int:
    cmd = cfg.subcommand
    if cmd == "conics":
        rows, ok = _conic_rows(cfg)
        _emit(cfg, mio.conics_csv(rows))
        return EXIT_OK if ok else EXIT_RUNTIME

    scene = mio.load_scene(cfg.scene)

    if cmd == "extract":
        chains = extract_chains(scene, cfg.max_depth, cfg.workers)
        _emit(cfg, mio.chains_csv(chains) if cfg.format == "csv" else mio.scene_svg(scene, chains))
    elif cmd == "eboundary":
        F = scene.A if cfg.which == "A" else scene.B
        chains = epsilon_boundary(F, cfg.eps, scene.R, scene.tol, cfg.max_depth, cfg.workers)
        _emit(cfg, mio.chains_csv(chains) if cfg.format == "csv" else mio.scene_svg(scene, chains))
    elif cmd == "rays":
        rays = asymptotic_rays(scene.A, scene.B, cfg.k, scene.tol)
        chains = extract_chains(scene, cfg.max_depth, cfg.workers)
        if cfg.format == "svg":
            _emit(cfg, mio.scene_svg(scene, chains, rays))
        else:
            _emit(cfg, mio.rays_csv(rays))
            side = _sidecar(cfg, "profile")
            if side is not None:
                mio.write_text(side, mio.profiles_csv(_profiles(scene, chains, rays, cfg.k)))
    elif cmd == "certify":
        hulls = (hull_of_focal(scene.A, cfg.k), hull_of_focal(scene.B, cfg.k))
        results = []
        for p in cfg.points:
            try:
                results.append(certify_point(p, scene, cfg.k, hulls))
            except (InsideHull, NoSeparation) as exc:
                results.append(exc)
        _emit(cfg, mio.certs_csv(cfg.points, results))
    elif cmd == "raster":
        raster = certified_raster(scene, cfg.grid_n, cfg.k)
        _emit(cfg, mio.raster_csv(raster) if cfg.format == "csv" else mio.raster_pgm(raster))
    elif cmd == "continuity":
        rows = continuity_experiment(scene, cfg.deltas, cfg.mode, cfg.seed, cfg.max_depth, cfg.workers)
        _emit(cfg, mio.continuity_csv(rows))
    elif cmd == "report":
        chains = extract_chains(scene, cfg.max_depth, cfg.workers)
        report = structure_report(scene, chains)
        _emit(cfg, mio.report_csv(report, chains))
        print(report.summary(), file=sys.stdout if cfg.out is not None else sys.stderr)
    return EXIT_OK


def run_command(cfg: RunConfig) -> int:
    """Validate, dispatch and map failures onto exit codes."""
    try:
        cfg.validate()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", DepthExhausted)
            code = _run(cfg)
    except mio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except mio.ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (MidsetError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    depth = [w for w in caught if issubclass(w.category, DepthExhausted)]
    for w in caught:
        if w not in depth:
            warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)
    if depth and code == EXIT_OK:
        print(f"warning: {depth[0].message}", file=sys.stderr)
        return EXIT_DEPTH
    return code


def _point(text: str) -> tuple[float, float]:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise argparse.ArgumentTypeError("point coordinates must be finite")
    return x, y


def _deltas(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="midset", description="Equidistant sets of planar focal sets.")
    ap.add_argument("subcommand", choices=SUBCOMMANDS)
    ap.add_argument("--scene", type=Path)
    ap.add_argument("--out", type=Path)
    ap.add_argument("--format", default="csv", choices=("csv", "svg", "pgm"))
    ap.add_argument("--max-depth", type=int)
    ap.add_argument("--grid", type=int, default=64, dest="grid_n")
    ap.add_argument("--k", type=int, default=64)
    ap.add_argument("--deltas", type=_deltas, default=DEFAULT_DELTAS)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--eps", type=float)
    ap.add_argument("--which", default="A", choices=("A", "B"))
    ap.add_argument("--point", type=_point, action="append", default=[], dest="points")
    ap.add_argument("--mode", default="translate", choices=("translate", "jitter"))
    return ap


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    cfg = RunConfig(**{**vars(ns), "points": tuple(ns.points)})
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
