"""CLI golden cases: (name, argv, produced files). Run this module to regenerate the goldens."""

import shutil
import sys
import tempfile
from pathlib import Path

from midset.cli import main

FIX = Path(__file__).resolve().parents[1] / "src" / "midset" / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

CASES = [
    ("extract_two_dots", ["extract", "--scene", FIX / "two_dots_coarse.json"], ["out.csv"]),
    ("extract_mixed_svg", ["extract", "--scene", FIX / "mixed_coarse.json", "--format", "svg"], ["out.svg"]),
    ("extract_parabola", ["extract", "--scene", FIX / "parabola_line.json"], ["out.csv"]),
    ("eboundary_hyperbola", ["eboundary", "--scene", FIX / "hyperbola_coarse.json", "--eps", "0.5"], ["out.csv"]),
    ("rays_hyperbola", ["rays", "--scene", FIX / "hyperbola_coarse.json"], ["out.csv", "out_profile.csv"]),
    ("rays_hyperbola_svg", ["rays", "--scene", FIX / "hyperbola_coarse.json", "--format", "svg"], ["out.svg"]),
    (
        "certify_two_dots",
        ["certify", "--scene", FIX / "two_dots_coarse.json", "--point", "0.1,1", "--point=-1,0", "--point", "0.25,0"],
        ["out.csv"],
    ),
    ("raster_two_dots_pgm", ["raster", "--scene", FIX / "two_dots_coarse.json", "--grid", "9", "--format", "pgm"], ["out.pgm"]),
    ("raster_two_dots_csv", ["raster", "--scene", FIX / "two_dots_coarse.json", "--grid", "9"], ["out.csv"]),
    ("continuity_two_dots", ["continuity", "--scene", FIX / "two_dots_coarse.json", "--deltas", "0.4,0.2,0.1"], ["out.csv"]),
    ("conics", ["conics"], ["out.csv"]),
    ("report_mixed", ["report", "--scene", FIX / "mixed_coarse.json"], ["out.csv"]),
]


def run_case(argv, files, outdir: Path) -> int:
    ext = Path(files[0]).suffix
    return main([str(a) for a in argv] + ["--out", str(outdir / f"out{ext}")])


if __name__ == "__main__":
    for name, argv, files in CASES:
        with tempfile.TemporaryDirectory() as tmp:
            code = run_case(argv, files, Path(tmp))
            if code != 0:
                sys.exit(f"{name}: exit {code}")
            for f in files:
                shutil.copy(Path(tmp) / f, GOLDEN / f"{name}__{f}")
        print("wrote", name)
