"""Built-in scene corpus used by the CLI demos and the test suites."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import ConicSpec
from .extraction import Scene
from .geometry import Circle, Disk, Dot, FocalSet, Point2, PolyLine, Segment


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    scene: Scene
    connected: bool  # both focal sets connected
    conic: ConicSpec | None = None


def _F(*prims, label=""):
    return FocalSet(tuple(prims), label)


def two_dots(R: float = 4.0) -> Scene:
    return Scene(_F(Dot((-1, 0)), label="A"), _F(Dot((1, 0)), label="B"), R)


def hyperbola(R: float = 4.0) -> Scene:
    return Scene(_F(Circle((0, 0), 0.5), label="A"), _F(Circle((1, 0), 0.25), label="B"), R)


def ellipse(R: float = 6.0) -> Scene:
    return Scene(_F(Circle((0, 0), 4.0), label="A"), _F(Circle((1, 0), 1.0), label="B"), R)


def congruent(R: float = 4.0) -> Scene:
    return Scene(_F(Circle((0, 0), 0.25), label="A"), _F(Circle((1, 0), 0.25), label="B"), R)


def parabola(R: float = 4.0) -> Scene:
    # directrix y = -1 stood in for by a segment of length 8R
    return Scene(
        _F(Dot((0, 1)), label="A"), _F(Segment((-4 * R, -1), (4 * R, -1)), label="B"), R, bounded=False
    )


CONICS = {
    "hyperbola": ConicSpec(Point2(0, 0), Point2(1, 0), 0.25, "difference"),
    # R - |z| = |z - 1| - r gives |z| + |z - 1| = R + r
    "ellipse": ConicSpec(Point2(0, 0), Point2(1, 0), 5.0, "sum"),
    "line": ConicSpec(Point2(0, 0), Point2(1, 0), 0.0, "difference"),
}


def corpus() -> list[CorpusEntry]:
    square = lambda cx, cy, h: PolyLine(
        ((cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)), closed=True
    )
    return [
        CorpusEntry("two_dots", two_dots(), True),
        CorpusEntry("hyperbola", hyperbola(), True, CONICS["hyperbola"]),
        CorpusEntry("ellipse", ellipse(), True, CONICS["ellipse"]),
        CorpusEntry("line", congruent(), True, CONICS["line"]),
        CorpusEntry("parabola", parabola(), True),
        CorpusEntry(
            "segment_dot", Scene(_F(Segment((-2, 0), (-1, 1)), label="A"), _F(Dot((1, 0)), label="B"), 6.0), True
        ),
        CorpusEntry("squares", Scene(_F(square(0, 0, 0.5), label="A"), _F(square(5, 0, 0.5), label="B"), 10.0), True),
        CorpusEntry(
            "disk_segment",
            Scene(_F(Disk((-1, 0), 0.5), label="A"), _F(Segment((1, -1), (1.5, 1)), label="B"), 5.0),
            True,
        ),
        CorpusEntry(
            "triangle_circle",
            Scene(
                _F(PolyLine(((-2, -1), (-1, -1), (-1.5, 0.5)), closed=True), label="A"),
                _F(Circle((1.5, 0.5), 0.75), label="B"),
                6.0,
            ),
            True,
        ),
        CorpusEntry(
            "dot_in_circle", Scene(_F(Circle((0, 0), 2.0), label="A"), _F(Dot((0.5, 0.3)), label="B"), 4.0), True
        ),
        CorpusEntry(
            "split_dots",
            Scene(_F(Dot((-2, 0)), Dot((2, 0)), label="A"), _F(Dot((0, 0.5)), label="B"), 6.0),
            False,
        ),
    ]


def corpus_by_name(name: str) -> CorpusEntry:
    for e in corpus():
        if e.name == name:
            return e
    raise KeyError(name)
