"""Tolerance record shared by every module.

Call sites never hard-code tolerances; they read them from a
:class:`Tolerances` instance (usually ``scene.tol``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

DEFAULT_HULL_SIDES = 64


@dataclass(frozen=True)
class Tolerances:
    tol_x: float = 2.0**-12
    tol_gap: float = 4 * 2.0**-12
    dedup: float = 1e-9  # foot-point deduplication
    incidence: float = 1e-9  # point-on-line / side tests
    root_width: float | None = None  # bisection bracket width, defaults to tol_x * 2**-20

    def __post_init__(self):
        for name in ("tol_x", "tol_gap", "dedup", "incidence"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"tolerance {name} must be positive and finite, got {v!r}")
        if self.root_width is not None and not self.root_width > 0:
            raise ValueError("root_width must be positive")

    @classmethod
    def for_radius(cls, R: float, **overrides) -> "Tolerances":
        """Defaults scaled to a bounding radius: tol_x = R/4096, tol_gap = 4 tol_x."""
        tol_x = overrides.pop("tol_x", R * 2.0**-12)
        tol_gap = overrides.pop("tol_gap", 4 * tol_x)
        return cls(tol_x=tol_x, tol_gap=tol_gap, **overrides)

    @property
    def bisect_width(self) -> float:
        return self.root_width if self.root_width is not None else self.tol_x * 2.0**-20

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT_TOLERANCES = Tolerances()


def default_max_depth(R: float, tol_x: float) -> int:
    """Smallest depth whose leaf side (2R / 2**depth) is at most tol_x / 2."""
    return max(1, math.ceil(math.log2(4 * R / tol_x) - 1e-12))
