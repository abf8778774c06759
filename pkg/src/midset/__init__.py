"""Equidistant sets {x : d(x, A) = d(x, B)} of planar focal sets."""

from .analysis import (
    ConicSpec,
    ContinuityRow,
    StructureReport,
    conic_residual,
    continuity_experiment,
    hausdorff_distance,
    structure_report,
)
from .asymptotics import (
    EndProfile,
    Ray,
    asymptotic_rays,
    doubling_windows_decay,
    end_deviation_profile,
    parabola_growth_check,
)
from .certification import CertBound, certified_radius, certified_raster, certify_point, shadowing_radius
from .config import Tolerances
from .errors import (
    DepthExhausted,
    DomainError,
    EmptyInput,
    HullsIntersect,
    InsideHull,
    MidsetError,
    NoSeparation,
    NotAGraph,
    ParseError,
    SameSign,
    ValidationError,
)
from .extraction import PolyChain, Scene, build_cells, crossing_at_height, edge_root, epsilon_boundary, extract_chains
from .geometry import (
    Circle,
    Disk,
    Dot,
    FocalSet,
    Point2,
    PolyLine,
    Segment,
    convex_hull,
    distance_to_focal,
    exterior_common_tangents,
    gap,
    hull_of_focal,
    separation_angle,
)
from .io import dump_scene, load_scene

__version__ = "0.1.0"
