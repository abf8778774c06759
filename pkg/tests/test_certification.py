import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from midset.certification import (
    HIT,
    MISS,
    UNRESOLVED,
    certified_radius,
    certified_raster,
    certify_point,
    in_closed_form_regime,
    shadowing_radius,
)
from midset.errors import DomainError, InsideHull
from midset.extraction import Scene, extract_chains
from midset.geometry import Dot, FocalSet, Segment
from midset.scenes import hyperbola, two_dots
from oracles import certifiable_points, true_point_within
from strategies import coarse, random_scene

eps_s = st.floats(0, 5)
d_s = st.floats(1e-3, 10)
alpha_s = st.floats(1e-3, math.pi)


def test_radius_examples():
    for eps, d in ((0.3, 1.0), (2.0, 0.1)):
        assert shadowing_radius(eps, d, math.pi) == pytest.approx(eps / 2, rel=1e-15)
    assert shadowing_radius(0.1, 1.0, math.pi / 2) == pytest.approx(0.05 * 2.1 / 1.1, rel=1e-15)
    assert shadowing_radius(0.1, 1.0, math.pi / 2) == pytest.approx(0.0954545, abs=1e-7)
    assert shadowing_radius(0.0, 2.0, 0.3) == 0


def test_radius_domain_errors():
    for args in ((-0.1, 1, 1), (0.1, 0, 1), (0.1, 1, 0), (0.1, 1, 4)):
        with pytest.raises(DomainError):
            shadowing_radius(*args)


@settings(max_examples=300)
@given(eps_s, d_s, alpha_s)
def test_radius_at_least_half_eps(eps, d, alpha):
    assert shadowing_radius(eps, d, alpha) >= eps / 2 * (1 - 1e-12)
    assert certified_radius(eps, d, alpha) >= eps / 2 * (1 - 1e-12)


def test_radius_monotone_on_grid():
    eps = np.linspace(0, 2, 41)
    alpha = np.linspace(0.01, math.pi, 60)
    for d in (0.1, 1.0, 5.0):
        T = np.array([[shadowing_radius(e, d, a) for a in alpha] for e in eps])
        assert np.all(np.diff(T, axis=0) >= -1e-12)  # nondecreasing in eps
        assert np.all(np.diff(T, axis=1) <= 1e-12)  # nonincreasing in alpha


def test_certified_radius_branches():
    # small walk: closed form is used verbatim
    assert in_closed_form_regime(0.1, 1.0, math.pi / 2)
    assert certified_radius(0.1, 1.0, math.pi / 2) == shadowing_radius(0.1, 1.0, math.pi / 2)
    # long walk at a narrow angle: the corrected radius is larger
    assert not in_closed_form_regime(0.5, 1.0, 0.02)
    assert certified_radius(0.5, 1.0, 0.02) == pytest.approx(1.5 / (1 + math.sin(0.02)))
    assert certified_radius(0.5, 1.0, 0.02) > shadowing_radius(0.5, 1.0, 0.02)


def _negative_on_disk(scene, rho, levels=24):
    """Lipschitz-certified check that gap < 0 on the closed disk of radius rho about 0."""
    C, hw = np.zeros((1, 2)), rho
    for _ in range(levels):
        # drop cells outside the disk or certified negative
        C = C[np.hypot(*C.T) <= rho + math.sqrt(2) * hw]
        g = scene.gap(C)
        if np.any((g >= 0) & (np.hypot(*C.T) <= rho)):
            return False
        C = C[g >= -2 * math.sqrt(2) * hw]
        if len(C) == 0:
            return True
        hw /= 2
        C = (C[:, None, :] + hw * np.array([[-1, -1], [1, -1], [-1, 1], [1, 1]])[None]).reshape(-1, 2)
    return False


def _narrow_scene(d, eps, alpha):
    A = FocalSet((Segment((d, 0), (50, 0)),))
    B = FocalSet((Dot(((d + eps) * math.cos(alpha), -(d + eps) * math.sin(alpha))),))
    return Scene(A, B, 60.0)


@pytest.mark.parametrize("d,eps,alpha", [(1, 0.5, 0.02), (1, 0.5, 0.1), (1, 0.1, 0.01)])
def test_closed_form_fails_beyond_its_regime(d, eps, alpha):
    scene = _narrow_scene(d, eps, alpha)
    rho = shadowing_radius(eps, d, alpha)
    assert _negative_on_disk(scene, rho)
    cert = certify_point((0, 0), scene)
    assert cert.eps == pytest.approx(eps) and cert.d == pytest.approx(d) and cert.alpha == pytest.approx(alpha)
    assert not cert.closed_form
    assert true_point_within(scene, (0, 0), cert.radius) is not None


def test_certify_examples():
    s = two_dots()
    c = certify_point((0, 0), s)
    assert c.eps == 0 and c.radius == 0
    c = certify_point((0.01, 0), s)
    assert c.eps == pytest.approx(0.02, abs=1e-15)
    assert c.d == pytest.approx(0.99, abs=1e-15)
    assert c.alpha == pytest.approx(math.pi, abs=1e-15)
    assert c.radius == pytest.approx(0.01, abs=1e-15)
    A = FocalSet((Segment((-1, -1), (1, 1)),))
    B = FocalSet((Segment((-1, 1), (-0.5, 0.5)), Segment((0.5, -0.5), (1, -1))))
    with pytest.raises(InsideHull):
        certify_point((0, 0), Scene(A, B, 4))


@pytest.mark.parametrize("eps", [0.02, 0.1, 0.5])
def test_sharp_for_collinear_dots(eps):
    c = certify_point((eps / 2, 0), two_dots())
    assert c.radius == pytest.approx(eps / 2, abs=1e-9)
    assert math.dist((eps / 2, 0), (0, 0)) == pytest.approx(c.radius, abs=1e-9)


@pytest.mark.parametrize("seed", range(4))
def test_shadowing_valid_on_random_scenes(seed):
    rng = np.random.default_rng(1000 + seed)
    scene = random_scene(seed + 77)
    pts = certifiable_points(scene, 40, rng)
    assert len(pts) >= 20
    for x, cert in pts:
        p = true_point_within(scene, x, cert.radius)
        assert p is not None, (x, cert)
        assert math.dist(p, x) <= cert.radius * (1 + 1e-6)


# -- raster -------------------------------------------------------------------


def test_raster_rejects_tiny_grid():
    with pytest.raises(ValueError):
        certified_raster(two_dots(), 1)


def test_raster_two_dots_odd_grid():
    s = two_dots()
    n = 65
    r = certified_raster(s, n)
    cls = r.classifications()
    w = 2 * s.R / n
    for cell in r.cells:
        if abs(cell.center.x) > 3 * w:
            assert cell.classification == MISS
        if cell.center.x == 0 and abs(cell.center.y) > 0.5:
            assert cell.classification == HIT
    assert np.array_equal(cls, cls[:, ::-1]) and np.array_equal(cls, cls[::-1, :])


def test_raster_even_grid_has_no_centered_column():
    r = certified_raster(two_dots(), 64)
    # x = 0 falls on cell edges; the straddling columns are hit or unresolved, never miss
    cls = r.classifications()
    assert set(cls[:, 31]) <= {HIT, UNRESOLVED} and set(cls[:, 32]) <= {HIT, UNRESOLVED}
    assert np.array_equal(cls, cls[:, ::-1])


def test_raster_has_no_full_hit_block():
    r = certified_raster(hyperbola(), 63)
    hit = r.classifications() == HIT
    block = hit[:-2, :-2] & hit[1:-1, :-2] & hit[2:, :-2]
    block = block & hit[:-2, 1:-1] & hit[1:-1, 1:-1] & hit[2:, 1:-1] & hit[:-2, 2:] & hit[1:-1, 2:] & hit[2:, 2:]
    assert not block.any()


def test_miss_cells_hold_no_chain_vertex():
    scene = hyperbola()
    r = certified_raster(scene, 48)
    fine = coarse(scene, 11)
    P = np.concatenate([c.vertices for c in extract_chains(fine, 11)])
    for cell in r.cells:
        if cell.classification == MISS:
            inside = (np.abs(P[:, 0] - cell.center.x) <= cell.half_width) & (
                np.abs(P[:, 1] - cell.center.y) <= cell.half_width
            )
            assert not inside.any()
            assert abs(scene.gap([cell.center])[0]) > 2 * math.sqrt(2) * cell.half_width


def test_raster_levels():
    r = certified_raster(two_dots(), 9)
    lv = r.levels()
    assert lv.shape == (9, 9) and set(np.unique(lv)) <= {0, 128, 255}
    # row 0 is the top of the square
    assert r.cells[0].center.y > r.cells[-1].center.y


def test_polygon_hulls_only_shrink_alpha():
    scene = hyperbola()
    for x in ((0.3, 2.0), (0.6, -1.2), (1.5, 1.5)):
        coarse_a = certify_point(x, scene, k=16).alpha
        fine_a = certify_point(x, scene, k=4096).alpha
        assert coarse_a <= fine_a + 1e-12
