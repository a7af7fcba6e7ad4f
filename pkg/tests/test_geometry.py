import math

import numpy as np
import pytest

from csflab import geometry as geo


def test_circle_basics():
    c = geo.circle(2.0, h=0.05)
    assert c.closed
    assert c.length() == pytest.approx(4.0 * math.pi, rel=1e-3)
    assert c.area() == pytest.approx(4.0 * math.pi, rel=1e-3)
    kap = c.curvatures()
    assert np.allclose(kap, 0.5, atol=1e-3)
    # Inward normals: each points toward the center for a CCW circle.
    n = c.normals()
    to_center = -c.vertices
    assert np.all(np.sum(n * to_center, axis=1) > 0.0)
    assert c.is_embedded()


def test_turning_angle_closes_to_full_turn():
    rng = np.random.default_rng(3)
    ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, 57))
    r = 1.0 + 0.2 * np.cos(3.0 * ang)
    v = np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    c = geo.PlaneCurve(v, closed=True, resample_h=0.1)
    # Discrete Gauss-Bonnet: exterior angles of a simple CCW polygon sum
    # to exactly one full turn.
    assert float(np.sum(c.turning_angles())) == pytest.approx(
        2.0 * math.pi, abs=1e-9
    )


def test_orientation_flip():
    c = geo.circle(1.0, h=0.1)
    cw = geo.PlaneCurve(c.vertices[::-1].copy(), closed=True, resample_h=0.1)
    assert cw.area() < 0.0
    assert cw.oriented_ccw().area() > 0.0


def test_figure_eight_not_embedded():
    t = np.linspace(0.0, 2.0 * math.pi, 101)[:-1]
    v = np.column_stack([np.sin(2.0 * t), np.sin(t)])
    c = geo.PlaneCurve(v, closed=True, resample_h=0.1)
    assert not c.is_embedded()


def test_resample_uniform_spacing():
    t = np.linspace(0.0, 2.0 * math.pi, 400)[:-1]
    v = np.column_stack(
        [(1.0 + 0.3 * np.cos(4 * t)) * np.cos(t), (1.0 + 0.3 * np.cos(4 * t)) * np.sin(t)]
    )
    c = geo.PlaneCurve(v, closed=True, resample_h=0.05)
    r = c.resample()
    assert r.closed
    assert r.spacing_ok(0.9, 1.1)
    assert r.length() == pytest.approx(c.length(), rel=1e-3)


def test_resample_open_endpoints_fixed():
    x = np.linspace(0.0, 3.0, 31)
    v = np.column_stack([x, np.sin(x)])
    c = geo.PlaneCurve(v, closed=False, resample_h=0.02)
    r = c.resample()
    assert not r.closed
    assert np.allclose(r.vertices[0], v[0], atol=1e-12)
    assert np.allclose(r.vertices[-1], v[-1], atol=1e-12)


def test_resample_adaptive_denser_where_curved():
    t = np.linspace(0.0, 2.0 * math.pi, 400)[:-1]
    v = np.column_stack([2.0 * np.cos(t), 0.5 * np.sin(t)])
    c = geo.PlaneCurve(v, closed=True, resample_h=0.05)
    r = c.resample_adaptive(angle_budget=0.05, sag_tol=1e-3)
    ell = r.edge_lengths()
    verts = r.vertices
    near_tip = np.abs(np.abs(verts[:, 0]) - 2.0) < 0.3
    flank = np.abs(verts[:, 0]) < 1.0
    tip_edges = ell[near_tip[:-1] if len(ell) == len(verts) - 1 else near_tip]
    flank_edges = ell[flank[: len(ell)]]
    assert np.mean(tip_edges) < 0.5 * np.mean(flank_edges)
    assert r.is_embedded()


def test_signed_distances():
    c = geo.circle(1.0, h=0.02)
    pts = np.array([[0.0, 0.0], [0.5, 0.0], [2.0, 0.0]])
    d = geo.polygon_signed_distances(c, pts)
    assert d[0] == pytest.approx(1.0, abs=1e-3)
    assert d[1] == pytest.approx(0.5, abs=1e-3)
    assert d[2] == pytest.approx(-1.0, abs=1e-3)


def test_hausdorff_shifted_circles():
    a = geo.circle(1.0, h=0.02)
    b = geo.circle(1.0, h=0.02, center=(0.3, 0.0))
    assert geo.hausdorff_distance(a, b) == pytest.approx(0.3, abs=5e-3)


def test_vertex_validation():
    with pytest.raises(ValueError):
        geo.PlaneCurve(np.zeros((2, 2)), closed=False, resample_h=0.1)
    with pytest.raises(ValueError):
        geo.PlaneCurve(np.zeros((5, 3)), closed=False, resample_h=0.1)
