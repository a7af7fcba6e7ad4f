import math

import numpy as np
import pytest
from scipy.integrate import odeint

from csflab import yinyang as yy

CBRT = lambda s: (3.0 * s) ** (1.0 / 3.0)

# Landmark locations recomputed from the closed-form derivative relations
# H' = 1 + H <F,N> and H'' = <F,N> (1 + H <F,N>) - H^3 via root bracketing
# on fresh high-tolerance integrations (see oracle in the test for s_i).
PEAK_S = 1.5072271894
PEAK_H = 1.1250182168
INFLECTION_S = 2.1665815694

# Finite-difference route values at the default grid step 0.05; these carry
# the expected O(step^2) bias relative to the closed-form locations.
PEAK_S_FD = 1.5075979161
INFLECTION_S_FD = 2.1671335193

# Corridor chords on the outward ray through F(s): partner arclength sigma,
# chord width, and width * |F(s)| / pi, for |s| in {1e2, 1e3, 1e4}.
CORRIDOR_FROZEN = {
    100.0: (121.823503, 0.45289665, 0.96822018),
    1000.0: (1045.667130, 0.21613662, 0.99260988),
    10000.0: (10097.779052, 0.10093818, 0.99838058),
}

FULL_TURN_SIGMA_1E4 = 10195.874697
FULL_TURN_RATIO_1E4 = 0.996731


def test_profile_metadata(profile_1e4):
    p = profile_1e4
    assert p.s_max == 1e4
    assert p.step == 0.05
    assert p.grid_max > 1e4 + 100.0
    for name in ("x", "y", "tx", "ty", "curvature", "h2_integral"):
        assert np.all(np.isfinite(getattr(p, name)))


def test_identity_suite_high_order(profile_1e4):
    rep = yy.identity_suite(profile_1e4)
    assert rep["ode"] <= 1e-8
    assert rep["soliton"] <= 1e-6
    assert rep["integral"] <= 1e-6
    assert rep["h_prime"] <= 1e-6
    # Sanity floor: residuals of a real computation never vanish outright.
    assert rep["ode"] > 1e-14


def test_curvature_identities_low_order_budget():
    p = yy.integrate_profile(100.0, step=1e-3, margin=1.0)
    rep = yy.curvature_identities(p)
    for key in ("frenet_x", "frenet_y", "integral", "h_prime"):
        assert rep[key] <= 1e-6, (key, rep[key])


def test_curvature_identities_second_order_scaling():
    fine = yy.curvature_identities(yy.integrate_profile(50.0, step=1e-3, margin=1.0))
    coarse = yy.curvature_identities(yy.integrate_profile(50.0, step=2e-3, margin=1.0))
    for key in ("frenet_x", "frenet_y", "integral", "h_prime"):
        ratio = coarse[key] / fine[key]
        assert 3.0 <= ratio <= 5.0, (key, ratio)


def test_sign_structure(profile_200):
    p = profile_200
    assert np.all(p.curvature[1:] > 0.0)
    fn = p.y * p.tx - p.x * p.ty
    assert np.all(fn[1:] < 0.0)
    r2 = p.x**2 + p.y**2
    assert np.all(np.diff(r2) > 0.0)


def test_antisymmetry_of_evaluators(profile_200):
    s = np.array([0.7, 3.3, 55.1, 181.4])
    xp, ypos = profile_200.point(s)
    xn, yn = profile_200.point(-s)
    assert np.array_equal(xn, -xp)
    assert np.array_equal(yn, -ypos)
    assert np.array_equal(
        np.column_stack(profile_200.tangent(s)),
        np.column_stack(profile_200.tangent(-s)),
    )
    assert np.array_equal(
        profile_200.curvature_at(-s), -profile_200.curvature_at(s)
    )


def test_direct_negative_integration_agrees(profile_200):
    grid = -np.arange(0, 2001) * 0.05
    out = odeint(
        yy._rhs,
        (0.0, 0.0, 0.0, 0.0),
        grid,
        rtol=1e-13,
        atol=1e-14,
        mxstep=10**9,
    )
    xm, ym = profile_200.point(grid)
    assert np.max(np.abs(out[:, 0] - xm)) <= 1e-9
    assert np.max(np.abs(out[:, 1] - ym)) <= 1e-9


def test_asymptotic_ratios(profile_1e4):
    p = profile_1e4
    h_ratio = float(p.curvature_at(1e4)) * CBRT(1e4)
    assert 0.99 <= h_ratio <= 1.01
    r_ratio = float(p.radius(1e4)) / CBRT(1e4)
    assert 0.98 <= r_ratio <= 1.02

    def gaps(values):
        return [abs(v - 1.0) for v in values]

    h_gaps = gaps(float(p.curvature_at(s)) * CBRT(s) for s in (1e2, 1e3, 1e4))
    r_gaps = gaps(float(p.radius(s)) / CBRT(s) for s in (1e2, 1e3, 1e4))
    assert h_gaps[0] > h_gaps[1] > h_gaps[2]
    assert r_gaps[0] > r_gaps[1] > r_gaps[2]


def test_corridor_width_frozen(profile_1e4):
    gaps = []
    for s_abs, (sigma, width, ratio) in CORRIDOR_FROZEN.items():
        q = yy.corridor_width(profile_1e4, -s_abs)
        assert q.sigma == pytest.approx(sigma, abs=2e-5)
        assert q.width == pytest.approx(width, abs=1e-7)
        measured = q.width * float(profile_1e4.radius(s_abs)) / math.pi
        assert measured == pytest.approx(ratio, abs=1e-7)
        gaps.append(abs(measured - 1.0))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 0.02


def test_corridor_chord_midpoint_clearances(profile_1e4):
    q = yy.corridor_width(profile_1e4, -1000.0)
    xs, ys = profile_1e4.point(-1000.0)
    xq, yq = profile_1e4.point(q.sigma)
    mid = (0.5 * (xs + xq), 0.5 * (ys + yq))
    d_neg, d_pos = profile_1e4.wall_clearances(mid)
    assert d_neg == pytest.approx(q.width / 2.0, rel=1e-4)
    assert d_pos == pytest.approx(q.width / 2.0, rel=1e-4)


def test_corridor_validation(profile_200):
    with pytest.raises(ValueError):
        yy.corridor_width(profile_200, 50.0)
    with pytest.raises(ValueError):
        yy.corridor_width(profile_200, -5.0)
    with pytest.raises(yy.CorridorRangeError):
        yy.corridor_width(profile_200, -240.0)


def test_corridor_membership(profile_1e4):
    q = yy.corridor_width(profile_1e4, -1000.0)
    x, y = profile_1e4.point(q.sigma)
    r = math.hypot(x, y)
    inward = (x * (1.0 - 0.25 * q.width / r), y * (1.0 - 0.25 * q.width / r))
    outward = (x * (1.0 + 0.25 * q.width / r), y * (1.0 + 0.25 * q.width / r))
    assert profile_1e4.corridor_contains(inward)
    assert not profile_1e4.corridor_contains(outward)
    on_wall = (x, y)
    assert profile_1e4.corridor_contains(on_wall, band=1e-9)


def test_lifted_angle(profile_1e4):
    p = profile_1e4
    with pytest.raises(ValueError):
        yy.lifted_angle(p, 0.0)
    # Carried lift vs principal angle of the evaluated point: independent
    # routes that agree within accumulated integrator error.
    x, y = p.point(-1.0)
    assert yy.lifted_angle(p, -1.0) == pytest.approx(
        math.atan2(float(y), float(x)), abs=1e-9
    )
    assert yy.lifted_angle(p, -0.01) == pytest.approx(
        yy.lifted_angle(p, 0.01) - math.pi, abs=1e-15
    )
    theta = yy.lifted_angle(p, 1e4)
    r = float(p.radius(1e4))
    assert abs(theta - r * r / 2.0) / (r * r / 2.0) <= 1e-2


def test_full_turn_partner(profile_1e4):
    sigma = yy.full_turn_partner(profile_1e4, 1e4)
    assert sigma == pytest.approx(FULL_TURN_SIGMA_1E4, abs=2e-5)
    x1, y1 = profile_1e4.point(1e4)
    x2, y2 = profile_1e4.point(sigma)
    ratio = math.hypot(x2 - x1, y2 - y1) * CBRT(1e4) / (2.0 * math.pi)
    assert 0.95 <= ratio <= 1.05
    assert ratio == pytest.approx(FULL_TURN_RATIO_1E4, abs=1e-5)


def test_find_H_inflection(profile_200):
    s_i, s_peak = yy.find_H_inflection(profile_200)
    assert s_i == pytest.approx(INFLECTION_S_FD, abs=1e-6)
    assert s_peak == pytest.approx(PEAK_S_FD, abs=1e-6)
    # Cross-route agreement with the closed-form derivative locations.
    assert s_i == pytest.approx(INFLECTION_S, abs=2e-3)
    assert s_peak == pytest.approx(PEAK_S, abs=2e-3)
    assert float(profile_200.curvature_at(s_peak)) == pytest.approx(
        PEAK_H, abs=1e-6
    )
    # Single curvature maximum: H' changes sign exactly once on s > 0.
    h = profile_200.curvature
    d1 = np.sign(np.diff(h[1:]))
    flips = np.sum(d1[:-1] != d1[1:])
    assert flips == 1


def test_rotate_profile(profile_200):
    pts = yy.rotate_profile(profile_200, math.pi / 2.0)
    f = yy.symmetric_samples(profile_200, s_limit=profile_200.grid_max)
    assert np.allclose(pts[:, 0], -f["y"], atol=1e-15)
    assert np.allclose(pts[:, 1], f["x"], atol=1e-15)
    seg = np.diff(pts, axis=0)
    orig = np.column_stack([np.diff(f["x"]), np.diff(f["y"])])
    assert np.allclose(
        np.hypot(seg[:, 0], seg[:, 1]),
        np.hypot(orig[:, 0], orig[:, 1]),
        rtol=1e-12,
    )


def test_csv_roundtrip_bit_exact(tmp_path):
    p = yy.integrate_profile(5.0, margin=2.0)
    f1 = tmp_path / "a.csv"
    f2 = tmp_path / "b.csv"
    yy.profile_to_csv(p, f1)
    q = yy.profile_from_csv(f1)
    yy.profile_to_csv(q, f2)
    assert f1.read_bytes() == f2.read_bytes()
    assert np.array_equal(p.x, q.x)
    assert np.array_equal(p.curvature, q.curvature)


def test_json_roundtrip(tmp_path):
    p = yy.integrate_profile(5.0, margin=2.0)
    f1 = tmp_path / "a.json"
    f2 = tmp_path / "b.json"
    yy.profile_to_json(p, f1)
    q = yy.profile_from_json(f1)
    yy.profile_to_json(q, f2)
    assert f1.read_bytes() == f2.read_bytes()
    assert q.tol == p.tol
    assert q.s_max == p.s_max


def test_reconstructed_accumulators(tmp_path):
    p = yy.integrate_profile(100.0, margin=5.0)
    path = tmp_path / "p.csv"
    yy.profile_to_csv(p, path)
    q = yy.profile_from_csv(path)
    # Closed form <F,N> = -int_0^s H^2 holds exactly for the reconstruction
    # and within integrator error for the carried accumulator.
    fn = q.y * q.tx - q.x * q.ty
    assert np.max(np.abs(fn + q.h2_integral)) == 0.0
    assert np.max(np.abs(p.h2_integral - q.h2_integral)) <= 1e-7
    assert np.max(np.abs(p.polar_angle - q.polar_angle)) <= 1e-8


def test_integration_failure_reported():
    with pytest.raises(yy.IntegrationError):
        yy.integrate_profile(10.0, tol=1e-20, margin=1.0)


def test_input_validation():
    with pytest.raises(ValueError):
        yy.integrate_profile(-1.0)
    with pytest.raises(ValueError):
        yy.integrate_profile(10.0, step=0.0)
