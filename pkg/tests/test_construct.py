"""Construction tests: chord frame, cap placement, junctions, frozen sites."""

import math

import numpy as np
import pytest

from csflab import construct as cn
from csflab import flow as fl
from csflab import reaper as rp

SCALES = ["admissible_200", "admissible_1e3", "admissible_1e4"]
PROFILE_OF = {
    "admissible_200": "profile_200",
    "admissible_1e3": "profile_1e3",
    "admissible_1e4": "profile_1e4",
}

# Site landmarks measured once from the frozen construction pipeline.
FROZEN = {
    "admissible_200": dict(
        width=0.36412739788610793,
        sigma=227.12107523931192,
        slide=0.017787933499855413,
        s_tangency=-199.66161304982728,
        sigma_crossing=226.63643807865697,
        rotation=1.9941388762288172,
        tangency_height=2.9176235931370442,
        crossing_height=4.17738139543137,
        max_rescaled=0.9988439671539532,
        glue_max=0.3441270407754108,
        blend_max=0.05406200809582167,
        area=117.03023932167908,
        n_vertices=9327,
    ),
    "admissible_1e3": dict(
        width=0.2161366217794787,
        sigma=1045.6671295371839,
        slide=0.00516403779008634,
        s_tangency=-999.7399326418049,
        sigma_crossing=1045.3236059338055,
        rotation=2.72864236912938,
        tangency_height=3.779723403016545,
        crossing_height=4.992404627183543,
        max_rescaled=0.9996738480465062,
        glue_max=0.15614776919806153,
        blend_max=0.022829004985811054,
        area=331.9029094633422,
        n_vertices=41728,
    ),
    "admissible_1e4": dict(
        width=0.10093817824279362,
        sigma=10097.77905167127,
        slide=0.0007975466265328635,
        s_tangency=-9999.837082144511,
        sigma_crossing=10097.577582364835,
        rotation=1.0222284248488165,
        tangency_height=5.070603986145539,
        crossing_height=6.270448500946186,
        max_rescaled=0.9996179888697133,
        glue_max=0.04374693414488382,
        blend_max=0.006278626791756141,
        area=1521.636289146669,
        n_vertices=402807,
    ),
}

# Height-ratio diagnostics measured at the same three scales, ordered by
# growing |s|.  The squared-height ratio moves away from 1 because the
# slide shifts the built crossing off the model's unslid intersection; the
# model's own ratio and the height pair ratio close in on 1.
TANGENCY_RATIOS = [0.7250101034966037, 0.7836642040447379, 0.8336930933479606]
CROSSING_RATIOS = [7.641857225736339, 8.688010004501574, 10.729996420599344]
PAIR_RATIOS = [0.6984336159317244, 0.7570947640013045, 0.8086509259075175]
MODEL_RATIOS = [1.000145434976501, 1.0000746781696381, 1.0000134052414336]

REL = 1e-5


def relclose(a, b, rel=REL):
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)


@pytest.fixture(params=SCALES)
def built(request):
    adm = request.getfixturevalue(request.param)
    profile = request.getfixturevalue(PROFILE_OF[request.param])
    return adm, profile, FROZEN[request.param]


def test_positive_anchor_rejected(profile_200):
    with pytest.raises(cn.ConstructionError):
        cn.build_admissible(profile_200, 200.0)


def test_below_floor_rejected(profile_200):
    with pytest.raises(cn.ConstructionError):
        cn.build_admissible(profile_200, -150.0)


def test_chord_frame(profile_200):
    chord = cn.select_chord(profile_200, -200.0)
    a = np.asarray(chord.a_point)
    b = np.asarray(chord.b_point)
    assert abs(a[0]) <= 1e-10
    assert abs(b[0]) <= 1e-9 * max(1.0, float(np.hypot(*b)))
    assert a[1] > 0.0
    # Orientation regression fact: the outer endpoint sits above the inner.
    assert b[1] > a[1]
    assert relclose(float(np.hypot(*(b - a))), chord.width, rel=1e-9)
    assert relclose(chord.outer_radius - chord.inner_radius, chord.width, 1e-9)


def test_site_frozen(built):
    adm, _, want = built
    st = adm.site
    assert relclose(st.width, want["width"])
    assert relclose(st.sigma, want["sigma"])
    assert relclose(st.slide, want["slide"])
    assert relclose(st.s_tangency, want["s_tangency"])
    assert relclose(st.sigma_crossing, want["sigma_crossing"])
    assert relclose(st.rotation, want["rotation"])
    assert relclose(st.tangency_height_rescaled, want["tangency_height"])
    assert relclose(st.crossing_height_rescaled, want["crossing_height"])
    assert relclose(st.max_rescaled_curvature, want["max_rescaled"])
    assert relclose(st.glue_max_rescaled, want["glue_max"])
    assert relclose(st.blend_max_rescaled, want["blend_max"])


def test_interval_ordering(built):
    adm, _, _ = built
    st = adm.site
    assert st.s < st.s_tangency < 0.0 < st.sigma_crossing < st.sigma
    assert st.blend_wall_arc < 0.0 < st.glue_wall_arc < st.sigma_crossing
    assert st.cap_blend_arc < 0.0 < st.cap_glue_arc
    assert st.slide > 0.0


def test_landmarks_on_cap(built):
    adm, _, _ = built
    st = adm.site
    p = np.asarray(rp.arclength_point(adm.pose, st.cap_blend_arc))
    q_arc = st.cap_glue_arc + st.width
    q = np.asarray(rp.arclength_point(adm.pose, q_arc))
    assert float(np.hypot(*(p - np.asarray(st.tangency_point)))) <= 1e-8
    assert float(np.hypot(*(q - np.asarray(st.crossing_point)))) <= 1e-8


def test_tangency_and_transversality(built):
    adm, profile, _ = built
    st = adm.site
    c, s_ = math.cos(st.rotation), math.sin(st.rotation)
    rot = np.array([[c, -s_], [s_, c]])

    def wall_tangent(s):
        tx, ty = profile.tangent(s)
        return rot @ np.array([float(tx), float(ty)])

    t_wall = wall_tangent(st.s_tangency)
    t_cap = np.asarray(rp.arclength_tangent(adm.pose, st.cap_blend_arc))
    sine = abs(t_wall[0] * t_cap[1] - t_wall[1] * t_cap[0])
    assert sine <= 1e-8

    t_wall = wall_tangent(st.sigma_crossing)
    q_arc = st.cap_glue_arc + st.width
    t_cap = np.asarray(rp.arclength_tangent(adm.pose, q_arc))
    sine = abs(t_wall[0] * t_cap[1] - t_wall[1] * t_cap[0])
    assert sine >= 1e-6


def test_heights_from_landmarks(built):
    adm, _, _ = built
    st = adm.site
    lam = math.pi / st.width
    assert relclose(st.tangency_height_rescaled, lam * abs(st.tangency_point[0]), 1e-12)
    assert relclose(st.crossing_height_rescaled, lam * abs(st.crossing_point[0]), 1e-12)


def test_junction_turning_budget(built):
    adm, _, _ = built
    v = adm.curve.vertices
    k = adm.curvatures
    n = len(v)
    for sl in adm.piece_slices.values():
        j = sl.start
        idx = [(j + d) % n for d in range(-3, 4)]
        turns, lens = [], []
        for i in idx:
            a, b, c = v[(i - 1) % n], v[i], v[(i + 1) % n]
            e1, e2 = b - a, c - b
            cross = e1[0] * e2[1] - e1[1] * e2[0]
            turns.append(abs(math.atan2(cross, float(np.dot(e1, e2)))))
            lens.append(max(float(np.hypot(*e1)), float(np.hypot(*e2))))
        kmax = max(abs(float(k[i])) for i in idx)
        assert max(turns) <= 2.0 * kmax * max(lens) + 1e-8


def test_rescaled_curvature_budget(built):
    adm, _, _ = built
    st = adm.site
    assert st.glue_max_rescaled <= 1.0
    assert st.blend_max_rescaled <= 1.0
    assert 0.5 <= st.max_rescaled_curvature <= 1.0


def test_structure(built):
    adm, _, want = built
    assert adm.inflection_count == 2
    assert adm.embedded
    assert fl.inflection_count(adm.curve) == 2
    assert cn.radial_tangency_count(adm.curve) == 2
    assert relclose(adm.curve.area(), want["area"])
    assert abs(len(adm.curve.vertices) - want["n_vertices"]) <= 2


def test_containment(built):
    adm, profile, _ = built
    assert cn.containment_check(adm, profile)


def test_asymptotics_frozen(admissible_200, admissible_1e3, admissible_1e4):
    reports = [
        cn.tangency_asymptotics(adm.site)
        for adm in (admissible_200, admissible_1e3, admissible_1e4)
    ]
    for rep, t, c, p, m in zip(
        reports, TANGENCY_RATIOS, CROSSING_RATIOS, PAIR_RATIOS, MODEL_RATIOS
    ):
        assert relclose(rep["tangency_ratio"], t)
        assert relclose(rep["crossing_ratio"], c)
        assert relclose(rep["pair_ratio"], p)
        assert relclose(rep["crossing_ratio_model"], m)
        assert rep["crossing_root_residual"] <= 1e-10

    tangency = [r["tangency_ratio"] for r in reports]
    pair = [r["pair_ratio"] for r in reports]
    crossing = [r["crossing_ratio"] for r in reports]
    model = [r["crossing_ratio_model"] for r in reports]
    # Tangency and pair ratios close in on 1 from below as |s| grows.
    assert tangency[0] < tangency[1] < tangency[2] < 1.0
    assert pair[0] < pair[1] < pair[2] < 1.0
    # The model's own ratio closes in on 1 from above.
    assert model[0] > model[1] > model[2] > 1.0
    # The built crossing sits above the unslid model intersection, and the
    # gap grows with scale; frozen as a regression fact.
    assert 1.0 < crossing[0] < crossing[1] < crossing[2]


def test_crossing_model_root_large_scale():
    z, residual = cn.crossing_model_root(1e6)
    assert residual <= 1e-8
    assert 0.0 < z < 0.5 * math.pi
    # Closure identity of the defining equation.
    height = math.sqrt(2.0 * 1e6 * z - z * z)
    assert relclose(math.sin(z), math.exp(-height), 1e-10)


def test_independent_sites_share_profile(profile_1e3):
    first = cn.build_admissible(profile_1e3, -1e3)
    second = cn.build_admissible(profile_1e3, -990.0)
    assert first.site.width > second.site.width * 0.9
    assert second.inflection_count == 2
    assert second.embedded
    assert first.site.s != second.site.s
