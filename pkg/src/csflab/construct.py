"""Assembly of the closed two-inflection initial curve inside the corridor.

The construction places a translating-soliton cap across a radial chord of
the corridor, slides it inward until it touches the inner wall tangentially,
and joins cap and walls with C2 pieces: a quintic Hermite graph on the outer
side and a normal-offset handoff riding the inner wall.  Everything is
computed in a rotated frame where the chord lies on the positive y axis.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import PlaneCurve
from .reaper import (
    ReaperPose,
    arclength_curvature,
    arclength_point,
    offset_to_arclength,
)
from .yinyang import YinYangProfile, corridor_width

log = logging.getLogger(__name__)

# Sampling controls for the assembled polygon.
WALL_STEP = 0.05
GLUE_SAMPLES = 256
BLEND_SAMPLES = 512

# Calibrated floor on |s|: below it the glue pieces start to crowd the
# corridor and the rescaled-curvature budget is not guaranteed.
MIN_ANCHOR_ABS_S = 200.0


class ConstructionError(RuntimeError):
    """A construction step failed its geometric postcondition."""


@dataclass(frozen=True)
class ChordSite:
    """Radial corridor chord in the rotated working frame.

    The rotation puts the inner chord endpoint (on the s < 0 arm) at
    (0, inner_radius) and the outer endpoint (on the s > 0 arm) directly
    above it at (0, inner_radius + width).
    """

    s: float
    sigma: float
    width: float
    rotation: float
    inner_radius: float
    outer_radius: float

    @property
    def lam(self) -> float:
        """Decay rate of the cap soliton spanning the chord."""
        return math.pi / self.width

    @property
    def a_point(self) -> tuple[float, float]:
        return (0.0, self.inner_radius)

    @property
    def b_point(self) -> tuple[float, float]:
        return (0.0, self.outer_radius)


@dataclass(frozen=True)
class ConstructionSite:
    """All landmarks of one finished construction (rotated frame).

    Arclengths refer to the wall curve except the ones prefixed `cap_`,
    which are signed arclengths along the cap with zero at its tip and the
    outer flank positive.
    """

    s: float
    sigma: float
    width: float
    rotation: float
    slide: float
    s_tangency: float
    sigma_crossing: float
    tangency_point: tuple[float, float]
    crossing_point: tuple[float, float]
    tangency_height_rescaled: float
    crossing_height_rescaled: float
    glue_wall_arc: float
    cap_glue_arc: float
    cap_blend_arc: float
    blend_wall_arc: float
    max_rescaled_curvature: float
    glue_max_rescaled: float
    blend_max_rescaled: float


@dataclass(frozen=True)
class AdmissibleCurve:
    curve: PlaneCurve
    site: ConstructionSite
    pose: ReaperPose
    curvatures: np.ndarray
    piece_slices: dict
    inflection_count: int
    embedded: bool
    corner_point: tuple[float, float] | None


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def select_chord(profile: YinYangProfile, s: float) -> ChordSite:
    """Radial chord through F(s), s < 0, rotated onto the positive y axis."""
    q = corridor_width(profile, s)
    xa, ya = profile.point(s)
    rotation = 0.5 * math.pi - math.atan2(float(ya), float(xa))
    rot = _rotation(rotation)
    a = rot @ np.array([float(xa), float(ya)])
    xb, yb = profile.point(q.sigma)
    b = rot @ np.array([float(xb), float(yb)])
    # A is exact by construction of the rotation; B carries the angular
    # error of the partner solve, which scales with the radius.
    if abs(float(a[0])) > 1e-10:
        raise ConstructionError("chord anchor left the rotated axis")
    if abs(float(b[0])) > 1e-9 * max(1.0, float(np.hypot(*b))):
        raise ConstructionError("chord partner left the rotated axis")
    return ChordSite(
        s=q.s,
        sigma=q.sigma,
        width=q.width,
        rotation=rotation,
        inner_radius=float(a[1]),
        outer_radius=float(b[1]),
    )


class _WallFrame:
    """Rotated-frame evaluators for the wall curve."""

    def __init__(self, profile: YinYangProfile, site: ChordSite):
        self.profile = profile
        self.rot = _rotation(site.rotation)

    def point(self, s):
        x, y = self.profile.point(s)
        return self.rot @ np.array([float(x), float(y)])

    def points(self, s: np.ndarray) -> np.ndarray:
        x, y = self.profile.point(s)
        return np.column_stack([x, y]) @ self.rot.T

    def tangent(self, s):
        tx, ty = self.profile.tangent(s)
        return self.rot @ np.array([float(tx), float(ty)])

    def curvature(self, s) -> float:
        return float(self.profile.curvature_at(s))


def _lower_flank_height(x, lam: float, tip_y: float):
    """Height of the cap's inner flank as a graph over x >= 0."""
    return tip_y - np.arccos(np.exp(-lam * np.asarray(x, dtype=float))) / lam


def _upper_flank_height(x, lam: float, tip_y: float):
    return tip_y + np.arccos(np.exp(-lam * np.asarray(x, dtype=float))) / lam


def place_and_slide(
    profile: YinYangProfile, site: ChordSite
) -> tuple[ReaperPose, tuple[float, float], float, float]:
    """Slide the cap down the chord until it first touches the inner wall.

    The cap starts with its flank asymptotes through the chord endpoints
    and its tip on the chord; sliding down by c lowers every flank point
    by exactly c, so the first-touch offset equals the smallest vertical
    gap at zero slide.  Returns (pose, touch point, touch arclength, slide).
    """
    wall = _WallFrame(profile, site)
    lam = site.lam
    mid = 0.5 * (site.inner_radius + site.outer_radius)
    w = site.width

    def gap(s):
        p = wall.point(s)
        if p[0] <= 0.0:
            return float(mid - p[1])
        return float(_lower_flank_height(p[0], lam, mid) - p[1])

    def flank_dir_at(x):
        e = math.exp(-lam * x)
        slope = -e / math.sqrt(max(1.0 - e * e, 1e-300))
        d = np.array([1.0, slope])
        return d / math.hypot(*d)

    def sine(s):
        # Cross product of wall tangent and flank direction; proportional
        # to the gap derivative, so its root is the vertical-gap minimum.
        p = wall.point(s)
        t = wall.tangent(s)
        d = flank_dir_at(max(float(p[0]), 0.0))
        return float(t[0] * d[1] - t[1] * d[0])

    # The wall leaves the chord toward the origin with increasing x, so
    # the touch candidate window sits at arclengths above the anchor.
    lo = site.s + 1e-9
    hi = site.s + 8.0 * w
    scan = np.linspace(lo, hi, 4001)
    vals = np.array([gap(v) for v in scan])
    k = int(np.argmin(vals))
    if k == 0 or k == len(scan) - 1:
        raise ConstructionError("wall tangency fell outside the scan window")
    a, b = scan[k - 1], scan[k + 1]
    if sine(a) * sine(b) >= 0.0:
        a, b = scan[k - 2], scan[k + 2]
    if sine(a) * sine(b) >= 0.0:
        raise ConstructionError("gap minimum did not bracket a tangency")
    s_touch = float(brentq(sine, a, b, xtol=1e-10))
    slide = gap(s_touch)
    if slide <= 0.0:
        raise ConstructionError("cap already overlaps the wall before sliding")
    pose = ReaperPose(lam=lam, tip=(0.0, mid - slide), axis=(1.0, 0.0))
    p = wall.point(s_touch)
    touch = (float(p[0]), float(p[1]))
    if abs(sine(s_touch)) > 1e-8:
        raise ConstructionError(
            f"tangency misaligned: |sin| = {abs(sine(s_touch)):.2e}"
        )
    if not site.s < s_touch < 0.0:
        raise ConstructionError("tangency arclength out of order")
    return pose, touch, s_touch, slide


def first_intersection(
    profile: YinYangProfile, site: ChordSite, pose: ReaperPose
) -> tuple[tuple[float, float], float]:
    """First transverse crossing of the outer flank with the outer wall.

    Scanned from the chord toward the origin; the flank starts below the
    wall at the chord and ends above it once the wall has curled inward,
    so there is exactly one sign change in the window.
    """
    wall = _WallFrame(profile, site)
    lam = site.lam
    tip_y = pose.tip[1]
    w = site.width

    def gap(sig):
        p = wall.point(sig)
        if p[0] <= 0.0:
            return float(tip_y - p[1])
        return float(_upper_flank_height(p[0], lam, tip_y) - p[1])

    lo = site.sigma - 8.0 * w
    hi = site.sigma - 1e-9
    scan = np.linspace(lo, hi, 2001)
    vals = np.array([gap(v) for v in scan])
    signs = np.sign(vals)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]
    if len(flips) != 1:
        raise ConstructionError(
            f"expected one flank-wall crossing, found {len(flips)}"
        )
    k = int(flips[0])
    sigma_cross = float(brentq(gap, scan[k], scan[k + 1], xtol=1e-10))
    p = wall.point(sigma_cross)
    q_point = (float(p[0]), float(p[1]))
    if not 0.0 < sigma_cross < site.sigma:
        raise ConstructionError("crossing arclength out of order")

    # Transversality at the crossing.
    e = math.exp(-lam * q_point[0])
    flank_slope = e / math.sqrt(max(1.0 - e * e, 1e-300))
    flank_dir = np.array([1.0, flank_slope])
    flank_dir /= math.hypot(*flank_dir)
    t = wall.tangent(sigma_cross)
    sine = abs(float(t[0] * flank_dir[1] - t[1] * flank_dir[0]))
    if sine < 1e-6:
        raise ConstructionError(f"crossing not transverse: |sin| = {sine:.2e}")
    return q_point, sigma_cross


def _cap_arc_of_x(x: float, lam: float, branch: float) -> float:
    """Signed cap arclength at axis distance x; branch +1 outer, -1 inner."""
    u = branch * math.acos(math.exp(-lam * x)) / lam
    return float(offset_to_arclength(ReaperPose(lam, (0.0, 0.0), (1.0, 0.0)), u))


def _cap_state(pose: ReaperPose, arc: float):
    """Position, traversal tangent and curvature at signed cap arclength.

    Traversal runs from the outer flank over the tip to the inner flank
    (decreasing arc coordinate), which orients the cap with positive
    curvature; arclength_tangent points the other way, so negate.
    """
    lam = pose.lam
    p = np.asarray(arclength_point(pose, arc), dtype=float)
    th = math.tanh(lam * arc)
    sh = 1.0 / math.cosh(lam * arc)
    axis = np.asarray(pose.axis, dtype=float)
    perp = np.array([-axis[1], axis[0]])
    tan = -(th * axis + sh * perp)
    return p, tan / np.hypot(*tan), float(arclength_curvature(pose, arc))


def _quintic_graph(length, m0, m1, q0, q1):
    """Quintic y(x) on [0, length] with y = 0 at both ends and the given
    slopes and second derivatives."""
    ell = length
    mat = np.array(
        [
            [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 2.0, 0.0, 0.0],
            [ell**5, ell**4, ell**3, ell**2, ell, 1.0],
            [5 * ell**4, 4 * ell**3, 3 * ell**2, 2 * ell, 1.0, 0.0],
            [20 * ell**3, 12 * ell**2, 6 * ell, 2.0, 0.0, 0.0],
        ]
    )
    rhs = np.array([0.0, m0, q0, 0.0, m1, q1])
    return np.linalg.solve(mat, rhs)


def glue_positive(
    profile: YinYangProfile,
    site: ChordSite,
    pose: ReaperPose,
    sigma_cross: float,
) -> dict:
    """C2 graph joint from the outer wall onto the outer cap flank.

    Both junctions sit one chord-width along their host curves from the
    crossing.  The joint is a quintic over the junction chord matching
    position, tangent and curvature at both ends; its rescaled curvature
    must stay at or below one.
    """
    wall = _WallFrame(profile, site)
    w = site.width
    lam = site.lam

    sigma_v = sigma_cross - w
    v_pos = wall.point(sigma_v)
    v_tan = wall.tangent(sigma_v)
    v_kap = wall.curvature(sigma_v)

    x_q = wall.point(sigma_cross)[0]
    cap_q = _cap_arc_of_x(float(x_q), lam, branch=1.0)
    cap_u = cap_q - w
    u_pos, u_tan, u_kap = _cap_state(pose, cap_u)

    chord = u_pos - v_pos
    length = float(np.hypot(*chord))
    ex = chord / length
    ey = np.array([-ex[1], ex[0]])

    def graph_state(tan, kap):
        tx = float(tan @ ex)
        ty = float(tan @ ey)
        chi = math.copysign(1.0, tx)
        if chi < 0.0:
            raise ConstructionError("glue host tangent opposes the chord")
        slope = ty / tx
        second = kap * (1.0 + slope * slope) ** 1.5
        return slope, second

    m0, q0 = graph_state(v_tan, v_kap)
    m1, q1 = graph_state(u_tan, u_kap)
    coeff = _quintic_graph(length, m0, m1, q0, q1)
    dcoeff = np.polyder(coeff)
    ddcoeff = np.polyder(dcoeff)

    xs = np.linspace(0.0, length, GLUE_SAMPLES + 1)
    ys = np.polyval(coeff, xs)
    slopes = np.polyval(dcoeff, xs)
    seconds = np.polyval(ddcoeff, xs)
    kap = seconds / (1.0 + slopes**2) ** 1.5
    pts = v_pos[None, :] + xs[:, None] * ex[None, :] + ys[:, None] * ey[None, :]

    rescaled = float(np.max(np.abs(kap))) * w / math.pi
    if rescaled > 1.0 + 1e-9:
        raise ConstructionError(
            f"outer joint rescaled curvature {rescaled:.6f} exceeds 1; "
            "the anchor |s| is too small for this construction"
        )

    # The joint must stay inside both host tangent half-planes.
    for tan, base, other in ((v_tan, v_pos, u_pos), (u_tan, u_pos, v_pos)):
        side = float(tan[0] * (other - base)[1] - tan[1] * (other - base)[0])
        rel = pts - base[None, :]
        cross = tan[0] * rel[:, 1] - tan[1] * rel[:, 0]
        if float(np.min(cross * np.sign(side))) < -1e-9 * w:
            raise ConstructionError("outer joint left its tangent wedge")

    corner = _tangent_corner(v_pos, v_tan, u_pos, u_tan)
    if corner is not None:
        gap_to_chord = abs(
            float((corner - v_pos) @ ey)
        )
        if gap_to_chord > 10.0 * w:
            log.info(
                "tangent corner sits %.3g chord widths out", gap_to_chord / w
            )
    return {
        "points": pts,
        "curvatures": kap,
        "sigma_v": float(sigma_v),
        "cap_u": float(cap_u),
        "max_rescaled": rescaled,
        "corner": None if corner is None else (float(corner[0]), float(corner[1])),
    }


def _tangent_corner(p0, t0, p1, t1):
    """Intersection of the two junction tangent lines, if well posed."""
    mat = np.column_stack([t0, -t1])
    det = float(np.linalg.det(mat))
    if abs(det) < 1e-12:
        log.info("junction tangents near parallel; corner skipped")
        return None
    ab = np.linalg.solve(mat, p1 - p0)
    return p0 + ab[0] * t0


def glue_negative(
    profile: YinYangProfile,
    site: ChordSite,
    pose: ReaperPose,
    s_touch: float,
) -> dict:
    """C2 handoff from the inner cap flank onto the inner wall.

    The cap is kept all the way to the tangency point, where position and
    tangent already agree with the wall; only the curvature jumps there.
    The handoff continues as a normal-offset graph over the wall,

        offset(u) = (jump / 2) u^2 exp(-u / tau) (1 - u / L)^3,

    whose second derivative at u = 0 absorbs the curvature jump and whose
    value, slope and second derivative all vanish at the landing, so both
    junctions are C2 with no free parameters.  The offset is positive on
    the open window, which keeps the handoff strictly inside the corridor.
    The exponential keeps the far tail of the second derivative a small
    fraction of the jump, so the curvature stays below the wall value
    there and crosses zero exactly once, just past the tangency.
    """
    wall = _WallFrame(profile, site)
    w = site.width
    lam = site.lam

    x_p = wall.point(s_touch)[0]
    cap_p = _cap_arc_of_x(float(x_p), lam, branch=-1.0)
    kap_cap_p = float(arclength_curvature(pose, cap_p))
    kap_wall_p = wall.curvature(s_touch)
    jump = kap_cap_p - kap_wall_p
    if jump <= 0.0:
        raise ConstructionError("cap does not exceed the wall curvature")

    length = 2.0 * w
    tau = length / 10.0
    s_land = s_touch + length
    if s_land >= 0.0:
        raise ConstructionError("handoff window reaches past the origin")

    u = np.linspace(0.0, length, BLEND_SAMPLES + 1)
    v = u / length
    r = 1.0 - v
    c = 0.5 * jump
    env = np.exp(-u / tau)
    eta = c * u * u * env * r**3
    # First and second u-derivatives of u^2 exp(-u/tau) (1-v)^3, closed form.
    g = env * r**3
    dg = -env * r * r * (r / tau + 3.0 / length)
    ddg = env * (
        r**3 / tau**2 + 6.0 * r * r / (tau * length) + 6.0 * r / length**2
    )
    deta = c * (2.0 * u * g + u * u * dg)
    ddeta = c * (2.0 * g + 4.0 * u * dg + u * u * ddg)

    s_grid = s_touch + u
    wall_pts = wall.points(s_grid)
    tx, ty = profile.tangent(s_grid)
    tans = np.column_stack([tx, ty]) @ wall.rot.T
    norms = np.column_stack([-tans[:, 1], tans[:, 0]])
    kap_wall = np.asarray(profile.curvature_at(s_grid), dtype=float)
    dkap_wall = np.asarray(
        (profile.curvature_at(s_grid + 1e-5) - profile.curvature_at(s_grid - 1e-5))
        / 2e-5,
        dtype=float,
    )
    pts = wall_pts + eta[:, None] * norms

    # Curvature of the normal-offset graph gamma = W + eta N.
    m = 1.0 - eta * kap_wall
    kap = (
        m * m * kap_wall + m * ddeta + 2.0 * deta * deta * kap_wall
        + eta * deta * dkap_wall
    ) / (m * m + deta * deta) ** 1.5

    mismatch = abs(kap[0] - kap_cap_p)
    if mismatch > 1e-10 * max(1.0, lam):
        raise ConstructionError(
            f"handoff start curvature off by {mismatch:.2e}"
        )
    signs = np.sign(kap[np.abs(kap) > 1e-12])
    crossings = int(np.sum(signs[:-1] != signs[1:]))
    if crossings != 1:
        raise ConstructionError(
            f"inner handoff has {crossings} curvature crossings, wanted 1"
        )
    rescaled = float(np.max(np.abs(kap))) * w / math.pi
    if rescaled > 1.0 + 1e-9:
        raise ConstructionError("inner handoff curvature exceeds the cap scale")
    return {
        "points": pts,
        "curvatures": kap,
        "cap_b": float(cap_p),
        "s_land": float(s_land),
        "max_offset": float(np.max(eta)),
        "max_rescaled": rescaled,
    }


def radial_tangency_count(
    curve: PlaneCurve, transversal: float = 0.05, radius_floor: float = 1e-2
) -> int:
    """Count sign changes of <position x tangent> around the curve.

    Vertices closer to the origin than radius_floor, or with near-radial
    alignment below the transversality threshold, are skipped; a sign flip
    across a skipped stretch still counts once, so the degenerate passage
    through the origin is counted as one tangency.
    """
    v = curve.vertices
    t = curve.tangents()
    r = np.hypot(v[:, 0], v[:, 1])
    c = v[:, 0] * t[:, 1] - v[:, 1] * t[:, 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(r > 0.0, c / np.maximum(r, 1e-300), 0.0)
    keep = (r >= radius_floor) & (np.abs(c) >= transversal)
    signs = np.sign(c[keep])
    if len(signs) < 2:
        return 0
    flips = int(np.sum(signs[:-1] != signs[1:]))
    if curve.closed and signs[-1] != signs[0]:
        flips += 1
    return flips


def build_admissible(profile: YinYangProfile, s: float) -> AdmissibleCurve:
    """Run the full construction at anchor arclength s < 0.

    Returns the assembled closed curve (rotated frame, positively oriented)
    with per-vertex host curvatures, all site landmarks, and the structural
    check results (embeddedness, inflection count, containment is checked
    separately by callers that need it).
    """
    if not s < 0.0:
        raise ConstructionError("anchor arclength must be negative")
    if -s < MIN_ANCHOR_ABS_S:
        raise ConstructionError(
            f"anchor |s| = {-s:g} below the calibrated floor {MIN_ANCHOR_ABS_S:g}"
        )
    site = select_chord(profile, s)
    wall = _WallFrame(profile, site)
    pose, touch, s_touch, slide = place_and_slide(profile, site)
    q_point, sigma_cross = first_intersection(profile, site, pose)
    outer = glue_positive(profile, site, pose, sigma_cross)
    inner = glue_negative(profile, site, pose, s_touch)

    lam = site.lam
    w = site.width

    # Wall portion: from the blend landing through the origin to the outer
    # junction, sampled at the profile grid scale with exact endpoints.
    s_land = inner["s_land"]
    sigma_v = outer["sigma_v"]
    n_wall = max(int(math.ceil((sigma_v - s_land) / WALL_STEP)), 8)
    wall_s = np.linspace(s_land, sigma_v, n_wall + 1)
    wall_pts = wall.points(wall_s)
    wall_kap = np.asarray(profile.curvature_at(wall_s), dtype=float)

    # Cap portion: outer junction over the tip to the inner handoff.
    cap_hi = outer["cap_u"]
    cap_lo = inner["cap_b"]
    n_cap = max(int(math.ceil((cap_hi - cap_lo) * lam / 0.1)), 16)
    cap_arcs = np.linspace(cap_hi, cap_lo, n_cap + 1)
    cap_pts = np.array(
        [arclength_point(pose, float(a)) for a in cap_arcs]
    )
    cap_kap = np.array(
        [arclength_curvature(pose, float(a)) for a in cap_arcs]
    )

    def weld(tail, head, tol):
        gap = float(np.hypot(*(head[0] - tail[-1])))
        if gap > tol:
            raise ConstructionError(f"junction gap {gap:.2e} exceeds {tol:g}")
        return head[1:]

    tol = 1e-8 * max(1.0, site.outer_radius)
    glue_trim = weld(wall_pts, outer["points"], tol)
    cap_trim = weld(outer["points"], cap_pts, tol)
    blend_trim = weld(cap_pts, inner["points"], tol)
    pieces = [
        ("wall", wall_pts, wall_kap),
        ("outer_glue", glue_trim, outer["curvatures"][1:]),
        ("cap", cap_trim, cap_kap[1:]),
        ("inner_blend", blend_trim, inner["curvatures"][1:]),
    ]
    closure = float(np.hypot(*(inner["points"][-1] - wall_pts[0])))
    if closure > tol:
        raise ConstructionError(f"loop failed to close: gap {closure:.2e}")
    # The final blend sample duplicates the wall start; drop it.
    pieces[-1] = ("inner_blend", blend_trim[:-1], inner["curvatures"][1:-1])

    verts = np.vstack([p for _, p, _ in pieces])
    kaps = np.concatenate([k for _, _, k in pieces])
    slices = {}
    at = 0
    for name, p, _ in pieces:
        slices[name] = slice(at, at + len(p))
        at += len(p)

    curve = PlaneCurve(verts, closed=True, resample_h=WALL_STEP)
    if curve.area() <= 0.0:
        raise ConstructionError("assembled loop is not positively oriented")
    embedded = curve.is_embedded()

    active = kaps[np.abs(kaps) > 1e-12]
    signs = np.sign(active)
    inflections = int(np.sum(signs[:-1] != signs[1:]))
    if signs[-1] != signs[0]:
        inflections += 1

    m_observed = float(np.max(np.abs(kaps))) * w / math.pi
    site_full = ConstructionSite(
        s=site.s,
        sigma=site.sigma,
        width=w,
        rotation=site.rotation,
        slide=slide,
        s_tangency=s_touch,
        sigma_crossing=sigma_cross,
        tangency_point=touch,
        crossing_point=q_point,
        tangency_height_rescaled=lam * abs(touch[0]),
        crossing_height_rescaled=lam * abs(q_point[0]),
        glue_wall_arc=outer["sigma_v"],
        cap_glue_arc=outer["cap_u"],
        cap_blend_arc=inner["cap_b"],
        blend_wall_arc=inner["s_land"],
        max_rescaled_curvature=m_observed,
        glue_max_rescaled=outer["max_rescaled"],
        blend_max_rescaled=inner["max_rescaled"],
    )
    return AdmissibleCurve(
        curve=curve,
        site=site_full,
        pose=pose,
        curvatures=kaps,
        piece_slices=slices,
        inflection_count=inflections,
        embedded=embedded,
        corner_point=outer["corner"],
    )


def to_profile_frame(admissible: AdmissibleCurve) -> PlaneCurve:
    """The assembled curve expressed in the profile's own frame.

    The construction works in a frame rotated so the chord lies on the
    positive y axis; flow runs and corridor queries expect the original
    frame of the spiral profile.
    """
    rot = _rotation(-admissible.site.rotation)
    verts = admissible.curve.vertices @ rot.T
    return PlaneCurve(
        verts, closed=True, resample_h=admissible.curve.resample_h
    )


def containment_check(
    admissible: AdmissibleCurve,
    profile: YinYangProfile,
    band: float = 1e-7,
    wall_stride: int = 50,
) -> bool:
    """All hand-built vertices, and a stride of wall vertices, in corridor.

    Wall vertices are exact wall samples, inside by construction up to
    interpolation error, so checking a stride keeps large builds fast.
    """
    slices = admissible.piece_slices
    v = admissible.curve.vertices
    hand = np.vstack(
        [v[slices[name]] for name in ("outer_glue", "cap", "inner_blend")]
    )
    rot = _rotation(-admissible.site.rotation)
    inside = profile.corridor_contains_batch(hand @ rot.T, band=band)
    if not bool(np.all(inside)):
        return False
    wall_sample = v[slices["wall"]][::wall_stride]
    inside = profile.corridor_contains_batch(wall_sample @ rot.T, band=band)
    return bool(np.all(inside))


def crossing_model_root(ratio_scale: float) -> tuple[float, float]:
    """Root z of sqrt(2 R z - z^2) = -log sin z on (0, pi/2), with residual.

    R = ratio_scale. The left side vanishes at 0+ while -log sin z blows
    up, and at pi/2 the left side is positive while the right vanishes,
    so the bracket always holds for R > pi/4.
    """

    def f(z):
        return math.sqrt(2.0 * ratio_scale * z - z * z) + math.log(math.sin(z))

    z = brentq(f, 1e-12, 0.5 * math.pi - 1e-12, xtol=1e-14)
    return z, abs(f(z))


def tangency_asymptotics(site: ConstructionSite) -> dict:
    """Scale diagnostics of the tangency and crossing heights.

    Includes the model prediction for the crossing height from the
    circle-against-flank equation sqrt(2 R z - z^2) = -log sin z with
    R = (pi / width)^2, solved by bracketed root finding.
    """
    w = site.width
    ratio_scale = math.pi * math.pi / (w * w)
    lam_t = site.tangency_height_rescaled
    lam_c = site.crossing_height_rescaled
    z, residual = crossing_model_root(ratio_scale)
    predicted = math.sqrt(2.0 * ratio_scale * z - z * z)
    return {
        "width": w,
        "tangency_height": lam_t,
        "crossing_height": lam_c,
        "tangency_ratio": lam_t * math.exp(lam_t) / ratio_scale,
        "crossing_ratio": lam_c * lam_c * math.exp(lam_c) / (2.0 * ratio_scale),
        "pair_ratio": lam_t / lam_c,
        "crossing_root": z,
        "crossing_root_residual": residual,
        "crossing_height_predicted": predicted,
        "crossing_ratio_model": (
            predicted * predicted * math.exp(predicted) / (2.0 * ratio_scale)
        ),
        "crossing_vs_predicted": lam_c / predicted,
    }
