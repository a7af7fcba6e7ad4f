"""Hyperbolic barrier graphs over the rotating soliton.

The barrier is the rotating graph Gamma(s,t) = e^{it} (F(s) + phi(s,t) N(s))
over the soliton profile, where phi is a pair of exponential humps whose
feet sit lambda * w inside the two arm reaches of a tracked curve:

    phi = psi + eta,
    psi = (lam_minus * w) exp[-a (left + s)],
    eta = (lam_plus  * w) exp[-a (right - s)],
    a   = pi (1 - eps) / w.

The module evaluates the linearization A, the quadratic correction Q, the
exact graph residual of the supersolution inequality, the closed endpoint
algebra, finite-difference drift margins along a monitored flow, and the
geometric reports (barrier inside a closed curve, reaper stability near the
tip).  Everything is pure given an immutable profile; array inputs
broadcast through every evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from .flow import FlowState
from .yinyang import YinYangProfile

TAU = 2.0 * math.pi


class BarrierConfigError(ValueError):
    """Barrier parameters violate a structural invariant."""


@dataclass(frozen=True)
class BarrierParams:
    """Frozen shape of the barrier at one instant.

    left and right are the arclengths of the hump feet, lam * w inside the
    tracked arm reaches arm_minus and arm_plus; the hump height is
    lam_minus * w (left) and lam_plus * w (right), and 1/a equals that
    height under the default lam_minus = lam_plus = 1 / (pi (1 - eps)).
    """

    eps: float
    w: float
    arm_minus: float
    arm_plus: float
    lam_plus: float
    lam_minus: float
    lam: float
    a: float
    left: float
    right: float

    @classmethod
    def from_tip(
        cls,
        eps: float,
        w: float,
        arm_minus: float,
        arm_plus: float,
        lam_plus: float | None = None,
        lam_minus: float | None = None,
        lam: float | None = None,
    ) -> "BarrierParams":
        if not 0.0 <= eps < 1.0:
            raise BarrierConfigError(f"eps = {eps:g} outside [0, 1)")
        if not w > 0.0:
            raise BarrierConfigError(f"width {w:g} must be positive")
        scale = math.pi * (1.0 - eps)
        if lam_plus is None:
            lam_plus = 1.0 / scale
        if lam_minus is None:
            lam_minus = 1.0 / scale
        if lam is None:
            lam = 100.0 / scale
        params = cls(
            eps=eps,
            w=w,
            arm_minus=arm_minus,
            arm_plus=arm_plus,
            lam_plus=lam_plus,
            lam_minus=lam_minus,
            lam=lam,
            a=scale / w,
            left=arm_minus - lam * w,
            right=arm_plus - lam * w,
        )
        params.validate()
        return params

    def validate(self) -> None:
        if not self.left < self.right:
            raise BarrierConfigError(
                f"degenerate span: left {self.left:g} >= right {self.right:g}"
            )
        floor = math.exp(-self.lam)
        if not (self.lam_plus > floor and self.lam_minus > floor):
            raise BarrierConfigError(
                "hump heights must exceed exp(-lam); got "
                f"{self.lam_minus:g}, {self.lam_plus:g} vs {floor:g}"
            )
        if abs(self.a * self.w - math.pi * (1.0 - self.eps)) > 1e-12:
            raise BarrierConfigError("decay rate a inconsistent with width")


@dataclass(frozen=True)
class BarrierRates:
    """Time derivatives of (a, left, right), supplied by the tracked flow."""

    a_dot: float = 0.0
    left_dot: float = 0.0
    right_dot: float = 0.0


@dataclass(frozen=True)
class PhiBundle:
    """phi and its derivatives at the sample points, humps kept separate."""

    phi: np.ndarray
    phi_s: np.ndarray
    phi_ss: np.ndarray
    phi_t: np.ndarray
    psi: np.ndarray
    eta: np.ndarray

    def scaled(self, c: float) -> "PhiBundle":
        return PhiBundle(
            phi=c * self.phi,
            phi_s=c * self.phi_s,
            phi_ss=c * self.phi_ss,
            phi_t=c * self.phi_t,
            psi=c * self.psi,
            eta=c * self.eta,
        )


def phi_bundle(
    params: BarrierParams, s, rates: BarrierRates | None = None
) -> PhiBundle:
    """Closed-form phi, phi_s, phi_ss and phi_t at arclengths s.

    phi_t uses the supplied rates; with rates omitted the barrier is held
    still and phi_t is zero.
    """
    if rates is None:
        rates = BarrierRates()
    s = np.asarray(s, dtype=float)
    a = params.a
    psi = params.lam_minus * params.w * np.exp(-a * (params.left + s))
    eta = params.lam_plus * params.w * np.exp(-a * (params.right - s))
    # d/dt of lam * w = lam * w_dot and w = pi(1-eps)/a, so the prefactor
    # contributes -a_dot/a just like the default 1/a height.
    psi_t = psi * (
        -rates.a_dot / a
        - rates.a_dot * (params.left + s)
        - a * rates.left_dot
    )
    eta_t = eta * (
        -rates.a_dot / a
        - rates.a_dot * (params.right - s)
        - a * rates.right_dot
    )
    return PhiBundle(
        phi=psi + eta,
        phi_s=-a * psi + a * eta,
        phi_ss=a * a * (psi + eta),
        phi_t=psi_t + eta_t,
        psi=psi,
        eta=eta,
    )


def _profile_terms(profile: YinYangProfile, s):
    s = np.asarray(s, dtype=float)
    h = np.asarray(profile.curvature_at(s), dtype=float)
    fn = np.asarray(profile.position_normal_component(s), dtype=float)
    return h, fn


def a_op(profile: YinYangProfile, bundle: PhiBundle, s):
    """Linearized graph operator: phi_t - phi_ss + phi_s <F,N> - phi H^2."""
    h, fn = _profile_terms(profile, s)
    return bundle.phi_t - bundle.phi_ss + bundle.phi_s * fn - bundle.phi * h * h


def q_op(profile: YinYangProfile, bundle: PhiBundle, s):
    """Quadratic correction: -H (3 phi A + 2 phi phi_ss + phi_s^2 + phi^2 H^2)."""
    h, _ = _profile_terms(profile, s)
    lin = a_op(profile, bundle, s)
    return -h * (
        3.0 * bundle.phi * lin
        + 2.0 * bundle.phi * bundle.phi_ss
        + bundle.phi_s**2
        + bundle.phi**2 * h * h
    )


def combined_identity_gap(profile: YinYangProfile, bundle: PhiBundle, s):
    """Relative gap of A+Q against its rearranged form.

    The rearrangement pulls the 3 phi A piece out of Q:
    A+Q = (1 - 3 phi H) A - H (2 phi phi_ss + phi_s^2 + phi^2 H^2).
    """
    h, _ = _profile_terms(profile, s)
    lin = a_op(profile, bundle, s)
    lhs = lin + q_op(profile, bundle, s)
    rhs = (1.0 - 3.0 * bundle.phi * h) * lin - h * (
        2.0 * bundle.phi * bundle.phi_ss
        + bundle.phi_s**2
        + bundle.phi**2 * h * h
    )
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    return np.abs(lhs - rhs) / np.maximum(scale, 1e-300)


def hump_ratio_symbolic(
    profile: YinYangProfile,
    params: BarrierParams,
    rates: BarrierRates,
    s,
    side: str = "left",
):
    """A(psi)/psi (or A(eta)/eta) from the independent symbolic form.

    For the left hump:  -a_dot/a - a_dot (left + s) - a left_dot
                        - a^2 - a <F,N> - H^2;
    the right hump mirrors the drift terms and flips the sign of the
    first-derivative coupling.
    """
    s = np.asarray(s, dtype=float)
    h, fn = _profile_terms(profile, s)
    a = params.a
    if side == "left":
        drift = (
            -rates.a_dot / a
            - rates.a_dot * (params.left + s)
            - a * rates.left_dot
        )
        coupling = -a * fn
    elif side == "right":
        drift = (
            -rates.a_dot / a
            - rates.a_dot * (params.right - s)
            - a * rates.right_dot
        )
        coupling = a * fn
    else:
        raise ValueError(f"unknown side {side!r}")
    return drift - a * a + coupling - h * h


def full_residual(profile: YinYangProfile, bundle: PhiBundle, s):
    """Exact residual of the supersolution inequality for the graph.

    G = |Gamma_s|^2 <Gamma_t, i Gamma_s> - <Gamma_ss, i Gamma_s>, assembled
    from the closed forms

        Gamma_s  = (1 - phi H) T + phi_s N,
        Gamma_ss = (-2 phi_s H - phi H_s) T + ((1 - phi H) H + phi_ss) N,
        H_s      = 1 + H <F,N>,

    with <F,T> taken from the integrated profile rather than through the
    identity <F,T> = H, so that phi = 0 reproduces the soliton's own
    residual (zero up to integrator tolerance) instead of an algebraic
    zero.
    """
    s = np.asarray(s, dtype=float)
    fx, fy = profile.point(s)
    tx, ty = profile.tangent(s)
    h, fn = _profile_terms(profile, s)
    ft = np.asarray(fx, dtype=float) * np.asarray(tx, dtype=float)
    ft = ft + np.asarray(fy, dtype=float) * np.asarray(ty, dtype=float)
    h_s = 1.0 + h * fn

    p = bundle.phi * h
    q = bundle.phi_s
    speed2 = (1.0 - p) ** 2 + q * q
    gamma_t_i_gamma_s = (
        (1.0 - p) * ft
        + q * fn
        + bundle.phi * q
        + bundle.phi_t * (1.0 - p)
    )
    gamma_ss_i_gamma_s = (
        2.0 * q * q * h
        + bundle.phi * q * h_s
        + (1.0 - p) ** 2 * h
        + (1.0 - p) * bundle.phi_ss
    )
    return speed2 * gamma_t_i_gamma_s - gamma_ss_i_gamma_s


def truncation_exponent(
    profile: YinYangProfile,
    bundle: PhiBundle,
    s,
    scales=(1.0, 0.5, 0.25, 0.125),
) -> float:
    """Fitted power of |G - (A+Q)| under uniform scaling of the bundle.

    The remainder collects the cubic and higher terms of the graph
    expansion, so the fitted exponent sits at three or above until the
    scaled remainder reaches the profile's own noise floor.
    """
    s = np.asarray(s, dtype=float)
    gaps = []
    for c in scales:
        scaled = bundle.scaled(float(c))
        lin = a_op(profile, scaled, s)
        quad = q_op(profile, scaled, s)
        gap = full_residual(profile, scaled, s) - (lin + quad)
        gaps.append(float(np.max(np.abs(gap))))
    logs = np.log(np.asarray(scales, dtype=float))
    vals = np.log(np.asarray(gaps, dtype=float))
    slope = np.polyfit(logs, vals, 1)[0]
    return float(slope)


# -- endpoint algebra -------------------------------------------------------


def endpoint_terms(a, phi, side: str = "right"):
    """The endpoint quartic and its factored form.

    With the effective endpoint substitutions (phi one pure hump,
    phi_s = +-a phi, phi_ss = a^2 phi, H = +-1/a) the residual collapses to

        (10/a^2) phi - sgn 3a phi^2 + a^4 phi^3 - sgn a^3 phi^4
      = phi (1/a^2 + (3/a - sgn a^2 phi / 2)^2 + a^3 phi^2 (3a/4 - sgn phi))

    where sgn is +1 at the right endpoint and -1 at the left.  Both forms
    are returned; they agree algebraically and the factored one shows
    nonnegativity term by term whenever phi <= 1/a.
    """
    if side == "right":
        sgn = 1.0
    elif side == "left":
        sgn = -1.0
    else:
        raise ValueError(f"unknown side {side!r}")
    a = np.asarray(a, dtype=float)
    phi = np.asarray(phi, dtype=float)
    quartic = (
        10.0 / a**2 * phi
        - sgn * 3.0 * a * phi**2
        + a**4 * phi**3
        - sgn * a**3 * phi**4
    )
    factored = phi * (
        1.0 / a**2
        + (3.0 / a - sgn * 0.5 * a**2 * phi) ** 2
        + a**3 * phi**2 * (0.75 * a - sgn * phi)
    )
    return quartic, factored


def endpoint_check(
    n: int = 100, a_range: tuple[float, float] = (10.0, 1e3)
) -> dict:
    """Grid sweep of the endpoint algebra over a in a_range, phi in (0, 1/a].

    The grid is log-spaced in a and in the product phi * a, covering the
    effective endpoint regime on both sides.  Reports the worst relative
    gap between the two forms, the minimum value (nonnegativity), and the
    order audit at phi = 1/a: the cubic term grows like a while the linear
    term decays like 1/a^3.
    """
    a = np.logspace(math.log10(a_range[0]), math.log10(a_range[1]), n)
    frac = np.logspace(-6.0, 0.0, n)  # phi * a from 1e-6 up to 1
    aa, ff = np.meshgrid(a, frac, indexing="ij")
    phi = ff / aa

    worst_gap = 0.0
    min_value = math.inf
    for side in ("left", "right"):
        quartic, factored = endpoint_terms(aa, phi, side=side)
        scale = np.maximum(np.abs(quartic), np.abs(factored))
        gap = np.abs(quartic - factored) / np.maximum(scale, 1e-300)
        worst_gap = max(worst_gap, float(np.max(gap)))
        min_value = min(min_value, float(np.min(factored)))

    phi_edge = 1.0 / a
    cubic_term = a**4 * phi_edge**3
    linear_term = 10.0 / a**2 * phi_edge
    return {
        "grid": int(n),
        "max_relative_gap": worst_gap,
        "min_value": min_value,
        "nonnegative": bool(min_value >= 0.0),
        "cubic_over_a": (float(np.min(cubic_term / a)), float(np.max(cubic_term / a))),
        "linear_times_a3": (
            float(np.min(linear_term * a**3)),
            float(np.max(linear_term * a**3)),
        ),
    }


# -- drift rates from a monitored run ---------------------------------------


def _quadratic_slope(ts, ys) -> float:
    """Derivative at the last of three samples from the interpolating parabola."""
    t0, t1, t2 = ts
    y0, y1, y2 = ys
    d01 = (y1 - y0) / (t1 - t0)
    d12 = (y2 - y1) / (t2 - t1)
    curv = (d12 - d01) / (t2 - t0)
    return d12 + curv * (t2 - t1)


def rates_from_rows(rows: list[dict], eps: float, lam: float | None = None):
    """Backward finite-difference rates at each monitor row.

    Returns arrays (t, a, a_dot, left_dot, right_dot, w, w_dot, arm_minus,
    arm_plus); the first two rows repeat the earliest computable slope.
    Rows must carry tip_width, arm_minus and arm_plus.
    """
    usable = [r for r in rows if "tip_width" in r]
    if len(usable) < 3:
        raise ValueError("need three monitor rows with tip data for rates")
    t = np.array([r["t"] for r in usable])
    w = np.array([r["tip_width"] for r in usable])
    lm = np.array([r["arm_minus"] for r in usable])
    lp = np.array([r["arm_plus"] for r in usable])
    if lam is None:
        lam = 100.0 / (math.pi * (1.0 - eps))
    a = math.pi * (1.0 - eps) / w

    def slopes(y):
        out = np.empty_like(y)
        for i in range(2, len(y)):
            out[i] = _quadratic_slope(t[i - 2 : i + 1], y[i - 2 : i + 1])
        out[0] = out[1] = out[2]
        return out

    w_dot = slopes(w)
    a_dot = -math.pi * (1.0 - eps) * w_dot / w**2
    left_dot = slopes(lm) - lam * w_dot
    right_dot = slopes(lp) - lam * w_dot
    return {
        "t": t,
        "w": w,
        "w_dot": w_dot,
        "a": a,
        "a_dot": a_dot,
        "arm_minus": lm,
        "arm_plus": lp,
        "arm_minus_dot": slopes(lm),
        "arm_plus_dot": slopes(lp),
        "left_dot": left_dot,
        "right_dot": right_dot,
        "lam": float(lam),
    }


def drift_report(
    profile: YinYangProfile, rows: list[dict], eps: float
) -> dict:
    """Margins of the monitored drift inequalities along a tracked run.

    All four bounds are checked with profile quantities at the tracked tip
    arclength -arm_minus:

      arm sweep:   -d(arm_minus)/dt >= <F,N> + a sqrt(1 - H^2/|F|^2)
      widening:    dw/dt            >= w^3 / pi^2
      foot drift:  -a d(left)/dt    >= a^2 + a <F,N> + 10/a^2
      decay decel: -da/dt           >= (1-eps)^2 / a

    plus the convexity scan: a |<F,N>| + H^2 over the barrier span attains
    its minimum at s = 0.  Margins are (measured - required); every entry
    should be positive on a healthy run.
    """
    rates = rates_from_rows(rows, eps)
    s_tip = -rates["arm_minus"]
    h, fn = _profile_terms(profile, s_tip)
    radius = np.asarray(profile.radius(s_tip), dtype=float)
    a = rates["a"]

    proj = np.sqrt(np.maximum(0.0, 1.0 - (h / radius) ** 2))
    arm_margin = -rates["arm_minus_dot"] - (fn + a * proj)
    widen_margin = rates["w_dot"] - rates["w"] ** 3 / math.pi**2
    widen_margin_eps = rates["w_dot"] - (1.0 - eps) ** 3 / a**3
    foot_margin = -a * rates["left_dot"] - (a * a + a * fn + 10.0 / a**2)
    decel_margin = -rates["a_dot"] - (1.0 - eps) ** 2 / a

    # Convexity scan at the final sample's span.
    lam = rates["lam"]
    left = rates["arm_minus"][-1] - lam * rates["w"][-1]
    right = rates["arm_plus"][-1] - lam * rates["w"][-1]
    grid = np.linspace(-left, right, 4001)
    hg, fng = _profile_terms(profile, grid)
    landscape = a[-1] * np.abs(fng) + hg * hg
    k_min = int(np.argmin(landscape))

    return {
        "t": rates["t"],
        "arm_sweep_margin": arm_margin,
        "widening_margin": widen_margin,
        "widening_margin_eps_form": widen_margin_eps,
        "foot_drift_margin": foot_margin,
        "decay_decel_margin": decel_margin,
        "min_margins": {
            "arm_sweep": float(np.min(arm_margin)),
            "widening": float(np.min(widen_margin)),
            "widening_eps_form": float(np.min(widen_margin_eps)),
            "foot_drift": float(np.min(foot_margin)),
            "decay_decel": float(np.min(decel_margin)),
        },
        "convexity_argmin_arclength": float(grid[k_min]),
        "convexity_min_at_zero": bool(
            abs(grid[k_min]) <= (grid[1] - grid[0]) * 1.5
        ),
        "rates": rates,
    }


def interior_positivity(
    profile: YinYangProfile,
    params: BarrierParams,
    rates: BarrierRates,
    n: int = 4001,
) -> dict:
    """Certified positivity of the full residual across the barrier span.

    phi underflows to zero over most of the span, so the raw residual there
    is integrator noise around zero and proves nothing.  Instead the
    residual is bounded from below through quantities that never underflow:

        A  =  psi (A psi / psi)  +  eta (A eta / eta)  >=  phi m(s),
        A + Q  =  (1 - 3 phi H) A  -  H (2 phi phi_ss + phi_s^2 + phi^2 H^2)
               >=  phi [ (1 - 3 phi |H|) m(s)  -  |H| phi (3 a^2 + H^2) ],

    where m(s) is the pointwise minimum of the two closed-form hump ratios
    and |phi_s| <= a phi, phi_ss = a^2 phi were used.  The bracket is the
    certified margin; phi itself enters only multiplicatively and is
    evaluated in log space, so an underflowed phi yields margin = m(s).
    """
    s = np.linspace(-params.left, params.right, n)
    h, _ = _profile_terms(profile, s)
    a = params.a
    r_left = hump_ratio_symbolic(profile, params, rates, s, side="left")
    r_right = hump_ratio_symbolic(profile, params, rates, s, side="right")
    m = np.minimum(r_left, r_right)

    log_psi = math.log(params.lam_minus * params.w) - a * (params.left + s)
    log_eta = math.log(params.lam_plus * params.w) - a * (params.right - s)
    phi = np.exp(np.logaddexp(log_psi, log_eta))

    margin = (1.0 - 3.0 * phi * np.abs(h)) * m - np.abs(h) * phi * (
        3.0 * a * a + h * h
    )
    k = int(np.argmin(margin))
    return {
        "min_ratio_left": float(np.min(r_left)),
        "min_ratio_right": float(np.min(r_right)),
        "min_margin": float(margin[k]),
        "binding_arclength": float(s[k]),
        "positive_certified": bool(np.min(margin) > 0.0),
        "max_phi": float(np.max(phi)),
    }


# -- the barrier curve and geometric reports --------------------------------


@dataclass(frozen=True)
class BarrierCurve:
    params: BarrierParams
    t: float
    s: np.ndarray
    vertices: np.ndarray  # fixed (derotated) frame
    bundle: PhiBundle


def build_barrier(
    profile: YinYangProfile,
    params: BarrierParams,
    t: float = 0.0,
    rates: BarrierRates | None = None,
    n: int = 4001,
) -> BarrierCurve:
    """Sample Gamma = F + phi N over the span [-left, right].

    Vertices are kept in the fixed frame of the profile; rotating by t
    is the caller's concern when comparing against a rotating scene.
    phi > 0 everywhere on the span, so the samples sit strictly inside
    the corridor side the normal points into.
    """
    s = np.linspace(-params.left, params.right, n)
    bundle = phi_bundle(params, s, rates)
    fx, fy = profile.point(s)
    nx, ny = profile.normal(s)
    verts = np.column_stack(
        [
            np.asarray(fx, dtype=float) + bundle.phi * np.asarray(nx, dtype=float),
            np.asarray(fy, dtype=float) + bundle.phi * np.asarray(ny, dtype=float),
        ]
    )
    return BarrierCurve(params=params, t=t, s=s, vertices=verts, bundle=bundle)


def _winding_inside(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd ray crossing test, vectorized in chunks."""
    x1 = polygon[:, 0]
    y1 = polygon[:, 1]
    x2 = np.roll(x1, -1)
    y2 = np.roll(y1, -1)
    inside = np.zeros(len(points), dtype=bool)
    chunk = max(1, int(4e6) // max(1, len(polygon)))
    for lo in range(0, len(points), chunk):
        px = points[lo : lo + chunk, 0][:, None]
        py = points[lo : lo + chunk, 1][:, None]
        straddle = (y1 > py) != (y2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_cross = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        hits = straddle & (px < x_cross)
        inside[lo : lo + chunk] = np.sum(hits, axis=1) % 2 == 1
    return inside


def _distance_to_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Distance from each point to the closed polyline, exact via segments.

    A KD-tree on the vertices prunes the candidate segments; the exact
    point-segment distance then runs on the pruned neighborhoods.
    """
    tree = cKDTree(polygon)
    d_vertex, idx = tree.query(points, k=1)
    here = polygon[idx]
    nxt = polygon[(idx + 1) % len(polygon)]
    prv = polygon[(idx - 1) % len(polygon)]
    out = np.asarray(d_vertex, dtype=float)
    for seg_a, seg_b in ((here, nxt), (prv, here)):
        d = seg_b - seg_a
        le2 = np.sum(d * d, axis=1)
        frac = np.sum((points - seg_a) * d, axis=1) / np.maximum(le2, 1e-300)
        frac = np.clip(frac, 0.0, 1.0)
        foot = seg_a + frac[:, None] * d
        dist = np.hypot(*(points - foot).T)
        out = np.minimum(out, dist)
    return out


def _derotated_polygon(state: FlowState) -> np.ndarray:
    c, sn = math.cos(-state.t), math.sin(-state.t)
    v = state.curve.vertices
    return np.column_stack(
        [c * v[:, 0] - sn * v[:, 1], sn * v[:, 0] + c * v[:, 1]]
    )


def barrier_inside(
    barrier: BarrierCurve, state: FlowState, band: float = 0.0
) -> bool:
    """Every barrier sample inside the closed curve, within band.

    band absorbs the chord sag of the polygon against the smooth curve it
    samples; strict containment is band = 0.
    """
    if not state.curve.closed:
        raise ValueError("containment requires a closed curve")
    polygon = _derotated_polygon(state)
    inside = _winding_inside(barrier.vertices, polygon)
    if np.all(inside):
        return True
    if band <= 0.0:
        return False
    outliers = barrier.vertices[~inside]
    dist = _distance_to_polygon(outliers, polygon)
    return bool(np.all(dist <= band))


def containment_report(
    barrier: BarrierCurve, state: FlowState, margin_scale: float | None = None
) -> dict:
    """Signed clearance of the barrier samples against the closed curve.

    Clearance is positive inside; the marginal flag trips when the least
    clearance falls below margin_scale (default: the curve's mesh size),
    which is the §-style warning that containment is within discretization
    error of failing.
    """
    polygon = _derotated_polygon(state)
    inside = _winding_inside(barrier.vertices, polygon)
    dist = _distance_to_polygon(barrier.vertices, polygon)
    signed = np.where(inside, dist, -dist)
    if margin_scale is None:
        margin_scale = float(np.median(state.curve.edge_lengths()))
    worst = int(np.argmin(signed))
    return {
        "min_clearance": float(signed[worst]),
        "argmin_arclength": float(barrier.s[worst]),
        "samples_outside": int(np.sum(~inside)),
        "marginal": bool(signed[worst] < margin_scale),
        "margin_scale": float(margin_scale),
    }


def stability_report(
    state: FlowState,
    profile: YinYangProfile,
    radius_mult: float = 1000.0,
    window_height: float = math.pi,
) -> dict:
    """Closeness of the tip neighborhood to the standard translating soliton.

    The neighborhood (ball of radius radius_mult * w around the tracked
    tip) is rescaled by pi/w and aligned so the tip sits at the origin
    advancing along +y; the contiguous vertex run inside the comparison
    window (|x| < pi/2, y below window_height) is measured against the
    graph y = -log cos x in C0 (nearest distance) and C1 (tangent angle at
    the projection foot).  Curvature is reported rescaled by w/pi: at the
    tip it should sit near 1, and away from the neighborhood it should
    stay below the configured ceiling.
    """
    if state.tip is None or state.tip_width is None:
        raise ValueError("tip not tracked; run track_tip first")
    w = state.tip_width
    tip = np.asarray(state.tip)
    verts = _derotated_polygon(state)
    kap = state.curve.curvatures()

    # Advance direction -iF/|F| at the tip, rotated to +y.
    r = math.hypot(*tip)
    d = np.array([tip[1], -tip[0]]) / r
    beta = math.atan2(d[1], d[0])
    rot = math.pi / 2.0 - beta
    c, sn = math.cos(rot), math.sin(rot)
    rel = verts - tip
    z = np.column_stack(
        [c * rel[:, 0] - sn * rel[:, 1], sn * rel[:, 0] + c * rel[:, 1]]
    ) * (math.pi / w)

    in_ball = np.hypot(z[:, 0], z[:, 1]) <= radius_mult * math.pi
    ball_covers = bool(np.all(in_ball))

    # Contiguous run around the tip inside the comparison window.
    n = len(z)
    i0 = int(np.argmin(np.hypot(z[:, 0], z[:, 1])))
    ok = (
        (np.abs(z[:, 0]) < math.pi / 2.0 - 1e-6)
        & (z[:, 1] < window_height)
        & in_ball
    )
    run = [i0]
    j = i0
    while True:
        j = (j + 1) % n
        if j == i0 or not ok[j]:
            break
        run.append(j)
    j = i0
    while True:
        j = (j - 1) % n
        if j == i0 or not ok[j]:
            break
        run.insert(0, j)
    run = np.asarray(run)
    zx = z[run, 0]
    zy = z[run, 1]

    xs = np.linspace(-math.pi / 2.0 + 1e-4, math.pi / 2.0 - 1e-4, 6001)
    reaper = np.column_stack([xs, -np.log(np.cos(xs))])
    tree = cKDTree(reaper)
    dist, foot = tree.query(np.column_stack([zx, zy]), k=1)
    c0 = float(np.max(dist))

    tang = state.curve.tangents()[run]
    ct, st_ = math.cos(rot - state.t), math.sin(rot - state.t)
    tang = np.column_stack(
        [ct * tang[:, 0] - st_ * tang[:, 1], st_ * tang[:, 0] + ct * tang[:, 1]]
    )
    angles = np.arctan2(tang[:, 1], tang[:, 0])
    # The graph's tangent (1, tan x) has polar angle x; fold both angles
    # to [0, pi) to ignore traversal orientation.
    want = np.mod(xs[foot], math.pi)
    got = np.mod(angles, math.pi)
    diff = np.abs(got - want)
    c1 = float(np.max(np.minimum(diff, math.pi - diff)))

    rescale = w / math.pi
    tip_curv = float(abs(kap[i0]) * rescale)
    away = ~in_ball
    away_max = float(np.max(np.abs(kap[away])) * rescale) if np.any(away) else None
    return {
        "c0": c0,
        "c1": c1,
        "tip_curvature_rescaled": tip_curv,
        "max_rescaled_curvature": float(np.max(np.abs(kap)) * rescale),
        "away_max_rescaled_curvature": away_max,
        "ball_covers_curve": ball_covers,
        "run_vertices": int(len(run)),
        "window_height": float(window_height),
    }
