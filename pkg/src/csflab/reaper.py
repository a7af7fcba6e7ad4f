"""Grim Reaper translating soliton in an arbitrary pose.

In tip-local coordinates (e along the opening axis, n = i e across it) the
curve is the graph

    e-offset = -(1/lam) log cos(lam u),   |u| < pi / (2 lam),

translating with speed lam along the axis under curve shortening.  Its width
between asymptotes is pi / lam and its curvature at cross-offset u is
lam cos(lam u).  The arclength parametrization from the tip is closed form:

    u(t) = atan(sinh(lam t)) / lam,   e-offset(t) = log cosh(lam t) / lam,

with unit tangent (tanh(lam t), sech(lam t)) in the (e, n) basis and
curvature lam sech(lam t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PlaneCurve


@dataclass(frozen=True)
class ReaperPose:
    lam: float
    tip: tuple[float, float]
    axis: tuple[float, float]
    clip: float = 0.995

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError("lam must be positive")
        if not 0.0 < self.clip < 1.0:
            raise ValueError("clip must lie in (0, 1)")
        ax, ay = self.axis
        norm = math.hypot(ax, ay)
        if norm == 0.0:
            raise ValueError("axis must be a nonzero vector")
        object.__setattr__(self, "axis", (ax / norm, ay / norm))
        object.__setattr__(self, "tip", (float(self.tip[0]), float(self.tip[1])))

    @property
    def perp(self) -> tuple[float, float]:
        ax, ay = self.axis
        return (-ay, ax)

    @property
    def half_width(self) -> float:
        return math.pi / (2.0 * self.lam)

    @property
    def width(self) -> float:
        return math.pi / self.lam

    def clip_offset(self) -> float:
        return self.clip * self.half_width

    def clip_arclength(self) -> float:
        return math.asinh(math.tan(self.lam * self.clip_offset())) / self.lam


def _frame(pose: ReaperPose, e_off, n_off):
    ax, ay = pose.axis
    nx, ny = pose.perp
    return (
        pose.tip[0] + e_off * ax + n_off * nx,
        pose.tip[1] + e_off * ay + n_off * ny,
    )


def reaper_point(pose: ReaperPose, u):
    """Point at cross-offset u from the axis; u must stay inside the clip."""
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) >= pose.clip_offset()):
        raise ValueError(
            f"|u| must stay below clip * half width = {pose.clip_offset():g}"
        )
    e_off = -np.log(np.cos(pose.lam * u)) / pose.lam
    return _frame(pose, e_off, u)


def reaper_curvature(pose: ReaperPose, u):
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) >= pose.half_width):
        raise ValueError("|u| must stay below the half width")
    return pose.lam * np.cos(pose.lam * u)


def soliton_reference(pose: ReaperPose, dt: float) -> ReaperPose:
    """Exact curve-shortening evolution: translate by lam * dt along the axis."""
    ax, ay = pose.axis
    return ReaperPose(
        lam=pose.lam,
        tip=(pose.tip[0] + pose.lam * dt * ax, pose.tip[1] + pose.lam * dt * ay),
        axis=pose.axis,
        clip=pose.clip,
    )


def arclength_point(pose: ReaperPose, t):
    """Point at signed arclength t from the tip (positive toward +n)."""
    t = np.asarray(t, dtype=float)
    lt = pose.lam * t
    u = np.arctan(np.sinh(lt)) / pose.lam
    e_off = np.log(np.cosh(lt)) / pose.lam
    return _frame(pose, e_off, u)


def arclength_tangent(pose: ReaperPose, t):
    t = np.asarray(t, dtype=float)
    lt = pose.lam * t
    ax, ay = pose.axis
    nx, ny = pose.perp
    te = np.tanh(lt)
    tn = 1.0 / np.cosh(lt)
    return (te * ax + tn * nx, te * ay + tn * ny)


def arclength_curvature(pose: ReaperPose, t):
    t = np.asarray(t, dtype=float)
    return pose.lam / np.cosh(pose.lam * t)


def arclength_to_offset(pose: ReaperPose, t):
    """Cross-offset u reached at signed arclength t from the tip."""
    return np.arctan(np.sinh(pose.lam * np.asarray(t, dtype=float))) / pose.lam


def offset_to_arclength(pose: ReaperPose, u):
    """Signed arclength from the tip at cross-offset u."""
    return np.arcsinh(np.tan(pose.lam * np.asarray(u, dtype=float))) / pose.lam


def reaper_chunk(pose: ReaperPose, h: float) -> PlaneCurve:
    """Open polyline over the clipped width, uniform in arclength.

    Traversed from +n to -n so the discrete curvature is positive and the
    curve-shortening velocity kappa N at the tip equals lam * axis.
    """
    t_max = pose.clip_arclength()
    n = max(int(round(2.0 * t_max / h)), 8)
    t = np.linspace(t_max, -t_max, n + 1)
    x, y = arclength_point(pose, t)
    return PlaneCurve(np.column_stack([x, y]), closed=False, resample_h=h)
