"""Self-contained SVG rendering of constructions and flow frames.

Every drawing is deterministic byte for byte: coordinates are emitted in
fixed 6-decimal format, there are no timestamps, ids or external
references, and styles are inline.  Geometry is mapped to screen
coordinates (y flipped) while building the path data, so the documents
carry no transforms.
"""
from __future__ import annotations

import math

import numpy as np

from .construct import AdmissibleCurve, _cap_state, _rotation
from .flow import FlowState
from .yinyang import YinYangProfile

PIECE_COLORS = {
    "wall": "#1f2430",
    "outer_glue": "#d97706",
    "cap": "#2563eb",
    "inner_blend": "#059669",
}
WALL_COLOR = "#9aa3b2"
LABEL_COLOR = "#111111"


def _fmt(x: float) -> str:
    out = f"{x:.6f}"
    return "0.000000" if out == "-0.000000" else out


def _path(points: np.ndarray, closed: bool = False) -> str:
    coords = [f"{_fmt(x)},{_fmt(-y)}" for x, y in points]
    return "M " + " L ".join(coords) + (" Z" if closed else "")


def _polyline(points, color, width, closed=False, dash=None) -> str:
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<path d="{_path(np.asarray(points), closed)}" fill="none" '
        f'stroke="{color}" stroke-width="{_fmt(width)}"{dash_attr} '
        'stroke-linecap="round" stroke-linejoin="round"/>'
    )


def _label(name: str, point, size: float, radius: float) -> str:
    x, y = float(point[0]), -float(point[1])
    return (
        f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radius)}" '
        f'fill="{LABEL_COLOR}"/>'
        f'<text x="{_fmt(x + 1.6 * radius)}" y="{_fmt(y - 1.6 * radius)}" '
        f'font-family="monospace" font-size="{_fmt(size)}" '
        f'fill="{LABEL_COLOR}">{name}</text>'
    )


def _panel(x, y, w, h, viewbox, body: str) -> str:
    vb = " ".join(_fmt(v) for v in viewbox)
    return (
        f'<svg x="{x}" y="{y}" width="{w}" height="{h}" viewBox="{vb}" '
        f'preserveAspectRatio="xMidYMid meet">{body}</svg>'
    )


def _bbox(points: np.ndarray, pad: float):
    lo = points.min(axis=0) - pad
    hi = points.max(axis=0) + pad
    # Screen coordinates flip y, so the box top is -hi_y.
    return (lo[0], -hi[1], hi[0] - lo[0], hi[1] - lo[1])


def construction_landmarks(
    profile: YinYangProfile, admissible: AdmissibleCurve
) -> dict:
    """Labeled points of the finished construction in the working frame."""
    site = admissible.site
    rot = _rotation(site.rotation)

    def wall(arc: float):
        p = rot @ np.asarray(profile.point(arc), dtype=float)
        return (float(p[0]), float(p[1]))

    u_point, _, _ = _cap_state(admissible.pose, site.cap_glue_arc)
    marks = {
        "A": wall(site.s),
        "B": wall(site.sigma),
        "P": site.tangency_point,
        "Q": site.crossing_point,
        "U": (float(u_point[0]), float(u_point[1])),
        "V": wall(site.glue_wall_arc),
    }
    if admissible.corner_point is not None:
        marks["W"] = admissible.corner_point
    return marks


def render_construction(
    profile: YinYangProfile, admissible: AdmissibleCurve
) -> str:
    """Two-panel drawing: the whole curve, and a zoom on the tip chord.

    Walls are drawn as context in grey; the assembled pieces keep one
    color each (wall trace, outer glue, cap, inner blend); the landmark
    points A, B, P, Q, U, V, W are labeled in the zoom panel where they
    are resolvable.
    """
    site = admissible.site
    rot = _rotation(site.rotation)
    verts = admissible.curve.vertices
    marks = construction_landmarks(profile, admissible)

    wall_arcs = np.concatenate(
        [
            np.linspace(1.02 * site.s, -0.05, 800),
            np.linspace(0.05, 1.02 * site.sigma, 800),
        ]
    )
    fx, fy = profile.point(wall_arcs)
    walls = np.column_stack([fx, fy]) @ rot.T
    neg_wall = walls[:800]
    pos_wall = walls[800:]

    def scene(width_unit: float) -> str:
        parts = [
            _polyline(neg_wall, WALL_COLOR, 0.8 * width_unit, dash=f"{_fmt(4 * width_unit)} {_fmt(3 * width_unit)}"),
            _polyline(pos_wall, WALL_COLOR, 0.8 * width_unit, dash=f"{_fmt(4 * width_unit)} {_fmt(3 * width_unit)}"),
        ]
        for name in ("wall", "outer_glue", "cap", "inner_blend"):
            piece = verts[admissible.piece_slices[name]]
            parts.append(_polyline(piece, PIECE_COLORS[name], 1.4 * width_unit))
        return "".join(parts)

    # Full view.
    full_box = _bbox(verts, pad=0.06 * float(np.ptp(verts, axis=0).max()))
    unit_full = full_box[2] / 400.0
    full = scene(unit_full)

    # Zoom on the chord: window spanning the glue region around A..B.
    focus = np.array(
        [marks[k] for k in ("A", "B", "P", "Q", "U", "V") if k in marks]
    )
    span = max(float(np.ptp(focus, axis=0).max()), site.width) * 1.7
    center = focus.mean(axis=0)
    zoom_box = (
        center[0] - span / 2.0,
        -center[1] - span / 2.0,
        span,
        span,
    )
    unit_zoom = span / 400.0
    zoom_parts = [scene(unit_zoom)]
    for name, point in sorted(marks.items()):
        zoom_parts.append(
            _label(name, point, size=10.0 * unit_zoom, radius=1.6 * unit_zoom)
        )
    zoom = "".join(zoom_parts)

    body = (
        '<rect x="0" y="0" width="1220" height="620" fill="#ffffff"/>'
        + _panel(10, 10, 590, 590, full_box, full)
        + _panel(620, 10, 590, 590, zoom_box, zoom)
        + '<text x="20" y="612" font-family="monospace" font-size="12" '
        f'fill="{LABEL_COLOR}">anchor arclength {_fmt(site.s)}, chord width '
        f"{_fmt(site.width)}</text>"
    )
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" width="1220" height="620" '
        'viewBox="0 0 1220 620">' + body + "</svg>"
    )


def render_flow_frame(state: FlowState, caption: str | None = None) -> str:
    """Single frame of a flow: the curve at its current time."""
    verts = state.curve.vertices
    box = _bbox(verts, pad=0.06 * float(np.ptp(verts, axis=0).max()))
    unit = box[2] / 400.0
    body = _polyline(verts, PIECE_COLORS["wall"], 1.2 * unit, closed=state.curve.closed)
    if caption is None:
        caption = (
            f"t = {_fmt(state.t)}, vertices = {state.curve.n}"
        )
    text = (
        f'<text x="{_fmt(box[0] + 8 * unit)}" y="{_fmt(box[1] + 14 * unit)}" '
        f'font-family="monospace" font-size="{_fmt(11 * unit)}" '
        f'fill="{LABEL_COLOR}">{caption}</text>'
    )
    vb = " ".join(_fmt(v) for v in box)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="700" height="700" '
        f'viewBox="{vb}" preserveAspectRatio="xMidYMid meet">'
        f'<rect x="{_fmt(box[0])}" y="{_fmt(box[1])}" width="{_fmt(box[2])}" '
        f'height="{_fmt(box[3])}" fill="#ffffff"/>' + body + text + "</svg>"
    )


def write_svg(path, document: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(document)
        if not document.endswith("\n"):
            fh.write("\n")
