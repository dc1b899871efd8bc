"""Deterministic CSV and SVG emission.

Every number is printed with 9 significant digits via one shared
formatter, rows end with a bare newline, and all orderings are fixed, so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..pattern import DEFAULT_EXPORT_FLOOR_DB, PatternResult
from ..rotman import RotmanLensGeometry, phase_error, phase_error_deg


def fmt9(x: float) -> str:
    """Fixed 9-significant-digit formatting shared by all emitters."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def csv_text(header: list[str], rows: list[list[float]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt9(v) for v in row))
    return "\n".join(lines) + "\n"


def pattern_csv(result: PatternResult, floor_db: float = DEFAULT_EXPORT_FLOOR_DB) -> str:
    """(angle_deg, af_db) with nulls clamped to the export floor."""
    clamped = result.clamped_af_db(floor_db)
    rows = [[a, v] for a, v in zip(result.angles_deg, clamped)]
    return csv_text(["angle_deg", "af_db"], rows)


def polar_pattern_csv(result: PatternResult,
                      floor_db: float = DEFAULT_EXPORT_FLOOR_DB) -> str:
    """Polar-plot-ready table: radius is the floor-shifted dB value."""
    clamped = result.clamped_af_db(floor_db)
    rows = [[math.radians(a), max(v - floor_db, 0.0)]
            for a, v in zip(result.angles_deg, clamped)]
    return csv_text(["angle_rad", "radius_db_above_floor"], rows)


def geometry_csv(geometry: RotmanLensGeometry) -> str:
    """Normalised contour table plus the physical line lengths."""
    rows = [[p.eta, p.x, p.y, p.w, w_phys]
            for p, w_phys in zip(geometry.array_contour, geometry.line_lengths)]
    return csv_text(["eta", "x", "y", "w", "line_length_m"], rows)


def phase_error_csv(geometry: RotmanLensGeometry) -> str:
    """Path-length error per (beam port, element), meters and degrees."""
    rows = []
    for b_idx, port in enumerate(geometry.beam_ports, start=1):
        for e_idx, point in enumerate(geometry.array_contour, start=1):
            err_m = phase_error(geometry, port.feed_angle_deg, point.eta)
            err_deg = phase_error_deg(geometry, port.feed_angle_deg, point.eta)
            rows.append([b_idx, port.feed_angle_deg, e_idx, err_m, err_deg])
    return csv_text(["beam_port", "feed_angle_deg", "element", "error_m", "error_deg"],
                    rows)


def coupling_csv(geometry: RotmanLensGeometry, couplings: dict[tuple[int, int], complex]) -> str:
    """Beam-to-array coupling magnitudes (dB) and phases (deg)."""
    rows = []
    for (b, a), c in sorted(couplings.items()):
        mag = abs(c)
        db = -math.inf if mag == 0.0 else 20.0 * math.log10(mag)
        rows.append([b, a, db, math.degrees(np.angle(c))])
    return csv_text(["beam_port", "array_port", "coupling_db", "phase_deg"], rows)


# ---------------------------------------------------------------------------
# SVG

def _pt(x: float, y: float, scale: float = 1000.0) -> str:
    # millimetre drawing units, y flipped into SVG's downward axis
    return f"{fmt9(x * scale)},{fmt9(-y * scale)}"


def _polyline(points: list[tuple[float, float]], stroke: str) -> str:
    path = " ".join(_pt(x, y) for x, y in points)
    return f'<polyline fill="none" stroke="{stroke}" stroke-width="0.4" points="{path}" />'


def _port_marks(ports, stroke: str) -> list[str]:
    out = []
    for p in ports:
        # aperture drawn as a segment perpendicular to the pointing
        tx, ty = -p.pointing[1], p.pointing[0]
        hw = p.aperture_width / 2.0
        a = (p.position[0] - tx * hw, p.position[1] - ty * hw)
        b = (p.position[0] + tx * hw, p.position[1] + ty * hw)
        out.append(f'<line stroke="{stroke}" stroke-width="0.8" '
                   f'x1="{fmt9(a[0] * 1000)}" y1="{fmt9(-a[1] * 1000)}" '
                   f'x2="{fmt9(b[0] * 1000)}" y2="{fmt9(-b[1] * 1000)}" />')
    return out


def geometry_svg(geometry: RotmanLensGeometry, arc_samples: int = 181) -> str:
    """Layered drawing: contours, ports, sidewalls and line routes."""
    from ..rotman import focal_arc_point

    params = geometry.params
    F = params.off_axis_focal_length
    span = params.feed_span_deg

    arc_pts = []
    for k in range(arc_samples):
        theta = -span + 2.0 * span * k / (arc_samples - 1)
        x, y = focal_arc_point(params, theta)
        arc_pts.append((x * F, y * F))
    contour_pts = [(p.x * F, p.y * F) for p in geometry.array_contour]

    # straight stub routes from each array port out to its radiating element
    x_line = max(p.x for p in geometry.array_contour) * F + 0.25 * F
    routes = [((port.position[0], port.position[1]), (x_line, port.element_ordinate))
              for port in geometry.array_ports]

    everything = (arc_pts + contour_pts + [r[1] for r in routes]
                  + [p.position for p in geometry.beam_ports + geometry.dummy_ports]
                  + [w.p1 for w in geometry.sidewalls] + [w.p2 for w in geometry.sidewalls])
    xs = [p[0] * 1000 for p in everything]
    ys = [-p[1] * 1000 for p in everything]
    margin = 12.0
    x0, y0 = min(xs) - margin, min(ys) - margin
    w_box, h_box = (max(xs) - min(xs)) + 2 * margin, (max(ys) - min(ys)) + 2 * margin

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt9(x0)} {fmt9(y0)} '
        f'{fmt9(w_box)} {fmt9(h_box)}">',
        '<g id="beam-arc">',
        _polyline(arc_pts, "#3465a4"),
        "</g>",
        '<g id="array-contour">',
        _polyline(contour_pts, "#4e9a06"),
        "</g>",
        '<g id="sidewalls">',
    ]
    for wseg in geometry.sidewalls:
        parts.append(_polyline([wseg.p1, wseg.p2], "#888888"))
    parts.append("</g>")
    parts.append('<g id="line-routes">')
    for a, b in routes:
        parts.append(_polyline([a, b], "#bbbbbb"))
    parts.append("</g>")
    parts.append('<g id="beam-ports">')
    parts.extend(_port_marks(geometry.beam_ports, "#204a87"))
    parts.append("</g>")
    parts.append('<g id="array-ports">')
    parts.extend(_port_marks(geometry.array_ports, "#2e7d32"))
    parts.append("</g>")
    parts.append('<g id="dummy-ports">')
    parts.extend(_port_marks(geometry.dummy_ports, "#a40000"))
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
