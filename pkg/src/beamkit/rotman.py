"""Rotman lens synthesis, phase error, port coupling and focal-ratio tuning.

Geometry model
--------------
All lens dimensions are free-space-equivalent electrical lengths,
normalised by the off-axis focal length F. The array contour solves the
three path-length equalities (two off-axis foci at unit distance and
angle +/-alpha, one on-axis focus at distance g) for each normalised
element ordinate eta = N/F; the correctness anchor is the residual of
those equalities evaluated with true Euclidean distances, not any
printed closed form. De-normalised coordinates are electrical meters;
for a dielectric-filled parallel-plate realisation every cavity
dimension scales by 1/sqrt(eps_r), which leaves the coupling integrals
and all phases invariant, so the electrical frame is used throughout.

The transmission lines to the radiating elements are stored as physical
microstrip lengths sized at the design frequency: their electrical delay
equals the design lengths W(n) exactly, preserving the true-time-delay
property at every frequency under the no-dispersion model.

Focal arcs
----------
Circular arcs are the unique circle through the three focal points.
Elliptical arcs are origin-centred ellipses through the two off-axis
foci; if no eccentricity is given it is derived from (g, alpha) so the
arc also passes through the on-axis focus, e^2 = (g^2-1)/(g^2-a^2) with
a = cos(alpha). An explicit eccentricity pins the arc's on-axis crossing
at a_e = sqrt((1-e^2 a^2)/(1-e^2)) instead, which decouples it from g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import substrate as tline
from .errors import (
    GeometryError,
    InfeasibleLayoutError,
    InvalidParameterError,
    UnsolvableError,
)
from .pattern import ExcitationVector

C0 = 299792458.0

#: residual bound (normalised) accepted when validating a contour solve
RESIDUAL_TOL = 1e-9


# ---------------------------------------------------------------------------
# parameters and geometry types

@dataclass(frozen=True)
class RotmanDesignParams:
    """Design inputs for one lens.

    off_axis_focal_length is the electrical F in meters. focal_ratio is
    g = G/F. beam_feed_span_deg is the half-span of the beam-port feed
    angles; it defaults to the focal angle (ports then run focus to
    focus) and may be reduced to keep steered beams grating-free.
    """

    off_axis_focal_length: float
    focal_ratio: float
    focal_angle_deg: float
    n_array_elements: int
    element_spacing: float
    n_beam_ports: int
    max_scan_angle_deg: float
    frequency: float
    substrate: tline.Substrate
    focal_arc: str = "circular"
    eccentricity: float | None = None
    beam_feed_span_deg: float | None = None
    feed_mapping: str = "linear"
    port_pointing: bool = True
    n_dummy_ports: int = 2
    guard_fraction: float = 0.15
    wall_reflectivity: float = 0.0

    def __post_init__(self):
        if self.off_axis_focal_length <= 0.0:
            raise InvalidParameterError("off-axis focal length must be positive")
        if not 1.0 < self.focal_ratio <= 2.0:
            raise InvalidParameterError("focal ratio must lie in (1, 2]")
        if not 0.0 < self.focal_angle_deg < 90.0:
            raise InvalidParameterError("focal angle must lie in (0, 90) degrees")
        if self.n_array_elements < 2 or self.n_beam_ports < 2:
            raise InvalidParameterError("element and beam-port counts must be >= 2")
        if self.element_spacing <= 0.0:
            raise InvalidParameterError("element spacing must be positive")
        if self.frequency <= 0.0:
            raise InvalidParameterError("frequency must be positive")
        if self.focal_arc not in ("circular", "elliptical"):
            raise InvalidParameterError("focal_arc must be 'circular' or 'elliptical'")
        if self.eccentricity is not None and not 0.0 <= self.eccentricity < 1.0:
            raise InvalidParameterError("eccentricity must lie in [0, 1)")
        if self.feed_mapping not in ("linear", "sine"):
            raise InvalidParameterError("feed_mapping must be 'linear' or 'sine'")
        if not 0.0 <= self.guard_fraction < 1.0:
            raise InvalidParameterError("guard fraction must lie in [0, 1)")

    @property
    def feed_span_deg(self) -> float:
        span = self.beam_feed_span_deg
        if span is None:
            span = self.focal_angle_deg
        if not 0.0 < span <= self.focal_angle_deg:
            raise InvalidParameterError("feed span must lie in (0, focal_angle]")
        return span

    def element_ordinates(self) -> np.ndarray:
        """Physical element ordinates N_n in meters, ascending."""
        n = self.n_array_elements
        return (np.arange(n) - (n - 1) / 2.0) * self.element_spacing

    def element_etas(self) -> np.ndarray:
        return self.element_ordinates() / self.off_axis_focal_length

    def feed_angles_deg(self) -> np.ndarray:
        """Beam-port feed angles, one per requested beam direction."""
        beams = np.linspace(-self.max_scan_angle_deg, self.max_scan_angle_deg,
                            self.n_beam_ports)
        span = self.feed_span_deg
        if self.feed_mapping == "linear":
            return -beams * (span / self.max_scan_angle_deg)
        scale = math.sin(math.radians(span)) / math.sin(math.radians(self.max_scan_angle_deg))
        return -np.degrees(np.arcsin(np.sin(np.radians(beams)) * scale))


@dataclass(frozen=True)
class ContourPoint:
    """One solved array-contour point in normalised coordinates."""

    eta: float
    x: float
    y: float
    w: float


@dataclass(frozen=True)
class LensPort:
    """A port on the lens cavity boundary (electrical meters)."""

    kind: str                       # beam | array | dummy
    position: tuple[float, float]
    aperture_width: float
    pointing: tuple[float, float]   # unit vector into the cavity
    feed_angle_deg: float | None = None      # beam ports
    designed_beam_deg: float | None = None   # beam ports: -feed angle
    element_ordinate: float | None = None    # array ports: N in meters
    line_length: float | None = None         # array ports: physical W(n), meters

    def __post_init__(self):
        if self.aperture_width <= 0.0:
            raise InvalidParameterError("aperture width must be positive")
        norm = math.hypot(*self.pointing)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidParameterError("pointing must be unit-norm")


@dataclass(frozen=True)
class WallSegment:
    """A straight absorber/dummy boundary segment (electrical meters)."""

    p1: tuple[float, float]
    p2: tuple[float, float]
    reflectivity: float = 0.0


@dataclass(frozen=True)
class RotmanLensGeometry:
    """A synthesised lens: contour, ports, lines and boundary walls."""

    params: RotmanDesignParams
    array_contour: tuple[ContourPoint, ...]
    beam_ports: tuple[LensPort, ...]
    array_ports: tuple[LensPort, ...]
    dummy_ports: tuple[LensPort, ...]
    sidewalls: tuple[WallSegment, ...]
    line_lengths: tuple[float, ...]   # physical microstrip W(n), meters


# ---------------------------------------------------------------------------
# contour solve

def _quadratic_coefficients(g: float, alpha_deg: float, eta: float) -> tuple[float, float, float]:
    """Coefficients of the normalised line-length quadratic.

    Derived by eliminating x and y from the three path-length
    equalities; every solve is validated against the distance residuals
    afterwards, so these expressions are never trusted blind.
    """
    a = math.cos(math.radians(alpha_deg))
    b = math.sin(math.radians(alpha_deg))
    u = g - a
    a0 = 1.0 - eta**2 - (g - 1.0) ** 2 / u**2
    b0 = (2.0 * g * (g - 1.0) / u
          - (g - 1.0) * b**2 * eta**2 / u**2
          + 2.0 * eta**2 - 2.0 * g)
    c0 = g * b**2 * eta**2 / u - b**4 * eta**4 / (4.0 * u**2) - eta**2
    return a0, b0, c0


def _contour_xy(g: float, alpha_deg: float, eta: float, w: float) -> tuple[float, float]:
    a = math.cos(math.radians(alpha_deg))
    b = math.sin(math.radians(alpha_deg))
    x = -(w * (g - 1.0) + eta**2 * b**2 / 2.0) / (g - a)
    y = eta * (1.0 - w)
    return x, y


def path_residuals(g: float, alpha_deg: float, eta: float,
                   x: float, y: float, w: float) -> tuple[float, float, float]:
    """Residuals of the three defining path-length equalities.

    Evaluated with true Euclidean distances from the two off-axis foci
    and the on-axis focus; this is the correctness oracle for any solved
    contour point.
    """
    a = math.cos(math.radians(alpha_deg))
    b = math.sin(math.radians(alpha_deg))
    r1 = math.hypot(a + x, b - y)
    r2 = math.hypot(a + x, b + y)
    r0 = math.hypot(g + x, y)
    return (r1 + w + eta * b - 1.0,
            r2 + w - eta * b - 1.0,
            r0 + w - g)


def solve_contour_point(g: float, alpha_deg: float, eta: float) -> ContourPoint:
    """Solve one normalised contour point (x, y, w) for ordinate eta.

    Real roots of the quadratic are screened with the distance-residual
    oracle; among the physical ones the smaller |w| is taken, which is
    the branch continuous with w -> 0 at eta -> 0.
    """
    a0, b0, c0 = _quadratic_coefficients(g, alpha_deg, eta)
    scale = max(abs(a0), abs(b0), abs(c0), 1e-30)
    if abs(a0) < 1e-14 * scale:
        if abs(b0) < 1e-14 * scale:
            raise UnsolvableError("line-length equation degenerated to 0 = 0")
        roots = [-c0 / b0]
    else:
        disc = b0 * b0 - 4.0 * a0 * c0
        if disc < 0.0:
            if disc < -1e-12 * scale * scale:
                raise UnsolvableError(
                    f"no real line length for eta={eta:g} at g={g:g}, alpha={alpha_deg:g} deg "
                    "(aperture too large for this focal geometry)")
            disc = 0.0
        sq = math.sqrt(disc)
        roots = [(-b0 - sq) / (2.0 * a0), (-b0 + sq) / (2.0 * a0)]

    candidates = []
    for w in roots:
        x, y = _contour_xy(g, alpha_deg, eta, w)
        resid = max(abs(r) for r in path_residuals(g, alpha_deg, eta, x, y, w))
        if resid < RESIDUAL_TOL:
            candidates.append((abs(w), w, x, y))
    if not candidates:
        raise GeometryError(
            f"no root satisfies the path-length equalities for eta={eta:g} "
            f"at g={g:g}, alpha={alpha_deg:g} deg")
    _, w, x, y = min(candidates)
    return ContourPoint(eta=eta, x=x, y=y, w=w)


def solve_array_contour(params: RotmanDesignParams, eta: float) -> ContourPoint:
    """Contour point for this design's (g, alpha)."""
    return solve_contour_point(params.focal_ratio, params.focal_angle_deg, eta)


# ---------------------------------------------------------------------------
# focal arcs

def derived_eccentricity(g: float, alpha_deg: float) -> float:
    """Eccentricity of the origin-centred ellipse through all three foci."""
    a = math.cos(math.radians(alpha_deg))
    return math.sqrt((g * g - 1.0) / (g * g - a * a))


def _arc_point(g: float, alpha_deg: float, theta_deg: float,
               arc: str, eccentricity: float | None) -> tuple[float, float]:
    c = math.cos(math.radians(theta_deg))
    s = math.sin(math.radians(theta_deg))
    if arc == "circular":
        a = math.cos(math.radians(alpha_deg))
        xc = (1.0 - g * g) / (2.0 * (g - a))
        rc = g + xc
        disc = xc * xc * (c * c - 1.0) + rc * rc
        if disc < 0.0:
            raise UnsolvableError(f"circular focal arc does not reach theta={theta_deg:g} deg")
        r = -xc * c + math.sqrt(disc)
    else:
        e = derived_eccentricity(g, alpha_deg) if eccentricity is None else eccentricity
        a = math.cos(math.radians(alpha_deg))
        ae2 = (1.0 - e * e * a * a) / (1.0 - e * e)
        be2 = ae2 * (1.0 - e * e)
        r = 1.0 / math.sqrt(c * c / ae2 + s * s / be2)
    return (-r * c, r * s)


def focal_arc_point(params: RotmanDesignParams, theta_deg: float) -> tuple[float, float]:
    """Normalised focal-arc point at feed angle theta (|theta| <= alpha)."""
    if abs(theta_deg) > params.focal_angle_deg + 1e-9:
        raise InvalidParameterError(
            f"feed angle {theta_deg:g} deg outside +/-{params.focal_angle_deg:g} deg arc")
    return _arc_point(params.focal_ratio, params.focal_angle_deg, theta_deg,
                      params.focal_arc, params.eccentricity)


# ---------------------------------------------------------------------------
# phase error

def phase_error(geometry: RotmanLensGeometry, feed_theta_deg: float, eta: float) -> float:
    """Path-length error delta-L in meters for a feed at theta and
    aperture ordinate eta.

    Difference between the centre-ray route (feed to contour origin) and
    the general route (feed to contour point, line length, wave-front
    projection). Exactly zero at the focal feeds.
    """
    p = geometry.params
    return _phase_error_normalised(
        p.focal_ratio, p.focal_angle_deg, p.focal_arc, p.eccentricity,
        feed_theta_deg, eta) * p.off_axis_focal_length


def _phase_error_normalised(g: float, alpha_deg: float, arc: str,
                            eccentricity: float | None,
                            feed_theta_deg: float, eta: float,
                            point: ContourPoint | None = None) -> float:
    if point is None:
        point = solve_contour_point(g, alpha_deg, eta)
    rx, ry = _arc_point(g, alpha_deg, feed_theta_deg, arc, eccentricity)
    r_centre = math.hypot(rx, ry)
    r_general = (math.hypot(rx - point.x, ry - point.y)
                 + point.w
                 + eta * math.sin(math.radians(feed_theta_deg)))
    return r_centre - r_general


def phase_error_deg(geometry: RotmanLensGeometry, feed_theta_deg: float,
                    eta: float, frequency: float | None = None) -> float:
    """Phase error in degrees at the design (or given) frequency."""
    f = geometry.params.frequency if frequency is None else frequency
    return phase_error(geometry, feed_theta_deg, eta) * 360.0 * f / C0


# ---------------------------------------------------------------------------
# layout

def _arc_length(point_fn, t_lo: float, t_hi: float, n: int = 512) -> float:
    ts = np.linspace(t_lo, t_hi, n)
    pts = np.array([point_fn(t) for t in ts])
    return float(np.sum(np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))))


def _unit(v: np.ndarray) -> tuple[float, float]:
    n = float(np.hypot(v[0], v[1]))
    if n == 0.0:
        raise GeometryError("zero-length direction")
    return (float(v[0] / n), float(v[1] / n))


def synthesize_geometry(params: RotmanDesignParams) -> RotmanLensGeometry:
    """Solve the full lens: contour, ports, line lengths and sidewalls."""
    F = params.off_axis_focal_length
    g = params.focal_ratio
    alpha = params.focal_angle_deg

    # array contour and line lengths
    contour = tuple(solve_array_contour(params, eta) for eta in params.element_etas())
    w_vals = np.array([p.w for p in contour])
    base = -float(w_vals.min()) if w_vals.min() < 0.0 else 0.0
    w_electrical = (w_vals + base) * F
    w50 = tline.width_for_impedance(params.substrate, 50.0)
    eps_eff = tline.effective_permittivity(params.substrate, w50)
    line_lengths = tuple(float(w) / math.sqrt(eps_eff) for w in w_electrical)

    # beam ports: equal division of the available arc span (outermost
    # feeds plus an end margin of half the adjacent gap, clipped to the
    # focal angle), shrunk by the guard fraction
    feeds = params.feed_angles_deg()
    arc_fn = lambda t: _arc_point(g, alpha, t, params.focal_arc, params.eccentricity)
    spacing = abs(feeds[0] - feeds[1])
    span_hi = min(max(feeds) + spacing / 2.0, alpha)
    span_lo = max(min(feeds) - spacing / 2.0, -alpha)
    beam_available = _arc_length(arc_fn, span_lo, span_hi) * F
    beam_width = (1.0 - params.guard_fraction) * beam_available / params.n_beam_ports
    beam_pitch = min(_arc_length(arc_fn, t2, t1, n=64)
                     for t1, t2 in zip(feeds, feeds[1:])) * F
    _check_no_overlap("beam", beam_width, beam_pitch)

    beam_ports = []
    for theta, beam in zip(feeds, np.linspace(-params.max_scan_angle_deg,
                                              params.max_scan_angle_deg,
                                              params.n_beam_ports)):
        pos = np.array(arc_fn(theta)) * F
        if params.port_pointing:
            pointing = _unit(-pos)
        else:
            pointing = _arc_normal(params, theta, pos)
        beam_ports.append(LensPort(
            kind="beam", position=(float(pos[0]), float(pos[1])),
            aperture_width=beam_width, pointing=pointing,
            feed_angle_deg=float(theta), designed_beam_deg=float(-theta)))

    # array ports: same rule along the contour; the end margins fall back
    # to the outermost elements when the extended ordinate is outside the
    # solvable aperture
    etas = params.element_etas()
    contour_fn = lambda e: (lambda p: (p.x, p.y))(solve_array_contour(params, e))
    eta_pitch = abs(etas[1] - etas[0])
    eta_lo, eta_hi = etas[0], etas[-1]
    for candidate in (etas[0] - eta_pitch / 2.0,):
        try:
            solve_array_contour(params, candidate)
            eta_lo = candidate
            eta_hi = etas[-1] + eta_pitch / 2.0
        except (UnsolvableError, GeometryError):
            pass
    array_available = _arc_length(contour_fn, eta_lo, eta_hi) * F
    array_width = (1.0 - params.guard_fraction) * array_available / params.n_array_elements
    array_pitch = min(_arc_length(contour_fn, e1, e2, n=64)
                      for e1, e2 in zip(etas, etas[1:])) * F
    _check_no_overlap("array", array_width, array_pitch)

    focus_on_axis = np.array([-g * F, 0.0])
    array_ports = []
    for point, ordinate, length in zip(contour, params.element_ordinates(), line_lengths):
        pos = np.array([point.x, point.y]) * F
        if params.port_pointing:
            pointing = _unit(focus_on_axis - pos)
        else:
            pointing = _contour_normal(params, point, pos)
        array_ports.append(LensPort(
            kind="array", position=(float(pos[0]), float(pos[1])),
            aperture_width=array_width, pointing=pointing,
            element_ordinate=float(ordinate), line_length=length))

    # boundary segments joining arc ends to contour ends; arc ends sit a
    # half-pitch beyond the outer feeds (clipped to the focal angle) and
    # the contour ends are tangent-extrapolated by a half-pitch
    arc_top = np.array(arc_fn(span_hi)) * F
    arc_bot = np.array(arc_fn(span_lo)) * F
    cont_top = _extrapolate_contour_end(params, contour[-1], +array_pitch / 2.0)
    cont_bot = _extrapolate_contour_end(params, contour[0], -array_pitch / 2.0)
    refl = params.wall_reflectivity
    walls = (WallSegment((float(arc_top[0]), float(arc_top[1])),
                         (float(cont_top[0]), float(cont_top[1])), refl),
             WallSegment((float(arc_bot[0]), float(arc_bot[1])),
                         (float(cont_bot[0]), float(cont_bot[1])), refl))

    dummy_ports = []
    if params.focal_arc == "circular" and params.n_dummy_ports > 0:
        # dummy ports absorb spillover on the gap segments; absorber
        # sidewalls take their place on elliptical designs
        per_side = [params.n_dummy_ports - params.n_dummy_ports // 2,
                    params.n_dummy_ports // 2]
        for wall, count in zip(walls, per_side):
            p1 = np.array(wall.p1)
            p2 = np.array(wall.p2)
            seg = p2 - p1
            seg_len = float(np.hypot(*seg))
            width = (1.0 - params.guard_fraction) * seg_len / max(count, 1)
            normal = _unit(np.array([-seg[1], seg[0]]))
            if np.dot(normal, -0.5 * (p1 + p2)) < 0.0:
                normal = (-normal[0], -normal[1])
            for k in range(count):
                centre = p1 + seg * (2 * k + 1) / (2 * count)
                dummy_ports.append(LensPort(
                    kind="dummy", position=(float(centre[0]), float(centre[1])),
                    aperture_width=width, pointing=normal))

    return RotmanLensGeometry(
        params=params,
        array_contour=contour,
        beam_ports=tuple(beam_ports),
        array_ports=tuple(array_ports),
        dummy_ports=tuple(dummy_ports),
        sidewalls=walls,
        line_lengths=line_lengths,
    )


def _check_no_overlap(which: str, width: float, pitch: float) -> None:
    if width > pitch + 1e-12:
        raise InfeasibleLayoutError(
            f"{which}-port apertures of {width:g} m overlap at pitch {pitch:g} m")


def _extrapolate_contour_end(params: RotmanDesignParams, end: ContourPoint,
                             signed_length: float) -> np.ndarray:
    """Continue the contour past its last solved point along the tangent."""
    F = params.off_axis_focal_length
    d_eta = 1e-6
    inner = solve_array_contour(params, end.eta - math.copysign(d_eta, signed_length))
    tangent = np.array([end.x - inner.x, end.y - inner.y]) * F
    tangent /= float(np.hypot(*tangent))
    return np.array([end.x, end.y]) * F + tangent * abs(signed_length)


def _arc_normal(params: RotmanDesignParams, theta_deg: float,
                pos: np.ndarray) -> tuple[float, float]:
    """Inward (cavity-side) normal of the focal arc at a port."""
    g, alpha = params.focal_ratio, params.focal_angle_deg
    if params.focal_arc == "circular":
        a = math.cos(math.radians(alpha))
        xc = (1.0 - g * g) / (2.0 * (g - a)) * params.off_axis_focal_length
        return _unit(np.array([xc, 0.0]) - pos)
    e = params.eccentricity
    if e is None:
        e = derived_eccentricity(g, alpha)
    a = math.cos(math.radians(alpha))
    ae2 = (1.0 - e * e * a * a) / (1.0 - e * e) * params.off_axis_focal_length**2
    be2 = ae2 * (1.0 - e * e)
    grad = np.array([pos[0] / ae2, pos[1] / be2])
    return _unit(-grad)


def _contour_normal(params: RotmanDesignParams, point: ContourPoint,
                    pos: np.ndarray) -> tuple[float, float]:
    """Cavity-side normal of the array contour at a solved point."""
    d_eta = 1e-6
    p1 = solve_array_contour(params, point.eta - d_eta)
    p2 = solve_array_contour(params, point.eta + d_eta)
    tangent = np.array([p2.x - p1.x, p2.y - p1.y])
    normal = np.array([-tangent[1], tangent[0]])
    if normal[0] > 0.0:
        normal = -normal
    return _unit(normal)


def beam_port_layout(params: RotmanDesignParams) -> tuple[LensPort, ...]:
    """Beam and dummy ports of the synthesised layout."""
    geo = synthesize_geometry(params)
    return geo.beam_ports + geo.dummy_ports


# ---------------------------------------------------------------------------
# coupling

def _sinc(x: float) -> float:
    return 1.0 if x == 0.0 else math.sin(x) / x


def _aperture_factor(port: LensPort, ray_dir: tuple[float, float], k: float) -> float:
    """sin(x)/x aperture pattern of a port toward a ray direction."""
    cosang = port.pointing[0] * ray_dir[0] + port.pointing[1] * ray_dir[1]
    cosang = max(-1.0, min(1.0, cosang))
    sinang = math.sqrt(1.0 - cosang * cosang)
    return _sinc(0.5 * k * port.aperture_width * sinang)


def port_coupling(geometry: RotmanLensGeometry, from_port: LensPort,
                  to_port: LensPort, frequency: float) -> complex:
    """Direct port-to-port coupling from uniform-aperture theory.

    S = sinc(x_i) sinc(x_j) sqrt(w_i w_j / (lambda r)) exp(-j(kr + pi/4))
    with x = (k w / 2) sin(phi) and phi the angle between each port's
    pointing and the joining ray. Exactly reciprocal.
    """
    lam = C0 / frequency
    k = 2.0 * math.pi / lam
    dx = to_port.position[0] - from_port.position[0]
    dy = to_port.position[1] - from_port.position[1]
    r = math.hypot(dx, dy)
    if r == 0.0:
        raise GeometryError("coincident ports have no defined coupling")
    d_fwd = (dx / r, dy / r)
    d_rev = (-d_fwd[0], -d_fwd[1])
    amp = (_aperture_factor(from_port, d_fwd, k)
           * _aperture_factor(to_port, d_rev, k)
           * math.sqrt(from_port.aperture_width * to_port.aperture_width / (lam * r)))
    return amp * np.exp(-1j * (k * r + math.pi / 4.0))


def _reflect_across(p: tuple[float, float], w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    seg = w2 - w1
    seg2 = float(seg @ seg)
    if seg2 == 0.0:
        raise GeometryError("degenerate wall segment")
    v = np.array(p) - w1
    proj = w1 + seg * float(v @ seg) / seg2
    return 2.0 * proj - np.array(p)


def spillover_coupling(geometry: RotmanLensGeometry, from_port: LensPort,
                       to_port: LensPort, frequency: float,
                       wall_reflectivity: float | None = None) -> complex:
    """Single-bounce coupling off the lens sidewalls.

    For each wall the receiving port is imaged across the wall line; a
    specular path exists when the ray to the image crosses the wall
    segment. The bounce is attenuated by the wall reflectivity and then
    propagated with the same uniform-aperture model as the direct path.
    Returns 0 when no geometric bounce path exists.
    """
    lam = C0 / frequency
    k = 2.0 * math.pi / lam
    total = 0.0j
    for wall in geometry.sidewalls:
        refl = wall.reflectivity if wall_reflectivity is None else wall_reflectivity
        if refl == 0.0:
            continue
        w1 = np.array(wall.p1)
        w2 = np.array(wall.p2)
        image = _reflect_across(to_port.position, w1, w2)
        src = np.array(from_port.position)
        ray = image - src
        seg = w2 - w1
        denom = ray[0] * seg[1] - ray[1] * seg[0]
        if abs(denom) < 1e-300:
            continue
        diff = w1 - src
        t_ray = (diff[0] * seg[1] - diff[1] * seg[0]) / denom
        t_seg = (diff[0] * ray[1] - diff[1] * ray[0]) / denom
        if not (0.0 < t_ray < 1.0 and 0.0 <= t_seg <= 1.0):
            continue
        hit = src + ray * t_ray
        r1 = float(np.hypot(*(hit - src)))
        r2 = float(np.hypot(*(np.array(to_port.position) - hit)))
        r = r1 + r2
        if r == 0.0:
            continue
        d_out = _unit(hit - src)
        d_back = _unit(hit - np.array(to_port.position))
        amp = (refl
               * _aperture_factor(from_port, d_out, k)
               * _aperture_factor(to_port, d_back, k)
               * math.sqrt(from_port.aperture_width * to_port.aperture_width / (lam * r)))
        total += amp * np.exp(-1j * (k * r + math.pi / 4.0))
    return complex(total)


# ---------------------------------------------------------------------------
# focal-ratio optimisation

@dataclass(frozen=True)
class FocalRatioResult:
    """Outcome of a focal-ratio sweep."""

    g_star: float
    objective: float                       # meters of path error
    profile: tuple[tuple[float, float], ...]  # (g, objective) over the grid
    metric: str = "max"


def optimize_focal_ratio(params: RotmanDesignParams,
                         g_range: tuple[float, float] = (1.05, 1.8),
                         grid_step: float = 0.005,
                         metric: str = "max",
                         refine: bool = True) -> FocalRatioResult:
    """Minimise the aperture phase error over the focal ratio.

    The objective is the max-abs (or RMS) path-length error over the
    design's beam feeds and element ordinates. Deterministic: a fixed g
    grid is scanned, ties go to the lowest g, and an optional
    golden-section refinement runs inside the winning bracket.
    """
    lo, hi = g_range
    if not (1.0 < lo < hi <= 2.0):
        raise InvalidParameterError("g range must satisfy 1 < lo < hi <= 2")
    if metric not in ("max", "rms"):
        raise InvalidParameterError("metric must be 'max' or 'rms'")

    feeds = params.feed_angles_deg()
    etas = params.element_etas()
    alpha = params.focal_angle_deg
    arc = params.focal_arc

    def objective(g: float) -> float:
        try:
            points = [solve_contour_point(g, alpha, eta) for eta in etas]
        except (UnsolvableError, GeometryError):
            return math.inf
        ecc = params.eccentricity
        errs = [abs(_phase_error_normalised(g, alpha, arc, ecc, th, pt.eta, pt))
                for th in feeds for pt in points]
        if metric == "max":
            return max(errs)
        return math.sqrt(sum(e * e for e in errs) / len(errs))

    gs = np.arange(lo, hi + grid_step / 2.0, grid_step)
    values = [objective(float(g)) for g in gs]
    best = int(np.argmin(values))       # argmin takes the first (lowest g) on ties
    if not math.isfinite(values[best]):
        raise UnsolvableError("no feasible focal ratio in the requested range")

    g_star, obj = float(gs[best]), values[best]
    if refine:
        a_ = float(gs[max(0, best - 1)])
        b_ = float(gs[min(len(gs) - 1, best + 1)])
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        c_ = b_ - phi * (b_ - a_)
        d_ = a_ + phi * (b_ - a_)
        fc, fd = objective(c_), objective(d_)
        for _ in range(60):
            if fc < fd:
                b_, d_, fd = d_, c_, fc
                c_ = b_ - phi * (b_ - a_)
                fc = objective(c_)
            else:
                a_, c_, fc = c_, d_, fd
                d_ = a_ + phi * (b_ - a_)
                fd = objective(d_)
        g_ref = 0.5 * (a_ + b_)
        obj_ref = objective(g_ref)
        if obj_ref < obj:
            g_star, obj = g_ref, obj_ref

    F = params.off_axis_focal_length
    profile = tuple((float(g), v * F if math.isfinite(v) else math.inf)
                    for g, v in zip(gs, values))
    return FocalRatioResult(g_star=g_star, objective=obj * F,
                            profile=profile, metric=metric)


# ---------------------------------------------------------------------------
# excitation

def array_excitation(geometry: RotmanLensGeometry, beam_port: int,
                     frequency: float | None = None) -> ExcitationVector:
    """Per-element drive for one beam port (1-based index).

    Coupling through the cavity times the transmission-line delay
    exp(-j k_line W(n)), elements ordered by ascending ordinate.
    Amplitudes are reported in dB and phases in degrees; element spacing
    is given in free-space wavelengths at the evaluation frequency.
    """
    p = geometry.params
    f = p.frequency if frequency is None else frequency
    if not 1 <= beam_port <= len(geometry.beam_ports):
        raise InvalidParameterError(
            f"beam port {beam_port} out of range 1..{len(geometry.beam_ports)}")
    src = geometry.beam_ports[beam_port - 1]
    w50 = tline.width_for_impedance(p.substrate, 50.0)
    k_line = 2.0 * math.pi / tline.guided_wavelength(p.substrate, w50, f)
    elements = []
    for port in geometry.array_ports:
        c = port_coupling(geometry, src, port, f)
        c *= np.exp(-1j * k_line * port.line_length)
        amp_db = -math.inf if abs(c) == 0.0 else 20.0 * math.log10(abs(c))
        elements.append((amp_db, math.degrees(np.angle(c))))
    lam0 = C0 / f
    return ExcitationVector(tuple(elements), element_spacing_wl=p.element_spacing / lam0)


# ---------------------------------------------------------------------------
# presets

ROTMAN_PRESETS: dict[str, RotmanDesignParams] = {
    # 4-beam, 4-element S-band lens: circular focal arc, FR4, 2 dummy
    # ports, feeds running focus to focus.
    "4x4-3.15ghz": RotmanDesignParams(
        off_axis_focal_length=0.095,
        focal_ratio=1.2970,
        focal_angle_deg=45.0,
        n_array_elements=4,
        element_spacing=0.047,
        n_beam_ports=4,
        max_scan_angle_deg=50.0,
        frequency=3.15e9,
        substrate=tline.SUBSTRATE_PRESETS["FR4-0.8"],
        focal_arc="circular",
    ),
    # 8-beam, 8-element C-band lens: elliptical focal arc with absorber
    # sidewalls instead of dummy ports. Feed span is held at 40 degrees
    # (inside the 62 degree focal angle) so the realised beams stay
    # grating-free at this element spacing.
    "8x8-6.3ghz": RotmanDesignParams(
        off_axis_focal_length=0.260,
        focal_ratio=1.2670,
        focal_angle_deg=62.0,
        n_array_elements=8,
        element_spacing=0.028,
        n_beam_ports=8,
        max_scan_angle_deg=50.0,
        frequency=6.3e9,
        substrate=tline.SUBSTRATE_PRESETS["TLC30-1.3"],
        focal_arc="elliptical",
        beam_feed_span_deg=40.0,
        n_dummy_ports=0,
    ),
}


def rotman_preset(name: str) -> RotmanDesignParams:
    try:
        return ROTMAN_PRESETS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown lens preset {name!r}; known: {sorted(ROTMAN_PRESETS)}") from None
