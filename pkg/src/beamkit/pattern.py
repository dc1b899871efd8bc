"""Array-factor radiation patterns and beam metrics.

Elements are isotropic radiators on a uniform line; the pattern angle is
measured from the array axis, so 90 degrees is broadside and 0/180
endfire. The default evaluation grid is integer degrees 1..360.

Two amplitude conventions are supported. "field" converts dB with
10^(dB/20), the physically standard field-amplitude reading, and is the
default. "appendixA" converts with 10^(dB/10), i.e. uses the power ratio
directly as a field amplitude; it exists to reproduce, bit for bit, a
widely circulated measured-data reduction script and inherits that
script's squared taper. Per-element phases are additive (element n gets
phase_n, not (n-1)*phase_n).

A full 1..360 grid of a linear array is mirror-symmetric about the
array axis, so metrics are evaluated on the physical half-space
(0, 180] when the grid covers the full circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

AMPLITUDE_CONVENTIONS = ("field", "appendixA")

#: dB floor used when exporting patterns with true nulls.
DEFAULT_EXPORT_FLOOR_DB = -60.0


@dataclass(frozen=True)
class ExcitationVector:
    """Per-element drive: (amplitude_db, phase_deg) pairs in element order."""

    elements: tuple[tuple[float, float], ...]
    element_spacing_wl: float
    steer_reference_deg: float = 90.0

    def __post_init__(self):
        object.__setattr__(self, "elements",
                           tuple((float(a), float(p)) for a, p in self.elements))
        if len(self.elements) < 2:
            raise InvalidParameterError("an excitation needs at least 2 elements")
        if self.element_spacing_wl <= 0.0:
            raise InvalidParameterError("element spacing must be positive")

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def complex_amplitudes(self, convention: str = "field") -> np.ndarray:
        exp = _amplitude_exponent(convention)
        return np.array([10.0 ** (a / exp) * np.exp(1j * math.radians(p))
                         for a, p in self.elements])


@dataclass(frozen=True)
class PatternResult:
    """An evaluated array factor with its beam metrics."""

    angles_deg: np.ndarray
    af_db: np.ndarray
    main_lobe_angle_deg: float
    sidelobe_level_db: float
    beamwidth_3db_deg: float

    def __post_init__(self):
        for name in ("angles_deg", "af_db"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def clamped_af_db(self, floor_db: float = DEFAULT_EXPORT_FLOOR_DB) -> np.ndarray:
        """Export view with nulls clamped to a finite floor."""
        return np.maximum(self.af_db, floor_db)


def _amplitude_exponent(convention: str) -> float:
    if convention == "field":
        return 20.0
    if convention == "appendixA":
        return 10.0
    raise InvalidParameterError(
        f"unknown amplitude convention {convention!r}; expected one of {AMPLITUDE_CONVENTIONS}")


def array_factor(excitation: ExcitationVector, amplitude_convention: str = "field",
                 angles_deg: np.ndarray | None = None) -> PatternResult:
    """Evaluate AF(theta) = 20 log10 |sum_n a_n exp(j[(n-1) k d (cos theta
    - cos theta0) + beta_n])| over the angle grid."""
    amps = excitation.complex_amplitudes(amplitude_convention)
    if angles_deg is None:
        angles_deg = np.arange(1.0, 361.0)
    angles_deg = np.asarray(angles_deg, dtype=float)
    theta = np.radians(angles_deg)
    cos0 = math.cos(math.radians(excitation.steer_reference_deg))
    n_idx = np.arange(excitation.n_elements)
    # (angles, elements) phase matrix
    psi = np.outer(np.cos(theta) - cos0,
                   n_idx * 2.0 * np.pi * excitation.element_spacing_wl)
    total = (amps[None, :] * np.exp(1j * psi)).sum(axis=1)
    mag = np.abs(total)
    with np.errstate(divide="ignore"):
        af_db = 20.0 * np.log10(mag)
    try:
        main, sll, bw = _metrics(angles_deg, af_db)
    except InvalidParameterError:
        main = sll = bw = math.nan
    return PatternResult(angles_deg, af_db, main, sll, bw)


def relative_phase_differences(excitation: ExcitationVector,
                               amplitude_convention: str = "field") -> list[float]:
    """Angles of the ratios of consecutive complex element drives.

    N-1 values in (-180, 180]. The result only depends on the phases,
    but a zero amplitude makes the ratio undefined and is rejected.
    """
    amps = excitation.complex_amplitudes(amplitude_convention)
    if np.any(np.abs(amps[:-1]) == 0.0):
        raise InvalidParameterError("zero amplitude in a denominator element")
    out = []
    for k in range(1, len(amps)):
        ang = math.degrees(np.angle(amps[k] / amps[k - 1]))
        if ang <= -180.0:
            ang += 360.0
        elif ang > 180.0:
            ang -= 360.0
        out.append(ang)
    return out


def beam_metrics(result: PatternResult) -> tuple[float, float, float]:
    """Main-lobe angle, sidelobe level (dB below peak) and -3 dB width.

    The main lobe is the global grid maximum; its span runs between the
    nearest local minima. The sidelobe level is measured to the highest
    local maximum outside that span; the beamwidth is the contiguous
    span within 3 dB of the peak. Raises on isotropic patterns.
    """
    return _metrics(result.angles_deg, result.af_db)


def _metrics(angles_deg: np.ndarray, af_db: np.ndarray) -> tuple[float, float, float]:
    if af_db.size < 3:
        raise InvalidParameterError("pattern grid too small for metrics")
    finite = af_db[np.isfinite(af_db)]
    if finite.size == 0 or float(np.ptp(finite)) == 0.0:
        raise InvalidParameterError("pattern is isotropic; metrics undefined")

    full_circle = af_db.size >= 8 and _spans_full_circle(angles_deg)
    if full_circle:
        # linear-array patterns mirror about the axis; use the front half
        half = (angles_deg > 0.0) & (angles_deg <= 180.0)
        work_angles = angles_deg[half]
        work = af_db[half]
    else:
        work_angles = angles_deg
        work = af_db

    n = work.size
    imax = int(np.argmax(work))
    peak = work[imax]

    def local_min(i: int) -> bool:
        return work[i] <= work[max(i - 1, 0)] and work[i] <= work[min(i + 1, n - 1)]

    lo = imax
    while lo > 0 and not local_min(lo):
        lo -= 1
    hi = imax
    while hi < n - 1 and not local_min(hi):
        hi += 1

    highest_side = -math.inf
    for i in range(1, n - 1):
        if lo <= i <= hi:
            continue
        if work[i] >= work[i - 1] and work[i] >= work[i + 1]:
            highest_side = max(highest_side, work[i])
    sll = math.inf if highest_side == -math.inf else peak - highest_side

    above = work >= peak - 3.0
    b_lo = imax
    while b_lo > 0 and above[b_lo - 1]:
        b_lo -= 1
    b_hi = imax
    while b_hi < n - 1 and above[b_hi + 1]:
        b_hi += 1
    beamwidth = float(work_angles[b_hi] - work_angles[b_lo])

    return float(work_angles[imax]), float(sll), beamwidth


def _spans_full_circle(angles_deg: np.ndarray) -> bool:
    return float(angles_deg.min()) >= 0.0 and float(angles_deg.max()) >= 355.0


def steering_phase(beam_angle_deg: float, element_spacing_wl: float) -> float:
    """Progressive phase steering the main beam to beam_angle_deg.

    beta = -360 * d_wl * cos(angle); the inverse of
    butler.beam_direction.
    """
    if element_spacing_wl <= 0.0:
        raise InvalidParameterError("element spacing must be positive")
    return -360.0 * element_spacing_wl * math.cos(math.radians(beam_angle_deg))
