"""Microstrip substrates and transmission-line sizing.

Effective permittivity and characteristic impedance use the
Hammerstad-Jensen closed-form quasi-static model (accurate to ~1% over
0.01 < w/h < 100), with the metal treated as infinitely thin and
dispersion neglected: copper thickness is carried on the substrate for
documentation but does not enter the first-order formulas, and the
designs this package targets are single-frequency scaled prototypes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, UnsolvableError

C0 = 299792458.0
ETA0 = 376.73031346177066  # free-space wave impedance, ohms


@dataclass(frozen=True)
class Substrate:
    """A microstrip substrate.

    relative_permittivity: dielectric constant (>= 1)
    height: dielectric thickness in meters
    copper_thickness: cladding thickness in meters (documentation only)
    loss_tangent: tan(delta), carried for reports
    """

    relative_permittivity: float
    height: float
    copper_thickness: float = 35e-6
    loss_tangent: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.relative_permittivity < 1.0:
            raise InvalidParameterError("relative permittivity must be >= 1")
        if self.height <= 0.0:
            raise InvalidParameterError("substrate height must be positive")
        if self.loss_tangent < 0.0:
            raise InvalidParameterError("loss tangent must be >= 0")


#: Named presets usable from config files and the CLI.
SUBSTRATE_PRESETS = {
    # 0.8 mm FR4, the low-cost laminate used for S-band prototypes
    "FR4-0.8": Substrate(4.7, 0.8e-3, 35e-6, 0.01, name="FR4-0.8"),
    # 1.3 mm Taconic TLC-30 PTFE/woven-glass laminate
    "TLC30-1.3": Substrate(3.0, 1.3e-3, 35e-6, 0.003, name="TLC30-1.3"),
}


def substrate_by_name(name: str) -> Substrate:
    try:
        return SUBSTRATE_PRESETS[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown substrate preset {name!r}; known: {sorted(SUBSTRATE_PRESETS)}"
        ) from None


def effective_permittivity(substrate: Substrate, width: float) -> float:
    """Quasi-static effective permittivity of a microstrip line.

    Hammerstad-Jensen model. Returns a value in (1, eps_r] and exactly
    1.0 for an air dielectric.
    """
    if width <= 0.0:
        raise InvalidParameterError("line width must be positive")
    er = substrate.relative_permittivity
    u = width / substrate.height
    a = 1.0 + math.log((u**4 + (u / 52.0) ** 2) / (u**4 + 0.432)) / 49.0 \
        + math.log(1.0 + (u / 18.1) ** 3) / 18.7
    b = 0.564 * ((er - 0.9) / (er + 3.0)) ** 0.053
    return (er + 1.0) / 2.0 + (er - 1.0) / 2.0 * (1.0 + 10.0 / u) ** (-a * b)


def characteristic_impedance(substrate: Substrate, width: float) -> float:
    """Characteristic impedance in ohms, monotonically decreasing in width."""
    if width <= 0.0:
        raise InvalidParameterError("line width must be positive")
    u = width / substrate.height
    fu = 6.0 + (2.0 * math.pi - 6.0) * math.exp(-((30.666 / u) ** 0.7528))
    z_air = ETA0 / (2.0 * math.pi) * math.log(fu / u + math.sqrt(1.0 + (2.0 / u) ** 2))
    return z_air / math.sqrt(effective_permittivity(substrate, width))


def width_for_impedance(substrate: Substrate, target_z0: float,
                        tol: float = 1e-4) -> float:
    """Width in meters realising target_z0, solved by bisection.

    Valid for targets in 10..200 ohms; outside that range the solve is
    rejected rather than extrapolated.
    """
    if not 10.0 <= target_z0 <= 200.0:
        raise UnsolvableError(f"target impedance {target_z0} ohm outside solvable 10-200 ohm range")
    lo, hi = 1e-3 * substrate.height, 1e3 * substrate.height
    if not (characteristic_impedance(substrate, hi)
            <= target_z0 <= characteristic_impedance(substrate, lo)):
        raise UnsolvableError(f"target impedance {target_z0} ohm not bracketed on this substrate")
    while True:
        mid = 0.5 * (lo + hi)
        z = characteristic_impedance(substrate, mid)
        if abs(z - target_z0) <= tol:
            return mid
        if z > target_z0:
            lo = mid
        else:
            hi = mid


def guided_wavelength(substrate: Substrate, width: float, frequency: float) -> float:
    """Wavelength in the line, c / (f * sqrt(eps_eff)), in meters."""
    if frequency <= 0.0:
        raise InvalidParameterError("frequency must be positive")
    return C0 / (frequency * math.sqrt(effective_permittivity(substrate, width)))


def electrical_length_deg(physical_length: float, wavelength: float) -> float:
    """Electrical length 360 * l / lambda in degrees, unwrapped."""
    if wavelength <= 0.0:
        raise InvalidParameterError("wavelength must be positive")
    return 360.0 * physical_length / wavelength


def length_for_phase(target_deg: float, wavelength: float) -> float:
    """Physical length in meters whose electrical length is target_deg."""
    if target_deg <= 0.0:
        raise InvalidParameterError("target phase must be positive")
    if wavelength <= 0.0:
        raise InvalidParameterError("wavelength must be positive")
    return wavelength * target_deg / 360.0


@dataclass(frozen=True)
class MicrostripLine:
    """A sized microstrip line on a substrate."""

    substrate: Substrate
    width: float
    physical_length: float = 0.0

    def __post_init__(self):
        if self.width <= 0.0:
            raise InvalidParameterError("line width must be positive")

    @property
    def effective_permittivity(self) -> float:
        return effective_permittivity(self.substrate, self.width)

    @property
    def characteristic_impedance(self) -> float:
        return characteristic_impedance(self.substrate, self.width)

    def guided_wavelength(self, frequency: float) -> float:
        return guided_wavelength(self.substrate, self.width, frequency)

    def electrical_length_deg(self, frequency: float) -> float:
        return electrical_length_deg(self.physical_length, self.guided_wavelength(frequency))
