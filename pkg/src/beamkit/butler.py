"""Butler matrix synthesis from ideal components.

The 4x4 matrix is assembled from the canonical planar topology: an input
stage of two quadrature hybrids, a crossover flanked by two 45 degree
phase shifters, an output stage of two hybrids, and a second crossover
flanked by two output phase equalisers. Crossovers are genuine cascades
of two hybrids (not abstract permutations) so non-ideal components can
be substituted later without changing the assembly.

Through-line phase blocks are referenced to the ideal crossover, whose
transmission phase is +90 degrees: the "45 degree" shifter realises a
net +45 degree transmission (45 degrees behind the paralleling
crossover) and the output equaliser matches the crossover exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import substrate as tline
from .errors import InvalidParameterError, UnsolvableError
from .network import (
    SParameterMatrix,
    connect_networks,
    ideal_crossover_smatrix,
    ideal_hybrid_smatrix,
    ideal_phase_shifter,
    permute_ports,
    self_connect,
)


@dataclass(frozen=True)
class ButlerInventory:
    """Component counts for an NxN Butler matrix.

    hybrids and phase_shifters follow the closed forms (N/2)log2(N) and
    (N/2)(log2(N)-1); crossovers and output equalisers are extras of the
    planar realisation and are only filled in by the assembler.
    """

    hybrids: int
    phase_shifters: int
    crossovers: int = 0
    output_equalisers: int = 0


@dataclass(frozen=True)
class BeamPhaseLaw:
    """Progressive inter-element output phase for one beam port."""

    port: int
    progressive_phase_deg: float


@dataclass(frozen=True)
class ButlerDesign:
    """An assembled Butler matrix: beam ports 1..N, array ports N+1..2N."""

    order: int
    frequency: float
    inventory: ButlerInventory
    assembled: SParameterMatrix
    substrate: tline.Substrate | None = None

    @property
    def beam_ports(self) -> range:
        return range(1, self.order + 1)

    @property
    def array_ports(self) -> range:
        return range(self.order + 1, 2 * self.order + 1)


def _check_order(order: int) -> int:
    if order < 2 or (order & (order - 1)) != 0:
        raise InvalidParameterError(f"matrix order must be a power of two >= 2, got {order}")
    return int(math.log2(order))


def component_counts(order: int) -> ButlerInventory:
    """Hybrid and phase-shifter counts for an NxN matrix."""
    stages = _check_order(order)
    half = order // 2
    return ButlerInventory(hybrids=half * stages, phase_shifters=half * (stages - 1))


def ideal_beam_phase(order: int, port: int) -> BeamPhaseLaw:
    """Progressive output phase, +/-(2n-1)/N * 180 degrees, for one beam port.

    Odd ports carry the negative progressions, even ports the positive
    ones, and port p mirrors port N+1-p with opposite sign. For N = 4
    this reproduces the assembled topology's mapping (asserted in tests,
    not assumed).
    """
    _check_order(order)
    if not 1 <= port <= order:
        raise InvalidParameterError(f"beam port {port} out of range 1..{order}")
    if port % 2 == 1:
        n = (port + 1) // 2
        sign = -1.0
    else:
        n = order // 2 + 1 - port // 2
        sign = 1.0
    return BeamPhaseLaw(port, sign * (2 * n - 1) * 180.0 / order)


class _Assembly:
    """Incremental network assembly with string-labelled open ports."""

    def __init__(self, net: SParameterMatrix, labels: list[str]):
        self.net = net
        self.labels = list(labels)

    def join(self, own_label: str, other: SParameterMatrix,
             other_labels: list[str], other_label: str) -> None:
        """Connect one of our open ports to a port of a new component."""
        pa = self.labels.index(own_label) + 1
        pb = other_labels.index(other_label) + 1
        self.net = connect_networks(self.net, pa, other, pb)
        self.labels = ([l for l in self.labels if l != own_label]
                       + [l for l in other_labels if l != other_label])

    def selfjoin(self, label_i: str, label_j: str) -> None:
        """Connect two of our own open ports."""
        pi = self.labels.index(label_i) + 1
        pj = self.labels.index(label_j) + 1
        self.net = self_connect(self.net, pi, pj)
        self.labels = [l for l in self.labels if l not in (label_i, label_j)]

    def finish(self, order: list[str]) -> SParameterMatrix:
        perm = tuple(self.labels.index(l) + 1 for l in order)
        return permute_ports(self.net, perm)


def assemble_butler(order: int, frequency: float,
                    substrate: tline.Substrate | None = None) -> ButlerDesign:
    """Assemble the ideal 4x4 Butler matrix.

    Beam ports 1-4 on the left, array ports 5-8 on the right; for each
    beam port all four outputs sit at -6.02 dB with the progressive
    phases of ideal_beam_phase. Larger orders are a documented extension
    point; only the 4x4 has a validated component topology here.
    """
    _check_order(order)
    if order != 4:
        raise UnsolvableError("only the 4x4 assembly is supported; phase laws for "
                              "other orders come from ideal_beam_phase")

    def hyb(prefix: str) -> tuple[SParameterMatrix, list[str]]:
        # hybrid ports: 1 in-top, 2 out-top, 3 out-bottom, 4 in-bottom
        return ideal_hybrid_smatrix(frequency), [f"{prefix}{k}" for k in (1, 2, 3, 4)]

    def cross(prefix: str) -> tuple[SParameterMatrix, list[str]]:
        return ideal_crossover_smatrix(frequency), [f"{prefix}{k}" for k in (1, 2, 3, 4)]

    def shifter(prefix: str, net_phase_deg: float) -> tuple[SParameterMatrix, list[str]]:
        # ideal_phase_shifter models -phase transmission; pass the negative
        # to realise the net +45/+90 degree crossover-referenced blocks
        return ideal_phase_shifter(-net_phase_deg, frequency), [f"{prefix}in", f"{prefix}out"]

    ha, ha_l = hyb("HA")
    asm = _Assembly(ha, ha_l)

    ps1, ps1_l = shifter("P1", 45.0)
    asm.join("HA2", ps1, ps1_l, "P1in")
    x1, x1_l = cross("X1")
    asm.join("HA3", x1, x1_l, "X11")
    hb, hb_l = hyb("HB")
    asm.join("X14", hb, hb_l, "HB2")
    ps4, ps4_l = shifter("P4", 45.0)
    asm.join("HB3", ps4, ps4_l, "P4in")

    hc, hc_l = hyb("HC")
    asm.join("P1out", hc, hc_l, "HC1")
    asm.selfjoin("X12", "HC4")
    hd, hd_l = hyb("HD")
    asm.join("X13", hd, hd_l, "HD1")
    asm.selfjoin("P4out", "HD4")

    q1, q1_l = shifter("Q1", 90.0)
    asm.join("HC2", q1, q1_l, "Q1in")
    x2, x2_l = cross("X2")
    asm.join("HC3", x2, x2_l, "X21")
    asm.selfjoin("HD2", "X24")
    q4, q4_l = shifter("Q4", 90.0)
    asm.join("HD3", q4, q4_l, "Q4in")

    assembled = asm.finish(["HA1", "HA4", "HB1", "HB4",
                            "Q1out", "X22", "X23", "Q4out"])
    inventory = ButlerInventory(hybrids=4, phase_shifters=2,
                                crossovers=2, output_equalisers=2)
    return ButlerDesign(order, frequency, inventory, assembled, substrate)


def _wrap_deg(angle: float) -> float:
    """Wrap an angle to (-180, 180]."""
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped <= 0.0:
        wrapped += 360.0
    return wrapped - 180.0


def relative_output_phases(design: ButlerDesign, beam_port: int) -> list[float]:
    """Adjacent output phase differences arg S(k+1, p) - arg S(k, p).

    N-1 values wrapped to (-180, 180], in array-port order.
    """
    if beam_port not in design.beam_ports:
        raise InvalidParameterError(f"beam port {beam_port} out of range 1..{design.order}")
    outs = list(design.array_ports)
    phases = [design.assembled.phase_deg(p, beam_port) for p in outs]
    return [_wrap_deg(b - a) for a, b in zip(phases, phases[1:])]


def beam_direction(progressive_phase_deg: float, element_spacing_wl: float) -> float:
    """Main-beam angle from the array axis for a progressive phase.

    Solves k*d*cos(phi) + beta = 0 in degrees: phi in [0, 180], with 90
    degrees broadside. Raises when the beam falls outside the visible
    region.
    """
    if element_spacing_wl <= 0.0:
        raise InvalidParameterError("element spacing must be positive")
    cos_phi = -progressive_phase_deg / (360.0 * element_spacing_wl)
    if abs(cos_phi) > 1.0:
        raise UnsolvableError(
            f"progressive phase {progressive_phase_deg} deg puts the beam outside "
            f"the visible region at spacing {element_spacing_wl} wavelengths")
    return math.degrees(math.acos(cos_phi))


def physical_summary(design: ButlerDesign) -> dict[str, float]:
    """Line widths and shifter lengths realising the design on its substrate.

    Requires the design to carry a substrate; lengths are electrical
    sizes of the crossover-referenced phase blocks at the design
    frequency.
    """
    if design.substrate is None:
        raise InvalidParameterError("design carries no substrate")
    sub = design.substrate
    w50 = tline.width_for_impedance(sub, 50.0)
    w35 = tline.width_for_impedance(sub, 50.0 / math.sqrt(2.0))
    lam50 = tline.guided_wavelength(sub, w50, design.frequency)
    return {
        "width_50ohm_m": w50,
        "width_35ohm_m": w35,
        "eps_eff_50ohm": tline.effective_permittivity(sub, w50),
        "guided_wavelength_50ohm_m": lam50,
        "quarter_wave_length_m": lam50 / 4.0,
        "shifter_45deg_length_m": tline.length_for_phase(45.0, lam50),
        "shifter_90deg_length_m": tline.length_for_phase(90.0, lam50),
    }
