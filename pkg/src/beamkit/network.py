"""Complex S-parameter and ABCD two-port algebra.

Single-frequency matrices with one real reference impedance (50 ohms by
default); sweeps are collections of these. Interconnection and
termination are exact wave-variable eliminations (small dense solves, no
iteration), so ideal lossless compositions stay unitary to machine
precision.

Port numbering is 1-based everywhere in the public API, matching RF
convention (S21 = entry(2, 1)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateNetworkError,
    IncompatibleNetworkError,
    InvalidParameterError,
)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SParameterMatrix:
    """An n-port scattering matrix at one frequency.

    Entries are wave ratios referenced to a common real impedance z_ref.
    The array is copied and frozen on construction; matrices are safe to
    share between threads.
    """

    frequency: float
    s: np.ndarray
    z_ref: float = 50.0

    def __post_init__(self):
        arr = np.array(self.s, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidParameterError("S-matrix must be square")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameterError("S-matrix entries must be finite")
        if self.z_ref <= 0.0:
            raise InvalidParameterError("reference impedance must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "s", arr)

    @property
    def n_ports(self) -> int:
        return self.s.shape[0]

    def entry(self, to_port: int, from_port: int) -> complex:
        """S(to, from) with 1-based ports."""
        self._check_port(to_port)
        self._check_port(from_port)
        return complex(self.s[to_port - 1, from_port - 1])

    def magnitude_db(self, to_port: int, from_port: int) -> float:
        mag = abs(self.entry(to_port, from_port))
        return -math.inf if mag == 0.0 else 20.0 * math.log10(mag)

    def phase_deg(self, to_port: int, from_port: int) -> float:
        return math.degrees(cmath.phase(self.entry(to_port, from_port)))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        p = self.s @ self.s.conj().T
        return bool(np.max(np.abs(p - np.eye(self.n_ports))) <= tol)

    def is_reciprocal(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.s - self.s.T)) <= tol)

    def _check_port(self, port: int) -> None:
        if not 1 <= port <= self.n_ports:
            raise InvalidParameterError(f"port {port} out of range 1..{self.n_ports}")


@dataclass(frozen=True)
class AbcdMatrix:
    """A two-port chain (ABCD) matrix at one frequency.

    B carries ohms and C siemens; for reciprocal two-ports AD - BC = 1.
    """

    frequency: float
    a: complex
    b: complex
    c: complex
    d: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c


@dataclass(frozen=True)
class EvenOddResult:
    """Even/odd-mode coefficients of the branch-line coupler and the
    resulting emerging-wave amplitudes at its four ports."""

    gamma_even: complex
    t_even: complex
    gamma_odd: complex
    t_odd: complex
    b1: complex = field(init=False)
    b2: complex = field(init=False)
    b3: complex = field(init=False)
    b4: complex = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "b1", 0.5 * self.gamma_even + 0.5 * self.gamma_odd)
        object.__setattr__(self, "b2", 0.5 * self.t_even + 0.5 * self.t_odd)
        object.__setattr__(self, "b3", 0.5 * self.t_even - 0.5 * self.t_odd)
        object.__setattr__(self, "b4", 0.5 * self.gamma_even - 0.5 * self.gamma_odd)


def abcd_to_s(m: AbcdMatrix, z_ref: float = 50.0) -> SParameterMatrix:
    """Convert a two-port ABCD matrix to S-parameters referenced to z_ref."""
    a, b, c, d = m.a, m.b / z_ref, m.c * z_ref, m.d
    denom = a + b + c + d
    if abs(denom) < 1e-300:
        raise DegenerateNetworkError("A + B/Z + C*Z + D vanished; network is degenerate")
    det = m.determinant
    s11 = (a + b - c - d) / denom
    s12 = 2.0 * det / denom
    s21 = 2.0 / denom
    s22 = (-a + b - c + d) / denom
    return SParameterMatrix(m.frequency, [[s11, s12], [s21, s22]], z_ref)


def s_to_abcd(net: SParameterMatrix) -> AbcdMatrix:
    """Inverse conversion for two-ports."""
    if net.n_ports != 2:
        raise InvalidParameterError("ABCD conversion needs a 2-port")
    z = net.z_ref
    s11, s12 = net.s[0, 0], net.s[0, 1]
    s21, s22 = net.s[1, 0], net.s[1, 1]
    if abs(s21) < 1e-300:
        raise DegenerateNetworkError("S21 = 0; no through path to convert")
    a = ((1 + s11) * (1 - s22) + s12 * s21) / (2 * s21)
    b = z * ((1 + s11) * (1 + s22) - s12 * s21) / (2 * s21)
    c = ((1 - s11) * (1 - s22) - s12 * s21) / (2 * s21) / z
    d = ((1 - s11) * (1 + s22) + s12 * s21) / (2 * s21)
    return AbcdMatrix(net.frequency, a, b, c, d)


def cascade_abcd(first: AbcdMatrix, second: AbcdMatrix) -> AbcdMatrix:
    """Chain two two-ports; order-sensitive matrix product."""
    if first.frequency != second.frequency:
        raise IncompatibleNetworkError("cannot cascade ABCD matrices at different frequencies")
    m = first.as_array() @ second.as_array()
    return AbcdMatrix(first.frequency, m[0, 0], m[0, 1], m[1, 0], m[1, 1])


def shunt_admittance_abcd(y: complex, frequency: float = 0.0) -> AbcdMatrix:
    return AbcdMatrix(frequency, 1.0, 0.0, y, 1.0)


def line_abcd(electrical_deg: float, z0: float, frequency: float = 0.0) -> AbcdMatrix:
    """Lossless line section of given electrical length and impedance."""
    th = math.radians(electrical_deg)
    return AbcdMatrix(
        frequency,
        math.cos(th),
        1j * z0 * math.sin(th),
        1j * math.sin(th) / z0,
        math.cos(th),
    )


def blc_even_odd() -> EvenOddResult:
    """Even/odd-mode analysis of the ideal normalized branch-line coupler.

    The even (odd) half-circuit is an open (shorted) eighth-wave stub, a
    quarter-wave 1/sqrt(2) line, and a second identical stub, all
    normalized to unit impedance. Exact at the center frequency.
    """
    quarter = line_abcd(90.0, 1.0 / SQRT2)

    def half_circuit(stub_y: complex) -> SParameterMatrix:
        stub = shunt_admittance_abcd(stub_y)
        return abcd_to_s(cascade_abcd(cascade_abcd(stub, quarter), stub), z_ref=1.0)

    even = half_circuit(1j)    # open eighth-wave stub, y = +j
    odd = half_circuit(-1j)    # shorted eighth-wave stub, y = -j
    return EvenOddResult(
        gamma_even=even.entry(1, 1),
        t_even=even.entry(2, 1),
        gamma_odd=odd.entry(1, 1),
        t_odd=odd.entry(2, 1),
    )


def ideal_hybrid_smatrix(frequency: float, z_ref: float = 50.0) -> SParameterMatrix:
    """Ideal 3 dB quadrature hybrid (branch-line coupler).

    Ports: 1 input (top left), 2 through (top right), 3 coupled (bottom
    right), 4 isolated (bottom left). S21 = -j/sqrt(2), S31 = -1/sqrt(2).
    """
    f = -1.0 / SQRT2
    j = 1j
    s = [
        [0, j * f, f, 0],
        [j * f, 0, 0, f],
        [f, 0, 0, j * f],
        [0, f, j * f, 0],
    ]
    return SParameterMatrix(frequency, s, z_ref)


def ideal_phase_shifter(phase_deg: float, frequency: float,
                        z_ref: float = 50.0) -> SParameterMatrix:
    """Matched two-port with S21 = exp(-j * phase_deg)."""
    t = cmath.exp(-1j * math.radians(phase_deg))
    return SParameterMatrix(frequency, [[0, t], [t, 0]], z_ref)


def _eliminate(s: np.ndarray, idx_i: tuple[int, ...], coupling: np.ndarray) -> np.ndarray:
    """Eliminate internal ports under the constraint a_I = coupling @ b_I.

    Exact linear elimination: partitions the wave equations into external
    and internal ports and solves the small internal system directly.
    """
    n = s.shape[0]
    internal = list(idx_i)
    external = [k for k in range(n) if k not in internal]
    s_ee = s[np.ix_(external, external)]
    s_ei = s[np.ix_(external, internal)]
    s_ie = s[np.ix_(internal, external)]
    s_ii = s[np.ix_(internal, internal)]
    m = np.eye(len(internal), dtype=complex) - coupling @ s_ii
    if abs(np.linalg.det(m)) < 1e-300:
        raise DegenerateNetworkError("interconnection produced a singular (resonant) loop")
    t = np.linalg.solve(m, coupling @ s_ie)
    return s_ee + s_ei @ t


def connect_networks(a: SParameterMatrix, port_a: int,
                     b: SParameterMatrix, port_b: int) -> SParameterMatrix:
    """Join port_a of network a to port_b of network b.

    Result ports are a's remaining ports in order, then b's remaining
    ports in order. Use self_connect for joining two ports of one
    network.
    """
    if a.frequency != b.frequency:
        raise IncompatibleNetworkError("cannot connect networks at different frequencies")
    if a.z_ref != b.z_ref:
        raise IncompatibleNetworkError("cannot connect networks with different reference impedances")
    a._check_port(port_a)
    b._check_port(port_b)
    na = a.n_ports
    big = np.zeros((na + b.n_ports, na + b.n_ports), dtype=complex)
    big[:na, :na] = a.s
    big[na:, na:] = b.s
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    out = _eliminate(big, (port_a - 1, na + port_b - 1), swap)
    return SParameterMatrix(a.frequency, out, a.z_ref)


def self_connect(net: SParameterMatrix, port_i: int, port_j: int) -> SParameterMatrix:
    """Join two ports of the same network (intra-network loop).

    Result keeps the remaining ports in their original order.
    """
    net._check_port(port_i)
    net._check_port(port_j)
    if port_i == port_j:
        raise InvalidParameterError("cannot connect a port to itself")
    swap = np.array([[0, 1], [1, 0]], dtype=complex)
    out = _eliminate(net.s, (port_i - 1, port_j - 1), swap)
    return SParameterMatrix(net.frequency, out, net.z_ref)


def terminate_port(net: SParameterMatrix, port: int, reflection: complex) -> SParameterMatrix:
    """Terminate one port with a load of the given reflection coefficient.

    A matched termination (reflection 0) of an isolated port leaves the
    remaining entries unchanged. Active loads (|reflection| > 1) are
    rejected.
    """
    net._check_port(port)
    if abs(reflection) > 1.0 + 1e-12:
        raise InvalidParameterError("|reflection| > 1: active loads are out of scope")
    gamma = np.array([[reflection]], dtype=complex)
    out = _eliminate(net.s, (port - 1,), gamma)
    return SParameterMatrix(net.frequency, out, net.z_ref)


def permute_ports(net: SParameterMatrix, order: tuple[int, ...]) -> SParameterMatrix:
    """Renumber ports; new port k is old port order[k-1] (1-based)."""
    if sorted(order) != list(range(1, net.n_ports + 1)):
        raise InvalidParameterError("port order must be a permutation of 1..n")
    idx = [p - 1 for p in order]
    out = net.s[np.ix_(idx, idx)]
    return SParameterMatrix(net.frequency, out, net.z_ref)


def ideal_crossover_smatrix(frequency: float, z_ref: float = 50.0) -> SParameterMatrix:
    """Ideal 0 dB crossover: two quadrature hybrids cascaded back to back.

    Ports follow the hybrid convention (1 top left, 2 top right, 3 bottom
    right, 4 bottom left): all power entering port 1 leaves at the
    diagonal port 3 with a +90 degree transmission phase.
    """
    h1 = ideal_hybrid_smatrix(frequency, z_ref)
    h2 = ideal_hybrid_smatrix(frequency, z_ref)
    # h1 through port -> h2 input, then h1 coupled port -> h2 isolated port.
    joined = connect_networks(h1, 2, h2, 1)
    # joined ports: [h1.1, h1.3, h1.4, h2.2, h2.3, h2.4]
    joined = self_connect(joined, 2, 6)
    # remaining: [h1.1, h1.4, h2.2, h2.3] -> renumber to (1, 2, 3, 4)
    return permute_ports(joined, (1, 3, 4, 2))
