"""Measured port tables: one row per array output port for a fixed beam.

The wire format is whitespace-delimited numeric triples, one per line:

    frequency_MHz   magnitude_dB   phase_deg

All rows must share one frequency (the VNA marker frequency) and row
order is the element order. Phases are canonicalised into (-180, 180].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..errors import InvalidParameterError, ParseError
from ..pattern import ExcitationVector

FREQ_MATCH_TOL_MHZ = 1e-6


@dataclass(frozen=True)
class MeasuredPortTable:
    """Parsed measured rows: (frequency_mhz, magnitude_db, phase_deg)."""

    rows: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if len(self.rows) < 2:
            raise InvalidParameterError("a measured table needs at least 2 rows")

    @property
    def n_elements(self) -> int:
        return len(self.rows)

    @property
    def frequency_mhz(self) -> float:
        return self.rows[0][0]

    @property
    def frequency_hz(self) -> float:
        return self.frequency_mhz * 1e6

    def to_excitation(self, element_spacing_wl: float,
                      steer_reference_deg: float = 90.0) -> ExcitationVector:
        return ExcitationVector(
            tuple((mag, ph) for _, mag, ph in self.rows),
            element_spacing_wl=element_spacing_wl,
            steer_reference_deg=steer_reference_deg,
        )


def _wrap_phase(deg: float) -> float:
    while deg > 180.0:
        deg -= 360.0
    while deg <= -180.0:
        deg += 360.0
    return deg


def parse_measured_table(text: str) -> MeasuredPortTable:
    """Parse a measured table, reporting the offending line on error."""
    rows: list[tuple[float, float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split("!", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise ParseError(f"expected 3 columns, found {len(toks)}", line=lineno)
        try:
            freq, mag, phase = (float(t) for t in toks)
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", line=lineno) from None
        if abs(phase) > 360.0:
            raise ParseError(f"phase {phase} deg outside +/-360", line=lineno)
        if rows and abs(freq - rows[0][0]) > FREQ_MATCH_TOL_MHZ:
            raise ParseError(
                f"frequency {freq} MHz differs from {rows[0][0]} MHz on row 1",
                line=lineno)
        rows.append((freq, mag, _wrap_phase(phase)))
    if not rows:
        raise ParseError("empty measured table")
    if len(rows) < 2:
        raise ParseError("a measured table needs at least 2 rows (one per element)")
    return MeasuredPortTable(tuple(rows))


def load_measured_table(path: str | Path) -> MeasuredPortTable:
    return parse_measured_table(Path(path).read_text(encoding="ascii", errors="replace"))


def serialize_measured_table(table: MeasuredPortTable) -> str:
    """Canonical text form; parse(serialize(t)) == t."""
    lines = [f"{f:.7f} {m:.9g} {p:.9g}" for f, m, p in table.rows]
    return "\n".join(lines) + "\n"
