"""Touchstone (.snp) import and export for n-port S-parameters.

Version-1 files: an option line `# <unit> S <format> R <z>`, comment
lines starting with `!`, then one frequency point per logical line with
2-port data in the traditional column-major order (S11 S21 S12 S22) and
larger matrices row-major, wrapped at four complex pairs per line. The
parser consumes numbers until each point is complete, so any line
wrapping is accepted on input.
"""

from __future__ import annotations

import cmath
import math
from pathlib import Path

from ..errors import InvalidParameterError, ParseError
from ..network import SParameterMatrix

FREQ_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")


def _pair_to_complex(fmt: str, a: float, b: float) -> complex:
    if fmt == "RI":
        return complex(a, b)
    mag = a if fmt == "MA" else 10.0 ** (a / 20.0)
    return cmath.rect(mag, math.radians(b))


def _complex_to_pair(fmt: str, v: complex) -> tuple[float, float]:
    if fmt == "RI":
        return v.real, v.imag
    mag, ang = abs(v), math.degrees(cmath.phase(v))
    if fmt == "MA":
        return mag, ang
    db = -math.inf if mag == 0.0 else 20.0 * math.log10(mag)
    return db, ang


def export_touchstone(net: SParameterMatrix, path: str | Path,
                      frequency_unit: str = "GHZ", data_format: str = "RI") -> None:
    """Write one network as a single-frequency-point Touchstone file."""
    write_touchstone_sweep([net], path, frequency_unit, data_format)


def write_touchstone_sweep(networks: list[SParameterMatrix], path: str | Path,
                           frequency_unit: str = "GHZ", data_format: str = "RI") -> None:
    """Write a frequency sweep; all points must share port count and z_ref."""
    Path(path).write_text(touchstone_text(networks, frequency_unit, data_format),
                          encoding="ascii")


def touchstone_text(networks: list[SParameterMatrix],
                    frequency_unit: str = "GHZ", data_format: str = "RI") -> str:
    """Render a sweep as Touchstone text."""
    if not networks:
        raise InvalidParameterError("nothing to export")
    unit = frequency_unit.upper()
    fmt = data_format.upper()
    if unit not in FREQ_UNITS:
        raise InvalidParameterError(f"unknown frequency unit {frequency_unit!r}")
    if fmt not in FORMATS:
        raise InvalidParameterError(f"unknown data format {data_format!r}")
    n = networks[0].n_ports
    z = networks[0].z_ref
    if any(net.n_ports != n or net.z_ref != z for net in networks):
        raise InvalidParameterError("sweep points differ in port count or reference impedance")

    lines = [f"! {n}-port S-parameter data",
             f"# {unit} S {fmt} R {z:.9g}"]
    for net in sorted(networks, key=lambda m: m.frequency):
        freq = net.frequency / FREQ_UNITS[unit]
        pairs = []
        if n == 2:
            order = [(0, 0), (1, 0), (0, 1), (1, 1)]
        else:
            order = [(i, j) for i in range(n) for j in range(n)]
        for i, j in order:
            pairs.append(_complex_to_pair(fmt, complex(net.s[i, j])))
        chunks: list[list[tuple[float, float]]] = []
        if n <= 2:
            chunks.append(pairs)
        else:
            # one matrix row per logical line, wrapped at 4 pairs
            for r in range(n):
                row = pairs[r * n:(r + 1) * n]
                for k in range(0, n, 4):
                    chunks.append(row[k:k + 4])
        first = True
        for chunk in chunks:
            head = f"{freq:.12g}" if first else " " * len(f"{freq:.12g}")
            body = " ".join(f"{a:.12g} {b:.12g}" for a, b in chunk)
            lines.append(f"{head} {body}")
            first = False
    return "\n".join(lines) + "\n"


def import_touchstone(path: str | Path) -> list[SParameterMatrix]:
    """Read a Touchstone file; returns one matrix per frequency point.

    The port count comes from the .sNp extension when present, otherwise
    it is inferred from the total value count.
    """
    path = Path(path)
    text = path.read_text(encoding="ascii", errors="replace")
    return parse_touchstone(text, ports_from_filename(path.name))


def parse_touchstone(text: str, n_ports: int | None = None) -> list[SParameterMatrix]:
    """Parse Touchstone text; see import_touchstone."""
    unit, fmt, z = "GHZ", "MA", 50.0
    numbers: list[float] = []
    option_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("#"):
            if option_seen:
                continue  # later option lines are ignored per the v1 convention
            unit, fmt, z = _parse_option_line(line, lineno)
            option_seen = True
            continue
        for tok in line.split():
            try:
                numbers.append(float(tok))
            except ValueError:
                raise ParseError(f"non-numeric token {tok!r}", line=lineno) from None

    if not numbers:
        raise ParseError("no data in touchstone file")
    if n_ports is None:
        n_ports = _infer_ports(len(numbers))
    per_point = 1 + 2 * n_ports * n_ports
    if len(numbers) % per_point != 0:
        raise ParseError(
            f"value count {len(numbers)} is not a whole number of "
            f"{n_ports}-port frequency points ({per_point} values each)")

    out = []
    for k in range(0, len(numbers), per_point):
        freq = numbers[k] * FREQ_UNITS[unit]
        vals = numbers[k + 1:k + per_point]
        entries = [_pair_to_complex(fmt, vals[2 * m], vals[2 * m + 1])
                   for m in range(n_ports * n_ports)]
        s = [[0j] * n_ports for _ in range(n_ports)]
        if n_ports == 2:
            (s[0][0], s[1][0], s[0][1], s[1][1]) = entries
        else:
            for i in range(n_ports):
                for j in range(n_ports):
                    s[i][j] = entries[i * n_ports + j]
        out.append(SParameterMatrix(freq, s, z))
    return out


def _parse_option_line(line: str, lineno: int) -> tuple[str, str, float]:
    toks = line[1:].split()
    unit, fmt, z = "GHZ", "MA", 50.0
    k = 0
    while k < len(toks):
        t = toks[k].upper()
        if t in FREQ_UNITS:
            unit = t
        elif t == "S":
            pass
        elif t in FORMATS:
            fmt = t
        elif t == "R":
            if k + 1 >= len(toks):
                raise ParseError("option line R without impedance", line=lineno)
            try:
                z = float(toks[k + 1])
            except ValueError:
                raise ParseError(f"bad reference impedance {toks[k + 1]!r}", line=lineno) from None
            k += 1
        elif t in ("Y", "Z", "H", "G"):
            raise ParseError(f"unsupported parameter type {t}", line=lineno)
        else:
            raise ParseError(f"unknown option token {toks[k]!r}", line=lineno)
        k += 1
    return unit, fmt, z


def ports_from_filename(name: str) -> int | None:
    """Port count from an .sNp extension, or None."""
    s = name.lower().rsplit(".", 1)[-1] if "." in name else ""
    if s.startswith("s") and s.endswith("p") and s[1:-1].isdigit():
        return int(s[1:-1])
    return None


def _infer_ports(total: int) -> int:
    candidates = [n for n in range(1, 33) if total % (1 + 2 * n * n) == 0]
    if len(candidates) == 1:
        return candidates[0]
    raise ParseError(f"cannot infer a unique port count from {total} values; "
                     "use an .sNp extension")
