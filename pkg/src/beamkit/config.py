"""Run configuration: a line-based key = value format with [section] headers.

Example::

    [run]
    mode = rotman                 # butler | rotman | pattern | sweep
    output_dir = out
    formats = csv, svg, touchstone

    [rotman]
    preset = 8x8-6.3ghz
    optimize_g = true

    [pattern]
    input = measured.txt
    convention = field            # field | appendixA
    spacing_wl = 0.82

    [sweep]
    base = rotman
    frequencies_hz = 6.0e9, 6.3e9, 6.6e9

Explicit lens parameters may replace `preset` in [rotman]:
focal_length_m, focal_ratio, focal_angle_deg, elements, spacing_m,
beams, max_scan_deg, frequency_hz, substrate, arc, eccentricity,
feed_span_deg, dummy_ports, guard_fraction, wall_reflectivity.
Measured-table frequencies are MHz unless frequency_unit overrides it.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .rotman import ROTMAN_PRESETS, RotmanDesignParams, rotman_preset
from .substrate import SUBSTRATE_PRESETS, Substrate, substrate_by_name

MODES = ("butler", "rotman", "pattern", "sweep")
FORMATS = ("csv", "svg", "touchstone")


@dataclass(frozen=True)
class ButlerRunConfig:
    order: int = 4
    frequency_hz: float = 3.15e9
    substrate: Substrate = SUBSTRATE_PRESETS["FR4-0.8"]


@dataclass(frozen=True)
class PatternRunConfig:
    input_path: str = ""
    input_text: str = ""
    convention: str = "field"
    spacing_wl: float = 0.5
    steer_reference_deg: float = 90.0
    grid_step_deg: float = 1.0
    frequency_unit: str = "MHz"    # interpretation of the measured-table column


@dataclass(frozen=True)
class RotmanRunConfig:
    params: RotmanDesignParams | None = None
    optimize_g: bool = False
    g_min: float = 1.05
    g_max: float = 1.8
    emit_patterns: bool = True


@dataclass(frozen=True)
class RunConfig:
    mode: str
    output_dir: str = "out"
    formats: tuple[str, ...] = ("csv", "svg", "touchstone")
    butler: ButlerRunConfig = field(default_factory=ButlerRunConfig)
    rotman: RotmanRunConfig = field(default_factory=RotmanRunConfig)
    pattern: PatternRunConfig = field(default_factory=PatternRunConfig)
    sweep_base: str = "rotman"
    sweep_frequencies_hz: tuple[float, ...] = ()

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for f in self.formats:
            if f not in FORMATS:
                raise ConfigError(f"unknown output format {f!r}; known: {FORMATS}")
        if self.mode == "rotman" and self.rotman.params is None:
            raise ConfigError("rotman mode needs a preset or explicit lens parameters")
        if self.mode == "pattern" and not (self.pattern.input_path or self.pattern.input_text):
            raise ConfigError("pattern mode needs an input measured table")
        if self.mode == "sweep":
            if self.sweep_base not in ("rotman", "butler"):
                raise ConfigError("sweep base must be 'rotman' or 'butler'")
            if not self.sweep_frequencies_hz:
                raise ConfigError("sweep mode needs frequencies_hz")
            if self.sweep_base == "rotman" and self.rotman.params is None:
                raise ConfigError("rotman sweep needs a preset or explicit lens parameters")


def _get(cp: configparser.ConfigParser, section: str, key: str, cast, default):
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key)
    try:
        if cast is bool:
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r} is not a valid {cast.__name__}") from None


def _parse_rotman_params(cp: configparser.ConfigParser) -> RotmanDesignParams | None:
    if not cp.has_section("rotman"):
        return None
    if cp.has_option("rotman", "preset"):
        name = cp.get("rotman", "preset").strip()
        if name not in ROTMAN_PRESETS:
            raise ConfigError(f"unknown rotman preset {name!r}; known: {sorted(ROTMAN_PRESETS)}")
        params = rotman_preset(name)
        if cp.has_option("rotman", "focal_ratio"):
            params = replace(params, focal_ratio=_get(cp, "rotman", "focal_ratio", float, None))
        return params
    required = ("focal_length_m", "focal_ratio", "focal_angle_deg", "elements",
                "spacing_m", "beams", "max_scan_deg", "frequency_hz", "substrate")
    missing = [k for k in required if not cp.has_option("rotman", k)]
    if missing:
        raise ConfigError(f"[rotman] needs a preset or all of {required}; missing {missing}")
    sub_name = cp.get("rotman", "substrate").strip()
    try:
        sub = substrate_by_name(sub_name)
    except Exception:
        raise ConfigError(f"unknown substrate preset {sub_name!r}; "
                          f"known: {sorted(SUBSTRATE_PRESETS)}") from None
    ecc = _get(cp, "rotman", "eccentricity", float, None)
    span = _get(cp, "rotman", "feed_span_deg", float, None)
    return RotmanDesignParams(
        off_axis_focal_length=_get(cp, "rotman", "focal_length_m", float, None),
        focal_ratio=_get(cp, "rotman", "focal_ratio", float, None),
        focal_angle_deg=_get(cp, "rotman", "focal_angle_deg", float, None),
        n_array_elements=_get(cp, "rotman", "elements", int, None),
        element_spacing=_get(cp, "rotman", "spacing_m", float, None),
        n_beam_ports=_get(cp, "rotman", "beams", int, None),
        max_scan_angle_deg=_get(cp, "rotman", "max_scan_deg", float, None),
        frequency=_get(cp, "rotman", "frequency_hz", float, None),
        substrate=sub,
        focal_arc=_get(cp, "rotman", "arc", str, "circular").strip(),
        eccentricity=ecc,
        beam_feed_span_deg=span,
        feed_mapping=_get(cp, "rotman", "feed_mapping", str, "linear").strip(),
        n_dummy_ports=_get(cp, "rotman", "dummy_ports", int, 2),
        guard_fraction=_get(cp, "rotman", "guard_fraction", float, 0.15),
        wall_reflectivity=_get(cp, "rotman", "wall_reflectivity", float, 0.0),
    )


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document."""
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"bad config syntax: {exc}") from None
    if not cp.has_section("run"):
        raise ConfigError("config needs a [run] section")
    mode = _get(cp, "run", "mode", str, "").strip()
    output_dir = _get(cp, "run", "output_dir", str, "out").strip()
    formats_raw = _get(cp, "run", "formats", str, "csv, svg, touchstone")
    formats = tuple(t.strip() for t in formats_raw.split(",") if t.strip())

    butler = ButlerRunConfig(
        order=_get(cp, "butler", "order", int, 4),
        frequency_hz=_get(cp, "butler", "frequency_hz", float, 3.15e9),
        substrate=substrate_by_name(_get(cp, "butler", "substrate", str, "FR4-0.8").strip()),
    ) if cp.has_section("butler") else ButlerRunConfig()

    try:
        rotman_params = _parse_rotman_params(cp)
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"invalid lens parameters: {exc}") from None
    rotman = RotmanRunConfig(
        params=rotman_params,
        optimize_g=_get(cp, "rotman", "optimize_g", bool, False),
        g_min=_get(cp, "rotman", "g_min", float, 1.05),
        g_max=_get(cp, "rotman", "g_max", float, 1.8),
        emit_patterns=_get(cp, "rotman", "emit_patterns", bool, True),
    )

    pattern = PatternRunConfig(
        input_path=_get(cp, "pattern", "input", str, "").strip(),
        convention=_get(cp, "pattern", "convention", str, "field").strip(),
        spacing_wl=_get(cp, "pattern", "spacing_wl", float, 0.5),
        steer_reference_deg=_get(cp, "pattern", "steer_reference_deg", float, 90.0),
        grid_step_deg=_get(cp, "pattern", "grid_step_deg", float, 1.0),
        frequency_unit=_get(cp, "pattern", "frequency_unit", str, "MHz").strip(),
    )

    freqs_raw = _get(cp, "sweep", "frequencies_hz", str, "")
    freqs = tuple(float(t) for t in freqs_raw.split(",") if t.strip()) if freqs_raw else ()

    return RunConfig(
        mode=mode,
        output_dir=output_dir,
        formats=formats,
        butler=butler,
        rotman=rotman,
        pattern=pattern,
        sweep_base=_get(cp, "sweep", "base", str, "rotman").strip(),
        sweep_frequencies_hz=freqs,
    )


def load_config(path: str) -> RunConfig:
    from pathlib import Path

    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path!r} does not exist")
    return parse_config(p.read_text(encoding="utf-8"))
