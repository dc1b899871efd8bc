"""Run orchestration: turn a RunConfig into report text and output files.

execute() is pure (returns file contents in memory) and is shared by the
CLI and the HTTP service; run() writes the files to disk. All emission
is deterministic for a fixed config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import butler as bm
from . import rotman as rl
from . import substrate as tline
from .config import RunConfig
from .errors import ConfigError
from .fileio import tables
from .fileio.measured import load_measured_table, parse_measured_table
from .fileio.touchstone import touchstone_text
from .pattern import array_factor, beam_metrics, relative_phase_differences

C0 = 299792458.0


@dataclass(frozen=True)
class RunOutput:
    """Everything a run produced, keyed by relative file name."""

    summary: dict
    files: dict[str, str]


def execute(config: RunConfig) -> RunOutput:
    if config.mode == "butler":
        return _run_butler(config)
    if config.mode == "rotman":
        return _run_rotman(config)
    if config.mode == "pattern":
        return _run_pattern(config)
    return _run_sweep(config)


def run(config: RunConfig, base_dir: str | Path = ".") -> list[Path]:
    """Execute and write the produced files under config.output_dir."""
    out = execute(config)
    target = Path(base_dir) / config.output_dir
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(out.files):
        path = target / name
        path.write_text(out.files[name], encoding="utf-8", newline="")
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# butler

def _run_butler(config: RunConfig) -> RunOutput:
    cfg = config.butler
    design = bm.assemble_butler(cfg.order, cfg.frequency_hz, cfg.substrate)
    files: dict[str, str] = {}

    lines = [
        f"Butler matrix design report",
        f"order: {cfg.order}x{cfg.order}",
        f"frequency: {tables.fmt9(cfg.frequency_hz / 1e9)} GHz",
        f"substrate: {cfg.substrate.name or 'custom'} "
        f"(eps_r {tables.fmt9(cfg.substrate.relative_permittivity)}, "
        f"h {tables.fmt9(cfg.substrate.height * 1e3)} mm)",
        "",
        f"inventory: {design.inventory.hybrids} hybrids, "
        f"{design.inventory.phase_shifters} phase shifters, "
        f"{design.inventory.crossovers} crossovers, "
        f"{design.inventory.output_equalisers} output equalisers",
        "",
        "beam-port phase law (progressive output phase, degrees):",
    ]
    law_rows = []
    for port in design.beam_ports:
        law = bm.ideal_beam_phase(cfg.order, port)
        rel = bm.relative_output_phases(design, port)
        lines.append(f"  port {port}: {tables.fmt9(law.progressive_phase_deg)} deg "
                     f"(assembled: {', '.join(tables.fmt9(v) for v in rel)})")
        law_rows.append([port, law.progressive_phase_deg] + rel)

    phys = bm.physical_summary(design)
    lines += [
        "",
        "microstrip realisation:",
        f"  50 ohm line width: {tables.fmt9(phys['width_50ohm_m'] * 1e3)} mm",
        f"  35.36 ohm line width: {tables.fmt9(phys['width_35ohm_m'] * 1e3)} mm",
        f"  eps_eff (50 ohm): {tables.fmt9(phys['eps_eff_50ohm'])}",
        f"  guided wavelength: {tables.fmt9(phys['guided_wavelength_50ohm_m'] * 1e3)} mm",
        f"  quarter-wave length: {tables.fmt9(phys['quarter_wave_length_m'] * 1e3)} mm",
        f"  45 deg shifter length: {tables.fmt9(phys['shifter_45deg_length_m'] * 1e3)} mm",
        f"  90 deg equaliser length: {tables.fmt9(phys['shifter_90deg_length_m'] * 1e3)} mm",
    ]
    files["butler_report.txt"] = "\n".join(lines) + "\n"

    if "csv" in config.formats:
        header = ["beam_port", "progressive_phase_deg"] + [
            f"rel_phase_{k}_{k + 1}_deg" for k in range(1, cfg.order)]
        files["butler_phases.csv"] = tables.csv_text(header, law_rows)
    if "touchstone" in config.formats:
        files[f"butler.s{2 * cfg.order}p"] = touchstone_text([design.assembled])

    summary = {
        "mode": "butler",
        "order": cfg.order,
        "frequency_hz": cfg.frequency_hz,
        "phase_law_deg": {str(p): bm.ideal_beam_phase(cfg.order, p).progressive_phase_deg
                          for p in design.beam_ports},
        "unitary": design.assembled.is_unitary(1e-9),
    }
    return RunOutput(summary, files)


# ---------------------------------------------------------------------------
# rotman

def _run_rotman(config: RunConfig, frequency: float | None = None,
                suffix: str = "") -> RunOutput:
    cfg = config.rotman
    params = cfg.params
    if frequency is not None:
        params = replace(params, frequency=frequency)

    g_star = None
    if cfg.optimize_g:
        result = rl.optimize_focal_ratio(params, (cfg.g_min, cfg.g_max))
        g_star = result.g_star
        params = replace(params, focal_ratio=g_star)

    geo = rl.synthesize_geometry(params)
    files: dict[str, str] = {}

    if "csv" in config.formats:
        files[f"geometry{suffix}.csv"] = tables.geometry_csv(geo)
        files[f"phase_error{suffix}.csv"] = tables.phase_error_csv(geo)
        couplings = {}
        for b_idx, bport in enumerate(geo.beam_ports, start=1):
            for a_idx, aport in enumerate(geo.array_ports, start=1):
                couplings[(b_idx, a_idx)] = rl.port_coupling(geo, bport, aport,
                                                             params.frequency)
        files[f"coupling{suffix}.csv"] = tables.coupling_csv(geo, couplings)
    if "svg" in config.formats:
        files[f"geometry{suffix}.svg"] = tables.geometry_svg(geo)

    beam_summaries = []
    if cfg.emit_patterns:
        for b_idx, bport in enumerate(geo.beam_ports, start=1):
            exc = rl.array_excitation(geo, b_idx)
            pat = array_factor(exc)
            if "csv" in config.formats:
                files[f"pattern_port{b_idx}{suffix}.csv"] = tables.pattern_csv(pat)
            beam_summaries.append({
                "port": b_idx,
                "feed_angle_deg": bport.feed_angle_deg,
                "designed_beam_deg": bport.designed_beam_deg,
                "main_lobe_deg": pat.main_lobe_angle_deg,
                "sidelobe_level_db": pat.sidelobe_level_db,
            })

    worst = max(abs(rl.phase_error(geo, p.feed_angle_deg, c.eta))
                for p in geo.beam_ports for c in geo.array_contour)
    lines = [
        "Rotman lens design report",
        f"beams x elements: {params.n_beam_ports} x {params.n_array_elements}",
        f"frequency: {tables.fmt9(params.frequency / 1e9)} GHz",
        f"focal arc: {params.focal_arc}",
        f"off-axis focal length F: {tables.fmt9(params.off_axis_focal_length * 1e3)} mm (electrical)",
        f"focal ratio g: {tables.fmt9(params.focal_ratio)}"
        + (f" (optimised: {tables.fmt9(g_star)})" if g_star is not None else ""),
        f"focal angle: {tables.fmt9(params.focal_angle_deg)} deg; "
        f"feed span: {tables.fmt9(params.feed_span_deg)} deg",
        f"element spacing: {tables.fmt9(params.element_spacing * 1e3)} mm "
        f"({tables.fmt9(params.element_spacing * params.frequency / C0)} wavelengths)",
        f"substrate: {params.substrate.name or 'custom'}",
        f"worst in-band path error: {tables.fmt9(worst * 1e6)} um "
        f"({tables.fmt9(worst * 360.0 * params.frequency / C0)} deg)",
        "",
        "beam ports (feed angle -> designed beam direction):",
    ]
    for b in geo.beam_ports:
        lines.append(f"  feed {tables.fmt9(b.feed_angle_deg)} deg -> "
                     f"beam {tables.fmt9(b.designed_beam_deg)} deg off broadside")
    if beam_summaries:
        lines.append("")
        lines.append("realised patterns (angle from array axis, broadside = 90 deg):")
        for s in beam_summaries:
            lines.append(
                f"  port {s['port']}: main lobe {tables.fmt9(s['main_lobe_deg'])} deg, "
                f"designed {tables.fmt9(90.0 - s['designed_beam_deg'])} deg, "
                f"SLL {tables.fmt9(s['sidelobe_level_db'])} dB")
    files[f"rotman_report{suffix}.txt"] = "\n".join(lines) + "\n"

    summary = {
        "mode": "rotman",
        "n_beam_ports": params.n_beam_ports,
        "n_array_elements": params.n_array_elements,
        "frequency_hz": params.frequency,
        "focal_ratio": params.focal_ratio,
        "optimized_focal_ratio": g_star,
        "worst_path_error_m": worst,
        "beams": beam_summaries,
    }
    return RunOutput(summary, files)


# ---------------------------------------------------------------------------
# pattern

def _run_pattern(config: RunConfig) -> RunOutput:
    cfg = config.pattern
    if cfg.input_text:
        table = parse_measured_table(cfg.input_text)
    else:
        table = load_measured_table(cfg.input_path)
    exc = table.to_excitation(cfg.spacing_wl, cfg.steer_reference_deg)

    step = cfg.grid_step_deg
    if step <= 0:
        raise ConfigError("grid_step_deg must be positive")
    angles = np.arange(step, 360.0 + step / 2.0, step)
    pat = array_factor(exc, cfg.convention, angles)
    main, sll, bw = beam_metrics(pat)
    rel = relative_phase_differences(exc, cfg.convention)

    unit_scale = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}.get(
        cfg.frequency_unit.lower())
    if unit_scale is None:
        raise ConfigError(f"unknown frequency unit {cfg.frequency_unit!r}")
    freq_hz = table.rows[0][0] * unit_scale

    files: dict[str, str] = {}
    if "csv" in config.formats:
        files["pattern.csv"] = tables.pattern_csv(pat)
        files["pattern_polar.csv"] = tables.polar_pattern_csv(pat)
        files["relative_phases.csv"] = tables.csv_text(
            ["element_pair", "phase_difference_deg"],
            [[k + 1, v] for k, v in enumerate(rel)])

    lines = [
        "Array-factor report",
        f"elements: {table.n_elements}",
        f"table frequency: {tables.fmt9(freq_hz / 1e9)} GHz",
        f"element spacing: {tables.fmt9(cfg.spacing_wl)} wavelengths",
        f"amplitude convention: {cfg.convention}",
        f"main lobe: {tables.fmt9(main)} deg",
        f"sidelobe level: {tables.fmt9(sll)} dB",
        f"3 dB beamwidth: {tables.fmt9(bw)} deg",
        "relative phase differences (deg): "
        + ", ".join(tables.fmt9(v) for v in rel),
    ]
    files["pattern_report.txt"] = "\n".join(lines) + "\n"

    summary = {
        "mode": "pattern",
        "n_elements": table.n_elements,
        "frequency_hz": freq_hz,
        "main_lobe_deg": main,
        "sidelobe_level_db": sll,
        "beamwidth_3db_deg": bw,
        "relative_phases_deg": rel,
    }
    return RunOutput(summary, files)


# ---------------------------------------------------------------------------
# sweep

def _run_sweep(config: RunConfig) -> RunOutput:
    freqs = sorted(config.sweep_frequencies_hz)
    files: dict[str, str] = {}
    points = []
    if config.sweep_base == "butler":
        cfg = config.butler
        designs = [bm.assemble_butler(cfg.order, f, cfg.substrate) for f in freqs]
        if "touchstone" in config.formats:
            files[f"butler_sweep.s{2 * cfg.order}p"] = touchstone_text(
                [d.assembled for d in designs])
        points = [{"frequency_hz": f} for f in freqs]
    else:
        for k, f in enumerate(freqs, start=1):
            sub = _run_rotman(config, frequency=f, suffix=f"_f{k}")
            files.update(sub.files)
            points.append({"frequency_hz": f, "beams": sub.summary["beams"]})
    summary = {"mode": "sweep", "base": config.sweep_base,
               "frequencies_hz": list(freqs), "points": points}
    return RunOutput(summary, files)
