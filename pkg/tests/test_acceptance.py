"""Acceptance suite: one test per release criterion, one PASS line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion
lines. Tolerances are fixed here and nowhere else.
"""

import math
import time

import numpy as np
import pytest

from beamkit.butler import assemble_butler, ideal_beam_phase, relative_output_phases
from beamkit.config import parse_config
from beamkit.network import blc_even_odd
from beamkit.pattern import (
    ExcitationVector,
    array_factor,
    beam_metrics,
    relative_phase_differences,
)
from beamkit.rotman import (
    array_excitation,
    optimize_focal_ratio,
    path_residuals,
    phase_error,
    rotman_preset,
    solve_contour_point,
    synthesize_geometry,
)
from beamkit.runner import execute
from beamkit.substrate import (
    SUBSTRATE_PRESETS,
    effective_permittivity,
    guided_wavelength,
    width_for_impedance,
)

from conftest import (
    MEASURED_SPACING_WL,
    MEASURED_TABLE_ROWS,
    MEASURED_TABLE_TEXT,
    reference_array_factor,
    reference_relative_phases,
)


def report(criterion: str, detail: str) -> None:
    print(f"\nACCEPTANCE {criterion}: PASS ({detail})")


def test_criterion_1_microstrip_model():
    """eps_eff 3.5023 +/-3% and guided wavelength 50.89 mm +/-3% on FR4."""
    fr4 = SUBSTRATE_PRESETS["FR4-0.8"]
    w50 = width_for_impedance(fr4, 50.0)
    eps = effective_permittivity(fr4, w50)
    lam = guided_wavelength(fr4, w50, 3.15e9)
    assert eps == pytest.approx(3.5023, rel=0.03)
    assert lam == pytest.approx(50.89e-3, rel=0.03)
    report("1 microstrip model",
           f"eps_eff {eps:.4f} vs 3.5023, lambda {lam * 1e3:.2f} mm vs 50.89 mm")


def test_criterion_2_branch_line_coupler():
    """Even-odd analysis: matched, isolated, half power, exact quadrature."""
    r = blc_even_odd()
    assert abs(r.gamma_even) < 1e-15 and abs(r.gamma_odd) < 1e-15
    assert abs(r.b1) < 1e-15 and abs(r.b4) < 1e-15
    assert abs(abs(r.b2) - 1 / math.sqrt(2)) <= 1e-12
    assert abs(abs(r.b3) - 1 / math.sqrt(2)) <= 1e-12
    quad = math.degrees(np.angle(r.b2 / r.b3)) % 360.0
    assert quad == pytest.approx(90.0, abs=1e-12)
    report("2 branch-line coupler",
           f"|B2| = |B3| = {abs(r.b2):.15f}, output quadrature {quad:.12f} deg")


def test_criterion_3_butler_4x4():
    """Equal -6.02 dB outputs, exact +/-45 / +/-135 progressions, unitary."""
    t0 = time.time()
    design = assemble_butler(4, 3.15e9)
    s = design.assembled.s
    for p in range(1, 5):
        mags = np.abs(s[4:8, p - 1])
        assert np.all(np.abs(mags - 0.5) < 1e-9)
        law = ideal_beam_phase(4, p).progressive_phase_deg
        for diff in relative_output_phases(design, p):
            assert abs(diff - law) < 1e-9
    assert design.assembled.is_unitary(1e-9)
    progs = sorted(round(relative_output_phases(design, p)[0], 9) for p in range(1, 5))
    assert progs == [-135.0, -45.0, 45.0, 135.0]
    elapsed = time.time() - t0
    assert elapsed < 1.0
    report("3 assembled 4x4 Butler matrix",
           f"outputs -6.02 dB, progressions {progs} deg, unitary, {elapsed:.2f}s")


def test_criterion_4_rotman_contour_properties():
    """>= 100 random (g, alpha, eta): residuals < 1e-9; origin and mirror exact."""
    t0 = time.time()
    rng = np.random.default_rng(2024)
    checked = 0
    worst = 0.0
    while checked < 120:
        g = rng.uniform(1.05, 1.8)
        alpha = rng.uniform(20.0, 60.0)
        eta = rng.uniform(-0.65, 0.65)
        try:
            p = solve_contour_point(g, alpha, eta)
        except Exception:
            continue
        worst = max(worst, max(abs(r) for r in
                               path_residuals(g, alpha, eta, p.x, p.y, p.w)))
        m = solve_contour_point(g, alpha, -eta)
        assert (m.x, m.w, m.y) == (p.x, p.w, -p.y)
        checked += 1
    assert worst < 1e-9
    origin = solve_contour_point(1.3, 45.0, 0.0)
    assert (origin.x, origin.y, origin.w) == (0.0, 0.0, 0.0)
    elapsed = time.time() - t0
    assert elapsed < 5.0
    report("4 contour correctness",
           f"{checked} samples, worst residual {worst:.2e}, mirror exact, {elapsed:.2f}s")


def test_criterion_5_focal_point_zero_error():
    """|dL| < 1e-12 F at the three focal feeds for both lens presets."""
    t0 = time.time()
    worst_ratio = 0.0
    for name in ("4x4-3.15ghz", "8x8-6.3ghz"):
        params = rotman_preset(name)
        geo = synthesize_geometry(params)
        F = params.off_axis_focal_length
        alpha = params.focal_angle_deg
        eta_max = float(np.max(np.abs(params.element_etas())))
        for theta in (0.0, alpha, -alpha):
            for eta in np.linspace(-eta_max, eta_max, 21):
                ratio = abs(phase_error(geo, theta, eta)) / F
                worst_ratio = max(worst_ratio, ratio)
    assert worst_ratio < 1e-12
    elapsed = time.time() - t0
    assert elapsed < 1.0
    report("5 focal-point zero phase error",
           f"worst |dL|/F = {worst_ratio:.2e} over both presets, {elapsed:.2f}s")


def test_criterion_6_focal_ratio_optimizer():
    """g* = 1.2970 +/- 0.05 (4x4 circular) and 1.2670 +/- 0.05 (8x8 elliptical)."""
    t0 = time.time()
    r44 = optimize_focal_ratio(rotman_preset("4x4-3.15ghz"))
    r88 = optimize_focal_ratio(rotman_preset("8x8-6.3ghz"))
    assert r44.g_star == pytest.approx(1.2970, abs=0.05)
    assert r88.g_star == pytest.approx(1.2670, abs=0.05)
    elapsed = time.time() - t0
    assert elapsed < 30.0
    report("6 focal-ratio optimizer",
           f"g* {r44.g_star:.4f} vs 1.2970 and {r88.g_star:.4f} vs 1.2670, {elapsed:.1f}s")


def test_criterion_7_listing_oracle_equivalence():
    """Measured-table pattern matches the reference listing to 1e-6 dB."""
    t0 = time.time()
    exc = ExcitationVector(tuple((m, p) for _, m, p in MEASURED_TABLE_ROWS),
                           element_spacing_wl=MEASURED_SPACING_WL)
    pat = array_factor(exc, amplitude_convention="appendixA")
    oracle = reference_array_factor(MEASURED_TABLE_ROWS)
    worst_db = float(np.max(np.abs(pat.af_db - oracle)))
    assert worst_db < 1e-6
    rel = relative_phase_differences(exc, "appendixA")
    rel_oracle = reference_relative_phases(MEASURED_TABLE_ROWS)
    worst_deg = float(np.max(np.abs(np.array(rel) - rel_oracle)))
    assert worst_deg < 1e-9
    elapsed = time.time() - t0
    assert elapsed < 1.0
    report("7 listing oracle equivalence",
           f"AF within {worst_db:.1e} dB at 360 angles, phases within {worst_deg:.1e} deg")


def test_criterion_8_measured_sidelobe_claim():
    """Measured excitation shows >= 10 dB sidelobe isolation."""
    t0 = time.time()
    exc = ExcitationVector(tuple((m, p) for _, m, p in MEASURED_TABLE_ROWS),
                           element_spacing_wl=MEASURED_SPACING_WL)
    main, sll, bw = beam_metrics(array_factor(exc))
    assert sll >= 10.0
    elapsed = time.time() - t0
    assert elapsed < 1.0
    report("8 measured-pattern claim",
           f"main lobe {main:.0f} deg, SLL {sll:.2f} dB >= 10 dB, width {bw:.0f} deg")


def test_criterion_9_end_to_end_pipeline():
    """8x8 lens: each beam lands within 4 deg of its designed direction."""
    t0 = time.time()
    geo = synthesize_geometry(rotman_preset("8x8-6.3ghz"))
    peaks = []
    worst = 0.0
    for idx in range(1, 9):
        pat = array_factor(array_excitation(geo, idx))
        designed = 90.0 + geo.beam_ports[idx - 1].feed_angle_deg
        err = abs(pat.main_lobe_angle_deg - designed)
        worst = max(worst, err)
        assert err <= 4.0
        peaks.append(pat.main_lobe_angle_deg)
    diffs = np.diff(peaks)
    assert np.all(diffs < 0) or np.all(diffs > 0)
    assert len(set(peaks)) == 8
    elapsed = time.time() - t0
    assert elapsed < 10.0
    report("9 end-to-end pipeline",
           f"8 distinct monotone beams, worst pointing error {worst:.2f} deg, {elapsed:.1f}s")


def test_criterion_10_io_determinism(tmp_path):
    """Identical configs give byte-identical files; Touchstone round-trips."""
    config = parse_config(
        "[run]\nmode = rotman\nformats = csv, svg\n"
        "[rotman]\npreset = 4x4-3.15ghz\n")
    a = execute(config)
    b = execute(config)
    assert a.files == b.files
    assert all(isinstance(v, str) for v in a.files.values())

    from beamkit.fileio.touchstone import export_touchstone, import_touchstone

    design = assemble_butler(4, 3.15e9)
    path = tmp_path / "butler.s8p"
    export_touchstone(design.assembled, path)
    back = import_touchstone(path)[0]
    mag_err = float(np.max(np.abs(np.abs(back.s) - np.abs(design.assembled.s))))
    live = np.abs(design.assembled.s) > 1e-12
    phase_err = float(np.max(np.abs(
        np.degrees(np.angle(back.s * np.conj(design.assembled.s)))[live])))
    assert mag_err <= 1e-9
    assert phase_err <= 1e-6
    report("10 IO determinism",
           f"{len(a.files)} files byte-identical; touchstone round-trip "
           f"mag {mag_err:.1e}, phase {phase_err:.1e} deg")
