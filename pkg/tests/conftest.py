"""Shared fixtures: measured-table specimen and independent oracles."""

import math

import numpy as np
import pytest

# Measured array-port table at 6300.8 MHz: one row per element,
# (frequency_MHz, magnitude_dB, phase_deg), 8-element lens output.
MEASURED_TABLE_ROWS = [
    (6300.8, -16.92, -178.73),
    (6300.8, -12.51, 134.96),
    (6300.8, -15.03, 141.73),
    (6300.8, -10.60, 110.60),
    (6300.8, -14.23, 71.72),
    (6300.8, -10.99, 80.19),
    (6300.8, -14.54, 28.04),
    (6300.8, -16.63, 36.94),
]

MEASURED_TABLE_TEXT = "\n".join(
    f"0{f:.7f}    {m:.2f} {p:7.2f}" for f, m, p in MEASURED_TABLE_ROWS
) + "\n"

MEASURED_SPACING_WL = 0.82


def reference_array_factor(rows, d_wl=MEASURED_SPACING_WL, theta_zero_deg=90.0,
                           db_exponent=10.0):
    """Line-by-line reimplementation of the classic measured-data script.

    Loops over integer degrees 1..360; element n contributes
    10^(dB/db_exponent) * exp(j(n*2*pi*d*(cos t - cos t0) + phase)).
    Kept deliberately naive and loop-based: this is the oracle the
    vectorised implementation is checked against.
    """
    out = np.zeros(360)
    cos0 = math.cos(theta_zero_deg * math.pi / 180.0)
    for t in range(1, 361):
        theta = t * math.pi / 180.0
        acc = 0.0 + 0.0j
        for n in range(len(rows)):
            amp = 10.0 ** (rows[n][1] / db_exponent)
            acc += amp * np.exp(1j * (n * 2.0 * math.pi * d_wl
                                      * (math.cos(theta) - cos0)
                                      + math.radians(rows[n][2])))
        out[t - 1] = 20.0 * math.log10(abs(acc))
    return out


def reference_relative_phases(rows, db_exponent=10.0):
    """Oracle for the consecutive-element phase differences."""
    out = []
    for n in range(1, len(rows)):
        num = 10.0 ** (rows[n][1] / db_exponent) * np.exp(1j * math.radians(rows[n][2]))
        den = 10.0 ** (rows[n - 1][1] / db_exponent) * np.exp(1j * math.radians(rows[n - 1][2]))
        out.append(math.degrees(np.angle(num / den)))
    return out


@pytest.fixture
def measured_table_text():
    return MEASURED_TABLE_TEXT
