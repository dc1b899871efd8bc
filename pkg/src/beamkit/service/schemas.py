"""Pydantic request/response models for the beamkit service.

Requests mirror the run-config sections; responses carry a summary plus
the produced files as name -> text content, so clients (including the
CLI) decide where to put them.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..rotman import ROTMAN_PRESETS
from ..substrate import SUBSTRATE_PRESETS


class ButlerDesignRequest(BaseModel):
    order: int = 4
    frequency_hz: float = 3.15e9
    substrate: str = "FR4-0.8"
    formats: list[str] = Field(default_factory=lambda: ["csv", "touchstone"])


class RotmanLensSpec(BaseModel):
    """Explicit lens parameters; alternative to naming a preset."""

    focal_length_m: float
    focal_ratio: float
    focal_angle_deg: float
    elements: int
    spacing_m: float
    beams: int
    max_scan_deg: float
    frequency_hz: float
    substrate: str
    arc: str = "circular"
    eccentricity: float | None = None
    feed_span_deg: float | None = None
    feed_mapping: str = "linear"
    dummy_ports: int = 2
    guard_fraction: float = 0.15
    wall_reflectivity: float = 0.0


class RotmanDesignRequest(BaseModel):
    preset: str | None = None
    lens: RotmanLensSpec | None = None
    focal_ratio: float | None = None          # override on top of a preset
    optimize_g: bool = False
    g_min: float = 1.05
    g_max: float = 1.8
    emit_patterns: bool = True
    formats: list[str] = Field(default_factory=lambda: ["csv", "svg"])


class OptimizeGRequest(BaseModel):
    preset: str | None = None
    lens: RotmanLensSpec | None = None
    g_min: float = 1.05
    g_max: float = 1.8
    grid_step: float = 0.005
    metric: str = "max"


class OptimizeGResponse(BaseModel):
    g_star: float
    objective_m: float
    metric: str
    profile: list[tuple[float, float]]


class PatternRequest(BaseModel):
    table_text: str
    convention: str = "field"
    spacing_wl: float = 0.5
    steer_reference_deg: float = 90.0
    grid_step_deg: float = 1.0
    frequency_unit: str = "MHz"
    formats: list[str] = Field(default_factory=lambda: ["csv"])


class ConvertRequest(BaseModel):
    touchstone_text: str
    filename: str = "network.s2p"              # extension carries the port count
    frequency_unit: str = "GHZ"
    data_format: str = "RI"


class ConvertResponse(BaseModel):
    touchstone_text: str
    n_ports: int
    n_frequencies: int


class RunResponse(BaseModel):
    summary: dict
    files: dict[str, str]


class SubstrateInfo(BaseModel):
    name: str
    relative_permittivity: float
    height_m: float
    loss_tangent: float


class PresetInfo(BaseModel):
    name: str
    beams: int
    elements: int
    frequency_hz: float
    focal_arc: str


def substrate_catalog() -> list[SubstrateInfo]:
    return [SubstrateInfo(name=k, relative_permittivity=s.relative_permittivity,
                          height_m=s.height, loss_tangent=s.loss_tangent)
            for k, s in sorted(SUBSTRATE_PRESETS.items())]


def preset_catalog() -> list[PresetInfo]:
    return [PresetInfo(name=k, beams=p.n_beam_ports, elements=p.n_array_elements,
                       frequency_hz=p.frequency, focal_arc=p.focal_arc)
            for k, p in sorted(ROTMAN_PRESETS.items())]
