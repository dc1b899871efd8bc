"""FastAPI service wrapping the core package.

Stateless compute endpoints: each POST body is a design or analysis
request and the response carries a JSON summary plus the produced files
as text. Domain errors map onto 400/422 with a machine-readable
category matching the CLI exit codes.
"""

from __future__ import annotations

from dataclasses import replace

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import (
    ButlerRunConfig,
    PatternRunConfig,
    RotmanRunConfig,
    RunConfig,
)
from ..errors import (
    BeamkitError,
    ConfigError,
    GeometryError,
    ParseError,
)
from ..fileio.touchstone import parse_touchstone, ports_from_filename, touchstone_text
from ..rotman import RotmanDesignParams, optimize_focal_ratio, rotman_preset
from ..runner import execute
from ..substrate import substrate_by_name
from . import schemas


def error_category(exc: BeamkitError) -> str:
    if isinstance(exc, ConfigError):
        return "config"
    if isinstance(exc, ParseError):
        return "parse"
    if isinstance(exc, GeometryError):
        return "geometry"
    return "solver"


def _http_error(exc: BeamkitError) -> HTTPException:
    return HTTPException(status_code=400,
                         detail={"category": error_category(exc), "message": str(exc)})


def _lens_params(spec: schemas.RotmanLensSpec) -> RotmanDesignParams:
    return RotmanDesignParams(
        off_axis_focal_length=spec.focal_length_m,
        focal_ratio=spec.focal_ratio,
        focal_angle_deg=spec.focal_angle_deg,
        n_array_elements=spec.elements,
        element_spacing=spec.spacing_m,
        n_beam_ports=spec.beams,
        max_scan_angle_deg=spec.max_scan_deg,
        frequency=spec.frequency_hz,
        substrate=substrate_by_name(spec.substrate),
        focal_arc=spec.arc,
        eccentricity=spec.eccentricity,
        beam_feed_span_deg=spec.feed_span_deg,
        feed_mapping=spec.feed_mapping,
        n_dummy_ports=spec.dummy_ports,
        guard_fraction=spec.guard_fraction,
        wall_reflectivity=spec.wall_reflectivity,
    )


def _resolve_params(preset: str | None,
                    lens: schemas.RotmanLensSpec | None) -> RotmanDesignParams:
    if (preset is None) == (lens is None):
        raise ConfigError("give exactly one of 'preset' or explicit 'lens' parameters")
    if preset is not None:
        return rotman_preset(preset)
    return _lens_params(lens)


def create_app() -> FastAPI:
    app = FastAPI(title="beamkit", version=__version__,
                  description="Passive RF beamforming network design service")

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/api/substrates", response_model=list[schemas.SubstrateInfo])
    def substrates():
        return schemas.substrate_catalog()

    @app.get("/api/rotman/presets", response_model=list[schemas.PresetInfo])
    def presets():
        return schemas.preset_catalog()

    @app.post("/api/butler/design", response_model=schemas.RunResponse)
    def butler_design(req: schemas.ButlerDesignRequest):
        try:
            config = RunConfig(
                mode="butler",
                formats=tuple(req.formats),
                butler=ButlerRunConfig(order=req.order,
                                       frequency_hz=req.frequency_hz,
                                       substrate=substrate_by_name(req.substrate)),
            )
            out = execute(config)
        except BeamkitError as exc:
            raise _http_error(exc) from exc
        return schemas.RunResponse(summary=out.summary, files=out.files)

    @app.post("/api/rotman/design", response_model=schemas.RunResponse)
    def rotman_design(req: schemas.RotmanDesignRequest):
        try:
            params = _resolve_params(req.preset, req.lens)
            if req.focal_ratio is not None:
                params = replace(params, focal_ratio=req.focal_ratio)
            config = RunConfig(
                mode="rotman",
                formats=tuple(req.formats),
                rotman=RotmanRunConfig(params=params, optimize_g=req.optimize_g,
                                       g_min=req.g_min, g_max=req.g_max,
                                       emit_patterns=req.emit_patterns),
            )
            out = execute(config)
        except BeamkitError as exc:
            raise _http_error(exc) from exc
        return schemas.RunResponse(summary=out.summary, files=out.files)

    @app.post("/api/rotman/optimize-g", response_model=schemas.OptimizeGResponse)
    def optimize_g(req: schemas.OptimizeGRequest):
        try:
            params = _resolve_params(req.preset, req.lens)
            result = optimize_focal_ratio(params, (req.g_min, req.g_max),
                                          grid_step=req.grid_step, metric=req.metric)
        except BeamkitError as exc:
            raise _http_error(exc) from exc
        return schemas.OptimizeGResponse(
            g_star=result.g_star, objective_m=result.objective,
            metric=result.metric, profile=list(result.profile))

    @app.post("/api/pattern/compute", response_model=schemas.RunResponse)
    def pattern_compute(req: schemas.PatternRequest):
        try:
            config = RunConfig(
                mode="pattern",
                formats=tuple(req.formats),
                pattern=PatternRunConfig(
                    input_text=req.table_text,
                    convention=req.convention,
                    spacing_wl=req.spacing_wl,
                    steer_reference_deg=req.steer_reference_deg,
                    grid_step_deg=req.grid_step_deg,
                    frequency_unit=req.frequency_unit,
                ),
            )
            out = execute(config)
        except BeamkitError as exc:
            raise _http_error(exc) from exc
        return schemas.RunResponse(summary=out.summary, files=out.files)

    @app.post("/api/convert/touchstone", response_model=schemas.ConvertResponse)
    def convert_touchstone(req: schemas.ConvertRequest):
        try:
            nets = parse_touchstone(req.touchstone_text, ports_from_filename(req.filename))
            text = touchstone_text(nets, req.frequency_unit, req.data_format)
        except BeamkitError as exc:
            raise _http_error(exc) from exc
        return schemas.ConvertResponse(touchstone_text=text,
                                       n_ports=nets[0].n_ports,
                                       n_frequencies=len(nets))

    return app


app = create_app()
