"""Command-line interface: a thin client over the beamkit service.

Every design command builds the same request models the HTTP API takes,
sends them through the service app (in-process by default, over HTTP
with --server) and writes the returned files. Exit codes: 0 success,
2 config error, 3 parse error, 4 solver error, 5 infeasible geometry,
1 other failure.
"""

from __future__ import annotations

import functools
import json
import sys
import warnings
from pathlib import Path

import click

from .config import load_config
from .errors import (
    BeamkitError,
    ConfigError,
    GeometryError,
    ParseError,
    UnsolvableError,
)

EXIT_CODES = {"config": 2, "parse": 3, "solver": 4, "geometry": 5}
_CATEGORY_ERRORS = {"config": ConfigError, "parse": ParseError,
                    "geometry": GeometryError, "solver": UnsolvableError}


def exit_code_for(exc: BeamkitError) -> int:
    if isinstance(exc, ConfigError):
        return EXIT_CODES["config"]
    if isinstance(exc, ParseError):
        return EXIT_CODES["parse"]
    if isinstance(exc, GeometryError):
        return EXIT_CODES["geometry"]
    return EXIT_CODES["solver"]


def handles_errors(fn):
    """Map domain errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except BeamkitError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exit_code_for(exc))

    return wrapper


class ApiClient:
    """POST/GET against the service, in-process unless a server is given."""

    def __init__(self, server: str | None):
        self.server = server.rstrip("/") if server else None
        if self.server is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service.app import app

                self._client = TestClient(app)
        else:
            import httpx

            self._client = httpx.Client(base_url=self.server, timeout=300.0)

    def request(self, method: str, path: str, payload: dict | None = None) -> dict:
        resp = self._client.request(method, path, json=payload)
        if resp.status_code >= 400:
            detail = {}
            try:
                detail = resp.json().get("detail", {})
            except Exception:
                pass
            if isinstance(detail, dict) and "category" in detail:
                category = detail.get("category", "solver")
                message = detail.get("message", resp.text)
            else:
                category = "config"   # request-validation failures
                message = json.dumps(detail) if detail else resp.text
            raise _CATEGORY_ERRORS.get(category, UnsolvableError)(message)
        return resp.json()

    def post(self, path: str, payload: dict) -> dict:
        return self.request("POST", path, payload)


def _write_files(files: dict[str, str], out_dir: str) -> None:
    target = Path(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        (target / name).write_text(files[name], encoding="utf-8", newline="")
        click.echo(f"wrote {target / name}")


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Send requests to a running beamkit service instead of in-process.")
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Design and simulate passive RF beamforming networks."""
    ctx.obj = server


@main.command("design-butler")
@click.option("--order", default=4, show_default=True)
@click.option("--frequency-ghz", default=3.15, show_default=True)
@click.option("--substrate", default="FR4-0.8", show_default=True)
@click.option("--formats", default="csv,touchstone", show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
@click.pass_obj
@handles_errors
def design_butler(server: str | None, order: int, frequency_ghz: float,
                  substrate: str, formats: str, out_dir: str) -> None:
    """Assemble a Butler matrix and export its report and S-parameters."""
    client = ApiClient(server)
    payload = {
        "order": order,
        "frequency_hz": frequency_ghz * 1e9,
        "substrate": substrate,
        "formats": [f.strip() for f in formats.split(",") if f.strip()],
    }
    resp = client.post("/api/butler/design", payload)
    _write_files(resp["files"], out_dir)
    click.echo(json.dumps(resp["summary"], indent=2))


def _rotman_payload_fields(preset, config):
    if (preset is None) == (config is None):
        raise ConfigError("give exactly one of --preset or --config")
    if preset is not None:
        return {"preset": preset}
    cfg = load_config(config)
    if cfg.rotman.params is None:
        raise ConfigError("config file has no [rotman] lens parameters")
    p = cfg.rotman.params
    return {"lens": {
        "focal_length_m": p.off_axis_focal_length,
        "focal_ratio": p.focal_ratio,
        "focal_angle_deg": p.focal_angle_deg,
        "elements": p.n_array_elements,
        "spacing_m": p.element_spacing,
        "beams": p.n_beam_ports,
        "max_scan_deg": p.max_scan_angle_deg,
        "frequency_hz": p.frequency,
        "substrate": p.substrate.name,
        "arc": p.focal_arc,
        "eccentricity": p.eccentricity,
        "feed_span_deg": p.beam_feed_span_deg,
        "feed_mapping": p.feed_mapping,
        "dummy_ports": p.n_dummy_ports,
        "guard_fraction": p.guard_fraction,
        "wall_reflectivity": p.wall_reflectivity,
    }}


@main.command("design-rotman")
@click.option("--preset", default=None, help="Named lens preset.")
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="Config file with a [rotman] section.")
@click.option("--focal-ratio", default=None, type=float,
              help="Override the focal ratio g.")
@click.option("--optimize-g", is_flag=True, default=False,
              help="Tune g by minimising the aperture phase error first.")
@click.option("--formats", default="csv,svg", show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
@click.pass_obj
@handles_errors
def design_rotman(server: str | None, preset: str | None, config_path: str | None,
                  focal_ratio: float | None, optimize_g: bool,
                  formats: str, out_dir: str) -> None:
    """Synthesise a Rotman lens: geometry, couplings, patterns, report."""
    payload = _rotman_payload_fields(preset, config_path)
    payload.update({
        "focal_ratio": focal_ratio,
        "optimize_g": optimize_g,
        "formats": [f.strip() for f in formats.split(",") if f.strip()],
    })
    client = ApiClient(server)
    resp = client.post("/api/rotman/design", payload)
    _write_files(resp["files"], out_dir)
    click.echo(json.dumps(resp["summary"], indent=2))


@main.command("optimize-g")
@click.option("--preset", default=None)
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--g-min", default=1.05, show_default=True)
@click.option("--g-max", default=1.8, show_default=True)
@click.option("--step", default=0.005, show_default=True)
@click.option("--metric", default="max", type=click.Choice(["max", "rms"]),
              show_default=True)
@click.option("--profile", "profile_path", default=None, type=click.Path(),
              help="Write the (g, objective) sweep as CSV.")
@click.pass_obj
@handles_errors
def optimize_g(server: str | None, preset: str | None, config_path: str | None,
               g_min: float, g_max: float, step: float, metric: str,
               profile_path: str | None) -> None:
    """Find the focal ratio minimising the aperture phase error."""
    payload = _rotman_payload_fields(preset, config_path)
    payload.update({"g_min": g_min, "g_max": g_max, "grid_step": step,
                    "metric": metric})
    client = ApiClient(server)
    resp = client.post("/api/rotman/optimize-g", payload)
    if profile_path:
        from .fileio.tables import csv_text

        rows = [[g, v] for g, v in resp["profile"]]
        Path(profile_path).write_text(csv_text(["g", "objective_m"], rows),
                                      encoding="utf-8", newline="")
        click.echo(f"wrote {profile_path}")
    click.echo(json.dumps({"g_star": resp["g_star"],
                           "objective_m": resp["objective_m"],
                           "metric": resp["metric"]}, indent=2))


@main.command("pattern")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="Measured port table (frequency_MHz magnitude_dB phase_deg rows).")
@click.option("--convention", default="field",
              type=click.Choice(["field", "appendixA"]), show_default=True)
@click.option("--spacing-wl", default=0.5, show_default=True,
              help="Element spacing in wavelengths.")
@click.option("--steer-ref", default=90.0, show_default=True)
@click.option("--grid-step", default=1.0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
@click.pass_obj
@handles_errors
def pattern_cmd(server: str | None, input_path: str, convention: str,
                spacing_wl: float, steer_ref: float, grid_step: float,
                out_dir: str) -> None:
    """Compute the array factor and beam metrics of a measured table."""
    client = ApiClient(server)
    payload = {
        "table_text": Path(input_path).read_text(encoding="utf-8"),
        "convention": convention,
        "spacing_wl": spacing_wl,
        "steer_reference_deg": steer_ref,
        "grid_step_deg": grid_step,
    }
    resp = client.post("/api/pattern/compute", payload)
    _write_files(resp["files"], out_dir)
    click.echo(json.dumps(resp["summary"], indent=2))


@main.command("convert")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--unit", default="GHZ", show_default=True,
              type=click.Choice(["HZ", "KHZ", "MHZ", "GHZ"], case_sensitive=False))
@click.option("--format", "data_format", default="RI", show_default=True,
              type=click.Choice(["RI", "MA", "DB"], case_sensitive=False))
@click.pass_obj
@handles_errors
def convert(server: str | None, input_path: str, output_path: str,
            unit: str, data_format: str) -> None:
    """Rewrite a Touchstone file in another unit or data format."""
    client = ApiClient(server)
    payload = {
        "touchstone_text": Path(input_path).read_text(encoding="utf-8"),
        "filename": Path(input_path).name,
        "frequency_unit": unit.upper(),
        "data_format": data_format.upper(),
    }
    resp = client.post("/api/convert/touchstone", payload)
    Path(output_path).write_text(resp["touchstone_text"], encoding="utf-8", newline="")
    click.echo(f"wrote {output_path} ({resp['n_ports']} ports, "
               f"{resp['n_frequencies']} frequency points)")


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", "base_dir", default=".", show_default=True,
              help="Directory the config's output_dir is created under.")
@handles_errors
def run_cmd(config_path: str, base_dir: str) -> None:
    """Execute a full run config (butler | rotman | pattern | sweep) locally."""
    from .runner import run

    config = load_config(config_path)
    written = run(config, base_dir)
    for path in written:
        click.echo(f"wrote {path}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the beamkit HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
