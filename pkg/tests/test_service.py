import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from beamkit.fileio.touchstone import parse_touchstone, touchstone_text
from beamkit.network import ideal_hybrid_smatrix
from beamkit.service.app import app

from conftest import MEASURED_TABLE_TEXT


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestMeta:
    def test_health(self, client):
        resp = client.get("/healthz")
        assert resp.status_code == 200
        assert resp.json()["status"] == "ok"

    def test_substrates(self, client):
        resp = client.get("/api/substrates")
        names = {s["name"] for s in resp.json()}
        assert {"FR4-0.8", "TLC30-1.3"} <= names

    def test_presets(self, client):
        resp = client.get("/api/rotman/presets")
        names = {p["name"] for p in resp.json()}
        assert {"4x4-3.15ghz", "8x8-6.3ghz"} <= names


class TestButlerEndpoint:
    def test_design(self, client):
        resp = client.post("/api/butler/design", json={"order": 4})
        assert resp.status_code == 200
        body = resp.json()
        assert body["summary"]["phase_law_deg"]["1"] == -45.0
        assert "butler.s8p" in body["files"]

    def test_unsupported_order_maps_to_solver_error(self, client):
        resp = client.post("/api/butler/design", json={"order": 8})
        assert resp.status_code == 400
        assert resp.json()["detail"]["category"] == "solver"

    def test_unknown_substrate_is_solver_category(self, client):
        resp = client.post("/api/butler/design",
                           json={"order": 4, "substrate": "nope"})
        assert resp.status_code == 400

    def test_request_validation(self, client):
        resp = client.post("/api/butler/design", json={"order": "four"})
        assert resp.status_code == 422


class TestRotmanEndpoint:
    def test_design_preset(self, client):
        resp = client.post("/api/rotman/design",
                           json={"preset": "4x4-3.15ghz",
                                 "formats": ["csv"], "emit_patterns": False})
        assert resp.status_code == 200
        body = resp.json()
        assert "geometry.csv" in body["files"]
        assert body["summary"]["focal_ratio"] == pytest.approx(1.2970)

    def test_design_explicit_lens(self, client):
        lens = {
            "focal_length_m": 0.095, "focal_ratio": 1.297, "focal_angle_deg": 45,
            "elements": 4, "spacing_m": 0.047, "beams": 4, "max_scan_deg": 50,
            "frequency_hz": 3.15e9, "substrate": "FR4-0.8", "arc": "circular",
        }
        resp = client.post("/api/rotman/design",
                           json={"lens": lens, "formats": ["csv"],
                                 "emit_patterns": False})
        assert resp.status_code == 200

    def test_preset_and_lens_together_rejected(self, client):
        resp = client.post("/api/rotman/design",
                           json={"preset": "4x4-3.15ghz",
                                 "lens": None, "formats": ["csv"]})
        assert resp.status_code == 200   # lens None means preset only
        resp = client.post("/api/rotman/design", json={"formats": ["csv"]})
        assert resp.status_code == 400
        assert resp.json()["detail"]["category"] == "config"

    def test_optimize_g(self, client):
        resp = client.post("/api/rotman/optimize-g",
                           json={"preset": "4x4-3.15ghz",
                                 "g_min": 1.25, "g_max": 1.35, "grid_step": 0.01})
        assert resp.status_code == 200
        body = resp.json()
        assert body["g_star"] == pytest.approx(1.297, abs=0.02)
        assert len(body["profile"]) >= 10

    def test_determinism_across_requests(self, client):
        payload = {"preset": "4x4-3.15ghz", "formats": ["csv"],
                   "emit_patterns": False}
        a = client.post("/api/rotman/design", json=payload).json()["files"]
        b = client.post("/api/rotman/design", json=payload).json()["files"]
        assert a == b


class TestPatternEndpoint:
    def test_compute(self, client):
        resp = client.post("/api/pattern/compute",
                           json={"table_text": MEASURED_TABLE_TEXT,
                                 "convention": "appendixA", "spacing_wl": 0.82})
        assert resp.status_code == 200
        body = resp.json()
        assert body["summary"]["n_elements"] == 8
        assert "pattern.csv" in body["files"]

    def test_parse_error_category(self, client):
        resp = client.post("/api/pattern/compute",
                           json={"table_text": "6300.8 -16.92\n", "spacing_wl": 0.82})
        assert resp.status_code == 400
        assert resp.json()["detail"]["category"] == "parse"


class TestConvertEndpoint:
    def test_roundtrip(self, client):
        net = ideal_hybrid_smatrix(3.15e9)
        text = touchstone_text([net], "GHZ", "RI")
        resp = client.post("/api/convert/touchstone",
                           json={"touchstone_text": text, "filename": "h.s4p",
                                 "frequency_unit": "MHZ", "data_format": "DB"})
        assert resp.status_code == 200
        body = resp.json()
        assert body["n_ports"] == 4
        back = parse_touchstone(body["touchstone_text"], 4)[0]
        assert back.frequency == pytest.approx(3.15e9)
        assert np.allclose(back.s, net.s, atol=1e-9)
