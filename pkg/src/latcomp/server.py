"""Embedded HTTP preview service powering interactive calibration.

Stateless JSON/PNG API over the same pipeline code path as the CLI:

* GET  /healthz                     liveness
* GET  /api/patterns                available pattern names
* GET  /api/pattern/{name}?w=&h=    pattern image (16-bit PNG by default)
* GET  /api/defaults?distance_in=&density_ppi=   default parameters
* POST /api/compensate              pattern name or uploaded image + config
                                    overrides -> compensated PNG; the
                                    resolved config echoes in the
                                    X-Resolved-Config header
* POST /api/scanline                CSV of perceived input/output profiles

POST bodies are JSON; config overrides use the config-file schema keys.
Invalid parameters give 400 with the violated invariant named; solver
non-convergence gives 422.
"""

from __future__ import annotations

import base64
import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import numpy as np

from . import patterns, pipeline, png_io
from .cli import scanline_csv
from .config import (
    CompensationConfig,
    ConfigError,
    config_from_dict,
    default_config,
)
from .kernel import ViewingGeometry, sigma_from_geometry
from .model import DegenerateDenominator, NoConvergence

MAX_UPLOAD_PIXELS = 16_000_000

_CONFIG_KEYS = (
    "viewing",
    "inhibition",
    "weights",
    "profile",
    "detail",
    "solver",
    "color_mode",
    "model",
)


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        super().__init__(message)


def _request_config(body: dict, base: CompensationConfig) -> CompensationConfig:
    overrides = {k: body[k] for k in _CONFIG_KEYS if k in body}
    try:
        return config_from_dict(overrides, base)
    except ConfigError as exc:
        raise ApiError(400, str(exc)) from exc


def _request_image(body: dict) -> np.ndarray:
    name = body.get("pattern")
    if name:
        try:
            return patterns.generate(
                name, int(body.get("width", 512)), int(body.get("height", 512))
            )
        except ValueError as exc:
            raise ApiError(400, str(exc)) from exc
    if "image_b64" in body:
        try:
            img = png_io.png_bytes_to_image(base64.b64decode(body["image_b64"]))
        except (ValueError, png_io.PngError) as exc:
            raise ApiError(400, f"invalid image upload: {exc}") from exc
        if img.shape[0] * img.shape[1] > MAX_UPLOAD_PIXELS:
            raise ApiError(
                400, f"uploaded image exceeds the {MAX_UPLOAD_PIXELS} pixel cap"
            )
        return img
    raise ApiError(400, "request must supply 'pattern' or 'image_b64'")


def _depth(body: dict) -> int:
    depth = int(body.get("depth", 16))
    if depth not in (8, 16):
        raise ApiError(400, "depth must be 8 or 16")
    return depth


class PreviewHandler(BaseHTTPRequestHandler):
    # The base config is installed on the server instance by make_server().
    server_version = "latcomp-preview"

    def log_message(self, *args):  # quiet by default
        pass

    # -- response helpers ---------------------------------------------------

    def _respond(self, status: int, content_type: str, payload: bytes, headers=None):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        for key, value in (headers or {}).items():
            self.send_header(key, value)
        self.end_headers()
        self.wfile.write(payload)

    def _json(self, status: int, obj, headers=None):
        self._respond(
            status, "application/json", json.dumps(obj).encode("utf-8"), headers
        )

    def _error(self, status: int, message: str, category: str = "InvalidParams"):
        self._json(status, {"error": category, "message": message})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            return json.loads(self.rfile.read(length).decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError(400, f"request body is not valid JSON: {exc}") from exc

    # -- routes -------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self):
        url = urlparse(self.path)
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/healthz":
                self._json(200, {"status": "ok"})
            elif url.path == "/api/patterns":
                self._json(200, {"patterns": patterns.pattern_names()})
            elif url.path.startswith("/api/pattern/"):
                self._get_pattern(url.path.removeprefix("/api/pattern/"), query)
            elif url.path == "/api/defaults":
                self._get_defaults(query)
            else:
                self._error(404, f"no such route: {url.path}", "NotFound")
        except ApiError as exc:
            self._error(exc.status, str(exc))

    def do_POST(self):
        url = urlparse(self.path)
        try:
            body = self._read_body()
            if url.path == "/api/compensate":
                self._post_compensate(body)
            elif url.path == "/api/scanline":
                self._post_scanline(body)
            else:
                self._error(404, f"no such route: {url.path}", "NotFound")
        except ApiError as exc:
            self._error(exc.status, str(exc))
        except NoConvergence as exc:
            self._error(422, str(exc), "NoConvergence")
        except DegenerateDenominator as exc:
            self._error(422, str(exc), "Degenerate")

    def _get_pattern(self, name: str, query: dict):
        try:
            img = patterns.generate(
                name, int(query.get("w", 512)), int(query.get("h", 512))
            )
        except ValueError as exc:
            raise ApiError(400, str(exc)) from exc
        depth = _depth(query)
        self._respond(200, "image/png", png_io.image_to_png_bytes(img, depth))

    def _get_defaults(self, query: dict):
        base: CompensationConfig = self.server.base_config
        try:
            geometry = ViewingGeometry(
                distance_in=float(query.get("distance_in", base.geometry.distance_in)),
                density_ppi=float(query.get("density_ppi", base.geometry.density_ppi)),
            )
        except ValueError as exc:
            raise ApiError(400, str(exc)) from exc
        out = base.to_dict()
        out["viewing"] = {
            "distance_in": geometry.distance_in,
            "density_ppi": geometry.density_ppi,
        }
        out["resolved"] = {"sigma_px": sigma_from_geometry(geometry)}
        self._json(200, out)

    def _post_compensate(self, body: dict):
        cfg = _request_config(body, self.server.base_config)
        img = _request_image(body)
        out, report = pipeline.compensate_image_report(img, cfg)
        payload = png_io.image_to_png_bytes(out, _depth(body))
        self._respond(
            200,
            "image/png",
            payload,
            headers={"X-Resolved-Config": json.dumps(report.resolved)},
        )

    def _post_scanline(self, body: dict):
        cfg = _request_config(body, self.server.base_config)
        img = _request_image(body)
        try:
            row = int(body["row"])
            col0 = int(body["col0"])
            col1 = int(body["col1"])
        except KeyError as exc:
            raise ApiError(400, f"missing required field {exc.args[0]!r}") from exc
        try:
            text = scanline_csv(img, row, col0, col1, cfg)
        except ValueError as exc:
            raise ApiError(400, str(exc)) from exc
        self._respond(
            200,
            "text/csv; charset=utf-8",
            text.encode("utf-8"),
            headers={"X-Resolved-Config": json.dumps(cfg.resolve().echo())},
        )


def make_server(host: str, port: int, base_config: CompensationConfig) -> ThreadingHTTPServer:
    """Create (but do not start) the preview server; port 0 picks a free port."""
    server = ThreadingHTTPServer((host, port), PreviewHandler)
    server.base_config = base_config
    return server


def run_server(host: str, port: int, base_config: CompensationConfig):
    server = make_server(host, port, base_config)
    host_shown, port_shown = server.server_address[:2]
    print(f"latcomp preview service listening on http://{host_shown}:{port_shown}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
