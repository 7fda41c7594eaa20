"""Stateless HTTP API for the calibration UI.

Endpoints:
    GET  /healthz      model status + checkpoint hash
    POST /api/extract  multipart image -> all candidate curves and scores
    POST /api/export   curves + calibration JSON -> CSV attachment

Extraction returns all candidates unthresholded so the client can expose
its own threshold control (the 0.5 default lives there).  Export runs
through the same CSV function as the CLI, so both paths emit identical
bytes.  Validation failures answer 400 with a field-level message:
{"detail": {"field": ..., "message": ...}}.
"""

from __future__ import annotations

import hashlib
import io
import logging
import os

import numpy as np
from fastapi import FastAPI, HTTPException, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from PIL import Image

from .core import AxisCalibration, make_sample_grid
from .extraction import export_csv
from .model import checkpoint_file_hash, load_checkpoint, predict

log = logging.getLogger(__name__)

MAX_UPLOAD_BYTES = 20 * 1024 * 1024

ENV_CHECKPOINT = "APEX_CHECKPOINT"
ENV_PORT = "APEX_PORT"
ENV_CORS_ORIGIN = "APEX_CORS_ORIGIN"


def _bad_request(field: str, message: str) -> HTTPException:
    return HTTPException(status_code=400, detail={"field": field, "message": message})


def _parse_calibration(payload) -> AxisCalibration:
    if not isinstance(payload, dict):
        raise _bad_request("calibration", "calibration must be an object")
    values = {}
    for name in ("x_min", "x_max", "y_min", "y_max"):
        if name not in payload:
            raise _bad_request(name, f"{name} is required")
        try:
            values[name] = float(payload[name])
        except (TypeError, ValueError):
            raise _bad_request(name, f"{name} must be a number")
    scales = {}
    for name in ("x_scale", "y_scale"):
        raw = payload.get(name, "linear")
        if raw not in ("linear", "log"):
            raise _bad_request(name, f"{name} must be 'linear' or 'log'")
        scales[name] = raw
    if values["x_min"] >= values["x_max"]:
        raise _bad_request("x_min", "x_min must be < x_max")
    if values["y_min"] >= values["y_max"]:
        raise _bad_request("y_min", "y_min must be < y_max")
    if scales["x_scale"] == "log" and values["x_min"] <= 0:
        raise _bad_request("x_min", "log x-axis requires positive bounds")
    if scales["y_scale"] == "log" and values["y_min"] <= 0:
        raise _bad_request("y_min", "log y-axis requires positive bounds")
    return AxisCalibration(**values, **scales)


def _parse_curves(payload, n_points: int) -> np.ndarray:
    if not isinstance(payload, list) or not payload:
        raise _bad_request("curves", "curves must be a non-empty list of arrays")
    try:
        matrix = np.asarray(payload, dtype=np.float64)
    except (TypeError, ValueError):
        raise _bad_request("curves", "curves must contain only numbers")
    if matrix.ndim != 2 or matrix.shape[1] != n_points:
        raise _bad_request("curves", f"each curve must have exactly {n_points} values")
    if not np.all(np.isfinite(matrix)):
        raise _bad_request("curves", "curves must be finite")
    return matrix


def create_app(checkpoint: str | None = None, cors_origin: str | None = None) -> FastAPI:
    """Build the service; the model loads eagerly when a checkpoint is given.

    Falls back to the APEX_CHECKPOINT / APEX_CORS_ORIGIN environment
    variables when arguments are omitted.
    """
    checkpoint = checkpoint or os.environ.get(ENV_CHECKPOINT)
    cors_origin = cors_origin or os.environ.get(ENV_CORS_ORIGIN)

    app = FastAPI(title="apexnet extraction service")
    if cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    app.state.model = None
    app.state.checkpoint_hash = None
    if checkpoint:
        try:
            app.state.model = load_checkpoint(checkpoint)
            app.state.checkpoint_hash = checkpoint_file_hash(checkpoint)
        except Exception:
            log.exception("failed to load checkpoint %s; serving 503", checkpoint)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        field = ".".join(str(p) for p in first.get("loc", ())[1:]) or "body"
        return JSONResponse(
            status_code=400,
            content={"detail": {"field": field, "message": first.get("msg", "invalid request")}},
        )

    @app.get("/healthz")
    async def healthz():
        if app.state.model is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok", "checkpoint": app.state.checkpoint_hash}

    @app.post("/api/extract")
    async def api_extract(image: UploadFile):
        if app.state.model is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        data = await image.read()
        if len(data) > MAX_UPLOAD_BYTES:
            raise HTTPException(status_code=413, detail="image exceeds 20 MB limit")
        try:
            with Image.open(io.BytesIO(data)) as im:
                if im.format not in ("PNG", "JPEG"):
                    raise ValueError(f"unsupported format {im.format}")
                arr = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
        except Exception as exc:
            raise _bad_request("image", f"not a decodable PNG or JPEG: {exc}")
        pred = predict(app.state.model, arr)
        return {
            "curves": pred.curves.tolist(),
            "scores": pred.scores.tolist(),
            "image_id": hashlib.sha256(data).hexdigest(),
            "grid_n": pred.n_points,
        }

    @app.post("/api/export")
    async def api_export(payload: dict):
        calib = _parse_calibration(payload.get("calibration"))
        model = app.state.model
        n_points = model.config.points_per_plot if model is not None else 1024
        matrix = _parse_curves(payload.get("curves"), n_points)
        csv_text = export_csv(matrix, calib, grid=make_sample_grid(n_points))
        return Response(
            content=csv_text.encode("utf-8"),
            media_type="text/csv",
            headers={"Content-Disposition": 'attachment; filename="extracted.csv"'},
        )

    return app


def run(checkpoint: str, port: int | None = None) -> None:
    """Serve the app with uvicorn (blocking)."""
    import uvicorn

    if port is None:
        port = int(os.environ.get(ENV_PORT, "8000"))
    uvicorn.run(create_app(checkpoint=checkpoint), host="0.0.0.0", port=port)
