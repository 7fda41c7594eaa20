"""
The extraction HTTP service
===========================

The same extraction pipeline is available over HTTP for browser clients:
a health probe, an image-upload endpoint returning all ten candidates
(so the client can apply its own threshold), and a CSV export endpoint
that emits byte-identical output to the command line.  Run demo 03 first
to produce the checkpoint.

In production this runs under uvicorn (`apex serve --checkpoint ...`);
here an in-process test client exercises the same app object.
"""

from pathlib import Path

from fastapi.testclient import TestClient

from apexnet import create_app, load_manifest

out = Path(__file__).parent / "output"
checkpoint = out / "run" / "best.ckpt"
if not checkpoint.exists():
    raise SystemExit("run 03_train_and_evaluate.py first to create output/run/best.ckpt")

app = create_app(checkpoint=str(checkpoint))
client = TestClient(app)

# The health probe reports the checkpoint's file hash, so a client can
# tell which model it is talking to.
health = client.get("/healthz").json()
print(f"healthz: status={health['status']} checkpoint={health['checkpoint'][:16]}...")

# Upload an image; the response carries all candidate curves and scores.
manifest = load_manifest(out / "train_corpus")
image_path = manifest.root / manifest.split("test")[0].image
resp = client.post(
    "/api/extract",
    files={"image": (image_path.name, image_path.read_bytes(), "image/png")},
)
body = resp.json()
print(f"extract: {len(body['curves'])} candidates on a {body['grid_n']}-point grid")
print(f"scores: {[round(s, 3) for s in body['scores']]}")

# The client picks its confident curves and asks for calibrated CSV.
kept = [c for c, s in zip(body["curves"], body["scores"]) if s > 0.5]
resp = client.post(
    "/api/export",
    json={
        "curves": kept or body["curves"][:1],
        "calibration": {"x_min": 0, "x_max": 50, "y_min": 1, "y_max": 10_000, "y_scale": "log"},
    },
)
print(f"export: {resp.status_code}, {resp.headers['content-type']}, {len(resp.content)} bytes")
print(f"first line: {resp.text.splitlines()[0]}")

# Validation failures name the field that caused them, which the browser
# UI surfaces next to the matching input.
bad = client.post(
    "/api/export",
    json={"curves": kept or [[0.5]], "calibration": {"x_min": 5, "x_max": 5, "y_min": 0, "y_max": 1}},
)
print(f"invalid calibration -> {bad.status_code}: {bad.json()['detail']}")
