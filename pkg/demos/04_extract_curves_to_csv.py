"""
Extracting calibrated data from a plot image
============================================

Extraction runs an image through a trained checkpoint, keeps the
candidate curves whose confidence strictly exceeds 0.5, and maps them
from the normalized unit square to real axis units using the bounds the
user reads off the image.  Run demo 03 first to produce the checkpoint.
"""

from pathlib import Path

from apexnet import AxisCalibration, export_csv, extract, load_manifest

out = Path(__file__).parent / "output"
checkpoint = out / "run" / "best.ckpt"
if not checkpoint.exists():
    raise SystemExit("run 03_train_and_evaluate.py first to create output/run/best.ckpt")

# Any PNG or JPEG works; here, a rendered test image whose content we know.
manifest = load_manifest(out / "train_corpus")
entry = manifest.split("test")[0]
image_path = manifest.root / entry.image
print(f"extracting from {image_path.name} (truly contains {entry.k} curve(s))")

result = extract(image_path, checkpoint)
print(f"curves kept after the 0.5 threshold: {len(result)}")
for slot, score in zip(result.indices, result.scores):
    print(f"  slot {slot}: confidence {score:.3f}")

# Suppose the plot's axes read 0..50 seconds and 1..10000 ohms on a log
# scale.  The CSV gets one row per grid point: an x column plus one
# column per kept curve, highest confidence first.
calibration = AxisCalibration(
    x_min=0.0, x_max=50.0, y_min=1.0, y_max=10_000.0, y_scale="log"
)
csv_text = export_csv(result, calibration)

csv_path = out / "extracted.csv"
csv_path.write_text(csv_text)
print(f"wrote {csv_path} ({len(csv_text.splitlines())} lines)")
print("first rows:")
for line in csv_text.splitlines()[:4]:
    print(f"  {line[:72]}{'...' if len(line) > 72 else ''}")
