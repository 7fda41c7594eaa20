// Page wiring. Flow: upload a plot image, the service answers with ten
// candidate curves and confidence scores, curves above the threshold
// are overlaid on the image, the user nudges the data rectangle until
// the overlay sits on the axes, types the axis bounds, and exports CSV.

import { ApiClient, ApiError } from "./api.js";
import { curveColor, drawOverlay } from "./overlay.js";
import {
  canExport,
  initialState,
  isVisible,
  toggleOverride,
  visibleCurves,
  withExtract,
  type DataRect,
  type SessionState,
} from "./state.js";
import { validateCalibration, type CalibrationForm } from "./validation.js";

const params = new URLSearchParams(location.search);
const client = new ApiClient(params.get("api") ?? "");

let state: SessionState = initialState();
let bitmap: ImageBitmap | null = null;

function el<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

const canvas = el<HTMLCanvasElement>("viewer");
const ctx = canvas.getContext("2d")!;
const fileInput = el<HTMLInputElement>("file");
const thresholdInput = el<HTMLInputElement>("threshold");
const curveList = el<HTMLUListElement>("curves");
const exportButton = el<HTMLButtonElement>("export");
const formError = el<HTMLDivElement>("form-error");
const statusLine = el<HTMLDivElement>("status");

const FORM_IDS: (keyof CalibrationForm)[] = [
  "x_min",
  "x_max",
  "y_min",
  "y_max",
  "x_scale",
  "y_scale",
];

function setStatus(text: string) {
  statusLine.textContent = text;
}

function readForm(): CalibrationForm {
  const form: Record<string, string> = {};
  for (const name of FORM_IDS) {
    form[name] = el<HTMLInputElement>(name).value;
  }
  return form as unknown as CalibrationForm;
}

// Starting guess for the data region: matplotlib-style margins. The
// user drags to correct it; nothing numeric depends on the guess.
function defaultRect(): DataRect {
  return {
    x: canvas.width * 0.125,
    y: canvas.height * 0.11,
    width: canvas.width * 0.775,
    height: canvas.height * 0.77,
  };
}

function drawScene() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (bitmap) ctx.drawImage(bitmap, 0, 0, canvas.width, canvas.height);
  const rect = state.dataRect;
  if (!rect) return;

  ctx.save();
  ctx.strokeStyle = "rgba(40, 40, 40, 0.8)";
  ctx.lineWidth = 1;
  ctx.setLineDash([6, 4]);
  ctx.strokeRect(rect.x, rect.y, rect.width, rect.height);
  ctx.restore();

  if (state.extract) {
    const visible = state.extract.scores
      .map((_, i) => i)
      .filter((i) => isVisible(state.extract!.scores[i], state.threshold, state.overrides.has(i)));
    drawOverlay(ctx, state.extract.curves, visible, rect);
  }
}

function renderCurveList() {
  curveList.textContent = "";
  if (!state.extract) return;
  state.extract.scores.forEach((score, i) => {
    const item = document.createElement("li");

    const checkbox = document.createElement("input");
    checkbox.type = "checkbox";
    checkbox.checked = isVisible(score, state.threshold, state.overrides.has(i));
    checkbox.addEventListener("change", () => {
      state = { ...state, overrides: toggleOverride(state.overrides, i) };
      refresh();
    });
    item.appendChild(checkbox);

    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = curveColor(i);
    item.appendChild(swatch);

    const label = document.createElement("span");
    label.textContent = `curve ${i + 1} — score ${score.toFixed(3)}`;
    item.appendChild(label);

    curveList.appendChild(item);
  });
}

function refreshFormValidity() {
  const result = validateCalibration(state.form);
  for (const name of FORM_IDS) el(name).classList.remove("invalid");
  if (result.ok) {
    formError.textContent = "";
  } else {
    formError.textContent = `${result.error.field}: ${result.error.message}`;
    el(result.error.field).classList.add("invalid");
  }
  exportButton.disabled = !canExport(state);
}

function refresh() {
  drawScene();
  renderCurveList();
  refreshFormValidity();
}

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  bitmap?.close();
  bitmap = await createImageBitmap(file);
  const scale = Math.min(1, 720 / bitmap.width);
  canvas.width = Math.round(bitmap.width * scale);
  canvas.height = Math.round(bitmap.height * scale);
  state = { ...state, extract: null, dataRect: defaultRect() };
  refresh();

  setStatus("extracting…");
  try {
    const extract = await client.extract(file, file.name);
    state = withExtract(state, extract);
    setStatus(`image ${extract.image_id.slice(0, 12)} — ${extract.curves.length} candidates`);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return;
    setStatus(err instanceof ApiError ? `extract failed: ${err.message}` : String(err));
  }
  refresh();
});

// Drag to redraw the data rectangle.
let dragStart: { x: number; y: number } | null = null;

function canvasPoint(ev: MouseEvent) {
  const bounds = canvas.getBoundingClientRect();
  return { x: ev.clientX - bounds.left, y: ev.clientY - bounds.top };
}

canvas.addEventListener("mousedown", (ev) => {
  dragStart = canvasPoint(ev);
});

canvas.addEventListener("mousemove", (ev) => {
  if (!dragStart) return;
  const p = canvasPoint(ev);
  state = {
    ...state,
    dataRect: {
      x: Math.min(dragStart.x, p.x),
      y: Math.min(dragStart.y, p.y),
      width: Math.abs(p.x - dragStart.x),
      height: Math.abs(p.y - dragStart.y),
    },
  };
  drawScene();
});

window.addEventListener("mouseup", () => {
  dragStart = null;
});

thresholdInput.addEventListener("input", () => {
  const value = Number(thresholdInput.value);
  if (Number.isFinite(value)) {
    state = { ...state, threshold: value };
    refresh();
  }
});

for (const name of FORM_IDS) {
  el(name).addEventListener("input", () => {
    state = { ...state, form: readForm() };
    refreshFormValidity();
  });
}

exportButton.addEventListener("click", async () => {
  const result = validateCalibration(state.form);
  if (!result.ok) return;
  setStatus("exporting…");
  try {
    const blob = await client.exportCsv(visibleCurves(state), result.value);
    const url = URL.createObjectURL(blob);
    const link = document.createElement("a");
    link.href = url;
    link.download = "extracted.csv";
    link.click();
    URL.revokeObjectURL(url);
    setStatus("CSV downloaded");
  } catch (err) {
    if (err instanceof ApiError && err.field) {
      formError.textContent = `${err.field}: ${err.message}`;
      el(err.field)?.classList.add("invalid");
      setStatus("export rejected");
    } else {
      setStatus(`export failed: ${err instanceof Error ? err.message : String(err)}`);
    }
  }
});

client
  .health()
  .then((h) => setStatus(h.status === "ok" ? `service ok (${h.checkpoint?.slice(0, 12)})` : "service loading"))
  .catch(() => setStatus("service unreachable"));

thresholdInput.value = String(state.threshold);
refresh();
