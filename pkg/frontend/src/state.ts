// Session state and the visibility rule. A curve is shown when its
// score beats the threshold (strictly), unless the user has toggled it
// by hand: visible = (score > threshold) XOR overridden. Raising the
// threshold therefore hides low scorers without erasing manual picks.

import type { ExtractResponse } from "./api.js";
import type { CalibrationForm } from "./validation.js";
import { validateCalibration } from "./validation.js";

export const DEFAULT_THRESHOLD = 0.5;

export interface DataRect {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface SessionState {
  extract: ExtractResponse | null;
  threshold: number;
  overrides: Set<number>;
  form: CalibrationForm;
  // Overlay alignment only; exported numbers never depend on this.
  dataRect: DataRect | null;
}

export function initialState(): SessionState {
  return {
    extract: null,
    threshold: DEFAULT_THRESHOLD,
    overrides: new Set(),
    form: {
      x_min: "0",
      x_max: "1",
      y_min: "0",
      y_max: "1",
      x_scale: "linear",
      y_scale: "linear",
    },
    dataRect: null,
  };
}

export function isVisible(score: number, threshold: number, overridden: boolean): boolean {
  return score > threshold !== overridden;
}

export function visibleIndices(
  scores: number[],
  threshold: number,
  overrides: Set<number>,
): number[] {
  const out: number[] = [];
  scores.forEach((s, i) => {
    if (isVisible(s, threshold, overrides.has(i))) out.push(i);
  });
  return out;
}

export function toggleOverride(overrides: Set<number>, index: number): Set<number> {
  const next = new Set(overrides);
  if (next.has(index)) next.delete(index);
  else next.add(index);
  return next;
}

// A fresh extraction invalidates the per-curve toggles but keeps the
// typed calibration, which belongs to the axes, not the prediction.
export function withExtract(state: SessionState, extract: ExtractResponse): SessionState {
  return { ...state, extract, overrides: new Set() };
}

export function canExport(state: SessionState): boolean {
  if (state.extract === null) return false;
  if (!validateCalibration(state.form).ok) return false;
  const visible = visibleIndices(state.extract.scores, state.threshold, state.overrides);
  return visible.length > 0;
}

// Curves for export, highest score first (ties keep slot order). The
// command-line exporter orders columns the same way, which is what
// makes the two CSV paths byte-identical.
export function visibleCurves(state: SessionState): number[][] {
  if (state.extract === null) return [];
  const scores = state.extract.scores;
  const indices = visibleIndices(scores, state.threshold, state.overrides);
  indices.sort((a, b) => scores[b] - scores[a]);
  return indices.map((i) => state.extract!.curves[i]);
}
