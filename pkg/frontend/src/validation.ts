// Client-side calibration checks. These mirror the server's rules in
// field order and message text, so a submission blocked here shows the
// same inline error the server would have answered with, and nothing
// that passes here bounces off the server.

import type { Calibration, ScaleKind } from "./api.js";

export interface CalibrationForm {
  x_min: string;
  x_max: string;
  y_min: string;
  y_max: string;
  x_scale: ScaleKind;
  y_scale: ScaleKind;
}

export interface FieldError {
  field: string;
  message: string;
}

export type ValidationResult =
  | { ok: true; value: Calibration }
  | { ok: false; error: FieldError };

const BOUND_FIELDS = ["x_min", "x_max", "y_min", "y_max"] as const;

function fail(field: string, message: string): ValidationResult {
  return { ok: false, error: { field, message } };
}

export function validateCalibration(form: CalibrationForm): ValidationResult {
  const values: Record<string, number> = {};
  for (const name of BOUND_FIELDS) {
    const raw = form[name].trim();
    if (raw === "") return fail(name, `${name} is required`);
    const parsed = Number(raw);
    if (!Number.isFinite(parsed)) return fail(name, `${name} must be a number`);
    values[name] = parsed;
  }
  for (const name of ["x_scale", "y_scale"] as const) {
    if (form[name] !== "linear" && form[name] !== "log") {
      return fail(name, `${name} must be 'linear' or 'log'`);
    }
  }
  if (values.x_min >= values.x_max) return fail("x_min", "x_min must be < x_max");
  if (values.y_min >= values.y_max) return fail("y_min", "y_min must be < y_max");
  if (form.x_scale === "log" && values.x_min <= 0) {
    return fail("x_min", "log x-axis requires positive bounds");
  }
  if (form.y_scale === "log" && values.y_min <= 0) {
    return fail("y_min", "log y-axis requires positive bounds");
  }
  return {
    ok: true,
    value: {
      x_min: values.x_min,
      x_max: values.x_max,
      y_min: values.y_min,
      y_max: values.y_max,
      x_scale: form.x_scale,
      y_scale: form.y_scale,
    },
  };
}
