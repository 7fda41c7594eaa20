import { describe, expect, it } from "vitest";

import type { ExtractResponse } from "../src/api.js";
import {
  DEFAULT_THRESHOLD,
  canExport,
  initialState,
  isVisible,
  toggleOverride,
  visibleCurves,
  visibleIndices,
  withExtract,
} from "../src/state.js";

function fakeExtract(scores: number[]): ExtractResponse {
  return {
    curves: scores.map((_, i) => [i, i, i]),
    scores,
    image_id: "0".repeat(64),
    grid_n: 3,
  };
}

describe("visibility rule", () => {
  it("defaults the threshold to exactly 0.5", () => {
    expect(DEFAULT_THRESHOLD).toBe(0.5);
    expect(initialState().threshold).toBe(0.5);
  });

  it("is strict: a score equal to the threshold stays hidden", () => {
    expect(isVisible(0.5, 0.5, false)).toBe(false);
    expect(isVisible(0.5 + 1e-9, 0.5, false)).toBe(true);
  });

  it("an override flips visibility both ways", () => {
    expect(isVisible(0.9, 0.5, true)).toBe(false);
    expect(isVisible(0.1, 0.5, true)).toBe(true);
  });

  it("collects visible indices in slot order", () => {
    const scores = [0.9, 0.2, 0.7, 0.5];
    expect(visibleIndices(scores, 0.5, new Set())).toEqual([0, 2]);
    expect(visibleIndices(scores, 0.5, new Set([1, 2]))).toEqual([0, 1]);
  });

  it("raising the threshold above the max hides everything", () => {
    expect(visibleIndices([0.9, 0.8], 0.95, new Set())).toEqual([]);
  });
});

describe("toggleOverride", () => {
  it("adds and removes without mutating the input", () => {
    const first = new Set<number>();
    const second = toggleOverride(first, 3);
    expect(second.has(3)).toBe(true);
    expect(first.has(3)).toBe(false);
    expect(toggleOverride(second, 3).has(3)).toBe(false);
  });
});

describe("withExtract", () => {
  it("clears overrides but keeps calibration", () => {
    let state = initialState();
    state = { ...state, overrides: new Set([2]), form: { ...state.form, x_max: "42" } };
    state = withExtract(state, fakeExtract([0.9]));
    expect(state.overrides.size).toBe(0);
    expect(state.form.x_max).toBe("42");
  });
});

describe("canExport", () => {
  it("requires an extraction, a valid form, and a visible curve", () => {
    let state = initialState();
    expect(canExport(state)).toBe(false);

    state = withExtract(state, fakeExtract([0.9, 0.2]));
    expect(canExport(state)).toBe(true);

    expect(canExport({ ...state, form: { ...state.form, x_min: "oops" } })).toBe(false);
    expect(canExport({ ...state, threshold: 0.95 })).toBe(false);
    // A manual pick restores exportability even above the threshold.
    expect(canExport({ ...state, threshold: 0.95, overrides: new Set([1]) })).toBe(true);
  });
});

describe("visibleCurves", () => {
  it("orders the export by descending score", () => {
    let state = initialState();
    state = withExtract(state, fakeExtract([0.6, 0.9, 0.1, 0.8]));
    expect(visibleCurves(state)).toEqual([
      [1, 1, 1],
      [3, 3, 3],
      [0, 0, 0],
    ]);
  });

  it("keeps slot order between equal scores", () => {
    let state = initialState();
    state = withExtract(state, fakeExtract([0.7, 0.7, 0.7]));
    expect(visibleCurves(state)).toEqual([
      [0, 0, 0],
      [1, 1, 1],
      [2, 2, 2],
    ]);
  });

  it("passes values through untouched", () => {
    const awkward = [0.1 + 0.2, 1e-9, 0.9999999999999999];
    let state = initialState();
    state = withExtract(state, {
      curves: [awkward],
      scores: [0.8],
      image_id: "f".repeat(64),
      grid_n: 3,
    });
    const out = visibleCurves(state);
    expect(out[0][0]).toBe(awkward[0]);
    expect(out[0][1]).toBe(awkward[1]);
    expect(out[0][2]).toBe(awkward[2]);
  });
});
