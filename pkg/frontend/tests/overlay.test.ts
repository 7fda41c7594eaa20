import { describe, expect, it } from "vitest";

import type { StrokeContext } from "../src/overlay.js";
import { curveColor, drawOverlay, polylinePoints, toScreen } from "../src/overlay.js";
import { visibleIndices } from "../src/state.js";

const RECT = { x: 10, y: 20, width: 100, height: 50 };

// Records one entry per stroked path so tests can count polylines.
class RecordingContext implements StrokeContext {
  strokeStyle: string | CanvasGradient | CanvasPattern = "";
  lineWidth = 0;
  paths: { color: string; points: [number, number][] }[] = [];
  private current: [number, number][] = [];

  beginPath() {
    this.current = [];
  }
  moveTo(x: number, y: number) {
    this.current.push([x, y]);
  }
  lineTo(x: number, y: number) {
    this.current.push([x, y]);
  }
  stroke() {
    this.paths.push({ color: String(this.strokeStyle), points: this.current });
  }
}

describe("toScreen", () => {
  it("maps the unit square corners to the rectangle corners", () => {
    expect(toScreen(RECT, 0, 0)).toEqual({ x: 10, y: 70 });
    expect(toScreen(RECT, 1, 0)).toEqual({ x: 110, y: 70 });
    expect(toScreen(RECT, 0, 1)).toEqual({ x: 10, y: 20 });
    expect(toScreen(RECT, 1, 1)).toEqual({ x: 110, y: 20 });
  });
});

describe("polylinePoints", () => {
  it("puts a constant 0.5 curve on the horizontal midline", () => {
    const points = polylinePoints(new Array(11).fill(0.5), RECT);
    for (const p of points) expect(p.y).toBe(20 + 25);
    expect(points[0].x).toBe(10);
    expect(points[10].x).toBe(110);
  });

  it("spaces samples evenly across the width", () => {
    const points = polylinePoints([0, 0.5, 1, 0.25, 0.75], RECT);
    expect(points.map((p) => p.x)).toEqual([10, 35, 60, 85, 110]);
  });
});

describe("drawOverlay", () => {
  const curves = [
    new Array(5).fill(0.5),
    new Array(5).fill(0.25),
    new Array(5).fill(0.75),
  ];

  it("strokes one polyline per visible curve, colored by slot", () => {
    const ctx = new RecordingContext();
    drawOverlay(ctx, curves, [0, 2], RECT);
    expect(ctx.paths.length).toBe(2);
    expect(ctx.paths[0].color).toBe(curveColor(0));
    expect(ctx.paths[1].color).toBe(curveColor(2));
    expect(ctx.paths[0].points.length).toBe(5);
  });

  it("draws nothing when the threshold hides every curve", () => {
    const ctx = new RecordingContext();
    const visible = visibleIndices([0.4, 0.3, 0.2], 0.5, new Set());
    drawOverlay(ctx, curves, visible, RECT);
    expect(ctx.paths.length).toBe(0);
  });

  it("toggling one curve off removes exactly that polyline", () => {
    const before = new RecordingContext();
    drawOverlay(before, curves, visibleIndices([0.9, 0.8, 0.7], 0.5, new Set()), RECT);

    const after = new RecordingContext();
    drawOverlay(after, curves, visibleIndices([0.9, 0.8, 0.7], 0.5, new Set([1])), RECT);

    expect(before.paths.length).toBe(3);
    expect(after.paths.length).toBe(2);
    expect(after.paths.map((p) => p.color)).toEqual([curveColor(0), curveColor(2)]);
  });

  it("gives the ten slots ten distinct colors", () => {
    const colors = new Set(Array.from({ length: 10 }, (_, i) => curveColor(i)));
    expect(colors.size).toBe(10);
  });
});
