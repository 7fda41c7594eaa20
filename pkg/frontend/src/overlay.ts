// Overlay geometry and drawing. Predictions live on the unit square
// (x left to right, y bottom to top); the user drags a rectangle over
// the plot's data region and each visible curve is stretched across it.
// This mapping is cosmetic alignment only and never touches the
// exported numbers.

import type { DataRect } from "./state.js";

export interface ScreenPoint {
  x: number;
  y: number;
}

// One color per candidate slot, reused by the legend.
export const CURVE_COLORS = [
  "#e41a1c",
  "#377eb8",
  "#4daf4a",
  "#984ea3",
  "#ff7f00",
  "#a65628",
  "#f781bf",
  "#17becf",
  "#666666",
  "#bcbd22",
];

export function curveColor(index: number): string {
  return CURVE_COLORS[index % CURVE_COLORS.length];
}

// Canvas y grows downward, normalized y grows upward, hence the flip.
export function toScreen(rect: DataRect, u: number, v: number): ScreenPoint {
  return {
    x: rect.x + u * rect.width,
    y: rect.y + (1 - v) * rect.height,
  };
}

export function polylinePoints(ys: number[], rect: DataRect): ScreenPoint[] {
  const n = ys.length;
  return ys.map((v, i) => toScreen(rect, n > 1 ? i / (n - 1) : 0, v));
}

// The part of CanvasRenderingContext2D the overlay needs; tests drive
// it with a recording fake.
export interface StrokeContext {
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
}

export function drawPolyline(ctx: StrokeContext, points: ScreenPoint[]): void {
  if (points.length === 0) return;
  ctx.beginPath();
  ctx.moveTo(points[0].x, points[0].y);
  for (let i = 1; i < points.length; i++) ctx.lineTo(points[i].x, points[i].y);
  ctx.stroke();
}

// Draws the visible curves across the data rectangle, one stroked path
// each, colored by slot so the legend matches. With nothing visible the
// canvas keeps showing the bare image.
export function drawOverlay(
  ctx: StrokeContext,
  curves: number[][],
  visible: number[],
  rect: DataRect,
): void {
  for (const index of visible) {
    ctx.strokeStyle = curveColor(index);
    ctx.lineWidth = 2;
    drawPolyline(ctx, polylinePoints(curves[index], rect));
  }
}
