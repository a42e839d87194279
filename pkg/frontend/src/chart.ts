/**
 * Minimal canvas line chart for the quality curves, with a marker at
 * the tuned threshold.
 */

import type { CurvePoint } from "./api.js";

export interface ChartLayout {
  width: number;
  height: number;
  padding: number;
}

export interface XY {
  x: number;
  y: number;
}

/** Map curve points into pixel coordinates for the product trace. */
export function productPolyline(
  curve: CurvePoint[],
  layout: ChartLayout,
): XY[] {
  if (curve.length === 0) return [];
  const taus = curve.map((p) => p.tau);
  const pis = curve.map((p) => p.Pi);
  const tMin = Math.min(...taus);
  const tMax = Math.max(...taus);
  const pMax = Math.max(...pis, Number.EPSILON);
  const { width, height, padding } = layout;
  const spanX = Math.max(tMax - tMin, Number.EPSILON);
  return curve.map((p) => ({
    x: padding + ((p.tau - tMin) / spanX) * (width - 2 * padding),
    y: height - padding - (p.Pi / pMax) * (height - 2 * padding),
  }));
}

export function drawQualityCurve(
  canvas: HTMLCanvasElement,
  curve: CurvePoint[],
  markerTauPercent: number | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const layout: ChartLayout = {
    width: canvas.width,
    height: canvas.height,
    padding: 12,
  };
  ctx.clearRect(0, 0, layout.width, layout.height);
  const points = productPolyline(curve, layout);
  if (points.length === 0) return;

  ctx.strokeStyle = "#2563eb";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  points.forEach((p, i) => (i === 0 ? ctx.moveTo(p.x, p.y) : ctx.lineTo(p.x, p.y)));
  ctx.stroke();

  if (markerTauPercent !== null && curve.length > 0) {
    const taus = curve.map((p) => p.tau);
    const tMin = Math.min(...taus);
    const tMax = Math.max(...taus);
    const spanX = Math.max(tMax - tMin, Number.EPSILON);
    const marker = markerTauPercent / 100;
    const x =
      layout.padding +
      ((marker - tMin) / spanX) * (layout.width - 2 * layout.padding);
    ctx.strokeStyle = "#dc2626";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(x, layout.padding);
    ctx.lineTo(x, layout.height - layout.padding);
    ctx.stroke();
    ctx.setLineDash([]);
  }
}
