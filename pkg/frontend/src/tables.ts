/**
 * Slider quantization: every slider position maps to a percentage row
 * of the service tables, so each position has an exact resolved
 * threshold and nothing is interpolated client side.
 */

import type { CoverageTable, DefectTable } from "./api.js";

export interface SliderStop {
  /** Percentage shown to the analyst. */
  percent: number;
  /** Threshold (percent units) the service resolved for that row. */
  thresholdPercent: number;
}

/** Reachable coverage rows as slider stops, ascending. */
export function coverageStops(table: CoverageTable): SliderStop[] {
  return table.entries
    .filter((row) => row.reachable && row.tau_prime !== null)
    .map((row) => ({
      percent: row.alpha * 100,
      thresholdPercent: (row.tau_prime as number) * 100,
    }));
}

/** Defect rows as slider stops; duplicate percentages keep the later
 * (endpoint) row, so the maximum maps to threshold 0. */
export function defectStops(table: DefectTable): SliderStop[] {
  const byPercent = new Map<number, SliderStop>();
  for (const row of table.entries) {
    byPercent.set(row.alpha * 100, {
      percent: row.alpha * 100,
      thresholdPercent: row.tau * 100,
    });
  }
  return [...byPercent.values()].sort((a, b) => a.percent - b.percent);
}

/** Largest coverage percentage any threshold can reach. */
export function attainableMaxPercent(table: CoverageTable): number {
  return table.attainable_max * 100;
}

/** Snap a raw slider value to the closest stop (ties go down). */
export function nearestStop(stops: SliderStop[], percent: number): SliderStop {
  if (stops.length === 0) throw new Error("no slider stops");
  let best = stops[0] as SliderStop;
  let bestDist = Math.abs(best.percent - percent);
  for (const stop of stops) {
    const dist = Math.abs(stop.percent - percent);
    if (dist < bestDist) {
      best = stop;
      bestDist = dist;
    }
  }
  return best;
}
