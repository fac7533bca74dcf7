/** Chart model: trajectory responses -> plottable series.
 *
 * Point values are the server's numbers untouched, and every point keeps
 * the raw byte token the server sent for it; scaling to pixels happens at
 * render time and never feeds back into displayed values.
 */

import { rawNumberGrid } from "./rawjson.js";
import type { Raw, TrajectoryDoc } from "./types.js";

export interface SeriesPoint {
  t: number;
  value: number;
  /** the exact bytes the server sent for this value */
  label: string;
}

export interface ChartSeries {
  factor: string;
  overlay: boolean;
  points: SeriesPoint[];
}

export function buildSeries(
  result: Raw<TrajectoryDoc>,
  factors: string[],
  overlay = false,
): ChartSeries[] {
  const tokens = rawNumberGrid(result.raw, "y");
  const out: ChartSeries[] = [];
  for (const factor of factors) {
    const column = result.doc.factors.indexOf(factor);
    if (column < 0) continue;
    const points: SeriesPoint[] = [];
    for (let t = 0; t < result.doc.y.length; t++) {
      points.push({ t, value: result.doc.y[t][column], label: tokens[t][column] });
    }
    out.push({ factor, overlay, points });
  }
  return out;
}

export interface PixelPoint {
  x: number;
  y: number;
  point: SeriesPoint;
}

/** Pixel positions for a set of series sharing one value range. */
export function toPixels(
  series: ChartSeries[],
  width: number,
  height: number,
  pad = 28,
): Map<ChartSeries, PixelPoint[]> {
  let lo = Infinity;
  let hi = -Infinity;
  let maxT = 1;
  for (const s of series) {
    for (const p of s.points) {
      lo = Math.min(lo, p.value);
      hi = Math.max(hi, p.value);
      maxT = Math.max(maxT, p.t);
    }
  }
  if (!Number.isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (hi === lo) {
    hi = lo + 1;
  }
  const result = new Map<ChartSeries, PixelPoint[]>();
  for (const s of series) {
    result.set(
      s,
      s.points.map((point) => ({
        x: pad + (point.t / maxT) * (width - 2 * pad),
        y: height - pad - ((point.value - lo) / (hi - lo)) * (height - 2 * pad),
        point,
      })),
    );
  }
  return result;
}

/** Extremes of the displayed values, with their server-sent labels. */
export function valueExtremes(series: ChartSeries[]): { min: SeriesPoint; max: SeriesPoint } | null {
  let min: SeriesPoint | null = null;
  let max: SeriesPoint | null = null;
  for (const s of series) {
    for (const p of s.points) {
      if (min === null || p.value < min.value) min = p;
      if (max === null || p.value > max.value) max = p;
    }
  }
  return min && max ? { min, max } : null;
}
