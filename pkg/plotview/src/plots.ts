/**
 * The three figure kinds: energy drift, wave-profile stacks, and log-log
 * convergence with a fitted slope.  Pure consumers of the CSV schemas; no
 * physics is recomputed here.
 */
import { DiagnosticsRow, Snapshot } from "./csv.js";
import {
  AxisSpec, DEFAULT_MARGINS, Margins, PALETTE, SvgCanvas, decadeTicks,
  drawAxes, formatTick, linearScale, logScale, niceTicks,
} from "./svg.js";

const FLOOR = 1e-18;   // display floor for zero drift rows on the log axis

export interface PlotOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  width?: number;
  height?: number;
}

function frame(opts: PlotOptions): { svg: SvgCanvas; m: Margins } {
  return {
    svg: new SvgCanvas(opts.width ?? 720, opts.height ?? 480),
    m: DEFAULT_MARGINS,
  };
}

/** Relative energy deviation |E - E0| / |E0| against time, log y-axis. */
export function plotEnergyDrift(rows: DiagnosticsRow[], opts: PlotOptions = {}): string {
  const e0 = rows[0].energy;
  const denom = Math.abs(e0) > 0 ? Math.abs(e0) : 1;
  const times = rows.map((r) => r.time);
  const drift = rows.map((r) => Math.max(Math.abs(r.energy - e0) / denom, FLOOR));

  const { svg, m } = frame(opts);
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  const tMin = Math.min(...times);
  const tMax = Math.max(...times);
  let dMin = Math.min(...drift);
  let dMax = Math.max(...drift);
  if (dMin === dMax) {
    dMin /= 10;
    dMax *= 10;
  }
  const xScale = linearScale(tMin, tMax, x0, x1);
  const yScale = logScale(dMin, dMax, y0, y1);
  const spec: AxisSpec = {
    title: opts.title ?? "relative energy deviation",
    xLabel: opts.xLabel ?? "time",
    yLabel: opts.yLabel ?? "|E - E0| / |E0|",
    xTicks: niceTicks(tMin, tMax),
    yTicks: decadeTicks(dMin, dMax),
    xScale, yScale,
  };
  drawAxes(svg, m, spec);
  svg.polyline(times.map((t, i) => [xScale(t), yScale(drift[i])]), PALETTE[0]);
  return svg.render();
}

/** Overlaid profiles of one field from a stack of snapshots. */
export function plotProfiles(snapshots: Snapshot[], fieldIndex = 0,
                             opts: PlotOptions = {}): string {
  if (snapshots.length === 0) throw new Error("no snapshots to plot");
  const field = snapshots[0].fields[fieldIndex];
  for (const s of snapshots) {
    if (s.fields[fieldIndex] !== field) {
      throw new Error(`snapshot ${s.label} has fields [${s.fields}], expected ${field}`);
    }
  }
  const xs = snapshots[0].x;
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of snapshots) {
    for (const v of s.values[fieldIndex]) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  const pad = 0.05 * (hi - lo);

  const { svg, m } = frame(opts);
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  const xScale = linearScale(xs[0], xs[xs.length - 1], x0, x1);
  const yScale = linearScale(lo - pad, hi + pad, y0, y1);
  drawAxes(svg, m, {
    title: opts.title ?? `${field} profiles`,
    xLabel: opts.xLabel ?? "x",
    yLabel: opts.yLabel ?? field,
    xTicks: niceTicks(xs[0], xs[xs.length - 1]),
    yTicks: niceTicks(lo - pad, hi + pad),
    xScale, yScale,
  });
  snapshots.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    svg.polyline(s.x.map((x, j) => [xScale(x), yScale(s.values[fieldIndex][j])]), color);
    svg.text(x1 - 6, y1 + 16 + 14 * i, s.label, { anchor: "end", size: 11, fill: color });
  });
  return svg.render();
}

/** Least-squares slope of log(y) against log(x). */
export function fitLogSlope(pairs: [number, number][]): number {
  const lx = pairs.map(([x]) => Math.log(x));
  const ly = pairs.map(([, y]) => Math.log(y));
  const n = pairs.length;
  const mx = lx.reduce((a, b) => a + b, 0) / n;
  const my = ly.reduce((a, b) => a + b, 0) / n;
  let num = 0;
  let den = 0;
  for (let i = 0; i < n; i++) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

export interface ConvergenceResult {
  svg: string;
  slope: number;
}

/** Log-log residual-vs-epsilon plot with the fitted slope annotated. */
export function plotConvergence(pairs: [number, number][],
                                opts: PlotOptions = {}): ConvergenceResult {
  const sorted = [...pairs].sort((a, b) => a[0] - b[0]);
  for (const [x, y] of sorted) {
    if (x <= 0 || y <= 0) {
      throw new Error(`log-log plot needs positive data, got (${x}, ${y})`);
    }
  }
  const slope = fitLogSlope(sorted);

  const { svg, m } = frame(opts);
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  const xs = sorted.map(([x]) => x);
  const ys = sorted.map(([, y]) => y);
  const xScale = logScale(Math.min(...xs), Math.max(...xs), x0, x1);
  const yScale = logScale(Math.min(...ys), Math.max(...ys), y0, y1);
  drawAxes(svg, m, {
    title: opts.title ?? "convergence",
    xLabel: opts.xLabel ?? "epsilon",
    yLabel: opts.yLabel ?? "residual",
    xTicks: decadeTicks(Math.min(...xs), Math.max(...xs)),
    yTicks: decadeTicks(Math.min(...ys), Math.max(...ys)),
    xScale, yScale,
  });
  const points: [number, number][] = sorted.map(([x, y]) => [xScale(x), yScale(y)]);
  svg.polyline(points, PALETTE[0]);
  for (const [px, py] of points) svg.circle(px, py, 3.5, PALETTE[0]);
  svg.text(x0 + 12, y1 + 18, `fitted slope: ${slope.toFixed(2)}`,
           { anchor: "start", size: 13, fill: PALETTE[1] });
  return { svg: svg.render(), slope };
}
