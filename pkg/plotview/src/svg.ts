/** Minimal hand-rolled SVG plotting: scales, axes, polylines, labels. */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGINS: Margins = { top: 40, right: 24, bottom: 48, left: 72 };

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * factor;
  const start = Math.ceil(lo / s) * s;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * Math.abs(span); v += s) ticks.push(v);
  return ticks;
}

export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); e <= Math.floor(Math.log10(hi) + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    return v.toExponential(0).replace("+", "");
  }
  return String(Number(v.toPrecision(6)));
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class SvgCanvas {
  private parts: string[] = [];
  constructor(readonly width = 720, readonly height = 480) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#444", width = 1): void {
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" ` +
      `y2="${y2.toFixed(2)}" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  polyline(points: [number, number][], stroke: string, width = 1.5, dash = ""): void {
    const attr = dash ? ` stroke-dasharray="${dash}"` : "";
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${attr} points="${pts}"/>`);
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(
      `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string,
       opts: { anchor?: string; size?: number; fill?: string; rotate?: boolean } = {}): void {
    const { anchor = "middle", size = 12, fill = "#222", rotate = false } = opts;
    const transform = rotate ? ` transform="rotate(-90 ${x.toFixed(2)} ${y.toFixed(2)})"` : "";
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" text-anchor="${anchor}" ` +
      `font-family="sans-serif" font-size="${size}" fill="${fill}"${transform}>` +
      `${esc(content)}</text>`);
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      `\n</svg>\n`);
  }
}

export interface AxisSpec {
  xLabel: string;
  yLabel: string;
  title: string;
  xTicks: number[];
  yTicks: number[];
  xScale: Scale;
  yScale: Scale;
}

/** Draw frame, ticks, grid lines, and labels for a plot area. */
export function drawAxes(svg: SvgCanvas, m: Margins, spec: AxisSpec): void {
  const x0 = m.left;
  const x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom;
  const y1 = m.top;
  svg.line(x0, y0, x1, y0);
  svg.line(x0, y0, x0, y1);
  for (const t of spec.xTicks) {
    const px = spec.xScale(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    svg.line(px, y0, px, y1, "#ddd", 0.6);
    svg.line(px, y0, px, y0 + 5);
    svg.text(px, y0 + 20, formatTick(t));
  }
  for (const t of spec.yTicks) {
    const py = spec.yScale(t);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    svg.line(x0, py, x1, py, "#ddd", 0.6);
    svg.line(x0 - 5, py, x0, py);
    svg.text(x0 - 8, py + 4, formatTick(t), { anchor: "end" });
  }
  svg.text((x0 + x1) / 2, svg.height - 10, spec.xLabel);
  svg.text(16, (y0 + y1) / 2, spec.yLabel, { rotate: true });
  svg.text((x0 + x1) / 2, 22, spec.title, { size: 14 });
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];
