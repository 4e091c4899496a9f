/** Minimal headless SVG plotting: linear/log scales, axes, polylines. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_SIZE = { width: 720, height: 480 };
export const DEFAULT_MARGIN: Margin = { top: 42, right: 24, bottom: 52, left: 72 };

export type ScaleKind = "linear" | "log";

export interface Scale {
  kind: ScaleKind;
  domain: [number, number];
  range: [number, number];
  map(value: number): number;
  ticks(): number[];
}

function niceLinearTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const unit = step * factor;
  const start = Math.ceil(lo / unit) * unit;
  const ticks: number[] = [];
  for (let v = start; v <= hi + 1e-12 * Math.abs(span); v += unit) {
    ticks.push(Math.abs(v) < unit * 1e-9 ? 0 : v);
  }
  return ticks;
}

function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  const first = Math.ceil(Math.log10(lo) - 1e-9);
  const last = Math.floor(Math.log10(hi) + 1e-9);
  for (let e = first; e <= last; e++) ticks.push(Math.pow(10, e));
  if (ticks.length === 0) ticks.push(lo, hi);
  return ticks;
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scale {
  let [d0, d1] = domain;
  if (kind === "log") {
    if (d0 <= 0 || d1 <= 0) throw new Error("log scale needs a positive domain");
    if (d0 === d1) [d0, d1] = [d0 / 2, d1 * 2];
  } else if (d0 === d1) {
    [d0, d1] = [d0 - 1, d1 + 1];
  }
  const t = (v: number) => (kind === "log" ? Math.log10(v) : v);
  const [r0, r1] = range;
  const span = t(d1) - t(d0);
  return {
    kind,
    domain: [d0, d1],
    range,
    map: (v: number) => r0 + ((t(v) - t(d0)) / span) * (r1 - r0),
    ticks: () => (kind === "log" ? decadeTicks(d0, d1) : niceLinearTicks(d0, d1)),
  };
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) throw new Error("no finite values to plot");
  return [lo, hi];
}

export function positiveExtent(values: number[], floor = 1e-300): [number, number] {
  const positive = values.filter((v) => Number.isFinite(v) && v > floor);
  if (positive.length === 0) throw new Error("no positive values for a log axis");
  return extent(positive);
}

const esc = (s: string) => s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const mag = Math.abs(v);
  if (mag >= 1e4 || mag < 1e-3) {
    const e = Math.floor(Math.log10(mag));
    const m = v / Math.pow(10, e);
    return `${Number(m.toFixed(2))}e${e}`;
  }
  return `${Number(v.toPrecision(6))}`;
}

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label?: string;
  dash?: string;
  width?: number;
  cssClass?: string;
  markers?: boolean;
}

export interface FigureOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: Scale;
  yScale: Scale;
  series: Series[];
  annotations?: string[];
  width?: number;
  height?: number;
  margin?: Margin;
}

export function polylinePath(xs: Scale, ys: Scale, x: number[], y: number[]): string {
  const parts: string[] = [];
  let pen = false;
  for (let i = 0; i < x.length; i++) {
    const inDomain =
      Number.isFinite(x[i]) && Number.isFinite(y[i]) &&
      (ys.kind !== "log" || y[i] > 0) && (xs.kind !== "log" || x[i] > 0);
    if (!inDomain) {
      pen = false;
      continue;
    }
    const px = xs.map(x[i]).toFixed(2);
    const py = ys.map(y[i]).toFixed(2);
    parts.push(`${pen ? "L" : "M"}${px},${py}`);
    pen = true;
  }
  return parts.join(" ");
}

export function renderFigure(opts: FigureOptions): string {
  const width = opts.width ?? DEFAULT_SIZE.width;
  const height = opts.height ?? DEFAULT_SIZE.height;
  const m = opts.margin ?? DEFAULT_MARGIN;
  const xs = opts.xScale;
  const ys = opts.yScale;
  const body: string[] = [];

  body.push(`<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`);
  // frame and grid
  for (const tick of xs.ticks()) {
    const px = xs.map(tick).toFixed(2);
    body.push(`<line x1="${px}" y1="${m.top}" x2="${px}" y2="${height - m.bottom}" stroke="#e0e0e0"/>`);
    body.push(`<text x="${px}" y="${height - m.bottom + 18}" text-anchor="middle" font-size="12">${fmtTick(tick)}</text>`);
  }
  for (const tick of ys.ticks()) {
    const py = ys.map(tick).toFixed(2);
    body.push(`<line x1="${m.left}" y1="${py}" x2="${width - m.right}" y2="${py}" stroke="#e0e0e0"/>`);
    body.push(`<text x="${m.left - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="12">${fmtTick(tick)}</text>`);
  }
  body.push(`<rect x="${m.left}" y="${m.top}" width="${width - m.left - m.right}" height="${height - m.top - m.bottom}" fill="none" stroke="#333"/>`);

  for (const s of opts.series) {
    const path = polylinePath(xs, ys, s.x, s.y);
    if (path.length === 0) continue;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    const cls = s.cssClass ? ` class="${s.cssClass}"` : "";
    body.push(`<path${cls} d="${path}" fill="none" stroke="${s.color}" stroke-width="${s.width ?? 1.8}"${dash}/>`);
    if (s.markers) {
      for (let i = 0; i < s.x.length; i++) {
        if (!Number.isFinite(s.y[i]) || (ys.kind === "log" && s.y[i] <= 0)) continue;
        body.push(`<circle cx="${xs.map(s.x[i]).toFixed(2)}" cy="${ys.map(s.y[i]).toFixed(2)}" r="3.2" fill="${s.color}"/>`);
      }
    }
  }

  // legend
  let ly = m.top + 14;
  for (const s of opts.series) {
    if (!s.label) continue;
    const lx = width - m.right - 180;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    body.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" stroke="${s.color}" stroke-width="2.2"${dash}/>`);
    body.push(`<text x="${lx + 32}" y="${ly}" font-size="13">${esc(s.label)}</text>`);
    ly += 18;
  }
  for (const note of opts.annotations ?? []) {
    body.push(`<text x="${m.left + 12}" y="${ly}" font-size="13" fill="#803">${esc(note)}</text>`);
    ly += 18;
  }

  body.push(`<text x="${width / 2}" y="22" text-anchor="middle" font-size="16">${esc(opts.title)}</text>`);
  body.push(`<text x="${width / 2}" y="${height - 12}" text-anchor="middle" font-size="13">${esc(opts.xLabel)}</text>`);
  body.push(`<text x="18" y="${height / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${height / 2})">${esc(opts.yLabel)}</text>`);

  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}
