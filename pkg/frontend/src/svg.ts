/**
 * Minimal deterministic SVG emission: linear scales, axes, polylines,
 * error bars, grouped bars, legend. No DOM, no randomness — identical
 * input yields identical bytes.
 */

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

/** Round tick positions: about `count` steps of 1/2/5 × 10^k. */
export function ticks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export const PALETTE = ["#1b6ca8", "#d1495b", "#3a7d44", "#8d6a9f", "#c98a2b", "#4f5d75"];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");

export class SvgBuilder {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#333", strokeWidth = 1): void {
    this.raw(
      `<line x1="${r(x1)}" y1="${r(y1)}" x2="${r(x2)}" y2="${r(y2)}" ` +
        `stroke="${stroke}" stroke-width="${strokeWidth}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string): void {
    const pts = points.map(([x, y]) => `${r(x)},${r(y)}`).join(" ");
    this.raw(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="2"/>`);
  }

  circle(cx: number, cy: number, radius: number, fill: string): void {
    this.raw(`<circle cx="${r(cx)}" cy="${r(cy)}" r="${radius}" fill="${fill}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.raw(`<rect x="${r(x)}" y="${r(y)}" width="${r(w)}" height="${r(h)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; size?: number } = {}): void {
    const anchor = opts.anchor ?? "middle";
    const size = opts.size ?? 12;
    this.raw(
      `<text x="${r(x)}" y="${r(y)}" text-anchor="${anchor}" ` +
        `font-family="sans-serif" font-size="${size}">${esc(content)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="#ffffff"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

const r = (v: number) => Number(v.toFixed(2));

export interface Frame {
  svg: SvgBuilder;
  x: Scale;
  y: Scale;
}

/** Axes, tick marks, tick labels, and axis titles around a plot area. */
export function drawFrame(
  width: number,
  height: number,
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
  logY = false,
): Frame {
  const margin = { top: 20, right: 20, bottom: 45, left: 60 };
  const svg = new SvgBuilder(width, height);
  const x = linearScale(xDomain, [margin.left, width - margin.right]);
  const y = linearScale(yDomain, [height - margin.bottom, margin.top]);

  svg.line(x.range[0], y.range[0], x.range[1], y.range[0]); // x axis
  svg.line(x.range[0], y.range[0], x.range[0], y.range[1]); // y axis
  for (const t of ticks(xDomain[0], xDomain[1])) {
    svg.line(x(t), y.range[0], x(t), y.range[0] + 5);
    svg.text(x(t), y.range[0] + 18, fmtTick(t));
  }
  for (const t of ticks(yDomain[0], yDomain[1])) {
    svg.line(x.range[0] - 5, y(t), x.range[0], y(t));
    svg.text(x.range[0] - 8, y(t) + 4, logY ? `1e${fmtTick(t)}` : fmtTick(t), { anchor: "end" });
  }
  svg.text((x.range[0] + x.range[1]) / 2, height - 8, xLabel);
  svg.raw(
    `<text x="14" y="${(y.range[0] + y.range[1]) / 2}" text-anchor="middle" ` +
      `font-family="sans-serif" font-size="12" ` +
      `transform="rotate(-90 14 ${(y.range[0] + y.range[1]) / 2})">${esc(yLabel)}</text>`,
  );
  return { svg, x, y };
}

function fmtTick(v: number): string {
  return Math.abs(v) >= 1000 ? v.toExponential(1) : String(v);
}

export function drawLegend(svg: SvgBuilder, entries: Array<[string, string]>): void {
  let yPos = 30;
  for (const [label, color] of entries) {
    svg.rect(svg.width - 150, yPos - 9, 18, 4, color);
    svg.text(svg.width - 126, yPos, label, { anchor: "start", size: 11 });
    yPos += 18;
  }
}
