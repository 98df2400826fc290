/** Figure builders: rate-vs-cache-size curves and caching-distribution bars. */

import { groupBy, PstarRow, SweepRow } from "./schema.js";
import { drawFrame, drawLegend, PALETTE, SvgBuilder } from "./svg.js";

export interface FigureOptions {
  width?: number;
  height?: number;
  logY?: boolean;
}

/** One curve per scheme with standard-error whiskers at each point. */
export function rateVsM(rows: SweepRow[], opts: FigureOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const bySCheme = groupBy(rows, (row) => row.scheme);

  const transform = opts.logY ? (v: number) => Math.log10(Math.max(v, 1e-12)) : (v: number) => v;
  const xs = rows.map((row) => row.M);
  const ys = rows.map((row) => transform(row.meanRate + row.stderrRate));
  const ysLo = rows.map((row) => transform(Math.max(row.meanRate - row.stderrRate, 1e-12)));
  const yMax = Math.max(...ys);
  const yMin = opts.logY ? Math.min(...ysLo) : 0;

  const { svg, x, y } = drawFrame(
    width,
    height,
    [Math.min(...xs), Math.max(...xs)],
    [yMin, yMax * (opts.logY ? 1 : 1.05)],
    "cache size M (files)",
    opts.logY ? "log10 rate (file units)" : "rate (file units)",
    opts.logY ?? false,
  );

  const legend: Array<[string, string]> = [];
  let idx = 0;
  for (const [scheme, points] of bySCheme) {
    const color = PALETTE[idx % PALETTE.length];
    idx += 1;
    const sorted = [...points].sort((a, b) => a.M - b.M);
    svg.polyline(
      sorted.map((pt) => [x(pt.M), y(transform(pt.meanRate))]),
      color,
    );
    for (const pt of sorted) {
      svg.circle(x(pt.M), y(transform(pt.meanRate)), 3, color);
      if (pt.stderrRate > 0) {
        const hi = y(transform(pt.meanRate + pt.stderrRate));
        const lo = y(transform(Math.max(pt.meanRate - pt.stderrRate, 1e-12)));
        svg.line(x(pt.M), lo, x(pt.M), hi, color, 1);
        svg.line(x(pt.M) - 3, lo, x(pt.M) + 3, lo, color, 1);
        svg.line(x(pt.M) - 3, hi, x(pt.M) + 3, hi, color, 1);
      }
    }
    legend.push([scheme, color]);
  }
  drawLegend(svg, legend);
  return svg.render();
}

/** Grouped bars: one group per file index, one bar per label within it. */
export function pstarBars(rows: PstarRow[], opts: FigureOptions = {}): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const byLabel = groupBy(rows, (row) => row.label);
  const files = [...new Set(rows.map((row) => row.file))].sort((a, b) => a - b);
  const labels = [...byLabel.keys()];

  const margin = { top: 20, right: 20, bottom: 45, left: 60 };
  const svg = new SvgBuilder(width, height);
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const pMax = Math.max(...rows.map((row) => row.p), 1e-12);

  const groupW = plotW / files.length;
  const barW = (groupW * 0.8) / labels.length;

  svg.line(margin.left, height - margin.bottom, width - margin.right, height - margin.bottom);
  svg.line(margin.left, height - margin.bottom, margin.left, margin.top);
  for (const frac of [0, 0.25, 0.5, 0.75, 1]) {
    const value = frac * pMax;
    const yPos = height - margin.bottom - frac * plotH;
    svg.line(margin.left - 5, yPos, margin.left, yPos);
    svg.text(margin.left - 8, yPos + 4, value.toFixed(2), { anchor: "end" });
  }

  files.forEach((file, gi) => {
    const gx = margin.left + gi * groupW + groupW * 0.1;
    labels.forEach((label, li) => {
      const row = byLabel.get(label)!.find((entry) => entry.file === file);
      const value = row ? row.p : 0;
      const h = (value / pMax) * plotH;
      svg.rect(gx + li * barW, height - margin.bottom - h, barW * 0.92, h, PALETTE[li % PALETTE.length]);
    });
    svg.text(margin.left + gi * groupW + groupW / 2, height - margin.bottom + 18, `file ${file}`);
  });

  svg.text((margin.left + width - margin.right) / 2, height - 8, "file index");
  drawLegend(svg, labels.map((label, li) => [label, PALETTE[li % PALETTE.length]]));
  return svg.render();
}
