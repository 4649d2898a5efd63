/** Deterministic SVG chart primitives: fixed geometry, fixed palette, no
 * timestamps, stable number formatting. */

export interface Series {
  label: string;
  points: [number, number][];
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  series: Series[];
  footer: string;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 78, right: 24, top: 44, bottom: 58 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

export function fmt(x: number): string {
  if (x === 0) return "0";
  const out = x.toPrecision(6);
  return out.includes(".") || out.includes("e")
    ? out.replace(/\.?0+(e|$)/, "$1")
    : out;
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (hi <= lo) {
    hi = lo + 1;
  }
  const span = hi - lo;
  const step = niceStep(span / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(Math.abs(t) < 1e-12 * span ? 0 : t);
  }
  const scale = ((v: number) => outLo + ((v - lo) / span) * (outHi - outLo)) as Scale;
  scale.ticks = ticks;
  return scale;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}

function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi <= lo ? lo * 10 : hi);
  const ticks: number[] = [];
  const stride = Math.max(1, Math.ceil((lhi - llo) / 8));
  for (let e = Math.ceil(llo); e <= lhi + 1e-9; e += stride) {
    ticks.push(Math.pow(10, e));
  }
  const scale = ((v: number) =>
    outLo + ((Math.log10(v) - llo) / (lhi - llo)) * (outHi - outLo)) as Scale;
  scale.ticks = ticks;
  return scale;
}

function tickLabel(v: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(v));
    if (Math.abs(v - Math.pow(10, e)) <= 1e-9 * v) return `1e${e}`;
  }
  if (Math.abs(v) >= 1e5 || (v !== 0 && Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("+", "");
  }
  return fmt(v);
}

export function renderChart(spec: ChartSpec): string {
  const plotX0 = MARGIN.left;
  const plotX1 = WIDTH - MARGIN.right;
  const plotY0 = HEIGHT - MARGIN.bottom;
  const plotY1 = MARGIN.top;

  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = spec.series.flatMap((s) => s.points.map((p) => p[1]));
  if (xs.length === 0) {
    throw new Error("nothing to plot: all series empty");
  }
  const xScale = spec.logX
    ? logScale(Math.min(...xs), Math.max(...xs), plotX0, plotX1)
    : linearScale(Math.min(...xs), Math.max(...xs), plotX0, plotX1);
  const yLo = spec.logY ? Math.min(...ys) : Math.min(0, ...ys);
  const yScale = spec.logY
    ? logScale(yLo, Math.max(...ys), plotY0, plotY1)
    : linearScale(yLo, Math.max(...ys), plotY0, plotY1);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">${esc(spec.title)}</text>`,
  );

  for (const t of xScale.ticks) {
    const x = fmt(xScale(t));
    parts.push(
      `<line x1="${x}" y1="${plotY0}" x2="${x}" y2="${plotY1}" stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${x}" y="${plotY0 + 18}" text-anchor="middle" font-size="11">${tickLabel(t, spec.logX)}</text>`,
    );
  }
  for (const t of yScale.ticks) {
    const y = fmt(yScale(t));
    parts.push(
      `<line x1="${plotX0}" y1="${y}" x2="${plotX1}" y2="${y}" stroke="#dddddd" stroke-width="1"/>`,
      `<text x="${plotX0 - 6}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${tickLabel(t, spec.logY)}</text>`,
    );
  }
  parts.push(
    `<rect x="${plotX0}" y="${plotY1}" width="${plotX1 - plotX0}" height="${plotY0 - plotY1}" fill="none" stroke="#333333"/>`,
    `<text x="${(plotX0 + plotX1) / 2}" y="${HEIGHT - 16}" text-anchor="middle" font-size="13">${esc(spec.xLabel)}</text>`,
    `<text x="20" y="${(plotY0 + plotY1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${(plotY0 + plotY1) / 2})">${esc(spec.yLabel)}</text>`,
  );

  spec.series.forEach((series, i) => {
    const color = PALETTE[i % PALETTE.length];
    const path = series.points
      .map((p, j) => `${j === 0 ? "M" : "L"}${fmt(xScale(p[0]))} ${fmt(yScale(p[1]))}`)
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const p of series.points) {
      parts.push(
        `<circle cx="${fmt(xScale(p[0]))}" cy="${fmt(yScale(p[1]))}" r="2.5" fill="${color}"/>`,
      );
    }
    const ly = plotY1 + 16 + 16 * i;
    parts.push(
      `<line x1="${plotX0 + 10}" y1="${ly}" x2="${plotX0 + 34}" y2="${ly}" stroke="${color}" stroke-width="2"/>`,
      `<text x="${plotX0 + 40}" y="${ly + 4}" font-size="12">${esc(series.label)}</text>`,
    );
  });

  parts.push(
    `<text x="${plotX0}" y="${HEIGHT - 4}" font-size="8" fill="#888888">${esc(spec.footer)}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
