/**
 * Deterministic SVG line plots: no timestamps, no randomness, fixed
 * number formatting, so identical inputs give identical bytes.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface Axes {
  xLabel: string;
  yLabel: string;
}

const WIDTH = 960;
const HEIGHT = 600;
const MARGIN = { left: 78, right: 16, top: 16, bottom: 56 };
const PALETTE = [
  "#000000",
  "#c0392b",
  "#2155cd",
  "#1e8449",
  "#8e44ad",
  "#d4760a",
  "#148f77",
  "#7f8c8d",
];

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Pixel coordinate: two fixed decimals keep the output stable and small. */
function px(v: number): string {
  return v.toFixed(2);
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(3).replace(/\.?0+e/, "e");
  }
  return v.toFixed(6).replace(/\.?0+$/, "");
}

function niceTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let k = Math.ceil(lo / step - 1e-9); k * step <= hi + step * 1e-9; k++) {
    ticks.push(k * step);
  }
  return ticks;
}

interface Bounds {
  lo: number;
  hi: number;
}

function bounds(values: number[][]): Bounds {
  let lo = Infinity;
  let hi = -Infinity;
  for (const arr of values) {
    for (const v of arr) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  if (!(hi > lo)) {
    const pad = Math.max(Math.abs(lo), 1);
    return { lo: lo - pad, hi: hi + pad };
  }
  const pad = 0.05 * (hi - lo);
  return { lo: lo - pad, hi: hi + pad };
}

/** Render overlaid line series with axes and a legend. */
export function render(series: Series[], axes: Axes): string {
  if (series.length === 0) {
    throw new Error("empty series list: nothing to plot");
  }
  for (const s of series) {
    if (s.x.length !== s.y.length) {
      throw new Error(`series ${JSON.stringify(s.label)}: x/y length mismatch`);
    }
    if (s.x.length === 0) {
      throw new Error(`series ${JSON.stringify(s.label)} has no points`);
    }
  }
  const xb = bounds(series.map((s) => s.x));
  const yb = bounds(series.map((s) => s.y));
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (v: number) => MARGIN.left + ((v - xb.lo) / (xb.hi - xb.lo)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - yb.lo) / (yb.hi - yb.lo)) * plotH;

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `font-family="sans-serif" font-size="13">`
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  out.push(
    `<rect x="${px(MARGIN.left)}" y="${px(MARGIN.top)}" width="${px(plotW)}" ` +
      `height="${px(plotH)}" fill="none" stroke="#000000"/>`
  );

  for (const t of niceTicks(xb.lo, xb.hi, 8)) {
    const x = sx(t);
    out.push(
      `<line x1="${px(x)}" y1="${px(MARGIN.top + plotH)}" x2="${px(x)}" ` +
        `y2="${px(MARGIN.top + plotH + 6)}" stroke="#000000"/>`
    );
    out.push(
      `<text x="${px(x)}" y="${px(MARGIN.top + plotH + 22)}" ` +
        `text-anchor="middle">${escapeXml(tickLabel(t))}</text>`
    );
  }
  for (const t of niceTicks(yb.lo, yb.hi, 6)) {
    const y = sy(t);
    out.push(
      `<line x1="${px(MARGIN.left - 6)}" y1="${px(y)}" x2="${px(MARGIN.left)}" ` +
        `y2="${px(y)}" stroke="#000000"/>`
    );
    out.push(
      `<text x="${px(MARGIN.left - 10)}" y="${px(y + 4)}" ` +
        `text-anchor="end">${escapeXml(tickLabel(t))}</text>`
    );
  }
  out.push(
    `<text x="${px(MARGIN.left + plotW / 2)}" y="${px(HEIGHT - 12)}" ` +
      `text-anchor="middle">${escapeXml(axes.xLabel)}</text>`
  );
  out.push(
    `<text x="16" y="${px(MARGIN.top + plotH / 2)}" text-anchor="middle" ` +
      `transform="rotate(-90 16 ${px(MARGIN.top + plotH / 2)})">${escapeXml(axes.yLabel)}</text>`
  );

  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const d = s.x
      .map((xv, j) => `${j === 0 ? "M" : "L"}${px(sx(xv))},${px(sy(s.y[j] as number))}`)
      .join(" ");
    out.push(`<path fill="none" stroke="${color}" stroke-width="1.2" d="${d}"/>`);
  });

  const legendX = MARGIN.left + plotW - 8;
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 16 + 18 * i;
    out.push(
      `<line x1="${px(legendX - 150)}" y1="${px(y - 4)}" x2="${px(legendX - 122)}" ` +
        `y2="${px(y - 4)}" stroke="${color}" stroke-width="2"/>`
    );
    out.push(
      `<text x="${px(legendX - 116)}" y="${px(y)}">${escapeXml(s.label)}</text>`
    );
  });

  out.push("</svg>");
  return out.join("\n") + "\n";
}
