import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { readCsv } from "./csv.js";
import { render, type Series } from "./svg.js";

export type FigureKind = "spectrum" | "density" | "timeseries";

export interface SeriesSpec {
  path: string;
  label: string;
}

export interface FigureSpec {
  kind: FigureKind;
  series: SeriesSpec[];
  xLabel: string;
  yLabel: string;
  out: string;
}

/** Expected header per figure kind; matches the simulator's CSV writers. */
export const HEADERS: Record<FigureKind, readonly string[]> = {
  spectrum: ["N_p", "N"],
  density: ["z", "rho"],
  timeseries: ["t", "N"],
};

/** Render one figure from its CSV series. Reads inputs, never writes them. */
export function plot(spec: FigureSpec): void {
  if (spec.series.length === 0) {
    throw new Error("empty series list: nothing to plot");
  }
  const header = HEADERS[spec.kind];
  const series: Series[] = spec.series.map(({ path, label }) => {
    const table = readCsv(path, header);
    return {
      label,
      x: table.rows.map((row) => row[0] as number),
      y: table.rows.map((row) => row[1] as number),
    };
  });
  const svg = render(series, { xLabel: spec.xLabel, yLabel: spec.yLabel });
  mkdirSync(dirname(spec.out), { recursive: true });
  writeFileSync(spec.out, svg);
}
