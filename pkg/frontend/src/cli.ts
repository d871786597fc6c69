import { readdirSync, statSync } from "node:fs";
import { join } from "node:path";
import { pathToFileURL } from "node:url";

import { plot, type FigureKind } from "./figures.js";

const USAGE = "usage: figures <sweep-dir> [--out <dir>]";

interface SweepEntry {
  factor: number;
  dir: string;
  label: string;
}

function sweepEntries(sweepDir: string): SweepEntry[] {
  let names: string[];
  try {
    names = readdirSync(sweepDir);
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code ?? String(err);
    throw new Error(`cannot read ${sweepDir} (${code})`);
  }
  const entries: SweepEntry[] = [];
  for (const name of names) {
    const m = /^W2_(\d+(?:\.\d+)?)le$/.exec(name);
    if (!m) continue;
    const dir = join(sweepDir, name);
    if (!statSync(dir).isDirectory()) continue;
    const factor = Number(m[1]);
    entries.push({ factor, dir, label: `W2 = ${m[1]} lambda_e` });
  }
  if (entries.length === 0) {
    throw new Error(`no W2_*le run directories under ${sweepDir}`);
  }
  entries.sort((a, b) => a.factor - b.factor);
  return entries;
}

const FIGURES: Array<{ kind: FigureKind; file: string; xLabel: string; yLabel: string }> = [
  { kind: "spectrum", file: "spectrum.svg", xLabel: "N_p", yLabel: "N" },
  { kind: "density", file: "density.svg", xLabel: "z (a.u.)", yLabel: "rho" },
  { kind: "timeseries", file: "timeseries.svg", xLabel: "t (a.u.)", yLabel: "N(t)" },
];

/** Build the three standard overlays from a sweep directory; returns paths. */
export function buildSweepFigures(sweepDir: string, outDir?: string): string[] {
  const entries = sweepEntries(sweepDir);
  const out = outDir ?? join(sweepDir, "figures");
  const written: string[] = [];
  for (const fig of FIGURES) {
    const target = join(out, fig.file);
    plot({
      kind: fig.kind,
      series: entries.map((e) => ({
        path: join(e.dir, `${fig.kind}.csv`),
        label: e.label,
      })),
      xLabel: fig.xLabel,
      yLabel: fig.yLabel,
      out: target,
    });
    written.push(target);
  }
  return written;
}

export function run(argv: string[]): number {
  let sweepDir: string | undefined;
  let outDir: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--out") {
      outDir = argv[++i];
      if (outDir === undefined) {
        console.error(`--out needs a value\n${USAGE}`);
        return 2;
      }
    } else if (arg === "-h" || arg === "--help") {
      console.log(USAGE);
      return 0;
    } else if (sweepDir === undefined) {
      sweepDir = arg;
    } else {
      console.error(`unexpected argument ${arg}\n${USAGE}`);
      return 2;
    }
  }
  if (sweepDir === undefined) {
    console.error(USAGE);
    return 2;
  }
  try {
    for (const path of buildSweepFigures(sweepDir, outDir)) {
      console.log(`wrote ${path}`);
    }
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }
  return 0;
}

const entry = process.argv[1];
if (entry !== undefined && import.meta.url === pathToFileURL(entry).href) {
  process.exit(run(process.argv.slice(2)));
}
