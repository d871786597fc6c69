import { readFileSync } from "node:fs";

export interface CsvTable {
  header: string[];
  rows: number[][];
}

/** Read a numeric CSV and check its header columns by name. */
export function readCsv(path: string, expectedHeader: readonly string[]): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    const code = (err as NodeJS.ErrnoException).code ?? String(err);
    throw new Error(`cannot read ${path} (${code})`);
  }
  const lines = text.split("\n").filter((line) => line.length > 0);
  const headerLine = lines[0];
  if (headerLine === undefined) {
    throw new Error(`${path} is empty`);
  }
  const header = headerLine.split(",").map((s) => s.trim());
  for (let i = 0; i < Math.max(header.length, expectedHeader.length); i++) {
    const got = header[i];
    const want = expectedHeader[i];
    if (got !== want) {
      throw new Error(
        `${path}: header column ${i + 1} is ${JSON.stringify(got ?? "(missing)")}, ` +
          `expected ${JSON.stringify(want ?? "(no further columns)")}`
      );
    }
  }
  const rows = lines.slice(1).map((line, n) => {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new Error(`${path}:${n + 2}: ${parts.length} fields, expected ${header.length}`);
    }
    return parts.map((part) => {
      const value = Number(part);
      if (!Number.isFinite(value)) {
        throw new Error(`${path}:${n + 2}: not a finite number: ${JSON.stringify(part)}`);
      }
      return value;
    });
  });
  return { header, rows };
}
