/**
 * Reader for the CSV artifacts produced by the stochpop CLI: a block of
 * `# key = value` metadata lines, then a column header and numeric rows.
 * Every artifact must carry the metadata block; files without one are
 * rejected so stale or foreign CSVs cannot slip into a figure.
 */

import { readFileSync } from "fs";

export interface CsvTable {
  /** flattened metadata: `model.p`, `label`, `kind`, ... */
  meta: Record<string, string>;
  columns: string[];
  /** numeric cells; non-numeric cells surface as NaN */
  rows: number[][];
  /** raw string cells for non-numeric columns (classifications etc.) */
  cells: string[][];
  path: string;
}

export class InputError extends Error {}

export function parseCsv(text: string, path = "<memory>"): CsvTable {
  const meta: Record<string, string> = {};
  let columns: string[] | null = null;
  const rows: number[][] = [];
  const cells: string[][] = [];
  let sawHeaderBlock = false;

  for (const rawLine of text.split(/\r?\n/)) {
    const line = rawLine.trim();
    if (line === "") continue;
    if (line.startsWith("#")) {
      sawHeaderBlock = true;
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq >= 0) {
        meta[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
      }
      continue;
    }
    if (columns === null) {
      columns = line.split(",");
      continue;
    }
    const parts = line.split(",");
    cells.push(parts);
    rows.push(parts.map((p) => (p === "" ? NaN : Number(p))));
  }

  if (!sawHeaderBlock) {
    throw new InputError(`${path}: missing '#' metadata header block`);
  }
  if (columns === null) {
    throw new InputError(`${path}: no column header found`);
  }
  if (rows.length === 0) {
    throw new InputError(`${path}: no data rows`);
  }
  return { meta, columns, rows, cells, path };
}

export function readCsv(path: string): CsvTable {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new InputError(`missing input file: ${path}`);
  }
  return parseCsv(text, path);
}

/** Column values by name; throws when the column is absent. */
export function column(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new InputError(
      `${table.path}: column '${name}' not found (have ${table.columns.join(", ")})`
    );
  }
  return table.rows.map((r) => r[idx]);
}

export function stringColumn(table: CsvTable, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new InputError(`${table.path}: column '${name}' not found`);
  }
  return table.cells.map((r) => r[idx]);
}
