/**
 * Strict reader for the simulator's CSV outputs.
 *
 * Every file carries a header row; schema violations fail loudly with the
 * offending file and column named, so a broken pipeline never produces an
 * empty or misleading figure.
 */

import { readFileSync } from "node:fs";

export interface Table {
  path: string;
  columns: string[];
  rows: string[][];
}

export function readCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as Error).message}`);
  }
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file, expected a header row`);
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `${path}: row ${i + 2} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    return cells;
  });
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows below the header`);
  }
  return { path, columns, rows };
}

/** Index of a required column; unknown extra columns are simply ignored. */
export function columnIndex(table: Table, name: string): number {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.path}: missing required column "${name}"`);
  }
  return idx;
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    columnIndex(table, name);
  }
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (!Number.isFinite(value)) {
      throw new Error(
        `${table.path}: row ${i + 2}, column "${name}": not a number (${row[idx]})`,
      );
    }
    return value;
  });
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx]);
}
