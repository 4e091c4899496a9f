import { readFileSync } from "node:fs";

export class MissingColumnError extends Error {
  constructor(public readonly column: string, path: string) {
    super(`missing required column "${column}" in ${path}`);
  }
}

export interface Table {
  path: string;
  columns: Map<string, number[]>;
  length: number;
}

/** Parse a numeric CSV with a header row; empty fields become NaN. */
export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length < 2) {
    throw new Error(`${path}: expected a header row and at least one data row`);
  }
  const header = lines[0].split(",").map((name) => name.trim());
  const columns = new Map<string, number[]>(header.map((name) => [name, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(`${path}: row ${i + 1} has ${parts.length} fields, expected ${header.length}`);
    }
    header.forEach((name, j) => {
      const token = parts[j].trim();
      columns.get(name)!.push(token === "" ? NaN : Number(token));
    });
  }
  return { path, columns, length: lines.length - 1 };
}

export function requireColumn(table: Table, name: string): number[] {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new MissingColumnError(name, table.path);
  }
  return col;
}

export function hasColumn(table: Table, name: string): boolean {
  return table.columns.has(name);
}
