/** Minimal CSV reader for the solver CLI's outputs (plain numeric tables,
 * no quoting or embedded separators). */

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${i + 2}: expected ${columns.length} cells, got ${cells.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((name, j) => {
      row[name] = cells[j].trim();
    });
    return row;
  });
  if (rows.length === 0) {
    throw new SchemaError("empty CSV: header but no data rows");
  }
  return { columns, rows };
}

/** Assert the table has the required columns; report the diff otherwise. */
export function requireColumns(table: Table, required: string[]): void {
  const missing = required.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `missing columns: [${missing.join(", ")}]; found: [${table.columns.join(", ")}]`,
    );
  }
}

export function numeric(row: Record<string, string>, column: string): number {
  const value = Number(row[column]);
  if (!Number.isFinite(value)) {
    throw new SchemaError(`column ${column}: non-numeric value ${row[column]!}`);
  }
  return value;
}
