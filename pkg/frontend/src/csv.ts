/**
 * CSV ingestion for the experiment files.
 *
 * Each figure id has a fixed schema; anything else is refused with a column
 * diff. Trailing "# ..." comment lines (the version/config stamp) are ignored.
 */

export const SCHEMAS: Record<string, string[]> = {
  fig12: ["B", "theta", "epsilon"],
  fig16: ["theta", "target", "decoder", "success"],
  fig17: ["theta_prime", "decoder", "success"],
  fig19: ["theta", "decoder", "success"],
};

export type Row = Record<string, string>;

export class SchemaError extends Error {}

export function parseCsv(figureId: string, text: string): Row[] {
  const schema = SCHEMAS[figureId];
  if (!schema) {
    throw new SchemaError(`unknown figure id '${figureId}' (expected one of ${Object.keys(SCHEMAS).join(", ")})`);
  }
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0 && !l.startsWith("#"));
  if (lines.length === 0) {
    throw new SchemaError("empty file: no header row");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (header.length !== schema.length || header.some((h, i) => h !== schema[i])) {
    throw new SchemaError(
      `header mismatch for ${figureId}:\n  expected: ${schema.join(",")}\n  got:      ${header.join(",")}`,
    );
  }
  const rows: Row[] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",").map((c) => c.trim());
    if (cells.length !== schema.length) {
      throw new SchemaError(`row has ${cells.length} cells, expected ${schema.length}: '${line}'`);
    }
    const row: Row = {};
    schema.forEach((name, i) => (row[name] = cells[i]));
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new SchemaError("no data rows (header only)");
  }
  return rows;
}

export function num(row: Row, column: string): number {
  const v = Number(row[column]);
  if (!Number.isFinite(v)) {
    throw new SchemaError(`non-numeric value '${row[column]}' in column ${column}`);
  }
  return v;
}
