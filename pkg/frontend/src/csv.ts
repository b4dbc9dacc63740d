/**
 * Numeric CSV reading with strict schema validation.
 *
 * The simulator documents its column sets exactly; anything else is refused
 * rather than guessed at, so a renamed or reordered column can never be
 * silently plotted as the wrong quantity.
 */

export interface NumericTable {
  header: string[];
  columns: Map<string, Float64Array>;
  rowCount: number;
}

export function parseNumericCsv(text: string, expectedHeader: string[]): NumericTable {
  const lines = text.split("\n");
  while (lines.length > 0 && lines[lines.length - 1].trim() === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const header = lines[0].trim().split(",");
  if (header.length !== expectedHeader.length ||
      !expectedHeader.every((name, i) => header[i] === name)) {
    throw new Error(
      `schema mismatch: expected columns [${expectedHeader.join(",")}], ` +
      `got [${header.join(",")}]`);
  }
  const rowCount = lines.length - 1;
  const data = header.map(() => new Float64Array(rowCount));
  for (let r = 0; r < rowCount; r++) {
    const cells = lines[r + 1].split(",");
    if (cells.length !== header.length) {
      throw new Error(`row ${r + 2}: expected ${header.length} cells, got ${cells.length}`);
    }
    for (let c = 0; c < header.length; c++) {
      const value = Number(cells[c]);
      if (Number.isNaN(value)) {
        throw new Error(`row ${r + 2}, column ${header[c]}: not a number: ${cells[c]}`);
      }
      data[c][r] = value;
    }
  }
  const columns = new Map<string, Float64Array>();
  header.forEach((name, i) => columns.set(name, data[i]));
  return { header, columns, rowCount };
}

export function column(table: NumericTable, name: string): Float64Array {
  const col = table.columns.get(name);
  if (col === undefined) {
    throw new Error(`no column ${name}`);
  }
  return col;
}

export const DIAGNOSTICS_HEADER = (
  "t,mass,mass_flow,kinetic,field,total,total_flow,p_of_t,sup_j,sup_dtA," +
  "sup_dxdtA,grid_max,sup_refined,undershoot,margin_i,margin_ii,margin_iii"
).split(",");

export const SNAPSHOT_HEADER = ["x", "v", "f"];
export const FIELDS_HEADER = ["t", "x", "A", "dtA", "dxA", "B_plus", "B_minus"];
export const MOMENTS_HEADER = ["t", "x", "rho", "j"];
