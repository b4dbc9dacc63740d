/**
 * Locating and loading the documented output files of a run directory.
 * The frontend renders what the simulator emitted and nothing else; any
 * physics-shaped number here is read from a file, never recomputed.
 */

import { readFileSync, readdirSync } from "fs";
import { join } from "path";
import { DIAGNOSTICS_HEADER, NumericTable, SNAPSHOT_HEADER, parseNumericCsv } from "./csv.js";

export interface PicardIteration {
  n: number;
  distance: number;
  ratio: number | null;
  audit: { passed: boolean };
}

export interface PicardReport {
  T_requested: number;
  T_effective: number;
  tolerance: number;
  converged: boolean;
  iterations: PicardIteration[];
}

export interface DivisionRow {
  a: number;
  phi_preset: string;
  lhs: number;
  rhs: number;
  abs_err: number;
}

export interface DivisionReport {
  tolerance?: number;
  max_abs_err: number;
  rows: DivisionRow[];
}

export class RunArtifacts {
  constructor(readonly dir: string) {}

  diagnostics(): NumericTable {
    return parseNumericCsv(this.read("diagnostics.csv"), DIAGNOSTICS_HEADER);
  }

  snapshotSteps(): number[] {
    const steps: number[] = [];
    for (const name of readdirSync(this.dir)) {
      const m = /^f_(\d+)\.csv$/.exec(name);
      if (m) steps.push(Number(m[1]));
    }
    return steps.sort((a, b) => a - b);
  }

  snapshot(step: number): NumericTable {
    return parseNumericCsv(this.read(`f_${step}.csv`), SNAPSHOT_HEADER);
  }

  picardReport(): PicardReport {
    return JSON.parse(this.read("picard_report.json")) as PicardReport;
  }

  divisionReport(): DivisionReport {
    return JSON.parse(this.read("division_report.json")) as DivisionReport;
  }

  has(name: string): boolean {
    try {
      readFileSync(join(this.dir, name));
      return true;
    } catch {
      return false;
    }
  }

  private read(name: string): string {
    try {
      return readFileSync(join(this.dir, name), "utf8");
    } catch (err) {
      throw new Error(`missing or unreadable ${name} in ${this.dir}: ${err}`);
    }
  }
}

/** Reshape a snapshot table (x, v, f triples in x-major order) into a grid. */
export function snapshotGrid(table: NumericTable): {
  xs: number[]; vs: number[]; values: Float64Array[];
} {
  const x = table.columns.get("x")!;
  const v = table.columns.get("v")!;
  const f = table.columns.get("f")!;
  const vs: number[] = [];
  for (let i = 0; i < v.length; i++) {
    if (v[i] === v[0] && i > 0) break;
    vs.push(v[i]);
  }
  const nv = vs.length;
  if (nv === 0 || table.rowCount % nv !== 0) {
    throw new Error("snapshot rows do not tile a rectangular grid");
  }
  const nx = table.rowCount / nv;
  const xs: number[] = [];
  const values: Float64Array[] = [];
  for (let i = 0; i < nx; i++) {
    xs.push(x[i * nv]);
    values.push(f.subarray
      ? (f.subarray(i * nv, (i + 1) * nv) as Float64Array)
      : new Float64Array(0));
  }
  return { xs, vs, values };
}
