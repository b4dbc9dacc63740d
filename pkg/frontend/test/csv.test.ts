import { describe, expect, it } from "vitest";
import { DIAGNOSTICS_HEADER, SNAPSHOT_HEADER, column, parseNumericCsv } from "../src/csv.js";
import { snapshotGrid } from "../src/artifacts.js";

const TINY = "a,b\n1,2\n3,4.5\n";

describe("parseNumericCsv", () => {
  it("parses numeric columns", () => {
    const table = parseNumericCsv(TINY, ["a", "b"]);
    expect(table.rowCount).toBe(2);
    expect(Array.from(column(table, "a"))).toEqual([1, 3]);
    expect(Array.from(column(table, "b"))).toEqual([2, 4.5]);
  });

  it("refuses on header mismatch", () => {
    expect(() => parseNumericCsv(TINY, ["a", "c"])).toThrow(/schema mismatch/);
    expect(() => parseNumericCsv(TINY, ["a"])).toThrow(/schema mismatch/);
    expect(() => parseNumericCsv("a,b,c\n1,2,3\n", ["a", "b"]))
      .toThrow(/schema mismatch/);
  });

  it("refuses ragged or non-numeric rows", () => {
    expect(() => parseNumericCsv("a,b\n1\n", ["a", "b"])).toThrow(/row 2/);
    expect(() => parseNumericCsv("a,b\n1,x\n", ["a", "b"])).toThrow(/not a number/);
  });

  it("knows the documented diagnostics schema", () => {
    expect(DIAGNOSTICS_HEADER[0]).toBe("t");
    expect(DIAGNOSTICS_HEADER).toContain("total_flow");
    expect(DIAGNOSTICS_HEADER).toContain("margin_iii");
    expect(DIAGNOSTICS_HEADER.length).toBe(17);
  });
});

describe("snapshotGrid", () => {
  it("reshapes x-major triples", () => {
    const rows: string[] = ["x,v,f"];
    const xs = [0, 1, 2];
    const vs = [10, 20];
    for (const x of xs) {
      for (const v of vs) {
        rows.push(`${x},${v},${x * 100 + v}`);
      }
    }
    const grid = snapshotGrid(parseNumericCsv(rows.join("\n") + "\n", SNAPSHOT_HEADER));
    expect(grid.xs).toEqual(xs);
    expect(grid.vs).toEqual(vs);
    expect(grid.values[2][1]).toBe(220);
  });

  it("rejects non-rectangular data", () => {
    const text = "x,v,f\n0,0,1\n0,1,1\n1,0,1\n";
    expect(() => snapshotGrid(parseNumericCsv(text, SNAPSHOT_HEADER)))
      .toThrow(/rectangular/);
  });
});
