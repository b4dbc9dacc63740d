import { mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";
import { RunArtifacts } from "../src/artifacts.js";
import { DIAGNOSTICS_HEADER, parseNumericCsv } from "../src/csv.js";
import { divisionTable, plotEnergyComponents, plotEnergyDrift,
         plotPhaseSpace, plotPicard } from "../src/plots.js";
import { main } from "../src/cli.js";

function diagnosticsCsv(steps = 6): string {
  const lines = [DIAGNOSTICS_HEADER.join(",")];
  for (let k = 0; k <= steps; k++) {
    const t = k * 0.25;
    const total = 1.0 + 2e-5 * Math.sin(k);
    const row = [
      t, 1.1, 1.1, 0.9, 0.1, total, total + 1e-6, 1.5 - 0.05 * k, 0.4, 0.3,
      0.8, 1.0, 1.0, 0.0, 0.1, 0.2, 0.3,
    ];
    lines.push(row.join(","));
  }
  return lines.join("\n") + "\n";
}

function snapshotCsv(nx = 9, nv = 7): string {
  const lines = ["x,v,f"];
  for (let i = 0; i <= nx; i++) {
    const x = -3 + (6 * i) / nx;
    for (let j = 0; j <= nv; j++) {
      const v = -2 + (4 * j) / nv;
      const f = Math.max(0, 1 - x * x) * Math.max(0, 1 - (v - 0.5) ** 2);
      lines.push(`${x},${v},${f}`);
    }
  }
  return lines.join("\n") + "\n";
}

function makeRunDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "vw-frontend-"));
  writeFileSync(join(dir, "diagnostics.csv"), diagnosticsCsv());
  writeFileSync(join(dir, "f_0.csv"), snapshotCsv());
  writeFileSync(join(dir, "f_4.csv"), snapshotCsv());
  writeFileSync(join(dir, "picard_report.json"), JSON.stringify({
    T_requested: 0.25, T_effective: 0.234375, tolerance: 1e-10,
    converged: true,
    iterations: [
      { n: 1, distance: 0.05, ratio: null, audit: { passed: true } },
      { n: 2, distance: 0.006, ratio: 0.12, audit: { passed: true } },
      { n: 3, distance: 0.0008, ratio: 0.13, audit: { passed: true } },
    ],
  }));
  writeFileSync(join(dir, "division_report.json"), JSON.stringify({
    tolerance: 1e-8, max_abs_err: 3.2e-11,
    rows: [
      { a: 0.0, phi_preset: "centered", lhs: 0.406349, rhs: 0.406349, abs_err: 1e-12 },
      { a: 0.9, phi_preset: "offset", lhs: 0.12, rhs: 0.12, abs_err: 3.2e-11 },
    ],
  }));
  return dir;
}

describe("conservation figures", () => {
  it("draw all components and the acceptance line", () => {
    const diag = parseNumericCsv(diagnosticsCsv(), DIAGNOSTICS_HEADER);
    const components = plotEnergyComponents(diag);
    expect(components).toContain("<svg");
    expect(components).toContain("kinetic");
    expect(components).toContain("total");
    const drift = plotEnergyDrift(diag);
    expect(drift).toContain("acceptance 1e-4");
    expect(drift).toContain("flow form");
  });

  it("is deterministic", () => {
    const diag = parseNumericCsv(diagnosticsCsv(), DIAGNOSTICS_HEADER);
    expect(plotEnergyDrift(diag)).toBe(plotEnergyDrift(diag));
  });
});

describe("phase-space heatmap", () => {
  it("overlays the measured support box and momentum markers", () => {
    const dir = makeRunDir();
    const svg = plotPhaseSpace(new RunArtifacts(dir), 4);
    expect(svg).toContain("support-box");
    expect(svg).toContain("p-marker");
    expect(svg).toContain("P(t) =");
    expect(svg).toContain("rgb(");
  });
});

describe("picard figure", () => {
  it("shows the contraction ratio and the tolerance line", () => {
    const dir = makeRunDir();
    const svg = plotPicard(new RunArtifacts(dir).picardReport());
    expect(svg).toContain("max contraction ratio");
    expect(svg).toContain("tolerance");
    expect(svg).toContain("(converged)");
  });
});

describe("division table", () => {
  it("renders one row per sweep entry with pass flags", () => {
    const dir = makeRunDir();
    const svg = divisionTable(new RunArtifacts(dir).divisionReport());
    expect(svg).toContain("centered");
    expect(svg).toContain("offset");
    expect((svg.match(/>ok</g) ?? []).length).toBe(2);
    expect(svg).not.toContain(">FAIL<");
  });
});

describe("cli", () => {
  it("renders the whole suite from a run directory", () => {
    const dir = makeRunDir();
    expect(main(["all", dir])).toBe(0);
    for (const name of ["energy_components.svg", "energy_drift.svg",
                        "phase_space_4.svg", "picard_contraction.svg",
                        "division_table.svg"]) {
      expect(new RunArtifacts(dir).has(name), name).toBe(true);
    }
  });

  it("fails cleanly on missing inputs", () => {
    const empty = mkdtempSync(join(tmpdir(), "vw-empty-"));
    expect(main(["conservation", empty])).toBe(1);
    expect(main(["nonsense", "somewhere"])).toBe(1);
    expect(main([])).toBe(1);
  });

  it("refuses a run directory with a mutated schema", () => {
    const dir = mkdtempSync(join(tmpdir(), "vw-bad-"));
    writeFileSync(join(dir, "diagnostics.csv"),
                  "t,mass,extra\n0,1,2\n");
    expect(main(["conservation", dir])).toBe(1);
  });
});
