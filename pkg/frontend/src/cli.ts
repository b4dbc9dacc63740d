/**
 * Report generator: renders a completed run directory into SVG files.
 *
 * Usage:
 *   node dist/cli.js conservation <run_dir>
 *   node dist/cli.js phase-space <run_dir> [step]
 *   node dist/cli.js picard <run_dir>
 *   node dist/cli.js division <run_dir>
 *   node dist/cli.js all <run_dir>
 *
 * Figures are written into the run directory itself.
 */

import { writeFileSync } from "fs";
import { join } from "path";
import { RunArtifacts } from "./artifacts.js";
import { divisionTable, plotEnergyComponents, plotEnergyDrift,
         plotPhaseSpace, plotPicard } from "./plots.js";

function write(dir: string, name: string, svg: string): void {
  const path = join(dir, name);
  writeFileSync(path, svg);
  console.log(`wrote ${path}`);
}

export function conservation(art: RunArtifacts): void {
  const diag = art.diagnostics();
  write(art.dir, "energy_components.svg", plotEnergyComponents(diag));
  write(art.dir, "energy_drift.svg", plotEnergyDrift(diag));
}

export function phaseSpace(art: RunArtifacts, step?: number): void {
  const steps = art.snapshotSteps();
  if (steps.length === 0) {
    throw new Error(`no f_<step>.csv snapshots in ${art.dir}`);
  }
  const chosen = step ?? steps[steps.length - 1];
  if (!steps.includes(chosen)) {
    throw new Error(`no snapshot for step ${chosen}; available: ${steps.join(", ")}`);
  }
  write(art.dir, `phase_space_${chosen}.svg`, plotPhaseSpace(art, chosen));
}

export function picard(art: RunArtifacts): void {
  write(art.dir, "picard_contraction.svg", plotPicard(art.picardReport()));
}

export function division(art: RunArtifacts): void {
  write(art.dir, "division_table.svg", divisionTable(art.divisionReport()));
}

export function main(argv: string[]): number {
  const [command, dir, extra] = argv;
  if (!command || !dir) {
    console.error("usage: cli.js <conservation|phase-space|picard|division|all> <run_dir> [step]");
    return 1;
  }
  const art = new RunArtifacts(dir);
  try {
    switch (command) {
      case "conservation":
        conservation(art);
        break;
      case "phase-space":
        phaseSpace(art, extra !== undefined ? Number(extra) : undefined);
        break;
      case "picard":
        picard(art);
        break;
      case "division":
        division(art);
        break;
      case "all":
        conservation(art);
        phaseSpace(art);
        if (art.has("picard_report.json")) picard(art);
        if (art.has("division_report.json")) division(art);
        break;
      default:
        console.error(`unknown command ${command}`);
        return 1;
    }
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
