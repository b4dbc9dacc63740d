/**
 * Figure builders: each takes loaded artifacts and returns SVG text.
 * Conventions: conservation drift is drawn against the 1e-4 acceptance
 * line; the phase-space heatmap overlays the support box measured from the
 * snapshot itself and the momentum-support radius recorded in the
 * diagnostics at the matching time.
 */

import { NumericTable, column } from "./csv.js";
import { DivisionReport, PicardReport, RunArtifacts, snapshotGrid } from "./artifacts.js";
import { Figure, escapeXml, fmt, heatColor, linearScale, logScale } from "./svg.js";

export const ENERGY_ACCEPTANCE_LINE = 1e-4;

export function plotEnergyComponents(diag: NumericTable): string {
  const t = column(diag, "t");
  const series: Array<[string, string]> = [
    ["kinetic", "#1f77b4"], ["field", "#d62728"], ["total", "#2ca02c"],
  ];
  const fig = new Figure();
  const tMax = t[t.length - 1];
  let hi = 0;
  for (const [name] of series) {
    for (const value of column(diag, name)) hi = Math.max(hi, value);
  }
  const sx = linearScale([0, tMax], [fig.plotLeft, fig.plotRight]);
  const sy = linearScale([0, hi * 1.05 || 1], [fig.plotBottom, fig.plotTop]);
  fig.title("energy components");
  fig.axes(sx, sy, "t", "energy");
  for (const [name, color] of series) {
    fig.polyline(t, column(diag, name), sx, sy, color);
  }
  fig.legend(series);
  return fig.render();
}

export function plotEnergyDrift(diag: NumericTable): string {
  const t = column(diag, "t");
  const total = column(diag, "total");
  const flow = column(diag, "total_flow");
  const drift = relativeDrift(total);
  const driftFlow = relativeDrift(flow);
  const fig = new Figure();
  const tMax = t[t.length - 1];
  let hi = ENERGY_ACCEPTANCE_LINE * 2;
  for (const d of drift) hi = Math.max(hi, d);
  for (const d of driftFlow) hi = Math.max(hi, d);
  const sx = linearScale([0, tMax], [fig.plotLeft, fig.plotRight]);
  const sy = logScale([1e-12, hi * 2], [fig.plotBottom, fig.plotTop]);
  fig.title("relative energy drift");
  fig.axes(sx, sy, "t", "|E(t) - E(0)| / E(0)", () => "");
  fig.logAxisLabels(sy, [-12, -10, -8, -6, -4, -2]);
  fig.polyline(t, drift.map(d => Math.max(d, 1e-12)), sx, sy, "#2ca02c");
  fig.polyline(t, driftFlow.map(d => Math.max(d, 1e-12)), sx, sy, "#9467bd");
  fig.hline(ENERGY_ACCEPTANCE_LINE, sy, "#d62728", "acceptance 1e-4");
  fig.legend([["sampled quadrature", "#2ca02c"], ["flow form", "#9467bd"]]);
  return fig.render();
}

function relativeDrift(series: Float64Array): number[] {
  const base = series[0];
  const scale = base !== 0 ? Math.abs(base) : 1;
  return Array.from(series, value => Math.abs(value - base) / scale);
}

export function plotPhaseSpace(art: RunArtifacts, step: number,
                               maxBins = 160): string {
  const snap = snapshotGrid(art.snapshot(step));
  const diag = art.diagnostics();
  const { xs, vs, values } = snap;
  let peak = 0;
  for (const row of values) for (const value of row) peak = Math.max(peak, value);

  const fig = new Figure(760, 520);
  const sx = linearScale([xs[0], xs[xs.length - 1]], [fig.plotLeft, fig.plotRight]);
  const sy = linearScale([vs[0], vs[vs.length - 1]], [fig.plotBottom, fig.plotTop]);

  // max-pooled heat cells so huge grids stay renderable
  const bx = Math.min(maxBins, xs.length);
  const bv = Math.min(maxBins, vs.length);
  const cellW = (fig.plotRight - fig.plotLeft) / bx;
  const cellH = (fig.plotBottom - fig.plotTop) / bv;
  for (let i = 0; i < bx; i++) {
    const i0 = Math.floor((i * xs.length) / bx);
    const i1 = Math.max(i0 + 1, Math.floor(((i + 1) * xs.length) / bx));
    for (let j = 0; j < bv; j++) {
      const j0 = Math.floor((j * vs.length) / bv);
      const j1 = Math.max(j0 + 1, Math.floor(((j + 1) * vs.length) / bv));
      let m = 0;
      for (let a = i0; a < i1; a++) {
        for (let b = j0; b < j1; b++) m = Math.max(m, values[a][b]);
      }
      if (m <= 0 || peak <= 0) continue;
      const u = m / peak;
      if (u < 1e-4) continue;
      const px = fig.plotLeft + i * cellW;
      const py = fig.plotBottom - (j + 1) * cellH;
      fig.add(`<rect x="${fmt(px)}" y="${fmt(py)}" width="${fmt(cellW + 0.5)}" ` +
        `height="${fmt(cellH + 0.5)}" fill="${heatColor(u)}"/>`);
    }
  }

  // support box measured from the snapshot at the dust threshold
  const thresh = 1e-12 * peak;
  let xLo = Infinity, xHi = -Infinity, vLo = Infinity, vHi = -Infinity;
  for (let i = 0; i < xs.length; i++) {
    for (let j = 0; j < vs.length; j++) {
      if (values[i][j] > thresh) {
        xLo = Math.min(xLo, xs[i]);
        xHi = Math.max(xHi, xs[i]);
        vLo = Math.min(vLo, vs[j]);
        vHi = Math.max(vHi, vs[j]);
      }
    }
  }
  if (xLo <= xHi) {
    fig.rect(sx(xLo), sy(vLo), sx(xHi), sy(vHi),
             `fill="none" stroke="#00c8ff" stroke-width="1.5" ` +
             `stroke-dasharray="6 3" class="support-box"`);
  }

  // momentum-support markers from the diagnostics row nearest in time
  const steps = art.snapshotSteps();
  const tCol = column(diag, "t");
  const pCol = column(diag, "p_of_t");
  const dtGuess = tCol.length > 1 ? tCol[1] - tCol[0] : 1;
  const tSnap = step * dtGuess;
  let best = 0;
  for (let r = 1; r < tCol.length; r++) {
    if (Math.abs(tCol[r] - tSnap) < Math.abs(tCol[best] - tSnap)) best = r;
  }
  const p = pCol[best];
  for (const sign of [1, -1]) {
    const vv = sign * p;
    if (vv >= vs[0] && vv <= vs[vs.length - 1]) {
      const yy = fmt(sy(vv));
      fig.add(`<line x1="${fig.plotLeft}" y1="${yy}" x2="${fig.plotRight}" ` +
        `y2="${yy}" stroke="#ff00aa" stroke-dasharray="2 3" class="p-marker"/>`);
    }
  }
  fig.add(`<text x="${fig.plotRight - 6}" y="${fig.plotTop + 14}" text-anchor="end" ` +
    `font-size="11" font-family="sans-serif">t = ${fmt(tCol[best])}, ` +
    `P(t) = ${fmt(p)}</text>`);
  fig.title(`phase space density, step ${step}`);
  fig.axes(sx, sy, "x", "v");
  void steps;
  return fig.render();
}

export function plotPicard(report: PicardReport): string {
  const fig = new Figure();
  const n = report.iterations.map(it => it.n);
  const d = report.iterations.map(it => Math.max(it.distance, 1e-16));
  const lo = Math.min(...d);
  const hi = Math.max(...d);
  const sx = linearScale([n[0], n[n.length - 1] || 1], [fig.plotLeft, fig.plotRight]);
  const sy = logScale([lo / 10, hi * 10], [fig.plotBottom, fig.plotTop]);
  fig.title(`fixed-point iteration, T = ${fmt(report.T_effective)}` +
    (report.converged ? " (converged)" : " (not converged)"));
  fig.axes(sx, sy, "iteration", "sup distance", () => "");
  const decades: number[] = [];
  for (let e = Math.ceil(Math.log10(lo / 10)); e <= Math.floor(Math.log10(hi * 10)); e++) {
    if (e % 2 === 0) decades.push(e);
  }
  fig.logAxisLabels(sy, decades);
  fig.polyline(n, d, sx, sy, "#1f77b4");
  for (let i = 0; i < n.length; i++) {
    fig.add(`<circle cx="${fmt(sx(n[i]))}" cy="${fmt(sy(d[i]))}" r="3" fill="#1f77b4"/>`);
  }
  fig.hline(report.tolerance, sy, "#d62728", `tolerance ${report.tolerance}`);
  const ratios = report.iterations.filter(it => it.ratio !== null)
    .map(it => (it.ratio as number));
  if (ratios.length > 0) {
    const worst = Math.max(...ratios);
    fig.add(`<text x="${fig.plotRight - 6}" y="${fig.plotTop + 14}" ` +
      `text-anchor="end" font-size="11" font-family="sans-serif">` +
      `max contraction ratio ${fmt(worst)}</text>`);
  }
  return fig.render();
}

export function divisionTable(report: DivisionReport): string {
  const rowH = 20;
  const cols = [70, 150, 170, 170, 110, 60];
  const width = cols.reduce((a, b) => a + b, 0) + 40;
  const height = 70 + rowH * report.rows.length;
  const header = ["a", "test function", "lhs", "rhs", "|lhs-rhs|", "ok"];
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" ` +
    `font-family="sans-serif">splitting identity sweep, max error ` +
    `${report.max_abs_err.toExponential(2)}</text>`);
  let y = 46;
  let x = 20;
  header.forEach((name, c) => {
    parts.push(`<text x="${x}" y="${y}" font-size="12" font-weight="bold" ` +
      `font-family="monospace">${escapeXml(name)}</text>`);
    x += cols[c];
  });
  const tol = report.tolerance ?? 1e-8;
  for (const row of report.rows) {
    y += rowH;
    x = 20;
    const ok = row.abs_err <= tol;
    const cells = [
      row.a.toFixed(2), row.phi_preset, row.lhs.toExponential(9),
      row.rhs.toExponential(9), row.abs_err.toExponential(2),
      ok ? "ok" : "FAIL",
    ];
    cells.forEach((cell, c) => {
      const color = c === 5 ? (ok ? "#2ca02c" : "#d62728") : "#111";
      parts.push(`<text x="${x}" y="${y}" font-size="12" fill="${color}" ` +
        `font-family="monospace">${escapeXml(cell)}</text>`);
      x += cols[c];
    });
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
