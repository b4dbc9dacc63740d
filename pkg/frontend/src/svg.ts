/**
 * Minimal hand-rolled SVG figure assembly: axes, polylines, rects, labels.
 * Deterministic output: fixed float formatting, no timestamps.
 */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const fn = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const lo = Math.log10(Math.max(domain[0], 1e-300));
  const hi = Math.log10(Math.max(domain[1], 1e-300));
  const inner = linearScale([lo, hi], range);
  const fn = ((value: number) => inner(Math.log10(Math.max(value, 1e-300)))) as Scale;
  fn.domain = domain;
  fn.range = range;
  return fn;
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  return Math.abs(x) < 1e-12 ? "0" : x.toPrecision(6).replace(/\.?0+$/, "");
}

export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const step = Math.pow(10, Math.floor(Math.log10((hi - lo) / count)));
  const err = (hi - lo) / (count * step);
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * factor;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * s; v += s) {
    ticks.push(Math.abs(v) < 1e-12 * s ? 0 : v);
  }
  return ticks;
}

export class Figure {
  readonly width: number;
  readonly height: number;
  readonly margin = { left: 64, right: 16, top: 28, bottom: 44 };
  private parts: string[] = [];

  constructor(width = 720, height = 420) {
    this.width = width;
    this.height = height;
  }

  get plotLeft(): number { return this.margin.left; }
  get plotRight(): number { return this.width - this.margin.right; }
  get plotTop(): number { return this.margin.top; }
  get plotBottom(): number { return this.height - this.margin.bottom; }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  title(text: string): void {
    this.add(`<text x="${this.width / 2}" y="18" text-anchor="middle" ` +
      `font-size="14" font-family="sans-serif">${escapeXml(text)}</text>`);
  }

  polyline(xs: ArrayLike<number>, ys: ArrayLike<number>, sx: Scale, sy: Scale,
           color: string, width = 1.5, dash = ""): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      pts.push(`${fmt(sx(xs[i]))},${fmt(sy(ys[i]))}`);
    }
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.add(`<polyline fill="none" stroke="${color}" stroke-width="${width}"` +
      `${dashAttr} points="${pts.join(" ")}"/>`);
  }

  hline(y: number, sy: Scale, color: string, label = "", dash = "4 3"): void {
    const yy = fmt(sy(y));
    this.add(`<line x1="${this.plotLeft}" y1="${yy}" x2="${this.plotRight}" ` +
      `y2="${yy}" stroke="${color}" stroke-dasharray="${dash}"/>`);
    if (label) {
      this.add(`<text x="${this.plotRight - 4}" y="${fmt(sy(y) - 4)}" ` +
        `text-anchor="end" font-size="11" font-family="sans-serif" ` +
        `fill="${color}">${escapeXml(label)}</text>`);
    }
  }

  rect(x0: number, y0: number, x1: number, y1: number, attrs: string): void {
    const x = Math.min(x0, x1);
    const y = Math.min(y0, y1);
    this.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(Math.abs(x1 - x0))}" ` +
      `height="${fmt(Math.abs(y1 - y0))}" ${attrs}/>`);
  }

  axes(sx: Scale, sy: Scale, xLabel: string, yLabel: string,
       yTickFormat: (v: number) => string = fmt): void {
    const { plotLeft: L, plotRight: R, plotTop: T, plotBottom: B } = this;
    this.add(`<rect x="${L}" y="${T}" width="${R - L}" height="${B - T}" ` +
      `fill="none" stroke="#333"/>`);
    for (const v of niceTicks(sx.domain[0], sx.domain[1])) {
      const x = fmt(sx(v));
      this.add(`<line x1="${x}" y1="${B}" x2="${x}" y2="${B + 4}" stroke="#333"/>`);
      this.add(`<text x="${x}" y="${B + 16}" text-anchor="middle" ` +
        `font-size="11" font-family="sans-serif">${fmt(v)}</text>`);
    }
    for (const v of niceTicks(sy.domain[0], sy.domain[1])) {
      const y = fmt(sy(v));
      this.add(`<line x1="${L - 4}" y1="${y}" x2="${L}" y2="${y}" stroke="#333"/>`);
      this.add(`<text x="${L - 7}" y="${y}" text-anchor="end" dy="3" ` +
        `font-size="11" font-family="sans-serif">${escapeXml(yTickFormat(v))}</text>`);
    }
    this.add(`<text x="${(L + R) / 2}" y="${this.height - 8}" text-anchor="middle" ` +
      `font-size="12" font-family="sans-serif">${escapeXml(xLabel)}</text>`);
    this.add(`<text x="14" y="${(T + B) / 2}" text-anchor="middle" font-size="12" ` +
      `font-family="sans-serif" transform="rotate(-90 14 ${(T + B) / 2})">` +
      `${escapeXml(yLabel)}</text>`);
  }

  logAxisLabels(sy: Scale, decades: number[]): void {
    for (const d of decades) {
      const y = fmt(sy(Math.pow(10, d)));
      this.add(`<line x1="${this.plotLeft - 4}" y1="${y}" x2="${this.plotLeft}" ` +
        `y2="${y}" stroke="#333"/>`);
      this.add(`<text x="${this.plotLeft - 7}" y="${y}" text-anchor="end" dy="3" ` +
        `font-size="11" font-family="sans-serif">1e${d}</text>`);
    }
  }

  legend(entries: Array<[string, string]>): void {
    let y = this.plotTop + 14;
    for (const [label, color] of entries) {
      this.add(`<line x1="${this.plotLeft + 10}" y1="${y - 4}" ` +
        `x2="${this.plotLeft + 34}" y2="${y - 4}" stroke="${color}" stroke-width="2"/>`);
      this.add(`<text x="${this.plotLeft + 40}" y="${y}" font-size="11" ` +
        `font-family="sans-serif">${escapeXml(label)}</text>`);
      y += 16;
    }
  }

  render(): string {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Five-stop color ramp from deep blue to yellow for heatmaps. */
export function heatColor(u: number): string {
  const stops: Array<[number, number, number]> = [
    [13, 8, 135], [126, 3, 168], [204, 71, 120], [248, 149, 64], [240, 249, 33],
  ];
  const clamped = Math.max(0, Math.min(1, u));
  const pos = clamped * (stops.length - 1);
  const i = Math.min(stops.length - 2, Math.floor(pos));
  const frac = pos - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  const [r, g, b] = [0, 1, 2].map(c => mix(stops[i][c], stops[i + 1][c]));
  return `rgb(${r},${g},${b})`;
}
