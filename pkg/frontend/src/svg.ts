/**
 * Shared SVG scaffolding: fixed layout, axes, legends, and the fixed
 * color ramp for the heatmaps.  Everything here is presentation only;
 * the numbers plotted come verbatim from the artifacts.
 */

export const PALETTE = ["#4361ee", "#e63946", "#2d6a4f", "#f77f00", "#9d4edd"];

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Fixed-precision number for attribute values; byte-stable across runs. */
export function px(v: number): string {
  return v.toFixed(2);
}

/** Tick label: up to six significant digits, trailing zeros dropped. */
export function tickLabel(v: number): string {
  return String(Number(v.toPrecision(6)));
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

/** Anchors of the fixed heatmap ramp (low dB -> high dB). */
const RAMP = [
  [0x44, 0x01, 0x54],
  [0x3b, 0x52, 0x8b],
  [0x21, 0x91, 0x8c],
  [0x5e, 0xc9, 0x62],
  [0xfd, 0xe7, 0x25],
];

/** Map t in [0, 1] onto the ramp; clamped outside. */
export function rampColor(t: number): string {
  const c = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const lo = Math.min(RAMP.length - 2, Math.floor(c));
  const frac = c - lo;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  const lov = RAMP[lo]!;
  const hiv = RAMP[lo + 1]!;
  const hex = (v: number) => v.toString(16).padStart(2, "0");
  return `#${hex(mix(lov[0]!, hiv[0]!))}${hex(mix(lov[1]!, hiv[1]!))}${hex(mix(lov[2]!, hiv[2]!))}`;
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const LINE_FRAME: Frame = {
  width: 640,
  height: 360,
  left: 62,
  right: 20,
  top: 34,
  bottom: 48,
};

export const MAP_FRAME: Frame = {
  width: 560,
  height: 480,
  left: 62,
  right: 86,
  top: 34,
  bottom: 48,
};

export function plotWidth(f: Frame): number {
  return f.width - f.left - f.right;
}

export function plotHeight(f: Frame): number {
  return f.height - f.top - f.bottom;
}

export function svgOpen(f: Frame): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${f.width} ${f.height}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n` +
    `<rect width="${f.width}" height="${f.height}" fill="#fff"/>\n`
  );
}

export function title(f: Frame, text: string): string {
  return (
    `<text x="${f.left}" y="${f.top - 12}" font-size="12" font-weight="600" ` +
    `fill="#222">${esc(text)}</text>\n`
  );
}

export function axesFrame(f: Frame): string {
  const x1 = f.left;
  const y1 = f.top;
  const x2 = f.left + plotWidth(f);
  const y2 = f.top + plotHeight(f);
  return (
    `<rect x="${x1}" y="${y1}" width="${x2 - x1}" height="${y2 - y1}" ` +
    `fill="none" stroke="#333" stroke-width="0.8"/>\n`
  );
}

export function xAxis(
  f: Frame,
  ticks: number[],
  toX: (v: number) => number,
  label: string,
): string {
  const base = f.top + plotHeight(f);
  let s = "";
  for (const v of ticks) {
    const x = px(toX(v));
    s += `<line x1="${x}" y1="${base}" x2="${x}" y2="${base + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x}" y="${base + 15}" text-anchor="middle" font-size="9" fill="#555">${esc(tickLabel(v))}</text>\n`;
  }
  s += `<text x="${f.left + plotWidth(f) / 2}" y="${f.height - 8}" text-anchor="middle" font-size="10" fill="#333">${esc(label)}</text>\n`;
  return s;
}

export function yAxis(
  f: Frame,
  ticks: number[],
  toY: (v: number) => number,
  label: string,
): string {
  let s = "";
  for (const v of ticks) {
    const y = toY(v);
    s += `<line x1="${f.left - 4}" y1="${px(y)}" x2="${f.left}" y2="${px(y)}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${f.left - 7}" y="${px(y + 3)}" text-anchor="end" font-size="9" fill="#555">${esc(tickLabel(v))}</text>\n`;
  }
  const cy = f.top + plotHeight(f) / 2;
  s += `<text x="16" y="${cy}" text-anchor="middle" font-size="10" fill="#333" transform="rotate(-90,16,${cy})">${esc(label)}</text>\n`;
  return s;
}

export function gridLines(
  f: Frame,
  ticks: number[],
  toY: (v: number) => number,
): string {
  let s = "";
  for (const v of ticks) {
    const y = px(toY(v));
    s += `<line x1="${f.left}" y1="${y}" x2="${f.left + plotWidth(f)}" y2="${y}" stroke="#eee" stroke-width="0.5"/>\n`;
  }
  return s;
}

export function legend(
  f: Frame,
  entries: { label: string; color: string }[],
): string {
  const x = f.left + plotWidth(f) - 150;
  let s = "";
  entries.forEach((e, i) => {
    const y = f.top + 12 + 14 * i;
    s += `<line x1="${x}" y1="${y}" x2="${x + 18}" y2="${y}" stroke="${e.color}" stroke-width="1.6"/>\n`;
    s += `<text x="${x + 23}" y="${y + 3}" font-size="9" fill="#333">${esc(e.label)}</text>\n`;
  });
  return s;
}
