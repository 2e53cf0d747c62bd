/**
 * The five figure renderers.  Each takes already-parsed artifact data and
 * returns a complete SVG document as a string; nothing here touches the
 * filesystem or the clock, so identical inputs give identical bytes.
 */
import {
  ArtifactError,
  CutRecord,
  ProfileRecord,
  SourceEcho,
  SpectrumCell,
  TraceRecord,
} from "./artifacts.js";
import {
  LINE_FRAME,
  MAP_FRAME,
  PALETTE,
  axesFrame,
  esc,
  gridLines,
  legend,
  niceTicks,
  plotHeight,
  plotWidth,
  px,
  rampColor,
  svgOpen,
  title,
  tickLabel,
  xAxis,
  yAxis,
} from "./svg.js";

/** Fixed color domain for the spectrum maps (matches the CLI's dB floor). */
const MAP_DB_MIN = -80;
const MAP_DB_MAX = 0;

export interface LabeledSeries<T> {
  label: string;
  records: T[];
}

// ---------------------------------------------------------------------------
// Generic line figure
// ---------------------------------------------------------------------------

interface LineOpts {
  heading: string;
  xLabel: string;
  yLabel: string;
}

function lineFigure(
  series: { label: string; x: number[]; y: number[] }[],
  opts: LineOpts,
): string {
  const f = LINE_FRAME;
  const xs = series.flatMap((s) => s.x);
  const ys = series.flatMap((s) => s.y);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const yPad = (yMax - yMin || 1) * 0.06;
  const toX = (v: number) =>
    f.left + ((v - xMin) / (xMax - xMin || 1)) * plotWidth(f);
  const toY = (v: number) =>
    f.top +
    plotHeight(f) -
    ((v - (yMin - yPad)) / (yMax - yMin + 2 * yPad || 1)) * plotHeight(f);

  const yTicks = niceTicks(yMin - yPad, yMax + yPad, 6);
  let s = svgOpen(f);
  s += title(f, opts.heading);
  s += gridLines(f, yTicks, toY);
  series.forEach((sr, i) => {
    const color = PALETTE[i % PALETTE.length]!;
    const pts = sr.x
      .map((xv, k) => `${px(toX(xv))},${px(toY(sr.y[k]!))}`)
      .join(" ");
    s += `<polyline fill="none" stroke="${color}" stroke-width="1.4" points="${pts}"/>\n`;
  });
  s += axesFrame(f);
  s += xAxis(f, niceTicks(xMin, xMax, 7), toX, opts.xLabel);
  s += yAxis(f, yTicks, toY, opts.yLabel);
  s += legend(
    f,
    series.map((sr, i) => ({
      label: sr.label,
      color: PALETTE[i % PALETTE.length]!,
    })),
  );
  s += "</svg>\n";
  return s;
}

// ---------------------------------------------------------------------------
// fig3 / fig4: transmit-receive frequency heatmap with source markers
// ---------------------------------------------------------------------------

export function renderHeatmap(
  cells: SpectrumCell[],
  sources: SourceEcho[],
  heading: string,
): string {
  const f = MAP_FRAME;
  // Fixed spatial-frequency domain regardless of grid coverage.
  const toX = (v: number) => f.left + (v + 0.5) * plotWidth(f);
  const toY = (v: number) => f.top + (0.5 - v) * plotHeight(f);

  const fTxValues = [...new Set(cells.map((c) => c.fTx))].sort((a, b) => a - b);
  const fRxValues = [...new Set(cells.map((c) => c.fRx))].sort((a, b) => a - b);
  if (fTxValues.length < 2 || fRxValues.length < 2) {
    throw new ArtifactError("spectrum.csv: grid needs at least 2x2 points");
  }
  const dx = (fTxValues[1]! - fTxValues[0]!) * plotWidth(f);
  const dy = (fRxValues[1]! - fRxValues[0]!) * plotHeight(f);

  let s = svgOpen(f);
  s += title(f, heading);
  for (const c of cells) {
    const t = (c.powerDb - MAP_DB_MIN) / (MAP_DB_MAX - MAP_DB_MIN);
    s +=
      `<rect x="${px(toX(c.fTx) - dx / 2)}" y="${px(toY(c.fRx) - dy / 2)}" ` +
      `width="${px(dx)}" height="${px(dy)}" fill="${rampColor(t)}"/>\n`;
  }

  // Source markers straight from the manifest echo.
  let interferenceIndex = 0;
  for (const src of sources) {
    const tag =
      src.kind === "target" ? "T" : `I${(interferenceIndex += 1)}`;
    const w = 0.05 * plotWidth(f);
    const h = 0.05 * plotHeight(f);
    s +=
      `<rect x="${px(toX(src.f_tx) - w / 2)}" y="${px(toY(src.f_rx) - h / 2)}" ` +
      `width="${px(w)}" height="${px(h)}" fill="none" stroke="#fff" ` +
      `stroke-width="1.4" class="source-marker"/>\n`;
    s +=
      `<text x="${px(toX(src.f_tx) + w / 2 + 3)}" y="${px(toY(src.f_rx) + 3)}" ` +
      `font-size="10" fill="#fff">${esc(tag)}</text>\n`;
  }

  s += axesFrame(f);
  const ticks = [-0.4, -0.2, 0, 0.2, 0.4];
  s += xAxis(f, ticks, toX, "transmit spatial frequency");
  s += yAxis(f, ticks, toY, "receive spatial frequency");

  // Color bar with the fixed dB domain.
  const barX = f.left + plotWidth(f) + 18;
  const barW = 12;
  const steps = 48;
  for (let i = 0; i < steps; i += 1) {
    const y = f.top + plotHeight(f) * (1 - (i + 1) / steps);
    s +=
      `<rect x="${barX}" y="${px(y)}" width="${barW}" ` +
      `height="${px(plotHeight(f) / steps + 0.5)}" ` +
      `fill="${rampColor((i + 0.5) / steps)}"/>\n`;
  }
  for (let v = MAP_DB_MIN; v <= MAP_DB_MAX; v += 20) {
    const y = f.top + plotHeight(f) * (1 - (v - MAP_DB_MIN) / (MAP_DB_MAX - MAP_DB_MIN));
    s += `<text x="${barX + barW + 4}" y="${px(y + 3)}" font-size="9" fill="#555">${esc(tickLabel(v))}</text>\n`;
  }
  s += `<text x="${barX + barW / 2}" y="${f.top - 6}" text-anchor="middle" font-size="9" fill="#333">dB</text>\n`;
  s += "</svg>\n";
  return s;
}

// ---------------------------------------------------------------------------
// fig5: one spectrum cut, one line per run
// ---------------------------------------------------------------------------

export function renderCutFigure(
  inputs: LabeledSeries<CutRecord>[],
  cutId: string,
  heading: string,
): string {
  const series = inputs.map((input) => {
    const rows = input.records.filter((r) => r.cutId === cutId);
    if (rows.length === 0) {
      const available = [...new Set(input.records.map((r) => r.cutId))];
      throw new ArtifactError(
        `cuts.csv (${input.label}): no cut "${cutId}"; available: ${available.join(", ")}`,
      );
    }
    return { label: input.label, x: rows.map((r) => r.axisValue), y: rows.map((r) => r.powerDb) };
  });
  const fixedAxis = inputs[0]!.records.find((r) => r.cutId === cutId)!.fixedAxis;
  const sweptLabel =
    fixedAxis === "f_rx"
      ? "transmit spatial frequency"
      : "receive spatial frequency";
  return lineFigure(series, {
    heading,
    xLabel: sweptLabel,
    yLabel: "output power (dB)",
  });
}

// ---------------------------------------------------------------------------
// fig7: SINR vs iteration, one line per run
// ---------------------------------------------------------------------------

export function renderTraceFigure(
  inputs: LabeledSeries<TraceRecord>[],
  heading: string,
): string {
  for (const input of inputs) {
    if (input.records.length === 0) {
      throw new ArtifactError(`trace.csv (${input.label}): empty trace`);
    }
  }
  return lineFigure(
    inputs.map((input) => ({
      label: input.label,
      x: input.records.map((r) => r.iteration),
      y: input.records.map((r) => r.sinrDb),
    })),
    { heading, xLabel: "iteration", yLabel: "output SINR (dB)" },
  );
}

// ---------------------------------------------------------------------------
// fig9: pulse-compression profiles, one line per waveform
// ---------------------------------------------------------------------------

export function renderProfileFigure(
  inputs: LabeledSeries<ProfileRecord>[],
  heading: string,
): string {
  return lineFigure(
    inputs.map((input) => ({
      label: input.label,
      x: input.records.map((r) => r.lagSamples),
      y: input.records.map((r) => r.magnitudeDb),
    })),
    { heading, xLabel: "lag (samples)", yLabel: "magnitude (dB)" },
  );
}
