/**
 * Parsers for the artifact files the fda-waveopt CLI writes.
 *
 * Every parser takes the file's text, checks the header/schema strictly,
 * and throws ArtifactError on anything malformed.  Values are passed
 * through as-is — the renderer never recomputes or rescales them.
 */
import Papa from "papaparse";
import { z } from "zod";

export class ArtifactError extends Error {}

export interface TraceRecord {
  iteration: number;
  sinrDb: number;
  primalResidual: number;
  energyResidual: number;
}

export interface SpectrumCell {
  fTx: number;
  fRx: number;
  powerDb: number;
}

export interface CutRecord {
  cutId: string;
  fixedAxis: string;
  fixedValue: number;
  axisValue: number;
  powerDb: number;
}

export interface ProfileRecord {
  lagSamples: number;
  magnitudeDb: number;
}

const sourceEchoSchema = z.object({
  kind: z.string(),
  range_m: z.number(),
  angle_deg: z.number(),
  power_db: z.number(),
  f_tx: z.number(),
  f_rx: z.number(),
  gate: z.number(),
  gate_case: z.string(),
});

const manifestSchema = z.object({
  tool: z.string(),
  version: z.string(),
  command: z.string(),
  config_digest: z.string(),
  sources: z.array(sourceEchoSchema).min(1),
  files: z.record(z.string(), z.string()),
});

export type SourceEcho = z.infer<typeof sourceEchoSchema>;
export type Manifest = z.infer<typeof manifestSchema>;

function csvRows(text: string, header: string[], what: string): string[][] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new ArtifactError(`${what}: ${parsed.errors[0]?.message}`);
  }
  const [first, ...rows] = parsed.data;
  if (!first || first.join(",") !== header.join(",")) {
    throw new ArtifactError(
      `${what}: expected header "${header.join(",")}", got "${(first ?? []).join(",")}"`,
    );
  }
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new ArtifactError(
        `${what}: row has ${row.length} fields, expected ${header.length}`,
      );
    }
  }
  return rows;
}

function num(field: string | undefined, what: string): number {
  const v = Number(field);
  if (field === undefined || field.trim() === "" || !Number.isFinite(v)) {
    throw new ArtifactError(`${what}: "${field}" is not a finite number`);
  }
  return v;
}

export function parseTrace(text: string): TraceRecord[] {
  const rows = csvRows(
    text,
    ["iteration", "sinr_db", "primal_residual", "energy_residual"],
    "trace.csv",
  );
  return rows.map((r) => ({
    iteration: num(r[0], "trace.csv iteration"),
    sinrDb: num(r[1], "trace.csv sinr_db"),
    primalResidual: num(r[2], "trace.csv primal_residual"),
    energyResidual: num(r[3], "trace.csv energy_residual"),
  }));
}

export function parseSpectrum(text: string): SpectrumCell[] {
  const rows = csvRows(text, ["f_tx", "f_rx", "power_db"], "spectrum.csv");
  if (rows.length === 0) {
    throw new ArtifactError("spectrum.csv: no data rows");
  }
  return rows.map((r) => ({
    fTx: num(r[0], "spectrum.csv f_tx"),
    fRx: num(r[1], "spectrum.csv f_rx"),
    powerDb: num(r[2], "spectrum.csv power_db"),
  }));
}

export function parseCuts(text: string): CutRecord[] {
  const rows = csvRows(
    text,
    ["cut_id", "fixed_axis", "fixed_value", "axis_value", "power_db"],
    "cuts.csv",
  );
  if (rows.length === 0) {
    throw new ArtifactError("cuts.csv: no data rows");
  }
  return rows.map((r) => ({
    cutId: r[0] ?? "",
    fixedAxis: r[1] ?? "",
    fixedValue: num(r[2], "cuts.csv fixed_value"),
    axisValue: num(r[3], "cuts.csv axis_value"),
    powerDb: num(r[4], "cuts.csv power_db"),
  }));
}

export function parseProfile(text: string): ProfileRecord[] {
  const rows = csvRows(text, ["lag_samples", "magnitude_db"], "profile.csv");
  if (rows.length === 0) {
    throw new ArtifactError("profile.csv: no data rows");
  }
  return rows.map((r) => ({
    lagSamples: num(r[0], "profile.csv lag_samples"),
    magnitudeDb: num(r[1], "profile.csv magnitude_db"),
  }));
}

export function parseManifest(text: string): Manifest {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new ArtifactError(`manifest.json does not parse: ${String(err)}`);
  }
  const checked = manifestSchema.safeParse(raw);
  if (!checked.success) {
    throw new ArtifactError(
      `manifest.json: ${checked.error.issues[0]?.message ?? "invalid"}`,
    );
  }
  return checked.data;
}
