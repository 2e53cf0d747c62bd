import { describe, expect, it } from "vitest";

import {
  ArtifactError,
  parseCuts,
  parseManifest,
  parseProfile,
  parseSpectrum,
  parseTrace,
} from "../src/artifacts.js";

const TRACE = [
  "iteration,sinr_db,primal_residual,energy_residual",
  "0,12.958836331559686,0.0,1.1e-16",
  "1,13.601692402176946,0.004,2.0e-16",
].join("\n");

describe("parseTrace", () => {
  it("reads records with the exact column values", () => {
    const records = parseTrace(TRACE);
    expect(records).toHaveLength(2);
    expect(records[0]).toEqual({
      iteration: 0,
      sinrDb: 12.958836331559686,
      primalResidual: 0,
      energyResidual: 1.1e-16,
    });
    expect(records[1]!.sinrDb).toBe(13.601692402176946);
  });

  it("accepts a header-only file as an empty trace", () => {
    expect(parseTrace(TRACE.split("\n")[0]!)).toEqual([]);
  });

  it("rejects a wrong header", () => {
    expect(() => parseTrace("iter,sinr\n0,1")).toThrow(ArtifactError);
    expect(() => parseTrace("iter,sinr\n0,1")).toThrow(/expected header/);
  });

  it("rejects non-numeric fields", () => {
    const bad = TRACE.replace("13.601692402176946", "NaN");
    expect(() => parseTrace(bad)).toThrow(/not a finite number/);
  });

  it("rejects short rows", () => {
    expect(() =>
      parseTrace("iteration,sinr_db,primal_residual,energy_residual\n0,1"),
    ).toThrow(/row has 2 fields/);
  });
});

describe("parseSpectrum", () => {
  it("reads cells and rejects an empty body", () => {
    const cells = parseSpectrum("f_tx,f_rx,power_db\n-0.5,0.25,-12.5");
    expect(cells).toEqual([{ fTx: -0.5, fRx: 0.25, powerDb: -12.5 }]);
    expect(() => parseSpectrum("f_tx,f_rx,power_db")).toThrow(/no data rows/);
  });
});

describe("parseCuts", () => {
  it("keeps cut ids verbatim", () => {
    const rows = parseCuts(
      "cut_id,fixed_axis,fixed_value,axis_value,power_db\n" +
        "fix_frx_-0.171,f_rx,-0.171,0.05,-20.0",
    );
    expect(rows[0]!.cutId).toBe("fix_frx_-0.171");
    expect(rows[0]!.fixedAxis).toBe("f_rx");
  });
});

describe("parseProfile", () => {
  it("reads lag/magnitude pairs", () => {
    const rows = parseProfile("lag_samples,magnitude_db\n-0.02,-40.0\n0.0,0.0");
    expect(rows).toHaveLength(2);
    expect(rows[1]).toEqual({ lagSamples: 0, magnitudeDb: 0 });
  });
});

describe("parseManifest", () => {
  const good = JSON.stringify({
    tool: "fda-waveopt",
    version: "0.1.0",
    created_utc: "2026-01-01T00:00:00+00:00",
    command: "spectrum",
    config_digest: "abc",
    sources: [
      {
        kind: "target",
        range_m: 15075.0,
        angle_deg: 20.0,
        power_db: 20.0,
        f_tx: 0.32899,
        f_rx: -0.17101,
        gate: 26,
        gate_case: "late",
      },
    ],
    files: { "spectrum.csv": "deadbeef" },
  });

  it("accepts a manifest with extra keys and echoes sources", () => {
    const manifest = parseManifest(good);
    expect(manifest.sources).toHaveLength(1);
    expect(manifest.sources[0]!.f_tx).toBeCloseTo(0.32899, 10);
  });

  it("rejects broken JSON and missing fields", () => {
    expect(() => parseManifest("{nope")).toThrow(/does not parse/);
    expect(() => parseManifest("{}")).toThrow(ArtifactError);
  });
});
