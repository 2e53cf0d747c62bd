/**
 * CLI entry: render figures described by a spec file.
 *
 *   node dist/render.js --spec testdata/figures.json
 *
 * The spec lists figures by id (fig3, fig4, fig5, fig7, fig9) with the
 * artifact files each one reads and the SVG path it writes.  Paths are
 * resolved relative to the spec file.  All inputs are read, validated,
 * and rendered before anything is written, so a bad artifact never
 * leaves partial output behind.
 */
import { mkdir, readFile, writeFile } from "node:fs/promises";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";
import { z } from "zod";

import {
  ArtifactError,
  parseCuts,
  parseManifest,
  parseProfile,
  parseSpectrum,
  parseTrace,
} from "./artifacts.js";
import {
  renderCutFigure,
  renderHeatmap,
  renderProfileFigure,
  renderTraceFigure,
} from "./figures.js";

const labeledInput = z.object({ path: z.string(), label: z.string() });

const heatmapFigure = z.object({
  id: z.union([z.literal("fig3"), z.literal("fig4")]),
  title: z.string(),
  spectrum: z.string(),
  manifest: z.string(),
  out: z.string(),
});

const cutFigure = z.object({
  id: z.literal("fig5"),
  title: z.string(),
  cut: z.string(),
  inputs: z.array(labeledInput).min(1),
  out: z.string(),
});

const traceFigure = z.object({
  id: z.literal("fig7"),
  title: z.string(),
  inputs: z.array(labeledInput).min(1),
  out: z.string(),
});

const profileFigure = z.object({
  id: z.literal("fig9"),
  title: z.string(),
  inputs: z.array(labeledInput).min(1),
  out: z.string(),
});

const figureSchema = z.union([
  heatmapFigure,
  cutFigure,
  traceFigure,
  profileFigure,
]);

const specSchema = z.object({ figures: z.array(figureSchema).min(1) });

export type FigureSpec = z.infer<typeof figureSchema>;

async function readArtifact(dir: string, rel: string): Promise<string> {
  const file = path.resolve(dir, rel);
  try {
    return await readFile(file, "utf-8");
  } catch (err) {
    throw new ArtifactError(`cannot read ${file}: ${String(err)}`);
  }
}

async function renderFigure(dir: string, fig: FigureSpec): Promise<string> {
  switch (fig.id) {
    case "fig3":
    case "fig4": {
      const cells = parseSpectrum(await readArtifact(dir, fig.spectrum));
      const manifest = parseManifest(await readArtifact(dir, fig.manifest));
      return renderHeatmap(cells, manifest.sources, fig.title);
    }
    case "fig5": {
      const inputs = [];
      for (const input of fig.inputs) {
        inputs.push({
          label: input.label,
          records: parseCuts(await readArtifact(dir, input.path)),
        });
      }
      return renderCutFigure(inputs, fig.cut, fig.title);
    }
    case "fig7": {
      const inputs = [];
      for (const input of fig.inputs) {
        inputs.push({
          label: input.label,
          records: parseTrace(await readArtifact(dir, input.path)),
        });
      }
      return renderTraceFigure(inputs, fig.title);
    }
    case "fig9": {
      const inputs = [];
      for (const input of fig.inputs) {
        inputs.push({
          label: input.label,
          records: parseProfile(await readArtifact(dir, input.path)),
        });
      }
      return renderProfileFigure(inputs, fig.title);
    }
  }
}

/** Render every figure in the spec file; returns the written SVG paths. */
export async function runSpec(specPath: string): Promise<string[]> {
  const dir = path.dirname(path.resolve(specPath));
  const parsed = specSchema.safeParse(
    JSON.parse(await readFile(specPath, "utf-8")),
  );
  if (!parsed.success) {
    throw new ArtifactError(
      `figure spec: ${parsed.error.issues[0]?.message ?? "invalid"}`,
    );
  }

  // Render everything first; only a fully successful pass writes files.
  const rendered: { out: string; svg: string }[] = [];
  for (const fig of parsed.data.figures) {
    rendered.push({
      out: path.resolve(dir, fig.out),
      svg: await renderFigure(dir, fig),
    });
  }

  const written: string[] = [];
  for (const item of rendered) {
    await mkdir(path.dirname(item.out), { recursive: true });
    await writeFile(item.out, item.svg, "utf-8");
    written.push(item.out);
  }
  return written;
}

async function main(): Promise<void> {
  const { values } = parseArgs({ options: { spec: { type: "string" } } });
  if (!values.spec) {
    process.stderr.write("usage: render --spec <figures.json>\n");
    process.exitCode = 2;
    return;
  }
  try {
    for (const out of await runSpec(values.spec)) {
      process.stdout.write(`${out}\n`);
    }
  } catch (err) {
    const msg = err instanceof ArtifactError ? err.message : String(err);
    process.stderr.write(`error: ${msg}\n`);
    process.exitCode = 1;
  }
}

const isMain =
  process.argv[1] !== undefined &&
  path.resolve(process.argv[1]) === fileURLToPath(import.meta.url);
if (isMain) {
  await main();
}
