/**
 * Figure renderer
 *
 * Reads the JSON payloads written by `diffmag figures` and writes one SVG
 * per figure.
 *
 * Usage: node dist/render.js --in <payload-dir> --out <svg-dir>
 */

import { mkdirSync, readFileSync, writeFileSync } from "fs";
import { join } from "path";
import { parseHeatmapPayload, parseRegionPayload } from "./schemas.js";
import { renderRegionSvg } from "./regionPlot.js";
import { renderHeatmapSvg } from "./heatmapPlot.js";

export const REGION_FIGURES = ["fig1a", "fig1b", "fig1c", "fig1d"] as const;
export const HEATMAP_FIGURES = ["fig3a", "fig3b"] as const;

/** Render every payload in inDir to an SVG in outDir; returns written paths. */
export function renderAll(inDir: string, outDir: string): string[] {
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const name of REGION_FIGURES) {
    const payload = parseRegionPayload(
      readFileSync(join(inDir, `${name}.json`), "utf-8"),
    );
    const target = join(outDir, `${name}.svg`);
    writeFileSync(target, renderRegionSvg(payload));
    written.push(target);
  }
  for (const name of HEATMAP_FIGURES) {
    const payload = parseHeatmapPayload(
      readFileSync(join(inDir, `${name}.json`), "utf-8"),
    );
    const target = join(outDir, `${name}.svg`);
    writeFileSync(target, renderHeatmapSvg(payload));
    written.push(target);
  }
  return written;
}

function parseArgs(argv: string[]): { inDir: string; outDir: string } {
  let inDir = "";
  let outDir = "";
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--in") inDir = argv[++i] ?? "";
    else if (argv[i] === "--out") outDir = argv[++i] ?? "";
  }
  if (!inDir || !outDir) {
    throw new Error("usage: render --in <payload-dir> --out <svg-dir>");
  }
  return { inDir, outDir };
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");

if (isMain) {
  try {
    const { inDir, outDir } = parseArgs(process.argv.slice(2));
    const written = renderAll(inDir, outDir);
    for (const path of written) console.log(path);
  } catch (error) {
    console.error(String(error instanceof Error ? error.message : error));
    process.exit(1);
  }
}
