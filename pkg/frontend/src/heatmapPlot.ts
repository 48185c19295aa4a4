/**
 * Operator block heatmap
 *
 * Renders one heatmap payload (fig3a, fig3b) as a standalone SVG: the
 * imaginary parts of the optimal observable arranged block-diagonally, one
 * <g> group per total-m_y sector. Cell colors use a diverging scale centered
 * at zero (blue negative, white zero, red positive) shared across all
 * sectors; the real parts vanish for these payloads and are asserted small.
 */

import type { HeatmapPayload } from "./schemas.js";

export interface HeatmapPlotOptions {
  cellSize?: number;
  gap?: number;
  margin?: number;
}

const REAL_PART_TOL = 1e-9;

/** Diverging blue-white-red color for t in [-1, 1]. */
export function divergingColor(t: number): string {
  const clamped = Math.max(-1, Math.min(1, t));
  const mix = (from: number, to: number, s: number): number =>
    Math.round(from + (to - from) * s);
  if (clamped < 0) {
    const s = -clamped;
    return `rgb(${mix(255, 33, s)},${mix(255, 102, s)},${mix(255, 172, s)})`;
  }
  const s = clamped;
  return `rgb(${mix(255, 178, s)},${mix(255, 24, s)},${mix(255, 43, s)})`;
}

export function renderHeatmapSvg(
  payload: HeatmapPayload,
  options: HeatmapPlotOptions = {},
): string {
  if (!payload.block_diagonal) {
    throw new Error(
      "heatmap payload is not block-diagonal; nothing to render",
    );
  }
  const cell = options.cellSize ?? 26;
  const gap = options.gap ?? 4;
  const margin = options.margin ?? 46;

  let maxAbs = 0;
  for (const block of payload.blocks) {
    for (const row of block.im) {
      for (const value of row) maxAbs = Math.max(maxAbs, Math.abs(value));
    }
    for (const row of block.re) {
      for (const value of row) {
        if (Math.abs(value) > REAL_PART_TOL * Math.max(1, maxAbs)) {
          throw new Error(
            `block m_y=${block.m_y} has a non-vanishing real entry ${value}`,
          );
        }
      }
    }
  }
  if (maxAbs === 0) maxAbs = 1;

  const totalCells = payload.blocks.reduce((acc, b) => acc + b.size, 0);
  const side =
    2 * margin + totalCells * cell + (payload.blocks.length - 1) * gap;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${side}" height="${side}" viewBox="0 0 ${side} ${side}">`,
  );
  parts.push(
    `<title>optimal observable blocks, (${payload.na},${payload.nb})</title>`,
  );
  parts.push(`<rect width="${side}" height="${side}" fill="white"/>`);

  let offset = margin;
  for (const block of payload.blocks) {
    parts.push(`<g data-sector="${block.m_y}" data-size="${block.size}">`);
    for (let i = 0; i < block.size; i++) {
      for (let j = 0; j < block.size; j++) {
        const value = block.im[i]?.[j] ?? 0;
        const x = offset + j * cell;
        const y = offset + i * cell;
        parts.push(
          `<rect x="${x}" y="${y}" width="${cell}" height="${cell}" ` +
            `fill="${divergingColor(value / maxAbs)}" stroke="#cccccc" stroke-width="0.5"/>`,
        );
      }
    }
    parts.push(
      `<rect x="${offset}" y="${offset}" width="${block.size * cell}" ` +
        `height="${block.size * cell}" fill="none" stroke="#333333" stroke-width="1.2"/>`,
    );
    parts.push(
      `<text x="${offset + (block.size * cell) / 2}" y="${offset - 6}" ` +
        `font-family="sans-serif" font-size="11" text-anchor="middle">m_y=${block.m_y}</text>`,
    );
    parts.push("</g>");
    offset += block.size * cell + gap;
  }

  parts.push(
    `<text x="${margin}" y="${side - 12}" font-family="sans-serif" font-size="13">` +
      `(${payload.na},${payload.nb}) — precision ${payload.precision.toFixed(6)}, ` +
      `imaginary parts, scale ±${maxAbs.toFixed(4)}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}
