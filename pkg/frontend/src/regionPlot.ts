/**
 * Admissible-region plot
 *
 * Renders one region payload (fig1a–fig1d) as a standalone SVG: the facet
 * polygons of the admissible polytope of gradient-QFI triples in a fixed
 * orthographic view, with the probe state's own triple marked. Facet colors
 * follow the constraint family (per-axis, pair-plane, total); facets listed
 * as saturated by the state are emphasized.
 */

import type { RegionPayload } from "./schemas.js";
import {
  buildFacets,
  orthographic,
  paintersOrder,
  screenBounds,
  type Vec3,
} from "./geometry.js";

export interface RegionPlotOptions {
  width?: number;
  height?: number;
  azimuthDeg?: number;
  elevationDeg?: number;
}

const FAMILY_COLORS: Record<string, string> = {
  axis: "#d62728",
  plane: "#2ca02c",
  total: "#1f77b4",
  nonneg: "#9da5b4",
};

const STATE_COLOR = "#ffd700";

function familyOf(id: string): string {
  const colon = id.indexOf(":");
  return colon === -1 ? id : id.slice(0, colon);
}

function fmt(x: number): string {
  return Number.isInteger(x) ? String(x) : x.toFixed(2);
}

/**
 * A facet id matches a saturated id when they agree up to the per-axis
 * branch suffix ("axis:z|heis" and "axis:z|mix" both belong to "axis:z").
 */
function isSaturated(facetId: string, saturated: string[]): boolean {
  const base = facetId.split("|heis")[0]?.split("|mix")[0] ?? facetId;
  return saturated.includes(facetId) || saturated.includes(base);
}

export function renderRegionSvg(
  payload: RegionPayload,
  options: RegionPlotOptions = {},
): string {
  const width = options.width ?? 520;
  const height = options.height ?? 480;
  const proj = orthographic(
    ((options.azimuthDeg ?? 35) * Math.PI) / 180,
    ((options.elevationDeg ?? 22) * Math.PI) / 180,
  );

  const vertices = payload.vertices as Vec3[];
  const statePoint = payload.state_point as Vec3;
  const facets = paintersOrder(buildFacets(payload.halfspaces, vertices), proj);

  const margin = 40;
  const bounds = screenBounds([...vertices, statePoint], proj);
  const spanX = Math.max(bounds.maxX - bounds.minX, 1e-9);
  const spanY = Math.max(bounds.maxY - bounds.minY, 1e-9);
  const unit = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  const toSvg = (p: Vec3): [number, number] => {
    const [x, y] = proj.toScreen(p);
    return [
      margin + (x - bounds.minX) * unit,
      height - margin - (y - bounds.minY) * unit,
    ];
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  );
  parts.push(
    `<title>admissible gradient-QFI region, ${payload.state} (${payload.na},${payload.nb})</title>`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  for (const facet of facets) {
    const family = familyOf(facet.id);
    const color = FAMILY_COLORS[family] ?? "#7f7f7f";
    const saturated = isSaturated(facet.id, payload.saturated);
    const points = facet.vertices
      .map((v) => toSvg(v).map(fmt).join(","))
      .join(" ");
    parts.push(
      `<polygon data-facet="${facet.id}" data-saturated="${saturated}" ` +
        `points="${points}" fill="${color}" fill-opacity="${saturated ? 0.55 : 0.25}" ` +
        `stroke="${color}" stroke-width="${saturated ? 2.5 : 1}"/>`,
    );
  }

  const [sx, sy] = toSvg(statePoint);
  parts.push(
    `<circle data-role="state-point" cx="${fmt(sx)}" cy="${fmt(sy)}" r="6" ` +
      `fill="${STATE_COLOR}" stroke="black" stroke-width="1.5"/>`,
  );
  parts.push(
    `<text x="${margin}" y="${24}" font-family="sans-serif" font-size="14">` +
      `${payload.state} (${payload.na},${payload.nb}) — saturated: ` +
      `${payload.saturated.length > 0 ? payload.saturated.join(", ") : "none"}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n");
}
