/**
 * Polytope geometry
 *
 * Assembles renderable facet polygons from a halfspace list and the
 * pre-enumerated vertex set, and projects them orthographically for SVG
 * output. No new geometry is computed beyond grouping: the vertices arrive
 * with the payload; a facet is the set of vertices lying on one plane,
 * ordered by angle around the facet centroid.
 */

import type { Halfspace } from "./schemas.js";

export type Vec3 = [number, number, number];

const FACET_TOL = 1e-6;

export interface Facet {
  id: string;
  /** Vertices ordered around the facet boundary. */
  vertices: Vec3[];
  /** Outward unit normal (from the halfspace). */
  normal: Vec3;
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function norm(a: Vec3): number {
  return Math.sqrt(dot(a, a));
}

function scale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

/** Basis vectors spanning the plane orthogonal to n. */
function planeBasis(n: Vec3): [Vec3, Vec3] {
  const seed: Vec3 = Math.abs(n[0]) < 0.9 ? [1, 0, 0] : [0, 1, 0];
  let u = cross(n, seed);
  u = scale(u, 1 / norm(u));
  const v = cross(n, u);
  return [u, scale(v, 1 / norm(v))];
}

/**
 * Group vertices into one polygon per halfspace.
 *
 * Planes touched by fewer than three vertices produce no facet (they are
 * redundant for this polytope or touch it only along an edge/vertex).
 */
export function buildFacets(halfspaces: Halfspace[], vertices: Vec3[]): Facet[] {
  const facets: Facet[] = [];
  for (const h of halfspaces) {
    const nLen = norm(h.normal);
    if (nLen === 0) continue;
    const onPlane = vertices.filter(
      (v) => Math.abs(dot(h.normal, v) - h.offset) <= FACET_TOL * Math.max(1, Math.abs(h.offset)),
    );
    if (onPlane.length < 3) continue;
    const centroid: Vec3 = [0, 0, 0];
    for (const v of onPlane) {
      centroid[0] += v[0] / onPlane.length;
      centroid[1] += v[1] / onPlane.length;
      centroid[2] += v[2] / onPlane.length;
    }
    const unit = scale(h.normal, 1 / nLen);
    const [u, v] = planeBasis(unit);
    const ordered = onPlane
      .map((p) => {
        const d = sub(p, centroid);
        return { p, angle: Math.atan2(dot(d, v), dot(d, u)) };
      })
      .sort((a, b) => a.angle - b.angle)
      .map((entry) => entry.p);
    facets.push({ id: h.id, vertices: ordered, normal: unit });
  }
  return facets;
}

export interface Projection {
  /** Screen position; x right, y up (flipped to SVG coordinates later). */
  toScreen(p: Vec3): [number, number];
  /** Depth towards the viewer (larger = closer). */
  depth(p: Vec3): number;
}

/**
 * Orthographic camera given by azimuth/elevation (radians).
 *
 * The view direction points from the camera towards the origin; screen x/y
 * are the remaining two axes of the rotated frame.
 */
export function orthographic(azimuth: number, elevation: number): Projection {
  const ca = Math.cos(azimuth);
  const sa = Math.sin(azimuth);
  const ce = Math.cos(elevation);
  const se = Math.sin(elevation);
  const right: Vec3 = [-sa, ca, 0];
  const up: Vec3 = [-ca * se, -sa * se, ce];
  const towards: Vec3 = [ca * ce, sa * ce, se];
  return {
    toScreen: (p) => [dot(p, right), dot(p, up)],
    depth: (p) => dot(p, towards),
  };
}

/** Painter's order: draw far facets first (ascending mean depth). */
export function paintersOrder(facets: Facet[], proj: Projection): Facet[] {
  const meanDepth = (f: Facet): number =>
    f.vertices.reduce((acc, v) => acc + proj.depth(v), 0) / f.vertices.length;
  return [...facets].sort((a, b) => meanDepth(a) - meanDepth(b));
}

export interface Bounds {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

/** Screen-space bounding box of a point cloud. */
export function screenBounds(points: Vec3[], proj: Projection): Bounds {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const p of points) {
    const [x, y] = proj.toScreen(p);
    minX = Math.min(minX, x);
    maxX = Math.max(maxX, x);
    minY = Math.min(minY, y);
    maxY = Math.max(maxY, y);
  }
  return { minX, maxX, minY, maxY };
}
