/**
 * Payload schemas
 *
 * Validates the JSON emitted by `diffmag figures` (and `diffmag polytope` /
 * `diffmag optmeas`) before rendering. Two payload families exist:
 *
 * - region payloads (fig1a–fig1d): the admissible region of gradient-QFI
 *   triples as halfspaces plus enumerated vertices, with the probe state's
 *   own triple and the ids of the saturated planes;
 * - heatmap payloads (fig3a, fig3b): the optimal observable in the total-m_y
 *   block basis, one dense re/im matrix per sector.
 */

import { z } from "zod";

const vec3 = z.tuple([z.number(), z.number(), z.number()]);

export const halfspaceSchema = z.object({
  normal: vec3,
  offset: z.number(),
  id: z.string().min(1),
});

export const regionPayloadSchema = z.object({
  na: z.number().int().positive(),
  nb: z.number().int().positive(),
  state: z.string().min(1),
  f_plus: vec3,
  halfspaces: z.array(halfspaceSchema).min(4),
  vertices: z.array(vec3),
  state_point: vec3,
  saturated: z.array(z.string()),
});

const square = (rows: number[][], size: number): boolean =>
  rows.length === size && rows.every((row) => row.length === size);

export const heatmapBlockSchema = z
  .object({
    m_y: z.number(),
    size: z.number().int().positive(),
    re: z.array(z.array(z.number())),
    im: z.array(z.array(z.number())),
  })
  .refine((b) => square(b.re, b.size) && square(b.im, b.size), {
    message: "re/im must be size x size matrices",
  });

export const heatmapPayloadSchema = z.object({
  na: z.number().int().positive(),
  nb: z.number().int().positive(),
  blocks: z.array(heatmapBlockSchema),
  precision: z.number().positive(),
  block_diagonal: z.boolean(),
});

export type Halfspace = z.infer<typeof halfspaceSchema>;
export type RegionPayload = z.infer<typeof regionPayloadSchema>;
export type HeatmapBlock = z.infer<typeof heatmapBlockSchema>;
export type HeatmapPayload = z.infer<typeof heatmapPayloadSchema>;

/** Parse a region payload, throwing a descriptive error on mismatch. */
export function parseRegionPayload(text: string): RegionPayload {
  return regionPayloadSchema.parse(JSON.parse(text));
}

/** Parse a heatmap payload, throwing a descriptive error on mismatch. */
export function parseHeatmapPayload(text: string): HeatmapPayload {
  return heatmapPayloadSchema.parse(JSON.parse(text));
}
