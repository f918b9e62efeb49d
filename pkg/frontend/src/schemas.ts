/**
 * The CSV/JSON artifact schemas this tool consumes. Each CSV schema is
 * identified by its exact header; anything else is rejected with the
 * offending column names so upstream/downstream drift is caught loudly.
 */
import { z } from "zod";

export const FIGURE_KINDS = ["limit_compare", "ccdf_fit", "convergence"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export const plotSpecSchema = z.object({
  kind: z.enum(FIGURE_KINDS),
  inputs: z.array(z.string()).min(1),
  output: z.string(),
  title: z.string().optional(),
  xLabel: z.string().optional(),
  yLabel: z.string().optional(),
});
export type PlotSpec = z.infer<typeof plotSpecSchema>;

/** Fit summary emitted by the analysis pipeline; the exponent annotation is
 * copied verbatim onto ccdf_fit figures, never recomputed. */
export const fitReportSchema = z.object({
  exponent_hat: z.number(),
  stderr: z.number(),
  method: z.string(),
  fit_range: z.tuple([z.number(), z.number()]),
  n_tail_points: z.number(),
  target_exponent: z.number().nullable().optional(),
  verdict: z.string().nullable().optional(),
  margin: z.number().nullable().optional(),
});
export type FitReport = z.infer<typeof fitReportSchema>;

/** A parsed CSV, tagged by which known schema its header matched. */
export interface LimitRows {
  schema: "limit"; // header: s,c
  rows: { s: number; c: number }[];
}
export interface ComparisonRows {
  schema: "comparison"; // header: s,empirical,analytic,rel_err
  rows: { s: number; empirical: number; analytic: number; rel_err: number }[];
}
export interface HistogramRows {
  schema: "histogram"; // header: s,count
  rows: { s: number; count: number }[];
}
export interface WeightRows {
  schema: "weights"; // header: M,w,count,n
  rows: { M: number; w: number; count: number; n: number }[];
}
export interface TraceRows {
  schema: "trace"; // header: n,V
  rows: { n: number; V: number }[];
}
export interface ExpectationRows {
  schema: "expectation"; // header: n,s,expectation
  rows: { n: number; s: number; expectation: number }[];
}

export type ParsedCsv =
  | LimitRows
  | ComparisonRows
  | HistogramRows
  | WeightRows
  | TraceRows
  | ExpectationRows;

export const CSV_HEADERS: Record<ParsedCsv["schema"], string[]> = {
  limit: ["s", "c"],
  comparison: ["s", "empirical", "analytic", "rel_err"],
  histogram: ["s", "count"],
  weights: ["M", "w", "count", "n"],
  trace: ["n", "V"],
  expectation: ["n", "s", "expectation"],
};
