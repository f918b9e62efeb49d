import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { dirname, extname } from "node:path";
import { readCsv, SchemaError } from "./csv.js";
import {
  fitReportSchema,
  type FitReport,
  type ParsedCsv,
  type PlotSpec,
} from "./schemas.js";
import { renderFigure, type Series } from "./svg.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];

function loadInputs(paths: string[]): { csvs: ParsedCsv[]; fit?: FitReport } {
  const csvs: ParsedCsv[] = [];
  let fit: FitReport | undefined;
  for (const p of paths) {
    if (extname(p) === ".json") {
      const parsed = fitReportSchema.safeParse(JSON.parse(readFileSync(p, "utf8")));
      if (!parsed.success) {
        throw new SchemaError(`${p}: not a fit report: ${parsed.error.message}`);
      }
      fit = parsed.data;
    } else {
      csvs.push(readCsv(p));
    }
  }
  return { csvs, fit };
}

function limitCompareSeries(csvs: ParsedCsv[]): Series[] {
  const series: Series[] = [];
  for (const csv of csvs) {
    const color = COLORS[series.length % COLORS.length]!;
    switch (csv.schema) {
      case "limit":
        series.push({
          label: "analytic c(u,s)",
          points: csv.rows.map((r) => [r.s, r.c]),
          style: "line",
          color,
        });
        break;
      case "comparison":
        series.push({
          label: "empirical X_n(s)/n",
          points: csv.rows.map((r) => [r.s, r.empirical]),
          style: "dots",
          color,
        });
        if (!csvs.some((c) => c.schema === "limit")) {
          series.push({
            label: "analytic c(u,s)",
            points: csv.rows.map((r) => [r.s, r.analytic]),
            style: "line",
            color: COLORS[(series.length) % COLORS.length]!,
          });
        }
        break;
      default:
        throw new SchemaError(
          `limit_compare accepts s,c or s,empirical,analytic,rel_err inputs; got ${csv.schema}`,
        );
    }
  }
  return series;
}

function ccdfFitSeries(csvs: ParsedCsv[], fit?: FitReport): { series: Series[]; annotation?: string } {
  const series: Series[] = [];
  for (const csv of csvs) {
    const color = COLORS[series.length % COLORS.length]!;
    if (csv.schema === "histogram") {
      series.push({
        label: "count(s)",
        points: csv.rows.map((r) => [r.s, r.count]),
        style: "dots",
        color,
      });
    } else if (csv.schema === "weights") {
      const M = csv.rows[0]!.M;
      series.push({
        label: `count(w), M=${M}`,
        points: csv.rows.map((r) => [r.w, r.count]),
        style: "dots",
        color,
      });
    } else {
      throw new SchemaError(
        `ccdf_fit accepts s,count or M,w,count,n inputs; got ${csv.schema}`,
      );
    }
  }
  let annotation: string | undefined;
  if (fit) {
    // pass-through only: the exponent printed is the upstream estimate
    annotation = `α̂ = ${fit.exponent_hat.toFixed(2)} (${fit.method})`;
    const pts = series.flatMap((s) => s.points).filter(([x, y]) => x > 0 && y > 0);
    const [wLo, wHi] = fit.fit_range;
    const anchor = pts.find(([x]) => x >= wLo) ?? pts[0]!;
    const guide: [number, number][] = [];
    for (const x of [Math.max(wLo, anchor[0]), wHi]) {
      guide.push([x, anchor[1] * Math.pow(x / anchor[0], -fit.exponent_hat)]);
    }
    series.push({
      label: `slope -${fit.exponent_hat.toFixed(2)}`,
      points: guide,
      style: "dashed",
      color: "#555",
    });
  }
  return { series, annotation };
}

function convergenceSeries(csvs: ParsedCsv[]): Series[] {
  const series: Series[] = [];
  for (const csv of csvs) {
    if (csv.schema === "trace") {
      series.push({
        label: "V_n",
        points: csv.rows.map((r) => [r.n, r.V]),
        style: "line",
        color: COLORS[series.length % COLORS.length]!,
      });
    } else if (csv.schema === "expectation") {
      const byScore = new Map<number, [number, number][]>();
      for (const r of csv.rows) {
        if (!byScore.has(r.s)) byScore.set(r.s, []);
        byScore.get(r.s)!.push([r.n, r.expectation]);
      }
      for (const [s, points] of [...byScore.entries()].sort((a, b) => a[0] - b[0])) {
        series.push({
          label: `E X_n(${s})`,
          points,
          style: "line",
          color: COLORS[series.length % COLORS.length]!,
        });
      }
    } else {
      throw new SchemaError(
        `convergence accepts n,V or n,s,expectation inputs; got ${csv.schema}`,
      );
    }
  }
  return series;
}

/** Render the figure described by spec and write it to spec.output. */
export function render(spec: PlotSpec): string {
  if (extname(spec.output) !== ".svg") {
    throw new Error(
      `unsupported output format ${extname(spec.output) || "(none)"}; this build emits .svg only`,
    );
  }
  const { csvs, fit } = loadInputs(spec.inputs);
  let series: Series[];
  let annotation: string | undefined;
  let logX = true;
  let logY = true;
  let xLabel = spec.xLabel ?? "s";
  let yLabel = spec.yLabel ?? "fraction";
  switch (spec.kind) {
    case "limit_compare":
      series = limitCompareSeries(csvs);
      break;
    case "ccdf_fit": {
      const out = ccdfFitSeries(csvs, fit);
      series = out.series;
      annotation = out.annotation;
      yLabel = spec.yLabel ?? "count";
      break;
    }
    case "convergence":
      series = convergenceSeries(csvs);
      logX = false;
      logY = false;
      xLabel = spec.xLabel ?? "n";
      yLabel = spec.yLabel ?? "value";
      break;
  }
  const svg = renderFigure(series, {
    title: spec.title ?? spec.kind,
    xLabel,
    yLabel,
    logX,
    logY,
    annotation,
  });
  mkdirSync(dirname(spec.output) || ".", { recursive: true });
  writeFileSync(spec.output, svg);
  return spec.output;
}
