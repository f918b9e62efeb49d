/**
 * Minimal SVG scatter/line figure with log-log or lin-lin axes. Hand-rolled
 * rather than pulled from a charting stack: the output must be a plain
 * standalone file, and the needs end at points, polylines, ticks and text.
 */

export interface Series {
  label: string;
  points: [number, number][];
  style: "line" | "dots" | "dashed";
  color: string;
}

export interface FigureOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logX: boolean;
  logY: boolean;
  annotation?: string;
  width?: number;
  height?: number;
}

const MARGIN = { top: 42, right: 24, bottom: 52, left: 72 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Decade ticks for log axes, "nice" steps for linear ones. */
function ticks(lo: number, hi: number, log: boolean): number[] {
  if (log) {
    const out: number[] = [];
    for (let e = Math.floor(Math.log10(lo)); Math.pow(10, e) <= hi * 1.0001; e++) {
      const v = Math.pow(10, e);
      if (v >= lo * 0.9999) out.push(v);
    }
    return out.length >= 2 ? out : [lo, hi];
  }
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 20 ? 5 : span / step > 8 ? 2 : 1;
  const out: number[] = [];
  for (let v = Math.ceil(lo / (step * mult)) * step * mult; v <= hi; v += step * mult) {
    out.push(v);
  }
  return out;
}

function fmtTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e5 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0).replace("e+", "e");
  }
  return `${Number(v.toPrecision(6))}`;
}

export function renderFigure(series: Series[], opts: FigureOptions): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 440;
  const innerW = width - MARGIN.left - MARGIN.right;
  const innerH = height - MARGIN.top - MARGIN.bottom;

  const pts = series.flatMap((s) => s.points).filter(
    ([x, y]) =>
      Number.isFinite(x) && Number.isFinite(y) &&
      (!opts.logX || x > 0) && (!opts.logY || y > 0),
  );
  if (pts.length === 0) {
    throw new Error("nothing to draw: no finite (positive, for log axes) points");
  }
  const xs = pts.map((p) => p[0]);
  const ys = pts.map((p) => p[1]);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);

  const tx = (x: number) => {
    const t = opts.logX
      ? (Math.log10(x) - Math.log10(xLo)) / (Math.log10(xHi) - Math.log10(xLo) || 1)
      : (x - xLo) / (xHi - xLo || 1);
    return MARGIN.left + t * innerW;
  };
  const ty = (y: number) => {
    const t = opts.logY
      ? (Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo) || 1)
      : (y - yLo) / (yHi - yLo || 1);
    return MARGIN.top + (1 - t) * innerH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif" font-size="12">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15">${esc(opts.title)}</text>`,
  );

  for (const v of ticks(xLo, xHi, opts.logX)) {
    const x = tx(v);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + innerH}" stroke="#ddd"/>`,
      `<text x="${x}" y="${MARGIN.top + innerH + 18}" text-anchor="middle">${fmtTick(v)}</text>`,
    );
  }
  for (const v of ticks(yLo, yHi, opts.logY)) {
    const y = ty(v);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + innerW}" y2="${y}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 6}" y="${y + 4}" text-anchor="end">${fmtTick(v)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#333"/>`,
    `<text x="${MARGIN.left + innerW / 2}" y="${height - 12}" text-anchor="middle">${esc(opts.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + innerH / 2}" text-anchor="middle" transform="rotate(-90 18 ${MARGIN.top + innerH / 2})">${esc(opts.yLabel)}</text>`,
  );

  for (const s of series) {
    const visible = s.points.filter(
      ([x, y]) => (!opts.logX || x > 0) && (!opts.logY || y > 0),
    );
    if (s.style === "dots") {
      for (const [x, y] of visible) {
        parts.push(
          `<circle cx="${tx(x).toFixed(2)}" cy="${ty(y).toFixed(2)}" r="3" fill="${s.color}" fill-opacity="0.75"/>`,
        );
      }
    } else {
      const d = visible
        .map(([x, y]) => `${tx(x).toFixed(2)},${ty(y).toFixed(2)}`)
        .join(" ");
      const dash = s.style === "dashed" ? ` stroke-dasharray="6 4"` : "";
      parts.push(
        `<polyline points="${d}" fill="none" stroke="${s.color}" stroke-width="1.8"${dash}/>`,
      );
    }
  }

  // legend, top-right inside the frame
  series.forEach((s, i) => {
    const y = MARGIN.top + 16 + 16 * i;
    const x = MARGIN.left + innerW - 150;
    if (s.style === "dots") {
      parts.push(`<circle cx="${x + 8}" cy="${y - 4}" r="3" fill="${s.color}"/>`);
    } else {
      const dash = s.style === "dashed" ? ` stroke-dasharray="6 4"` : "";
      parts.push(
        `<line x1="${x}" y1="${y - 4}" x2="${x + 16}" y2="${y - 4}" stroke="${s.color}" stroke-width="1.8"${dash}/>`,
      );
    }
    parts.push(`<text x="${x + 22}" y="${y}">${esc(s.label)}</text>`);
  });

  if (opts.annotation) {
    parts.push(
      `<text x="${MARGIN.left + innerW - 150}" y="${MARGIN.top + 16 + 16 * series.length + 6}" font-style="italic">${esc(opts.annotation)}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
