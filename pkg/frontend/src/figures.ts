/**
 * Figure renderers over the simulator CSV schemas.
 *
 * sweep           sigma/sigma0 vs tau, one curve per protocol, dashed
 *                 unity line separating enhanced from reduced spreading
 * series-sigma    sigma(t) curves          (series CSV)
 * series-entropy  Shannon entropy S(t)
 * series-ipr      inverse participation ratio IPR(t)
 * histogram       binned sigma/sigma0 ratios of the random ensemble with
 *                 one vertical reference line per deterministic protocol
 */

import {
  Table,
  numericColumn,
  readCsv,
  requireColumns,
  stringColumn,
} from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  Scale,
  SvgDoc,
  WIDTH,
  drawAxes,
  linearScale,
  logScale,
} from "./svg.js";

export type FigureKind =
  | "sweep"
  | "series-sigma"
  | "series-entropy"
  | "series-ipr"
  | "histogram";

export const FIGURE_KINDS: FigureKind[] = [
  "sweep",
  "series-sigma",
  "series-entropy",
  "series-ipr",
  "histogram",
];

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  logX?: boolean;
}

const PROTOCOL_COLORS: Record<string, string> = {
  free: "#555555",
  pe: "#d62728",
  fb: "#1f77b4",
  tm: "#2ca02c",
  rs: "#9467bd",
  rd: "#ff7f0e",
  b1: "#8c564b",
  b2: "#e377c2",
};
const FALLBACK_COLORS = ["#17becf", "#bcbd22", "#7f7f7f", "#aec7e8"];

function colorFor(protocol: string, index: number): string {
  return PROTOCOL_COLORS[protocol] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

const HISTOGRAM_BINS = 20;

interface Curve {
  label: string;
  points: Array<[number, number]>;
}

function plotArea() {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}

function makeScales(
  curves: Curve[],
  logX: boolean,
  extraY: number[] = [],
): { sx: Scale; sy: Scale } {
  const { x0, x1, y0, y1 } = plotArea();
  const xs = curves.flatMap((c) => c.points.map((p) => p[0]));
  const ys = curves.flatMap((c) => c.points.map((p) => p[1])).concat(extraY);
  const xlo = Math.min(...xs);
  const xhi = Math.max(...xs);
  let ylo = Math.min(...ys);
  let yhi = Math.max(...ys);
  const pad = (yhi - ylo || 1) * 0.06;
  ylo -= pad;
  yhi += pad;
  const sx = logX ? logScale(xlo, xhi, x0, x1) : linearScale(xlo, xhi, x0, x1);
  const sy = linearScale(ylo, yhi, y0, y1);
  return { sx, sy };
}

function drawCurvesWithLegend(doc: SvgDoc, curves: Curve[], sx: Scale, sy: Scale): void {
  const { x1, y1 } = plotArea();
  curves.forEach((curve, i) => {
    const color = colorFor(curve.label, i);
    doc.polyline(
      curve.points.map(([x, y]) => [sx(x), sy(y)]),
      color,
    );
    const ly = y1 + 14 + 18 * i;
    doc.line(x1 + 12, ly - 4, x1 + 34, ly - 4, color, { width: 2.5 });
    doc.text(x1 + 40, ly, curve.label);
  });
}

/** Rows grouped into per-protocol curves, first-appearance order. */
function groupCurves(
  protocols: string[],
  xs: number[],
  ys: number[],
  keep: (row: number) => boolean,
): Curve[] {
  const byProtocol = new Map<string, Array<[number, number]>>();
  for (let i = 0; i < protocols.length; i++) {
    if (!keep(i)) continue;
    if (!byProtocol.has(protocols[i])) byProtocol.set(protocols[i], []);
    byProtocol.get(protocols[i])!.push([xs[i], ys[i]]);
  }
  const curves: Curve[] = [];
  for (const [label, points] of byProtocol) {
    points.sort((a, b) => a[0] - b[0]);
    curves.push({ label, points });
  }
  if (curves.length === 0) {
    throw new Error("no plottable rows (only per-seed detail present?)");
  }
  return curves;
}

function renderSweep(table: Table, logX: boolean): string {
  requireColumns(table, ["protocol", "tau", "seed_or_mean", "sigma_ratio"]);
  const protocols = stringColumn(table, "protocol");
  const taus = numericColumn(table, "tau");
  const kinds = stringColumn(table, "seed_or_mean");
  const ratios = numericColumn(table, "sigma_ratio");
  const curves = groupCurves(
    protocols,
    taus,
    ratios,
    (i) => kinds[i] === "" || kinds[i] === "mean",
  );
  const doc = new SvgDoc("Relative spreading vs switching interval");
  const { sx, sy } = makeScales(curves, logX, [1.0]);
  drawAxes(doc, sx, sy, "switching interval tau", "sigma / sigma0");
  const { x0, x1 } = plotArea();
  doc.line(x0, sy(1.0), x1, sy(1.0), "#444", { dash: "6 4", width: 1.2 });
  doc.text(x1 - 4, sy(1.0) - 6, "sigma/sigma0 = 1", { anchor: "end", fill: "#444" });
  drawCurvesWithLegend(doc, curves, sx, sy);
  return doc.finish();
}

const SERIES_COLUMNS: Record<string, { column: string; label: string }> = {
  "series-sigma": { column: "sigma", label: "sigma" },
  "series-entropy": { column: "entropy", label: "Shannon entropy S" },
  "series-ipr": { column: "ipr", label: "IPR" },
};

function renderSeries(table: Table, kind: FigureKind, logX: boolean): string {
  const { column, label } = SERIES_COLUMNS[kind];
  requireColumns(table, ["protocol", "seed", "t", column]);
  const protocols = stringColumn(table, "protocol");
  const seeds = stringColumn(table, "seed");
  const ts = numericColumn(table, "t");
  const values = numericColumn(table, column);
  // per-seed ensemble members are dropped; the mean rows carry no seed
  const curves = groupCurves(protocols, ts, values, (i) => seeds[i] === "");
  const doc = new SvgDoc(`Time evolution of ${label}`);
  const pts = curves.flatMap((c) => c.points);
  const logSafe = logX && pts.every(([x]) => x > 0);
  const { sx, sy } = makeScales(curves, logSafe);
  drawAxes(doc, sx, sy, "t (units of 1/gamma)", label);
  drawCurvesWithLegend(doc, curves, sx, sy);
  return doc.finish();
}

function renderHistogram(tables: Table[]): string {
  const hist = tables[0];
  requireColumns(hist, ["seed", "sigma_ratio"]);
  const ratios = numericColumn(hist, "sigma_ratio");
  const refs: Array<{ protocol: string; ratio: number }> = [];
  if (tables.length > 1) {
    const refTable = tables[1];
    requireColumns(refTable, ["protocol", "sigma_ratio"]);
    const names = stringColumn(refTable, "protocol");
    const values = numericColumn(refTable, "sigma_ratio");
    names.forEach((name, i) => refs.push({ protocol: name, ratio: values[i] }));
  }

  const lo = Math.min(...ratios);
  const hi = Math.max(...ratios);
  const span = hi - lo || 1;
  const counts = new Array<number>(HISTOGRAM_BINS).fill(0);
  for (const r of ratios) {
    const bin = Math.min(Math.floor(((r - lo) / span) * HISTOGRAM_BINS), HISTOGRAM_BINS - 1);
    counts[bin] += 1;
  }

  const { x0, x1, y0, y1 } = plotArea();
  const xlo = Math.min(lo, ...refs.map((r) => r.ratio));
  const xhi = Math.max(hi, ...refs.map((r) => r.ratio));
  const xpad = (xhi - xlo || 1) * 0.05;
  const sx = linearScale(xlo - xpad, xhi + xpad, x0, x1);
  const sy = linearScale(0, Math.max(...counts) * 1.1, y0, y1);

  const doc = new SvgDoc("Random-ensemble spreading ratios");
  drawAxes(doc, sx, sy, "sigma / sigma0", "count");
  const binWidth = span / HISTOGRAM_BINS;
  counts.forEach((count, i) => {
    if (count === 0) return;
    const left = lo + i * binWidth;
    doc.rect(sx(left), sy(count), sx(left + binWidth) - sx(left), sy(0) - sy(count), "#4c78a8");
  });
  refs.forEach((ref, i) => {
    const px = sx(ref.ratio);
    doc.line(px, y0, px, y1, colorFor(ref.protocol, i), { dash: "5 4", width: 1.6 });
    doc.text(px, y1 + 12 + 14 * i, ref.protocol, {
      anchor: "middle",
      fill: colorFor(ref.protocol, i),
      size: 12,
    });
  });
  return doc.finish();
}

/** Render a figure to SVG text; throws (without output) on schema errors. */
export function renderFigure(spec: FigureSpec): string {
  if (spec.inputs.length === 0) {
    throw new Error("no input CSV given");
  }
  const tables = spec.inputs.map(readCsv);
  switch (spec.kind) {
    case "sweep":
      return renderSweep(tables[0], spec.logX ?? false);
    case "series-sigma":
    case "series-entropy":
    case "series-ipr":
      return renderSeries(tables[0], spec.kind, spec.logX ?? false);
    case "histogram":
      return renderHistogram(tables);
    default:
      throw new Error(`unknown figure kind "${spec.kind}"`);
  }
}
