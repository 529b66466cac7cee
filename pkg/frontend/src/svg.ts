/**
 * Minimal deterministic SVG construction: fixed canvas, fixed styles,
 * coordinates rounded to two decimals so identical data gives identical
 * bytes.
 */

export const WIDTH = 760;
export const HEIGHT = 500;
export const MARGIN = { top: 42, right: 150, bottom: 58, left: 78 };

export interface Scale {
  (value: number): number;
  ticks(): number[];
}

const fmt = (x: number): string => {
  const r = Math.round(x * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
};

export const fmtTick = (x: number): string =>
  String(parseFloat(x.toPrecision(6)));

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= raw) return m * mag;
  }
  return 10 * mag;
}

export function linearScale(
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): Scale {
  const span = hi - lo || 1;
  const scale = ((value: number) =>
    outLo + ((value - lo) / span) * (outHi - outLo)) as Scale;
  scale.ticks = () => {
    const step = niceStep(span, 6);
    const first = Math.ceil(lo / step) * step;
    const ticks: number[] = [];
    for (let v = first; v <= hi + 1e-9 * span; v += step) {
      ticks.push(parseFloat(v.toPrecision(12)));
    }
    return ticks;
  };
  return scale;
}

export function logScale(
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): Scale {
  if (lo <= 0) {
    throw new Error(`log axis needs positive values, got minimum ${lo}`);
  }
  const la = Math.log10(lo);
  const lb = Math.log10(hi);
  const span = lb - la || 1;
  const scale = ((value: number) =>
    outLo + ((Math.log10(value) - la) / span) * (outHi - outLo)) as Scale;
  scale.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(la - 1e-9); e <= Math.floor(lb + 1e-9); e++) {
      ticks.push(Math.pow(10, e));
    }
    if (ticks.length < 2) return [lo, hi];
    return ticks;
  };
  return scale;
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${MARGIN.left}" y="24" font-size="15" fill="#111">${escapeXml(title)}</text>`,
    );
  }

  line(
    x1: number,
    y1: number,
    x2: number,
    y2: number,
    stroke: string,
    opts: { width?: number; dash?: string } = {},
  ): void {
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${opts.width ?? 1}"${dash}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.8): void {
    const d = points
      .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
      .join(" ");
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="#2f4b66" stroke-width="0.6"/>`,
    );
  }

  text(
    x: number,
    y: number,
    content: string,
    opts: { size?: number; fill?: string; anchor?: string; rotate?: boolean } = {},
  ): void {
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${opts.size ?? 11}" fill="${opts.fill ?? "#222"}" text-anchor="${opts.anchor ?? "start"}"${transform}>${escapeXml(content)}</text>`,
    );
  }

  finish(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Axes with ticks, labels, and a boxed plot area. */
export function drawAxes(
  doc: SvgDoc,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  doc.line(x0, y0, x1, y0, "#333");
  doc.line(x0, y0, x0, y1, "#333");
  for (const t of xScale.ticks()) {
    const px = xScale(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    doc.line(px, y0, px, y0 + 5, "#333");
    doc.text(px, y0 + 18, fmtTick(t), { anchor: "middle" });
  }
  for (const t of yScale.ticks()) {
    const py = yScale(t);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    doc.line(x0 - 5, py, x0, py, "#333");
    doc.text(x0 - 8, py + 4, fmtTick(t), { anchor: "end" });
  }
  doc.text((x0 + x1) / 2, HEIGHT - 14, xLabel, { anchor: "middle", size: 13 });
  doc.text(22, (y0 + y1) / 2, yLabel, { anchor: "middle", size: 13, rotate: true });
}
