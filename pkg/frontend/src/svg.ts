/**
 * Minimal SVG line-chart builder: multi-panel grids, nice-number axes,
 * dashed styling for unstable branches, legends fed from CSV metadata.
 * No DOM and no plotting dependency; panels are laid out on a fixed grid.
 */

export interface Curve {
  x: number[];
  y: number[];
  label: string;
  color?: string;
  dash?: string; // stroke-dasharray, e.g. "6 4" for unstable branches
  width?: number;
}

export interface Panel {
  title?: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
}

export interface FigureOpts {
  columns?: number;
  panelWidth?: number;
  panelHeight?: number;
  legend?: boolean;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#17becf",
  "#8c564b",
  "#e377c2",
];

const MARGIN = { top: 34, right: 16, bottom: 44, left: 56 };

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Round tick steps to 1/2/5 times a power of ten. */
function niceTicks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.1 : 1;
    return [lo - pad, lo + pad];
  }
  const raw = (hi - lo) / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

interface Extent {
  lo: number;
  hi: number;
}

function extent(values: number[][]): Extent {
  let lo = Infinity;
  let hi = -Infinity;
  for (const arr of values) {
    for (const v of arr) {
      if (Number.isFinite(v)) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
    }
  }
  if (!Number.isFinite(lo)) return { lo: 0, hi: 1 };
  if (lo === hi) return { lo: lo - 1, hi: hi + 1 };
  const pad = (hi - lo) * 0.04;
  return { lo: lo - pad, hi: hi + pad };
}

function renderPanel(
  panel: Panel,
  ox: number,
  oy: number,
  width: number,
  height: number,
  legend: boolean
): string {
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const xs = extent(panel.curves.map((c) => c.x));
  const ys = extent(panel.curves.map((c) => c.y));
  const sx = (v: number) => ox + MARGIN.left + ((v - xs.lo) / (xs.hi - xs.lo)) * plotW;
  const sy = (v: number) => oy + MARGIN.top + plotH - ((v - ys.lo) / (ys.hi - ys.lo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<rect x="${ox + MARGIN.left}" y="${oy + MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333" stroke-width="1"/>`
  );
  for (const t of niceTicks(xs.lo, xs.hi)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${(oy + MARGIN.top + plotH).toFixed(1)}" x2="${x.toFixed(1)}" y2="${(oy + MARGIN.top + plotH + 4).toFixed(1)}" stroke="#333"/>`,
      `<text x="${x.toFixed(1)}" y="${(oy + MARGIN.top + plotH + 16).toFixed(1)}" font-size="10" text-anchor="middle">${fmtTick(t)}</text>`
    );
  }
  for (const t of niceTicks(ys.lo, ys.hi)) {
    const y = sy(t);
    parts.push(
      `<line x1="${(ox + MARGIN.left - 4).toFixed(1)}" y1="${y.toFixed(1)}" x2="${(ox + MARGIN.left).toFixed(1)}" y2="${y.toFixed(1)}" stroke="#333"/>`,
      `<text x="${(ox + MARGIN.left - 7).toFixed(1)}" y="${(y + 3).toFixed(1)}" font-size="10" text-anchor="end">${fmtTick(t)}</text>`
    );
  }

  panel.curves.forEach((curve, i) => {
    const color = curve.color ?? PALETTE[i % PALETTE.length];
    const pts: string[] = [];
    for (let k = 0; k < curve.x.length; k++) {
      if (Number.isFinite(curve.x[k]) && Number.isFinite(curve.y[k])) {
        pts.push(`${sx(curve.x[k]).toFixed(2)},${sy(curve.y[k]).toFixed(2)}`);
      }
    }
    const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
    parts.push(
      `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="${curve.width ?? 1.5}"${dash}/>`
    );
  });

  if (panel.title) {
    parts.push(
      `<text x="${ox + MARGIN.left + plotW / 2}" y="${oy + 18}" font-size="12" font-weight="bold" text-anchor="middle">${esc(panel.title)}</text>`
    );
  }
  parts.push(
    `<text x="${ox + MARGIN.left + plotW / 2}" y="${oy + height - 8}" font-size="11" text-anchor="middle">${esc(panel.xLabel)}</text>`,
    `<text x="${ox + 14}" y="${oy + MARGIN.top + plotH / 2}" font-size="11" text-anchor="middle" transform="rotate(-90 ${ox + 14} ${oy + MARGIN.top + plotH / 2})">${esc(panel.yLabel)}</text>`
  );

  if (legend && panel.curves.length > 0) {
    const lx = ox + MARGIN.left + 8;
    panel.curves.forEach((curve, i) => {
      const color = curve.color ?? PALETTE[i % PALETTE.length];
      const ly = oy + MARGIN.top + 12 + i * 14;
      const dash = curve.dash ? ` stroke-dasharray="${curve.dash}"` : "";
      parts.push(
        `<line x1="${lx}" y1="${ly - 3}" x2="${lx + 18}" y2="${ly - 3}" stroke="${color}" stroke-width="2"${dash}/>`,
        `<text x="${lx + 23}" y="${ly}" font-size="10">${esc(curve.label)}</text>`
      );
    });
  }
  return parts.join("\n");
}

export function renderFigure(panels: Panel[], opts: FigureOpts = {}): string {
  const columns = opts.columns ?? Math.min(2, panels.length);
  const pw = opts.panelWidth ?? 420;
  const ph = opts.panelHeight ?? 300;
  const rows = Math.ceil(panels.length / columns);
  const width = columns * pw;
  const height = rows * ph;
  const body = panels
    .map((panel, i) =>
      renderPanel(panel, (i % columns) * pw, Math.floor(i / columns) * ph, pw, ph, opts.legend ?? true)
    )
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    body,
    "</svg>",
  ].join("\n");
}
