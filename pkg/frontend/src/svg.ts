/**
 * Minimal deterministic SVG plotting: fixed styling, no timestamps, stable
 * number formatting, so identical input bytes give identical output bytes.
 */

// Okabe-Ito colorblind-safe cycle
export const PALETTE = [
  "#0072B2", "#E69F00", "#009E73", "#D55E00",
  "#CC79A7", "#56B4E9", "#F0E442", "#000000",
];

export interface Series {
  label: string;
  points: Array<[number, number]>;
  color: string;
  dashed?: boolean;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logY?: boolean;
}

const W = 420;
const H = 340;
const MARGIN = { left: 62, right: 14, top: 30, bottom: 46 };

export function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(Number(v.toPrecision(6)));
  }
  return v.toExponential(2).replace("e-", "e-").replace("e+", "e+");
}

function niceLinearTicks(lo: number, hi: number, count = 5): number[] {
  if (hi === lo) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + s * 1e-9; v += s) {
    ticks.push(Number(v.toPrecision(12)));
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)) + 1e-9; e += 1) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

export function renderPanel(spec: PanelSpec, xOffset: number): string {
  const xs = spec.series.flatMap((s) => s.points.map((p) => p[0]));
  const ysRaw = spec.series.flatMap((s) => s.points.map((p) => p[1]));
  const ys = spec.logY ? ysRaw.filter((v) => v > 0) : ysRaw;
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (!spec.logY) {
    const pad = (yHi - yLo || 1) * 0.05;
    yLo -= pad;
    yHi += pad;
  }

  const plotW = W - MARGIN.left - MARGIN.right;
  const plotH = H - MARGIN.top - MARGIN.bottom;
  const sx = (v: number) =>
    MARGIN.left + (xHi === xLo ? plotW / 2 : ((v - xLo) / (xHi - xLo)) * plotW);
  const syLin = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;
  const syLog = (v: number) =>
    MARGIN.top + plotH - ((Math.log10(v) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo) || 1)) * plotH;
  const sy = spec.logY ? syLog : syLin;

  const parts: string[] = [];
  parts.push(`<g transform="translate(${xOffset},0)">`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#444" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${MARGIN.top - 12}" text-anchor="middle" font-size="13" font-family="sans-serif">${spec.title}</text>`,
  );

  const xTicks = niceLinearTicks(xLo, xHi);
  for (const t of xTicks) {
    const x = sx(t);
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" y2="${MARGIN.top + plotH + 4}" stroke="#444"/>`);
    parts.push(
      `<text x="${fmt(x)}" y="${MARGIN.top + plotH + 17}" text-anchor="middle" font-size="10" font-family="sans-serif">${fmt(t)}</text>`,
    );
  }
  const yTicks = spec.logY ? logTicks(yLo, yHi) : niceLinearTicks(yLo, yHi);
  for (const t of yTicks) {
    if (t < yLo - 1e-12 || t > yHi * (spec.logY ? 1.0000001 : 1) + 1e-12) continue;
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${fmt(y)}" x2="${MARGIN.left}" y2="${fmt(y)}" stroke="#444"/>`);
    parts.push(
      `<text x="${MARGIN.left - 7}" y="${fmt(y + 3)}" text-anchor="end" font-size="10" font-family="sans-serif">${spec.logY ? "1e" + Math.round(Math.log10(t)) : fmt(t)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${H - 10}" text-anchor="middle" font-size="12" font-family="sans-serif">${spec.xLabel}</text>`,
  );
  parts.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">${spec.yLabel}</text>`,
  );

  for (const s of spec.series) {
    const pts = spec.logY ? s.points.filter((p) => p[1] > 0) : s.points;
    const path = pts.map((p, i) => `${i === 0 ? "M" : "L"}${fmt(sx(p[0]))} ${fmt(sy(p[1]))}`).join(" ");
    const dash = s.dashed ? ` stroke-dasharray="5,3"` : "";
    parts.push(`<path d="${path}" fill="none" stroke="${s.color}" stroke-width="1.6"${dash}/>`);
    for (const p of pts) {
      parts.push(`<circle cx="${fmt(sx(p[0]))}" cy="${fmt(sy(p[1]))}" r="2.3" fill="${s.color}"/>`);
    }
  }

  // legend, top-down in series order
  let ly = MARGIN.top + 8;
  for (const s of spec.series) {
    const lx = MARGIN.left + plotW - 118;
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 18}" y2="${ly}" stroke="${s.color}" stroke-width="1.6"${s.dashed ? ` stroke-dasharray="5,3"` : ""}/>`);
    parts.push(
      `<text x="${lx + 23}" y="${ly + 3.5}" font-size="10" font-family="sans-serif">${s.label}</text>`,
    );
    ly += 14;
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(panels: PanelSpec[]): string {
  const width = W * panels.length;
  const body = panels.map((p, i) => renderPanel(p, i * W)).join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${H}" viewBox="0 0 ${width} ${H}">`,
    `<rect width="${width}" height="${H}" fill="white"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}

export const PANEL_WIDTH = W;
