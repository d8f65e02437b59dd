/**
 * Figure assembly: group CSV rows into panels/series per figure id. Legend
 * labels are the decoder column values verbatim; colors follow first
 * appearance so reruns of the same CSV are identical.
 */

import { Row, num } from "./csv.js";
import { PALETTE, PanelSpec, Series } from "./svg.js";

function groupSeries(
  rows: Row[],
  keyColumn: string,
  xColumn: string,
  yColumn: string,
): Series[] {
  const order: string[] = [];
  const byKey = new Map<string, Array<[number, number]>>();
  for (const row of rows) {
    const key = row[keyColumn];
    if (!byKey.has(key)) {
      byKey.set(key, []);
      order.push(key);
    }
    byKey.get(key)!.push([num(row, xColumn), num(row, yColumn)]);
  }
  return order.map((label, i) => ({
    label,
    points: byKey.get(label)!.slice().sort((a, b) => a[0] - b[0]),
    color: PALETTE[i % PALETTE.length],
    dashed: label.startsWith("classical") || label === "quantum_optimal",
  }));
}

export function buildPanels(figureId: string, rows: Row[]): PanelSpec[] {
  switch (figureId) {
    case "fig12": {
      const series = groupSeries(rows, "theta", "B", "epsilon").map((s) => ({
        ...s,
        label: `theta = ${s.label}pi`,
        dashed: false,
      }));
      return [{
        title: "decoder suboptimality vs register width",
        xLabel: "B (angle register qubits)",
        yLabel: "suboptimality",
        series,
        logY: true,
      }];
    }
    case "fig16": {
      const targets = ["x1", "x5", "block"];
      return targets.map((target) => ({
        title: `target ${target}`,
        xLabel: "theta / pi",
        yLabel: "success probability",
        series: groupSeries(rows.filter((r) => r.target === target), "decoder", "theta", "success"),
      }));
    }
    case "fig17":
      return [{
        title: "wrong-angle cloner sweep (8-bit code, h=3)",
        xLabel: "assumed clone angle / pi",
        yLabel: "success probability",
        series: groupSeries(rows, "decoder", "theta_prime", "success"),
      }];
    case "fig19":
      return [{
        title: "cloning-free subtree strategies",
        xLabel: "theta / pi",
        yLabel: "success probability",
        series: groupSeries(rows, "decoder", "theta", "success"),
      }];
    default:
      throw new Error(`no panel layout for figure id '${figureId}'`);
  }
}
