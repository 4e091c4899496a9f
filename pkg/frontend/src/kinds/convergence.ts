import { hasColumn, requireColumn, type Table } from "../csv.js";
import { DEFAULT_MARGIN, DEFAULT_SIZE, extent, makeScale, positiveExtent, renderFigure, type Series } from "../svg.js";

const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c"];

/** Convergence-order plot from a convergence.csv table.
 *
 * Refinement tables (n, err_*) are drawn as log-log error curves with a
 * second-order reference; truncation tables (k_lo, du_L2, ...) as the
 * successive-difference decay over the domain size.
 */
export function renderConvergence(table: Table): string {
  const m = DEFAULT_MARGIN;
  if (hasColumn(table, "n")) {
    const n = requireColumn(table, "n");
    const series: Series[] = [];
    const names = ["err_u", "err_rho", "err_R"];
    const values: number[] = [];
    names.forEach((name, i) => {
      const err = requireColumn(table, name);
      values.push(...err.filter((v) => v > 0));
      series.push({ x: n, y: err, color: COLORS[i], label: name, markers: true });
    });
    const [eLo, eHi] = positiveExtent(values);
    const xScale = makeScale("log", extent(n), [m.left, DEFAULT_SIZE.width - m.right]);
    const yScale = makeScale("log", [eLo / 2, eHi * 2],
      [DEFAULT_SIZE.height - m.bottom, m.top]);
    // second-order slope reference anchored at the coarsest level
    const ref = n.map((v) => values[0] * Math.pow(n[0] / v, 2));
    series.unshift({ x: n, y: ref, color: "#999", dash: "6 4", label: "order 2 reference" });
    return renderFigure({
      title: "Grid-refinement convergence",
      xLabel: "cells n",
      yLabel: "error vs finest level",
      xScale,
      yScale,
      series,
    });
  }
  const kHi = requireColumn(table, "k_hi");
  const names = ["du_L2", "dvinv_L2", "dR_sup"];
  const series: Series[] = [];
  const values: number[] = [];
  names.forEach((name, i) => {
    const diff = requireColumn(table, name);
    values.push(...diff.filter((v) => v > 0));
    series.push({ x: kHi, y: diff, color: COLORS[i], label: name, markers: true });
  });
  const floor = 1e-17;
  const [dLo, dHi] = values.length > 0 ? positiveExtent(values) : [floor, 1.0];
  return renderFigure({
    title: "Domain-truncation convergence",
    xLabel: "domain size k",
    yLabel: "successive difference",
    xScale: makeScale("log", extent(kHi), [m.left, DEFAULT_SIZE.width - m.right]),
    yScale: makeScale("log", [Math.max(dLo / 2, floor), dHi * 2],
      [DEFAULT_SIZE.height - m.bottom, m.top]),
    series,
  });
}
